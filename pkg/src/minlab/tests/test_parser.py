import unittest

from ..descriptor_grammar import parse_descriptor_terms, DescriptorParsingError, TokenPos
from ..grammar import Grammar
from ..lrparser import make_lrparser, ParsingError, PrematureEndOfFileError, UnexpectedTokenError, ActionConflictError
from ..rule import Rule
from .. import ast

class TestDescriptorSyntax(unittest.TestCase):
    def test_summands(self):
        terms = [s.term for s in parse_descriptor_terms('C(3,2)^5 (+) Zp8(5) (+) Zloc(7)^w (+) Q (+) 0')]
        self.assertEqual(terms, [ast.CyclicTerm(p=3, n=2), ast.PruferTerm(p=5), ast.LocalizedTerm(p=7),
            ast.RationalTerm(), ast.ZeroTerm()])

    def test_multiplicities(self):
        self.assertEqual([s.mult for s in parse_descriptor_terms('C(2,1) (+) C(2,1)^3 (+) C(2,1)^w')], [1, 3, 'w'])

    def test_tails(self):
        terms = [s.term for s in parse_descriptor_terms('cofinal(2) (+) tailC(p,3) (+) tailZp8^2 (+) tailZloc (+) Z')]
        self.assertEqual(terms, [ast.CofinalTerm(p=2), ast.TailCyclicTerm(n=3), ast.TailPruferTerm(),
            ast.TailLocalizedTerm(), ast.IntegersTerm()])

    def test_positions(self):
        s = parse_descriptor_terms('Q (+)\n  Zp8(3)', filename='input.txt')
        self.assertEqual(s[1].pos, TokenPos('input.txt', 2, 3))

    def test_not_prime(self):
        with self.assertRaises(DescriptorParsingError) as cm:
            parse_descriptor_terms('C(4,1)')
        self.assertEqual(str(cm.exception), '<descriptor>(1,3): error: 4 is not prime')

    def test_duplicate_cofinal(self):
        with self.assertRaises(DescriptorParsingError) as cm:
            parse_descriptor_terms('cofinal(3) (+) cofinal(3)')
        self.assertIn('duplicate prime 3', str(cm.exception))

    def test_cofinal_multiplicity(self):
        self.assertRaises(DescriptorParsingError, parse_descriptor_terms, 'cofinal(3)^2')

    def test_infinite_tail(self):
        self.assertRaises(DescriptorParsingError, parse_descriptor_terms, 'tailC(p,1)^w')

    def test_zero_exponent(self):
        self.assertRaises(DescriptorParsingError, parse_descriptor_terms, 'C(2,0)')

    def test_stray_integer(self):
        self.assertRaises(DescriptorParsingError, parse_descriptor_terms, '5')

    def test_unknown_name(self):
        with self.assertRaises(DescriptorParsingError) as cm:
            parse_descriptor_terms('Zq(2)')
        self.assertIn("unknown name 'Zq'", str(cm.exception))

    def test_empty(self):
        self.assertRaises(DescriptorParsingError, parse_descriptor_terms, '   ')

    def test_truncated(self):
        self.assertRaises(PrematureEndOfFileError, parse_descriptor_terms, 'C(2,1) (+)')

    def test_unexpected_token(self):
        with self.assertRaises(UnexpectedTokenError):
            parse_descriptor_terms('C(2,1) Q')

    def test_errors_are_parsing_errors(self):
        for text in ('C(4,1)', 'C(2,1) (+)', 'C(2,1) Q', '#'):
            self.assertRaises(ParsingError, parse_descriptor_terms, text)

class TestParserConstruction(unittest.TestCase):
    def test_ambiguous_sum(self):
        g = Grammar(Rule('sum', ('sum', '(+)', 'sum')), Rule('sum', ('item',)))
        with self.assertRaises(ActionConflictError) as cm:
            make_lrparser(g)
        trace = cm.exception.format_trace()
        self.assertTrue(any(line.startswith('>') for line in trace.split('\n')))

    def test_left_recursive_sum(self):
        g = Grammar(Rule('sum', ('sum', '(+)', 'item')), Rule('sum', ('item',)))
        self.assertEqual(make_lrparser(g).parse(['item', '(+)', 'item']), (('item',), '(+)', 'item'))

if __name__ == '__main__':
    unittest.main()
