"""The descriptor language.

A descriptor is a sum of basic summands joined by ``(+)``; each summand
may carry a multiplicity, an integer or ``w`` for an infinite one.

    >>> parse_descriptor_terms('C(2,3)^w (+) Q')
    [Summand(term=CyclicTerm(p=2, n=3), mult='w', pos=TokenPos('<descriptor>', 1, 1)), Summand(term=RationalTerm(), mult=1, pos=TokenPos('<descriptor>', 1, 14))]

Basic summands are ``C(p,n)`` (cyclic of order p^n), ``Zp8(p)`` (Prufer),
``Zloc(p)`` (localisation at p), ``Q``, ``0`` and ``Z``. Tails describe
infinitely many summands at once: ``tailC(p,n)``, ``tailZp8``,
``tailZloc`` repeat the summand at every prime and ``cofinal(p)`` adds
one copy of ``C(p,i)`` for every ``i``.

    >>> parse_descriptor_terms('C(4,1)')
    Traceback (most recent call last):
        ...
    minlab.descriptor_grammar.DescriptorParsingError: <descriptor>(1,3): error: 4 is not prime
    >>> parse_descriptor_terms('Z^w')
    Traceback (most recent call last):
        ...
    minlab.descriptor_grammar.DescriptorParsingError: <descriptor>(1,2): error: uniform tail multiplicities must be finite
"""

from .rule import Rule
from .grammar import Grammar
from .lrparser import make_lrparser, ParsingError
from . import ast
import logging
import sympy

logger = logging.getLogger(__name__)

class DescriptorParsingError(ParsingError):
    """Raised on a syntax or validation error in a descriptor."""

class TokenPos:
    def __init__(self, filename, line, col):
        self.filename = filename
        self.line = line
        self.col = col

    def __str__(self):
        return '%s(%d,%d)' % (self.filename, self.line, self.col)

    def __repr__(self):
        return 'TokenPos(%r, %r, %r)' % (self.filename, self.line, self.col)

    def __eq__(self, other):
        return isinstance(other, TokenPos) and (self.filename, self.line, self.col) == (other.filename, other.line, other.col)

    def __hash__(self):
        return hash((self.filename, self.line, self.col))

    def __add__(self, rhs):
        res = TokenPos(self.filename, self.line, self.col)
        pos = rhs.find('\n')
        while pos != -1:
            res.line += 1
            res.col = 1
            rhs = rhs[pos+1:]
            pos = rhs.find('\n')
        res.col += len(rhs)
        return res

class Token:
    def __init__(self, kind, text, pos=None):
        self.symbol = kind
        self.value = text
        self.pos = pos

    def __repr__(self):
        if self.pos is not None:
            return 'Token(%r, %r, %r)' % (self.symbol, self.value, self.pos)
        return 'Token(%r, %r)' % (self.symbol, self.value)

_keywords = frozenset(('C', 'Zp8', 'Zloc', 'Q', 'Z', 'tailC', 'tailZp8', 'tailZloc', 'cofinal', 'w', 'p'))

def _descriptor_lex_one(input, pos):
    ch = input[0]
    if ch.isspace():
        i = 1
        while i < len(input) and input[i].isspace():
            i += 1
        return None, i
    elif input.startswith('(+)'):
        return ('(+)', 0, 3), 3
    elif ch.isdigit():
        i = 1
        while i < len(input) and input[i].isdigit():
            i += 1
        return ('INT', 0, i), i
    elif ch.isalpha():
        i = 1
        while i < len(input) and (input[i].isalnum() or input[i] == '_'):
            i += 1
        if input[:i] not in _keywords:
            raise DescriptorParsingError('unknown name %r' % input[:i], pos)
        return (input[:i], 0, i), i
    elif ch in '(),^':
        return (ch, 0, 1), 1
    else:
        raise DescriptorParsingError('unexpected character: %r' % ch, pos)

def _descriptor_lex(input, filename='<descriptor>'):
    """
    >>> list(_descriptor_lex('C(2,1)^w'))
    [Token('C', 'C', TokenPos('<descriptor>', 1, 1)), Token('(', '(', TokenPos('<descriptor>', 1, 2)), Token('INT', '2', TokenPos('<descriptor>', 1, 3)), Token(',', ',', TokenPos('<descriptor>', 1, 4)), Token('INT', '1', TokenPos('<descriptor>', 1, 5)), Token(')', ')', TokenPos('<descriptor>', 1, 6)), Token('^', '^', TokenPos('<descriptor>', 1, 7)), Token('w', 'w', TokenPos('<descriptor>', 1, 8))]
    """
    tokpos = TokenPos(filename, 1, 1)
    while input:
        tokdef, next_input = _descriptor_lex_one(input, tokpos)
        if tokdef is not None:
            kind, start, stop = tokdef
            yield Token(kind, input[start:stop], tokpos + input[:start])
        tokpos = tokpos + input[:next_input]
        input = input[next_input:]

def _prime(tok):
    p = int(tok.value)
    if not sympy.isprime(p):
        raise DescriptorParsingError('%d is not prime' % p, tok.pos)
    return p

class DescriptorGrammar:
    _parser = None

    def parse(self, tokens):
        if DescriptorGrammar._parser is None:
            DescriptorGrammar._parser = make_lrparser(self.grammar)
        return self._parser.parse(tokens, context=self, extract_value=lambda tok: tok)

    def _desc(self, items):
        cofinal = {}
        for item in items:
            if isinstance(item.term, ast.CofinalTerm):
                if item.term.p in cofinal:
                    raise DescriptorParsingError('duplicate prime %d in cofinal tails' % item.term.p, item.pos)
                cofinal[item.term.p] = item
        return items

    def _items_start(self, item):
        return [item]

    def _items_append(self, items, _op, item):
        items.append(item)
        return items

    def _item(self, atom):
        term, pos = atom
        return ast.Summand(term=term, mult=1, pos=pos)

    def _item_mult(self, atom, caret, mult):
        term, pos = atom
        if isinstance(term, ast.CofinalTerm) and mult != 1:
            raise DescriptorParsingError('cofinal tails take no multiplicity', caret.pos)
        if term.is_tail and mult == 'w':
            raise DescriptorParsingError('uniform tail multiplicities must be finite', caret.pos)
        return ast.Summand(term=term, mult=mult, pos=pos)

    def _mult_int(self, tok):
        return int(tok.value)

    def _mult_omega(self, tok):
        return 'w'

    def _atom_cyclic(self, kw, _lp, p, _comma, n, _rp):
        if int(n.value) < 1:
            raise DescriptorParsingError('cyclic exponent must be at least 1', n.pos)
        return ast.CyclicTerm(p=_prime(p), n=int(n.value)), kw.pos

    def _atom_prufer(self, kw, _lp, p, _rp):
        return ast.PruferTerm(p=_prime(p)), kw.pos

    def _atom_localized(self, kw, _lp, p, _rp):
        return ast.LocalizedTerm(p=_prime(p)), kw.pos

    def _atom_rational(self, kw):
        return ast.RationalTerm(), kw.pos

    def _atom_integers(self, kw):
        return ast.IntegersTerm(), kw.pos

    def _atom_zero(self, tok):
        if int(tok.value) != 0:
            raise DescriptorParsingError('expected a summand, got the integer %s' % tok.value, tok.pos)
        return ast.ZeroTerm(), tok.pos

    def _atom_tail_cyclic(self, kw, _lp, _p, _comma, n, _rp):
        if int(n.value) < 1:
            raise DescriptorParsingError('cyclic exponent must be at least 1', n.pos)
        return ast.TailCyclicTerm(n=int(n.value)), kw.pos

    def _atom_tail_prufer(self, kw):
        return ast.TailPruferTerm(), kw.pos

    def _atom_tail_localized(self, kw):
        return ast.TailLocalizedTerm(), kw.pos

    def _atom_cofinal(self, kw, _lp, p, _rp):
        return ast.CofinalTerm(p=_prime(p)), kw.pos

    grammar = Grammar(
        Rule('desc', ('items',), action=_desc),
        Rule('items', ('item',), action=_items_start),
        Rule('items', ('items', '(+)', 'item'), action=_items_append),
        Rule('item', ('atom',), action=_item),
        Rule('item', ('atom', '^', 'mult'), action=_item_mult),
        Rule('mult', ('INT',), action=_mult_int),
        Rule('mult', ('w',), action=_mult_omega),
        Rule('atom', ('C', '(', 'INT', ',', 'INT', ')'), action=_atom_cyclic),
        Rule('atom', ('Zp8', '(', 'INT', ')'), action=_atom_prufer),
        Rule('atom', ('Zloc', '(', 'INT', ')'), action=_atom_localized),
        Rule('atom', ('Q',), action=_atom_rational),
        Rule('atom', ('Z',), action=_atom_integers),
        Rule('atom', ('INT',), action=_atom_zero),
        Rule('atom', ('tailC', '(', 'p', ',', 'INT', ')'), action=_atom_tail_cyclic),
        Rule('atom', ('tailZp8',), action=_atom_tail_prufer),
        Rule('atom', ('tailZloc',), action=_atom_tail_localized),
        Rule('atom', ('cofinal', '(', 'INT', ')'), action=_atom_cofinal),
        )

def parse_descriptor_terms(input, filename='<descriptor>'):
    """Parses descriptor text into a list of `ast.Summand` nodes."""
    if not input.strip():
        raise DescriptorParsingError('empty descriptor', TokenPos(filename, 1, 1))
    return DescriptorGrammar().parse(_descriptor_lex(input, filename))
