"""
FIRST sets over words of grammar symbols.

A word is a tuple of symbols; FIRST_k of a word is the set of
terminal prefixes of length at most k that it can derive.
"""

from .rule import Rule
from .grammar import Grammar

def first(word, k=1):
    """Returns the length-k prefix of a word.

    >>> first(('C', '(', 'INT', ')'), k=2)
    ('C', '(')
    """
    return word[:k]

def oplus(left, right, k=1):
    """Returns { FIRST_k(vw) | v in left, w in right } and the length
    of its shortest member (k if the set is empty).

    >>> s, l = oplus([('^',), ()], [('INT',), ('w',)], k=2)
    >>> sorted(s)
    [('INT',), ('^', 'INT'), ('^', 'w'), ('w',)]
    >>> l
    1
    """
    res = set()
    min_len = k
    for lword in left:
        for rword in right:
            w = first(lword + rword, k)
            min_len = min(min_len, len(w))
            res.add(w)
    return res, min_len

class First:
    """The FIRST_k table of a grammar.

    >>> g = Grammar(
    ...     Rule('item', ('atom', 'suffix')),
    ...     Rule('suffix', ()),
    ...     Rule('suffix', ('^', 'mult')),
    ...     Rule('mult', ('INT',)),
    ...     Rule('mult', ('w',)))
    >>> f = First(g)
    >>> sorted(f(('suffix',)))
    [(), ('^',)]
    >>> sorted(f(('suffix', '(+)')))
    [('(+)',), ('^',)]
    >>> sorted(First(g, k=2)(('suffix',)))
    [(), ('^', 'INT'), ('^', 'w')]
    """

    def __init__(self, grammar, k=1):
        self.grammar = grammar
        self.k = k
        self.table = {nonterm: set() for nonterm in grammar.nonterms()}

        # least fixed point
        done = False
        while not done:
            done = True
            for rule in grammar:
                for word in self(rule.right):
                    if word not in self.table[rule.left]:
                        self.table[rule.left].add(word)
                        done = False

    def __call__(self, word):
        res = {()}
        for symbol in word:
            rset = self.table.get(symbol, {(symbol,)})
            res, shortest = oplus(res, rset, self.k)
            if shortest == self.k:
                break
        return res
