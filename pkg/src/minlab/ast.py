"""Parse-tree nodes of the descriptor language.

Node fields are declared as class annotations; the constructor takes
them as keyword arguments.

>>> s = Summand(term=CyclicTerm(p=2, n=3), mult='w', pos=None)
>>> s
Summand(term=CyclicTerm(p=2, n=3), mult='w', pos=None)
>>> s.clone() == s
True
>>> dict(CyclicTerm(p=2, n=3).items())
{'p': 2, 'n': 3}
"""

import inspect

class Node:
    def __init__(self, **kw):
        for k in self.keys():
            setattr(self, k, kw.pop(k))
        if kw:
            raise TypeError('unknown fields for %s: %s' % (type(self).__name__, ', '.join(sorted(kw))))

    def keys(self):
        for base in reversed(inspect.getmro(type(self))):
            yield from inspect.get_annotations(base)

    def items(self):
        for k in self.keys():
            yield (k, getattr(self, k))

    def clone(self):
        return type(self)(**dict(self.items()))

    def __eq__(self, other):
        return type(self) is type(other) and list(self.items()) == list(other.items())

    def __hash__(self):
        return hash((type(self).__name__,) + tuple(v for k, v in self.items() if k != 'pos'))

    def __repr__(self):
        return '%s(%s)' % (type(self).__name__, ', '.join('%s=%r' % kv for kv in self.items()))

class Term(Node):
    """A basic summand or a tail of a descriptor."""
    is_tail = False

class CyclicTerm(Term):
    p: int
    n: int

class PruferTerm(Term):
    p: int

class LocalizedTerm(Term):
    p: int

class RationalTerm(Term):
    pass

class ZeroTerm(Term):
    pass

class IntegersTerm(Term):
    is_tail = True

class TailCyclicTerm(Term):
    n: int
    is_tail = True

class TailPruferTerm(Term):
    is_tail = True

class TailLocalizedTerm(Term):
    is_tail = True

class CofinalTerm(Term):
    p: int
    is_tail = True

class Summand(Node):
    term: Term
    # a non-negative int, or 'w' for an infinite multiplicity
    mult: object
    pos: object
