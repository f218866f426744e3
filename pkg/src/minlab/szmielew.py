"""Abelian-group theories as formal direct sums of basic summands.

A `GroupDescriptor` lists, prime by prime, the multiplicities of the
cyclic groups Z/p^i, the Prufer group Z(p^oo) and the localisation
Z_(p), together with the multiplicity of Q and an optional uniform tail
that repeats a fixed local shape at every prime.

>>> d = parse_descriptor('C(2,1)^1 (+) C(2,1)^1 (+) Zloc(3)^w')
>>> print(d)
C(2,1)^2 (+) Zloc(3)^w
>>> d.local(2).alpha_at(1)
Finite(2)
>>> print(parse_descriptor('Z'))
Z
>>> parse_descriptor('Z').effective_gamma(7)
Finite(1)
>>> print(direct_sum(parse_descriptor('Zp8(5)'), parse_descriptor('Zp8(5)^w')))
Zp8(5)^w
"""

from dataclasses import dataclass, field
from functools import total_ordering
import logging
import sympy

from . import ast
from .descriptor_grammar import parse_descriptor_terms, DescriptorParsingError

logger = logging.getLogger(__name__)

class DescriptorError(ValueError):
    """Raised when a direct sum has no descriptor representation."""

@total_ordering
@dataclass(frozen=True)
class XCard:
    """A cardinal with all infinite cardinals identified.

    >>> Finite(2) + Finite(3)
    Finite(5)
    >>> Finite(2) + INFINITE
    Infinite
    >>> Finite(7) < INFINITE
    True
    """
    n: object = None

    @property
    def is_finite(self):
        return self.n is not None

    @property
    def is_zero(self):
        return self.n == 0

    def __add__(self, other):
        if not self.is_finite or not other.is_finite:
            return INFINITE
        return XCard(self.n + other.n)

    def __lt__(self, other):
        if not other.is_finite:
            return self.is_finite
        return self.is_finite and self.n < other.n

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return 'Finite(%d)' % self.n if self.is_finite else 'Infinite'

    def __str__(self):
        return str(self.n) if self.is_finite else 'w'

def Finite(n):
    if n < 0:
        raise ValueError('cardinals are non-negative')
    return XCard(n)

INFINITE = XCard(None)
ZERO = XCard(0)

def xcard(mult):
    """Converts a parsed multiplicity (an int or 'w') to an `XCard`."""
    return INFINITE if mult == 'w' else Finite(mult)

@dataclass(frozen=True)
class PrimeLocal:
    """The summands of a descriptor living at a single prime.

    `alpha` is a sorted tuple of (exponent, multiplicity) pairs; when
    `cofinal` is set, one more copy of Z/p^i is present for every i.
    """
    p: int
    alpha: tuple = ()
    cofinal: bool = False
    beta: XCard = ZERO
    gamma: XCard = ZERO

    def alpha_at(self, i):
        for n, mult in self.alpha:
            if n == i:
                return mult
        return ZERO

    @property
    def is_trivial(self):
        return not self.alpha and not self.cofinal and self.beta.is_zero and self.gamma.is_zero

@dataclass(frozen=True)
class TailTemplate:
    """A local shape repeated at every prime. All multiplicities are finite."""
    alpha: tuple = ()
    beta: int = 0
    gamma: int = 0

    def alpha_at(self, i):
        return dict(self.alpha).get(i, 0)

    @property
    def is_trivial(self):
        return not self.alpha and not self.beta and not self.gamma

    def support(self):
        return (frozenset(n for n, _ in self.alpha), self.beta > 0, self.gamma > 0)

    def __add__(self, other):
        alpha = dict(self.alpha)
        for n, mult in other.alpha:
            alpha[n] = alpha.get(n, 0) + mult
        return TailTemplate(tuple(sorted(alpha.items())), self.beta + other.beta, self.gamma + other.gamma)

@dataclass(frozen=True)
class PrimeShape:
    """The slots a descriptor has at one prime, with their multiplicities.

    For a cofinal prime, `cyclic` lists the finitely many exponents with
    extra multiplicity; every exponent carries one more copy on top.
    """
    p: int
    cyclic: tuple = ()
    cofinal: bool = False
    prufer: XCard = ZERO
    localized: XCard = ZERO

    def mult_at(self, n):
        mult = dict(self.cyclic).get(n, ZERO)
        if self.cofinal:
            mult = mult + Finite(1)
        return mult

    @property
    def max_exponent(self):
        return max((n for n, _ in self.cyclic), default=0)

    @property
    def is_empty(self):
        return not self.cyclic and not self.cofinal and self.prufer.is_zero and self.localized.is_zero

@dataclass(frozen=True)
class GroupDescriptor:
    locals: tuple = ()
    delta: XCard = ZERO
    tail: object = None

    def __post_init__(self):
        primes = [loc.p for loc in self.locals]
        if primes != sorted(set(primes)):
            raise DescriptorError('prime locals must be distinct and ascending')
        if self.tail is not None and self.tail.is_trivial:
            raise DescriptorError('a uniform tail must be nontrivial')

    def local(self, p):
        for loc in self.locals:
            if loc.p == p:
                return loc
        return PrimeLocal(p)

    @property
    def explicit_primes(self):
        return tuple(loc.p for loc in self.locals)

    @property
    def has_tail(self):
        return self.tail is not None

    def effective_alpha(self, p, i):
        loc = self.local(p)
        mult = loc.alpha_at(i)
        if loc.cofinal:
            mult = mult + Finite(1)
        if self.tail is not None:
            mult = mult + Finite(self.tail.alpha_at(i))
        return mult

    def effective_beta(self, p):
        return self.local(p).beta + Finite(self.tail.beta if self.tail else 0)

    def effective_gamma(self, p):
        return self.local(p).gamma + Finite(self.tail.gamma if self.tail else 0)

    def shape(self, p):
        """Returns the `PrimeShape` at `p`, tail summands included."""
        loc = self.local(p)
        cyclic = dict(loc.alpha)
        if self.tail is not None:
            for n, mult in self.tail.alpha:
                cyclic[n] = cyclic.get(n, ZERO) + Finite(mult)
        return PrimeShape(p, tuple(sorted(cyclic.items())), loc.cofinal,
            self.effective_beta(p), self.effective_gamma(p))

    @property
    def max_exponent(self):
        exps = [n for loc in self.locals for n, _ in loc.alpha]
        if self.tail is not None:
            exps.extend(n for n, _ in self.tail.alpha)
        return max(exps, default=0)

    @property
    def is_finite_group(self):
        return (self.tail is None and self.delta.is_zero
            and all(not loc.cofinal and loc.beta.is_zero and loc.gamma.is_zero
                and all(mult.is_finite for _, mult in loc.alpha) for loc in self.locals))

    def __str__(self):
        return format_descriptor(self)

def _mult_suffix(mult):
    return '' if mult == Finite(1) else '^%s' % mult

def format_descriptor(d):
    """Prints a descriptor in its normal form.

    >>> print(format_descriptor(parse_descriptor('Q (+) Zp8(3) (+) C(2,2)^w (+) cofinal(5) (+) Z^2 (+) tailC(p,1)')))
    C(2,2)^w (+) Zp8(3) (+) cofinal(5) (+) Q (+) tailC(p,1) (+) Z^2
    >>> format_descriptor(GroupDescriptor())
    '0'
    """
    parts = []
    for loc in d.locals:
        parts.extend('C(%d,%d)%s' % (loc.p, n, _mult_suffix(mult)) for n, mult in loc.alpha)
        if loc.beta:
            parts.append('Zp8(%d)%s' % (loc.p, _mult_suffix(loc.beta)))
        if loc.gamma:
            parts.append('Zloc(%d)%s' % (loc.p, _mult_suffix(loc.gamma)))
        if loc.cofinal:
            parts.append('cofinal(%d)' % loc.p)
    if d.delta:
        parts.append('Q%s' % _mult_suffix(d.delta))
    if d.tail is not None:
        parts.extend('tailC(p,%d)%s' % (n, _mult_suffix(Finite(mult))) for n, mult in d.tail.alpha)
        if d.tail.beta:
            parts.append('tailZp8%s' % _mult_suffix(Finite(d.tail.beta)))
        if d.tail.gamma:
            parts.append('Z%s' % _mult_suffix(Finite(d.tail.gamma)))
    return ' (+) '.join(parts) if parts else '0'

class _LocalBuilder:
    def __init__(self, p):
        self.p = p
        self.alpha = {}
        self.cofinal = False
        self.beta = ZERO
        self.gamma = ZERO

    def build(self):
        alpha = tuple(sorted((n, mult) for n, mult in self.alpha.items() if not mult.is_zero))
        return PrimeLocal(self.p, alpha, self.cofinal, self.beta, self.gamma)

def _make_descriptor(builders, delta, tail):
    locals_ = [b.build() for _, b in sorted(builders.items())]
    locals_ = tuple(loc for loc in locals_ if not loc.is_trivial)
    if tail is not None and tail.is_trivial:
        tail = None
    return GroupDescriptor(locals_, delta, tail)

def _builders_of(d):
    builders = {}
    for loc in d.locals:
        b = builders[loc.p] = _LocalBuilder(loc.p)
        b.alpha = dict(loc.alpha)
        b.cofinal = loc.cofinal
        b.beta = loc.beta
        b.gamma = loc.gamma
    return builders

def parse_descriptor(text, filename='<descriptor>'):
    """Parses and normalises descriptor text.

    >>> parse_descriptor('C(2,3)^w').local(2).alpha
    ((3, Infinite),)
    >>> parse_descriptor('0')
    GroupDescriptor(locals=(), delta=Finite(0), tail=None)
    """
    builders = {}
    delta = ZERO
    tail = TailTemplate()

    def builder(p):
        if p not in builders:
            builders[p] = _LocalBuilder(p)
        return builders[p]

    for summand in parse_descriptor_terms(text, filename):
        term, mult = summand.term, xcard(summand.mult)
        if isinstance(term, ast.CyclicTerm):
            b = builder(term.p)
            b.alpha[term.n] = b.alpha.get(term.n, ZERO) + mult
        elif isinstance(term, ast.PruferTerm):
            builder(term.p).beta += mult
        elif isinstance(term, ast.LocalizedTerm):
            builder(term.p).gamma += mult
        elif isinstance(term, ast.RationalTerm):
            delta += mult
        elif isinstance(term, ast.CofinalTerm):
            if mult.is_zero:
                continue
            builder(term.p).cofinal = True
        elif isinstance(term, (ast.IntegersTerm, ast.TailLocalizedTerm)):
            tail = tail + TailTemplate(gamma=mult.n)
        elif isinstance(term, ast.TailCyclicTerm):
            tail = tail + TailTemplate(alpha=((term.n, mult.n),) if mult.n else ())
        elif isinstance(term, ast.TailPruferTerm):
            tail = tail + TailTemplate(beta=mult.n)

    d = _make_descriptor(builders, delta, tail)
    logger.debug('parsed %r as %s', text, d)
    return d

def direct_sum(a, b):
    """Returns the normalised direct sum of two descriptors.

    >>> print(direct_sum(parse_descriptor('C(3,1)^w'), parse_descriptor('C(3,2)^w')))
    C(3,1)^w (+) C(3,2)^w
    >>> print(direct_sum(parse_descriptor('Z'), parse_descriptor('Z')))
    Z^2
    >>> direct_sum(parse_descriptor('Z'), parse_descriptor('tailC(p,1)'))
    Traceback (most recent call last):
        ...
    minlab.szmielew.DescriptorError: cannot add the distinct uniform tails Z and tailC(p,1)
    """
    builders = _builders_of(a)
    for loc in b.locals:
        if loc.p not in builders:
            builders[loc.p] = _LocalBuilder(loc.p)
        t = builders[loc.p]
        if t.cofinal and loc.cofinal:
            raise DescriptorError('cannot add two cofinal tails at the prime %d' % loc.p)
        for n, mult in loc.alpha:
            t.alpha[n] = t.alpha.get(n, ZERO) + mult
        t.cofinal = t.cofinal or loc.cofinal
        t.beta += loc.beta
        t.gamma += loc.gamma

    if a.tail is None or b.tail is None:
        tail = a.tail or b.tail
    elif a.tail.support() == b.tail.support():
        tail = a.tail + b.tail
    else:
        raise DescriptorError('cannot add the distinct uniform tails %s and %s'
            % (format_descriptor(GroupDescriptor(tail=a.tail)), format_descriptor(GroupDescriptor(tail=b.tail))))

    return _make_descriptor(builders, a.delta + b.delta, tail)

def is_nonsingular(d):
    """Tests whether A[p] and A/pA are finite at every prime.

    >>> is_nonsingular(parse_descriptor('tailC(p,1)'))
    True
    >>> is_nonsingular(parse_descriptor('C(2,1)^w'))
    False
    >>> is_nonsingular(parse_descriptor('Q^w'))
    True
    """
    # tail multiplicities are finite, so only explicit primes can fail
    for loc in d.locals:
        if loc.cofinal or not loc.beta.is_finite or not loc.gamma.is_finite:
            return False
        if any(not mult.is_finite for _, mult in loc.alpha):
            return False
    return True

@dataclass(frozen=True)
class FiniteGroupSpec:
    """A finite abelian group given as a direct sum of cyclic groups.

    >>> g = FiniteGroupSpec((12, 2))
    >>> g.order
    24
    >>> print(g.to_descriptor())
    C(2,1) (+) C(2,2) (+) C(3,1)
    """
    cyclic_orders: tuple

    def __post_init__(self):
        if not self.cyclic_orders:
            raise DescriptorError('a finite group needs at least one cyclic factor')
        if any(n < 2 for n in self.cyclic_orders):
            raise DescriptorError('cyclic orders must be at least 2')

    @property
    def order(self):
        res = 1
        for n in self.cyclic_orders:
            res *= n
        return res

    def to_descriptor(self):
        builders = {}
        for n in self.cyclic_orders:
            for p, e in sympy.factorint(n).items():
                b = builders.setdefault(p, _LocalBuilder(p))
                b.alpha[e] = b.alpha.get(e, ZERO) + Finite(1)
        return _make_descriptor(builders, ZERO, None)

    def __str__(self):
        return ' (+) '.join('Z/%d' % n for n in self.cyclic_orders)
