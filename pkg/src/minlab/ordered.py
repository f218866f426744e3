"""Ordered abelian groups: divisibility, cofinal sets and convex orders.

An ordered abelian group is convexly orderable exactly when it is
divisible. When pG != G, the sets D_{p,n} of positive elements with
p-exponent exactly n are pairwise disjoint and cofinal, and infinitely
many such sets defeat every convex order.

>>> classify_ordered(IntegersModel().profile()).convexly_orderable
False
>>> sorted(dpn_witnesses(IntegersModel(), 2, [1], 100).elements(1))[:4]
[2, 6, 10, 14]
"""

from dataclasses import dataclass, field
from functools import lru_cache
import itertools
import logging
import numpy as np
import sympy

logger = logging.getLogger(__name__)

class OrderedModelError(ValueError):
    """Raised on an element or parameter outside a model."""

class RefutationError(ValueError):
    """Raised when the input to a refutation is malformed."""

_PRESBURGER_NOTE = 'quasi-VC-minimal, not VC-minimal'

@dataclass(frozen=True)
class DivisibilityProfile:
    """Which primes p satisfy pG = G; `default` covers unlisted primes.

    >>> DivisibilityProfile({2: True}).witness_prime()
    3
    >>> DivisibilityProfile(default=True).witness_prime() is None
    True
    """
    entries: dict = field(default_factory=dict)
    default: bool = False
    presburger: bool = False

    def divisible_at(self, p):
        return self.entries.get(p, self.default)

    @property
    def is_divisible(self):
        return self.default and all(self.entries.values())

    def witness_prime(self):
        """The smallest prime p with pG != G, or None."""
        if self.is_divisible:
            return None
        if self.default:
            return min(p for p, div in self.entries.items() if not div)
        p = 2
        while self.divisible_at(p):
            p = sympy.nextprime(p)
        return p

    def __hash__(self):
        return hash((tuple(sorted(self.entries.items())), self.default, self.presburger))

def _valuations(coords, p):
    """Minimum p-adic valuation over the columns of an integer array; zero rows get a large value."""
    coords = np.abs(np.asarray(coords, dtype=np.int64))
    if coords.ndim == 1:
        coords = coords[:, None]
    big = np.iinfo(np.int64).max
    res = np.full(len(coords), big, dtype=np.int64)
    for col in coords.T:
        v = np.zeros(len(col), dtype=np.int64)
        work = col.copy()
        live = work != 0
        while True:
            step = live & (work % p == 0)
            if not step.any():
                break
            v[step] += 1
            work[step] //= p
        v[~live] = big
        res = np.minimum(res, v)
    return res

class IntegersModel:
    """(Z; +, <)."""

    name = 'integers'
    denominator = 1

    def contains(self, x):
        return isinstance(x, (int, np.integer)) or (isinstance(x, sympy.Rational) and x.q == 1)

    def _check(self, x):
        if not self.contains(x):
            raise OrderedModelError('%r is not an integer' % (x,))
        return int(x)

    def add(self, x, y):
        return self._check(x) + self._check(y)

    def scale(self, x, n):
        return n * self._check(x)

    def less(self, x, y):
        return self._check(x) < self._check(y)

    def is_positive(self, x):
        return self._check(x) > 0

    def is_divisible(self, p):
        return False

    def p_exponent(self, x, p):
        return sympy.multiplicity(p, self._check(x))

    def sample(self, bound):
        return np.arange(1, bound + 1, dtype=np.int64)[:, None]

    def element(self, row):
        return int(row[0])

    def profile(self):
        return DivisibilityProfile({}, False, presburger=True)

class ScaledRationals:
    """Z[1/p : p in primes], the rationals whose denominators use only `primes`.

    >>> g = ScaledRationals({2})
    >>> g.contains(sympy.Rational(3, 8)), g.contains(sympy.Rational(1, 3))
    (True, False)
    >>> g.p_exponent(sympy.Rational(9, 4), 3)
    2
    """

    name = 'scaled-rationals'

    def __init__(self, primes):
        primes = frozenset(int(p) for p in primes)
        for p in primes:
            if not sympy.isprime(p):
                raise OrderedModelError('%d is not prime' % p)
        self.primes = primes
        self.denominator = 1
        for p in primes:
            self.denominator *= p

    def contains(self, x):
        try:
            x = sympy.Rational(x)
        except (TypeError, ValueError):
            return False
        return set(sympy.factorint(x.q)) <= self.primes

    def _check(self, x):
        if not self.contains(x):
            raise OrderedModelError('%s is not in Z[1/%s]' % (x, ','.join(map(str, sorted(self.primes)))))
        return sympy.Rational(x)

    def add(self, x, y):
        return self._check(x) + self._check(y)

    def scale(self, x, n):
        return n * self._check(x)

    def less(self, x, y):
        return self._check(x) < self._check(y)

    def is_positive(self, x):
        return self._check(x) > 0

    def is_divisible(self, p):
        return p in self.primes

    def p_exponent(self, x, p):
        if self.is_divisible(p):
            raise OrderedModelError('every element of Z[1/%d] is divisible by %d' % (p, p))
        return sympy.multiplicity(p, self._check(x).p)

    def sample(self, bound):
        # numerators over the common denominator; the denominator is a unit at every other prime
        return np.arange(1, bound * self.denominator + 1, dtype=np.int64)[:, None]

    def element(self, row):
        return sympy.Rational(int(row[0]), self.denominator)

    def profile(self):
        return DivisibilityProfile({p: True for p in self.primes}, False)

class LexPower:
    """Z^rank ordered lexicographically."""

    name = 'lex-power'
    denominator = 1

    def __init__(self, rank, box=1):
        if rank < 1:
            raise OrderedModelError('rank must be positive')
        self.rank = rank
        self.box = box

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.rank and all(isinstance(c, (int, np.integer)) for c in x)

    def _check(self, x):
        if not self.contains(x):
            raise OrderedModelError('%r is not in Z^%d' % (x, self.rank))
        return x

    def add(self, x, y):
        return tuple(a + b for a, b in zip(self._check(x), self._check(y)))

    def scale(self, x, n):
        return tuple(n * a for a in self._check(x))

    def less(self, x, y):
        return self._check(x) < self._check(y)

    def is_positive(self, x):
        return self._check(x) > (0,) * self.rank

    def is_divisible(self, p):
        return False

    def p_exponent(self, x, p):
        return min(sympy.multiplicity(p, c) for c in self._check(x) if c)

    def sample(self, bound):
        """Leading coordinate in 1..bound, the others in [-box, box]."""
        ranges = [np.arange(1, bound + 1)] + [np.arange(-self.box, self.box + 1)] * (self.rank - 1)
        grids = np.meshgrid(*ranges, indexing='ij')
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def element(self, row):
        return tuple(int(c) for c in row)

    def profile(self):
        return DivisibilityProfile({}, False)

def make_model(name, primes=(), rank=2):
    if name == IntegersModel.name:
        return IntegersModel()
    if name == ScaledRationals.name:
        return ScaledRationals(primes)
    if name == LexPower.name:
        return LexPower(rank)
    raise OrderedModelError('unknown model %r' % name)

@dataclass(frozen=True)
class OrderedVerdict:
    o_minimal: bool
    vc_minimal: bool
    convexly_orderable: bool
    witness_prime: object = None
    annotation: str = ''

def classify_ordered(profile):
    """
    >>> classify_ordered(DivisibilityProfile(default=True))
    OrderedVerdict(o_minimal=True, vc_minimal=True, convexly_orderable=True, witness_prime=None, annotation='')
    >>> classify_ordered(ScaledRationals({2}).profile()).witness_prime
    3
    >>> classify_ordered(IntegersModel().profile()).annotation
    'quasi-VC-minimal, not VC-minimal'
    """
    divisible = profile.is_divisible
    return OrderedVerdict(divisible, divisible, divisible, profile.witness_prime(),
        _PRESBURGER_NOTE if profile.presburger else '')

def check_profile(model, profile, primes, rng, samples=32):
    """Spot-checks a profile against a model; returns the primes where they disagree.

    A sampled element of p-exponent 0 shows pG != G.
    """
    rows = model.sample(max(samples, 8))
    picks = rows[rng.choice(len(rows), size=min(samples, len(rows)), replace=False)]
    bad = []
    for p in primes:
        if model.is_divisible(p):
            observed = True
        else:
            observed = not (_valuations(picks, p) == 0).any()
        if observed != profile.divisible_at(p):
            bad.append(p)
    return bad

@dataclass
class DpnReport:
    p: int
    bound: int
    model: object
    rows: object
    members: dict
    windows: list
    cofinal: dict
    disjoint: bool

    def elements(self, n):
        return [self.model.element(row) for row in self.rows[self.members[n]]]

def dyadic_windows(bound, floor):
    """The windows (bound/2^j, bound/2^(j-1)] whose lower end is at least `floor`.

    >>> dyadic_windows(100, 10)
    [(50.0, 100.0), (25.0, 50.0), (12.5, 25.0)]
    """
    res = []
    hi = float(bound)
    while hi / 2 >= floor:
        res.append((hi / 2, hi))
        hi /= 2
    return res

def dpn_witnesses(model, p, n_list, bound, floor=None):
    """D_{p,n} cut down to (0, bound] for each n, with desk-scale cofinality.

    A set counts as cofinal when it meets every dyadic window of
    (0, bound] down to `floor`, by default 2 p^(max n + 1).
    """
    if model.is_divisible(p):
        raise OrderedModelError('%d divides every element of the %s model' % (p, model.name))
    floor = 2 * p ** (max(n_list) + 1) if floor is None else floor
    rows = model.sample(bound)
    vals = _valuations(rows, p)
    magnitude = rows[:, 0] / model.denominator
    members = {n: np.flatnonzero(vals == n) for n in n_list}
    windows = dyadic_windows(bound, floor)

    cofinal = {}
    for n, idx in members.items():
        mags = magnitude[idx]
        cofinal[n] = all(((mags > lo) & (mags <= hi)).any() for lo, hi in windows)
        if not cofinal[n]:
            logger.warning('D_{%d,%d} misses a window below %s', p, n, bound)

    disjoint = all(np.intersect1d(members[a], members[b]).size == 0
        for a, b in itertools.combinations(n_list, 2))
    logger.debug('D_{%d,n} over %d elements, %d windows', p, len(rows), len(windows))
    return DpnReport(p, bound, model, rows, members, windows, cofinal, disjoint)

def exponent_witness(model, p, n, a, c):
    """An element x = p^n b >= a with p-exponent exactly n.

    `c` is a positive element outside pG; b is a when p does not divide
    a, and a + c otherwise.

    >>> exponent_witness(IntegersModel(), 2, 3, 7, 1)
    56
    >>> exponent_witness(IntegersModel(), 2, 1, 6, 1)
    14
    """
    if model.p_exponent(c, p) != 0 or not model.is_positive(c):
        raise OrderedModelError('%s must be positive and not divisible by %d' % (c, p))
    if not model.is_positive(a):
        raise OrderedModelError('%s must be positive' % (a,))
    b = a if model.p_exponent(a, p) == 0 else model.add(a, c)
    return model.scale(b, p ** n)

@dataclass(frozen=True)
class RefutationWitness:
    """Points alternating in and out of the ray [threshold, oo) along ⊴.

    `sources[j]` is the set that `points[j]` was taken from and
    `representatives[j]` is the ⊴-convex piece of that set around
    `points[j]`, so the pieces follow each other along ⊴.
    """
    threshold: object
    points: tuple
    sources: tuple
    k: int
    representatives: tuple = ()

    def verify(self, order):
        pos = {x: i for i, x in enumerate(order)}
        places = [pos[x] for x in self.points]
        if any(a >= b for a, b in zip(places, places[1:])):
            return False
        if len(set(self.sources)) != len(self.sources) or len(self.points) != 2 * self.k + 1:
            return False
        if self.representatives and not self._pieces_follow(pos):
            return False
        return all((x >= self.threshold) == (j % 2 == 0) for j, x in enumerate(self.points))

    def _pieces_follow(self, pos):
        last = -1
        for x, piece in zip(self.points, self.representatives):
            places = [pos[y] for y in piece]
            if x not in piece or places != list(range(places[0], places[0] + len(places))) or places[0] <= last:
                return False
            last = places[-1]
        return len(self.representatives) == len(self.points)

def coterminal_refute(snapshot, order, k, sets):
    """Looks for a threshold a whose ray needs more than k ⊴-convex pieces.

    `snapshot` holds the elements, `order` lists them along the
    candidate order ⊴ and `sets` are 2k+1 pairwise disjoint cofinal
    sets. The witness takes its points from distinct sets, alternately
    at or above a and below it, starting and ending above. Returns None
    when the snapshot is too small to decide.

    >>> xs = list(range(1, 61))
    >>> d = [[x for x in xs if sympy.multiplicity(2, x) == n] for n in (1, 2, 3)]
    >>> w = coterminal_refute(xs, sorted(xs, key=lambda x: (x % 3, x)), 1, d)
    >>> w.points, w.threshold
    ((12, 2, 8), 3)
    >>> coterminal_refute(xs, xs, 1, d) is None
    True
    """
    if len(sets) != 2 * k + 1:
        raise RefutationError('need %d sets, got %d' % (2 * k + 1, len(sets)))
    if sorted(order) != sorted(snapshot):
        raise RefutationError('the candidate order must list the snapshot exactly once')
    owner = {}
    for i, s in enumerate(sets):
        for x in s:
            if x in owner:
                raise RefutationError('%s lies in sets %d and %d' % (x, owner[x], i))
            owner[x] = i
    seq = [x for x in order if x in owner]

    for a in sorted(set(snapshot))[1:]:
        found = _alternating(tuple(seq), tuple(owner[x] for x in seq), a, 2 * k + 1)
        if found is not None:
            pieces = tuple(_convex_piece(list(order), owner, x) for x in found)
            return RefutationWitness(a, found, tuple(owner[x] for x in found), k, pieces)
    logger.warning('no refutation found on a snapshot of %d elements', len(snapshot))
    return None

def _convex_piece(order, owner, x):
    i = j = order.index(x)
    s = owner[x]
    while i > 0 and owner.get(order[i - 1]) == s:
        i -= 1
    while j + 1 < len(order) and owner.get(order[j + 1]) == s:
        j += 1
    return tuple(order[i:j + 1])

def _alternating(seq, owners, a, length):
    @lru_cache(maxsize=None)
    def search(i, j, used):
        if j == length:
            return ()
        want_above = j % 2 == 0
        for t in range(i, len(seq)):
            if (seq[t] >= a) == want_above and not used & (1 << owners[t]):
                rest = search(t + 1, j + 1, used | (1 << owners[t]))
                if rest is not None:
                    return (seq[t],) + rest
        return None
    return search(0, 0, 0)

class RationalField:
    """Q with exact n-th roots of reduced fractions."""

    name = 'rationals'

    def nth_root(self, x, n):
        x = sympy.Rational(x)
        if x <= 0:
            raise OrderedModelError('%s is not positive' % x)
        num, num_exact = sympy.integer_nthroot(x.p, n)
        den, den_exact = sympy.integer_nthroot(x.q, n)
        if num_exact and den_exact:
            return sympy.Rational(num, den)
        return None

class RealClosedStub:
    """A real closed field, where every positive element has every root."""

    name = 'real-closed'

    def nth_root(self, x, n):
        x = sympy.Rational(x)
        if x <= 0:
            raise OrderedModelError('%s is not positive' % x)
        return sympy.root(x, n)

@dataclass(frozen=True)
class FieldVerdict:
    status: str
    counterexample: object = None

NOT_CONVEXLY_ORDERABLE = 'not convexly orderable'
INCONCLUSIVE = 'inconclusive'

def field_root_verdict(fld, samples, n_max):
    """Searches the samples for a positive element lacking an n-th root.

    >>> field_root_verdict(RationalField(), [2], 2)
    FieldVerdict(status='not convexly orderable', counterexample=(2, 2))
    >>> field_root_verdict(RationalField(), [sympy.Rational(4, 9)], 2).status
    'inconclusive'
    >>> field_root_verdict(RealClosedStub(), [2, 3], 5).status
    'inconclusive'
    """
    for x in samples:
        for n in range(2, n_max + 1):
            if fld.nth_root(x, n) is None:
                return FieldVerdict(NOT_CONVEXLY_ORDERABLE, (x, n))
    return FieldVerdict(INCONCLUSIVE)
