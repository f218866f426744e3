"""Valued fields at desk scale.

Elements of k((t)) with k = Z/p are kept as coefficient vectors up to a
precision P. A non-divisible value group is refuted adversarially: the
sets A_n built from the sequence gamma_n defeat every linear order, as
the greedy chain in `greedy_refute` shows order by order.

>>> g = gamma_seq(2, 1, 6)
>>> g.values
(0, 1, 2, 3, 4, 5, 6)
>>> inst = build_adversary(2, 1, 2)
>>> [str(a) for a in inst.level(2)]
['0', '1', 't', '1 + t']
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import logging
import math
import numpy as np
import sympy

from .directed import ConvexOrder, SetFamily, count_components

logger = logging.getLogger(__name__)

class PrecisionError(ValueError):
    """Raised when the precision cannot hold the requested valuations."""

class ParameterError(ValueError):
    """Raised on invalid primes, gamma parameters or mismatched series."""

class ConstructionError(RuntimeError):
    """Raised when a greedy chain violates one of its defining conditions."""

class InducedOrderError(ValueError):
    """Raised when an interpretation's classes are not convex enough.

    `sequence` holds the alternating points r_0, s_1, r_1, ... chasing
    one class through another along the base order.
    """
    def __init__(self, message, sequence=()):
        super().__init__(message)
        self.sequence = tuple(sequence)

@dataclass(frozen=True)
class Beyond:
    """A valuation known only to be at least `bound`."""
    bound: int

    def __str__(self):
        return '>= %d' % self.bound

class TruncatedSeries:
    """c_0 + c_1 t + ... + c_{P-1} t^{P-1} over Z/p."""

    def __init__(self, p, coeffs):
        self.p = p
        self.coeffs = tuple(int(c) % p for c in coeffs)

    @classmethod
    def zero(cls, p, precision):
        return cls(p, [0] * precision)

    @classmethod
    def monomial(cls, p, precision, e):
        if e >= precision:
            raise PrecisionError('t^%d does not fit precision %d' % (e, precision))
        return cls(p, [1 if i == e else 0 for i in range(precision)])

    @property
    def precision(self):
        return len(self.coeffs)

    def _check(self, other):
        if self.p != other.p or self.precision != other.precision:
            raise ParameterError('series over Z/%d at precision %d and Z/%d at precision %d do not mix'
                % (self.p, self.precision, other.p, other.precision))

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return Beyond(self.precision)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = '' if i == 0 else ('t' if i == 1 else 't^%d' % i)
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else '%d%s' % (c, mono))
        return ' + '.join(terms) if terms else '0'

    def __repr__(self):
        return 'TruncatedSeries(%d, %r)' % (self.p, self.coeffs)

def vdist(a, b):
    """v(a - b), or `Beyond(P)` when a and b agree to precision P.

    >>> a, b = TruncatedSeries(2, [1, 1, 0, 0]), TruncatedSeries(2, [1, 0, 0, 0])
    >>> vdist(a, b), str(vdist(a, a))
    (1, '>= 4')
    """
    return (a - b).valuation()

def xb_member(a, b, p):
    """a in X_b, i.e. p divides v(a - b); a = b counts as a member.

    >>> xb_member(TruncatedSeries(2, [0, 0, 1]), TruncatedSeries.zero(2, 3), 2)
    True
    >>> xb_member(TruncatedSeries(2, [0, 1, 0]), TruncatedSeries.zero(2, 3), 2)
    False
    """
    v = vdist(a, b)
    if isinstance(v, Beyond):
        return True
    return v % p == 0

@dataclass(frozen=True)
class GammaSeq:
    p: int
    gamma1: int
    values: tuple

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

def _check_gamma_params(p, gamma1):
    if not sympy.isprime(p):
        raise ParameterError('%d is not prime' % p)
    if gamma1 <= 0:
        raise ParameterError('gamma1 must be positive')
    if gamma1 % p == 0:
        raise ParameterError('%d divides gamma1 = %d' % (p, gamma1))

def gamma_seq(p, gamma1, n_max):
    """gamma_{2k} = k p gamma1 and gamma_{2k+1} = gamma1 + k p gamma1, for n <= n_max.

    >>> gamma_seq(3, 1, 5).values
    (0, 1, 3, 4, 6, 7)
    >>> gamma_seq(2, 2, 3)
    Traceback (most recent call last):
        ...
    minlab.valued.ParameterError: 2 divides gamma1 = 2
    """
    _check_gamma_params(p, gamma1)
    values = []
    for n in range(n_max + 1):
        k, odd = divmod(n, 2)
        values.append(k * p * gamma1 + (gamma1 if odd else 0))
    return GammaSeq(p, gamma1, tuple(values))

def distance_table(series):
    """Pairwise valuations of differences; entries equal to P stand for `Beyond(P)`."""
    if not series:
        return np.zeros((0, 0), dtype=np.int64)
    p, precision = series[0].p, series[0].precision
    m = np.array([s.coeffs for s in series], dtype=np.int64)
    res = np.empty((len(series), len(series)), dtype=np.int64)
    for i in range(len(series)):
        nz = (m - m[i]) % p != 0
        first = np.argmax(nz, axis=1)
        res[i] = np.where(nz.any(axis=1), first, precision)
    return res

class AdversarialInstance:
    """The levels A_0 = {0}, A_{i+1} = A_i plus a + t^{gamma_i} for a in A_i."""

    def __init__(self, gamma, n, precision):
        self.gamma = gamma
        self.n = n
        self.precision = precision
        p = gamma.p
        points = [TruncatedSeries.zero(p, precision)]
        self.sizes = [1]
        for i in range(n):
            step = TruncatedSeries.monomial(p, precision, gamma[i])
            points = points + [a + step for a in points]
            self.sizes.append(len(points))
        self.points = tuple(points)
        self._table = None

    @property
    def p(self):
        return self.gamma.p

    def level(self, i):
        """A_i, as the first 2^i points."""
        return self.points[:self.sizes[i]]

    @property
    def table(self):
        if self._table is None:
            self._table = distance_table(self.points)
        return self._table

    def check(self):
        """Re-checks the size, separation and realisation properties of A_n."""
        t = self.table
        n = self.n
        if len(set(self.points)) != 2 ** n:
            return False
        off = t[~np.eye(len(t), dtype=bool)]
        if n >= 1 and off.size and off.max() > self.gamma[n - 1]:
            return False
        for i in range(n):
            if not (t == self.gamma[i]).any(axis=1).all():
                return False
        return True

def build_adversary(p, gamma1, n, precision=None):
    """Builds A_n and checks it; the precision must exceed gamma_n.

    >>> inst = build_adversary(2, 1, 3)
    >>> len(inst.points), int(inst.table[~np.eye(8, dtype=bool)].max())
    (8, 2)
    """
    gamma = gamma_seq(p, gamma1, n)
    precision = gamma[n] + 1 if precision is None else precision
    if precision <= gamma[n]:
        raise PrecisionError('precision %d does not exceed gamma_%d = %d' % (precision, n, gamma[n]))
    inst = AdversarialInstance(gamma, n, precision)
    if not inst.check():
        raise ConstructionError('the level A_%d fails its defining properties' % n)
    logger.debug('built A_%d over Z/%d with %d points at precision %d', n, p, len(inst.points), precision)
    return inst

@dataclass(frozen=True)
class GreedyRecord:
    """The chain a_0 < ... < a_{2n+1}, b = a_{2n+1}, and the components of X_b."""
    chain: tuple
    b: int
    lower_bound: int
    components: int
    order: tuple

def greedy_refute(inst, order):
    """Runs the greedy chain for the linear order `order` (a permutation of
    point indices, smallest first) on A_{2n+1}.

    Each a_{i+1} is the order-least point at distance gamma_i from a_i.
    """
    if inst.n % 2 != 1:
        raise ParameterError('the greedy chain runs on A_{2n+1}, got depth %d' % inst.n)
    size = len(inst.points)
    order = np.asarray(order, dtype=np.int64)
    if len(order) != size or set(order.tolist()) != set(range(size)):
        raise ParameterError('the order must list every point of A_%d exactly once' % inst.n)
    return _greedy(inst.table, inst.gamma.values, inst.p, inst.n, order)

def _greedy(table, gamma, p, depth, order):
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    chain = [int(order[0])]
    for i in range(depth):
        cands = np.flatnonzero(table[chain[-1]] == gamma[i])
        if not len(cands):
            raise ConstructionError('no point at distance gamma_%d from a_%d' % (i, i))
        chain.append(int(cands[np.argmin(rank[cands])]))

    for i, a in enumerate(chain):
        if any(table[chain[j], a] != gamma[j] for j in range(i)):
            raise ConstructionError('v(a_j - a_%d) differs from gamma_j' % i)
        if i and rank[chain[i - 1]] >= rank[a]:
            raise ConstructionError('a_%d does not follow a_%d' % (i, i - 1))
        if i < depth:
            near = table[a] >= gamma[i]
            if (rank[near] < rank[a]).any():
                raise ConstructionError('a_%d is not least among points near it' % i)

    b = chain[-1]
    member = (table[b] % p == 0) | (table[b] >= table[b, b])
    for i, a in enumerate(chain[:-1]):
        if bool(member[a]) != (i % 2 == 0):
            raise ConstructionError('a_%d lies on the wrong side of X_b' % i)
    runs = member[order]
    components = int(runs[0]) + int(np.count_nonzero(runs[1:] & ~runs[:-1]))
    return GreedyRecord(tuple(chain), b, (depth - 1) // 2 + 1, components, tuple(int(x) for x in order))

@dataclass
class GreedySummary:
    orders: int
    min_components: int
    failures: list

    @property
    def ok(self):
        return not self.failures

def _greedy_prefix(args):
    table, gamma, p, depth, first = args
    size = len(table)
    rest = [x for x in range(size) if x != first]
    best = None
    failures = []
    count = 0
    for perm in itertools.permutations(rest):
        order = np.array((first,) + perm, dtype=np.int64)
        count += 1
        try:
            rec = _greedy(table, gamma, p, depth, order)
        except ConstructionError as e:
            failures.append((tuple(order.tolist()), str(e)))
            continue
        if rec.components < rec.lower_bound:
            failures.append((rec.order, 'only %d components' % rec.components))
        best = rec.components if best is None else min(best, rec.components)
    return count, best, failures

def _merge(results):
    total, best, failures = 0, None, []
    for count, b, fails in results:
        total += count
        if b is not None:
            best = b if best is None else min(best, b)
        failures.extend(fails)
    return GreedySummary(total, best, failures)

def exhaustive_greedy(p, gamma1, n, workers=1, precision=None):
    """Runs `greedy_refute` on every linear order of A_{2n+1}, split by first point.

    Only sensible for n = 1, where A_3 has 8 points.
    """
    inst = build_adversary(p, gamma1, 2 * n + 1, precision)
    size = len(inst.points)
    jobs = [(inst.table, inst.gamma.values, p, inst.n, first) for first in range(size)]
    logger.info('exhaustive greedy run over %d orders', math.factorial(size))
    if workers == 1:
        results = list(map(_greedy_prefix, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_greedy_prefix, jobs))
    return _merge(results)

def random_greedy(p, gamma1, n, trials, rng, precision=None):
    """Runs `greedy_refute` on `trials` seeded random orders of A_{2n+1}."""
    inst = build_adversary(p, gamma1, 2 * n + 1, precision)
    best, failures = None, []
    for _ in range(trials):
        order = rng.permutation(len(inst.points))
        try:
            rec = _greedy(inst.table, inst.gamma.values, p, inst.n, order)
        except ConstructionError as e:
            failures.append((tuple(order.tolist()), str(e)))
            continue
        if rec.components < rec.lower_bound:
            failures.append((rec.order, 'only %d components' % rec.components))
        best = rec.components if best is None else min(best, rec.components)
    return GreedySummary(trials, best, failures)

def valuation_order(series):
    """Indices of `series` sorted by valuation, then coefficients."""
    def key(i):
        v = series[i].valuation()
        return (v.bound if isinstance(v, Beyond) else v, series[i].coeffs)
    return sorted(range(len(series)), key=key)

def ball_family(series):
    """The balls {b : v(a - b) >= g} around every point, on indices 1..N."""
    table = distance_table(list(series))
    members = []
    for i in range(len(table)):
        for g in np.unique(table[i]):
            members.append(np.flatnonzero(table[i] >= g) + 1)
    return SetFamily(range(1, len(table) + 1), [m.tolist() for m in members])

class InterpretationSpec:
    """A domain S with an equivalence relation eps on it, given by its classes."""

    def __init__(self, domain, classes):
        self.domain = tuple(domain)
        self.classes = tuple(frozenset(c) for c in classes)
        covered = [x for c in self.classes for x in c]
        if any(not c for c in self.classes):
            raise InducedOrderError('classes must be nonempty')
        if len(covered) != len(set(covered)) or set(covered) != set(self.domain):
            raise InducedOrderError('the classes must partition the domain')

    @classmethod
    def from_relation(cls, domain, eps):
        """Groups `domain` by eps after checking it is an equivalence."""
        domain = list(domain)
        for x in domain:
            if not eps(x, x):
                raise InducedOrderError('eps is not reflexive at %r' % (x,))
        for x, y in itertools.combinations(domain, 2):
            if eps(x, y) != eps(y, x):
                raise InducedOrderError('eps is not symmetric at %r, %r' % (x, y))
        classes = []
        for x in domain:
            related = [c for c in classes if any(eps(y, x) for y in c)]
            if not related:
                classes.append([x])
                continue
            if len(related) > 1 or not all(eps(y, x) for y in related[0]):
                raise InducedOrderError('eps is not transitive at %r' % (x,))
            related[0].append(x)
        return cls(domain, classes)

def _chase(order, x, y):
    # r_0 = largest point of x, then alternately the largest earlier point of y, of x, ...
    seq = []
    current, other = x, y
    for pt in reversed(order.points):
        if pt in current:
            seq.append(pt)
            current, other = other, current
    return seq

def induced_order(spec, base_order, max_pieces=1):
    """Orders the classes by x <= y iff every point of y lies above some point of x.

    Each class may be a union of at most `max_pieces` base-convex sets.

    >>> spec = InterpretationSpec(range(4), [{0, 1}, {2, 3}])
    >>> induced_order(spec, ConvexOrder([2, 3, 0, 1])).points
    (frozenset({2, 3}), frozenset({0, 1}))
    >>> induced_order(InterpretationSpec(range(4), [{0, 2}, {1, 3}]), ConvexOrder(range(4)))
    Traceback (most recent call last):
        ...
    minlab.valued.InducedOrderError: the class {0,2} has 2 convex pieces, above the bound 1
    """
    for c in spec.classes:
        pieces = count_components(base_order, c)
        if pieces > max_pieces:
            other = _interleaved(spec, base_order, c)
            raise InducedOrderError('the class {%s} has %d convex pieces, above the bound %d'
                % (','.join(map(str, sorted(c))), pieces, max_pieces), _chase(base_order, c, other))
    res = sorted(spec.classes, key=lambda c: min(base_order.rank(x) for x in c))
    return ConvexOrder(res)

def _interleaved(spec, base_order, c):
    ranks = sorted(base_order.rank(x) for x in c)
    for lo, hi in zip(ranks, ranks[1:]):
        if hi > lo + 1:
            between = base_order.points[lo + 1]
            return next(d for d in spec.classes if between in d)
    return c

def induced_relation(base_order, x, y):
    """The defining formula, evaluated directly: every s in y has some r in x below it."""
    return all(any(base_order.rank(r) <= base_order.rank(s) for r in x) for s in y)

@dataclass(frozen=True)
class TransferCheck:
    base_components: int
    induced_components: int
    lifted: tuple

    def __bool__(self):
        return self.induced_components <= self.base_components

def transfer_check(base_order, induced, marked):
    """Compares the components of marked classes with those of their union.

    The induced runs are lifted to points of the base order, taking the
    least point of each class, which alternate in and out of the union
    just as the classes alternate in and out of `marked`.
    """
    marked = set(marked)
    union = set().union(*marked) if marked else set()
    k_base = count_components(base_order, union)
    k_induced = count_components(induced, marked)
    lifted = []
    prev = None
    for c in induced.points:
        inside = c in marked
        if inside != prev:
            lifted.append(min(c, key=base_order.rank))
            prev = inside
    return TransferCheck(k_base, k_induced, tuple(lifted))

def value_group_interpretation(p=2, top=5):
    """The interpretation of the value group on the nonzero series with
    support in t^0..t^top, with eps(x, y) meaning v(x) = v(y).

    Returns (spec, base order, induced order); the induced order lists
    the classes by increasing valuation.

    >>> spec, base, induced = value_group_interpretation()
    >>> len(spec.domain), [next(iter(c)).valuation() for c in induced.points]
    (63, [0, 1, 2, 3, 4, 5])
    """
    precision = top + 1
    series = [TruncatedSeries(p, coeffs) for coeffs in itertools.product(range(p), repeat=precision)]
    series = [s for s in series if not isinstance(s.valuation(), Beyond)]
    spec = InterpretationSpec.from_relation(series, lambda x, y: x.valuation() == y.valuation())
    base = ConvexOrder([series[i] for i in valuation_order(series)])
    return spec, base, induced_order(spec, base)

@dataclass(frozen=True)
class ValuedVerdict:
    label: str
    status: str
    prime: object = None
    formula: str = ''

NOT_QUASI_VC_MINIMAL = 'not quasi-VC-minimal'
NOT_CONVEXLY_ORDERABLE = 'not convexly orderable, not VC-minimal'
INCONCLUSIVE = 'inconclusive'

def quasi_verdict(value_group, label):
    """
    >>> from .ordered import IntegersModel, DivisibilityProfile
    >>> quasi_verdict(IntegersModel().profile(), 'Q_p')
    ValuedVerdict(label='Q_p', status='not quasi-VC-minimal', prime=2, formula='Ez (z^2 | (x - y))')
    >>> quasi_verdict(DivisibilityProfile(default=True), 'ACVF').status
    'inconclusive'
    """
    p = value_group.witness_prime()
    if p is None:
        return ValuedVerdict(label, INCONCLUSIVE)
    return ValuedVerdict(label, NOT_QUASI_VC_MINIMAL, p, 'Ez (z^%d | (x - y))' % p)

def convex_verdict(value_group, label):
    """A non-divisible value group is not convexly orderable, and the field
    interprets it."""
    p = value_group.witness_prime()
    if p is None:
        return ValuedVerdict(label, INCONCLUSIVE)
    return ValuedVerdict(label, NOT_CONVEXLY_ORDERABLE, p)
