"""Brute-force ground truth on explicit finite abelian groups.

Elements are tuples in lexicographic order, so a subset of the group is
a boolean mask over `range(order)`.

>>> from .szmielew import FiniteGroupSpec
>>> g = ExplicitGroup(FiniteGroupSpec((2, 4)))
>>> brute_phi(g, 0, 2).to_tuples(g)
[(0, 0), (0, 2), (1, 0), (1, 2)]
>>> cross_check(g, 6, 6)
[]
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import logging
import numpy as np
from sympy.utilities.iterables import partitions
import sympy

from .config import oracle_bound
from .ppcalc import phi_subgroup
from .szmielew import FiniteGroupSpec

logger = logging.getLogger(__name__)

class OracleBoundError(ValueError):
    """Raised when a group is too large to enumerate."""

class SubsetMask:
    """An immutable subset of an `ExplicitGroup`."""

    def __init__(self, bits):
        bits = np.array(bits, dtype=bool)
        bits.flags.writeable = False
        self.bits = bits

    def __len__(self):
        return len(self.bits)

    @property
    def count(self):
        return int(self.bits.sum())

    def indices(self):
        return np.flatnonzero(self.bits)

    def to_tuples(self, g):
        return [tuple(int(c) for c in row) for row in g.elements[self.bits]]

    def __and__(self, other):
        return SubsetMask(self.bits & other.bits)

    def __or__(self, other):
        return SubsetMask(self.bits | other.bits)

    def __invert__(self):
        return SubsetMask(~self.bits)

    def __eq__(self, other):
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        return 'SubsetMask(%s)' % ''.join('1' if b else '0' for b in self.bits)

class ExplicitGroup:
    """Z/n_1 (+) ... (+) Z/n_r with all of its elements listed."""

    def __init__(self, spec, bound=None):
        bound = oracle_bound() if bound is None else bound
        if spec.order > bound:
            raise OracleBoundError('%s has order %d, above the oracle bound %d' % (spec, spec.order, bound))
        self.spec = spec
        self.orders = np.array(spec.cyclic_orders, dtype=np.int64)
        grids = np.meshgrid(*(np.arange(n) for n in spec.cyclic_orders), indexing='ij')
        self.elements = np.stack([grid.ravel() for grid in grids], axis=1)

    @property
    def order(self):
        return len(self.elements)

    def encode(self, rows):
        """The positions of the given element rows."""
        return np.ravel_multi_index(tuple(np.asarray(rows).T), tuple(self.spec.cyclic_orders))

    def add(self, x, y):
        return (np.asarray(x) + np.asarray(y)) % self.orders

    def scaled(self, k):
        """Positions of k*x for every element x, in element order."""
        return self.encode((k * self.elements) % self.orders)

    def mask(self, positions):
        bits = np.zeros(self.order, dtype=bool)
        bits[np.asarray(positions, dtype=np.int64)] = True
        return SubsetMask(bits)

    def full(self):
        return SubsetMask(np.ones(self.order, dtype=bool))

    def translate(self, mask, x):
        return self.mask(self.encode(self.add(self.elements[mask.bits], x)))

    def is_subgroup(self, mask):
        members = self.elements[mask.bits]
        if not mask.bits[0]:
            return False
        sums = self.add(members[:, None, :], members[None, :, :]).reshape(-1, len(self.orders))
        return bool(mask.bits[self.encode(sums)].all())

    def check_axioms(self, rng, samples=64):
        """Spot-checks associativity, identity and inverses on random elements."""
        idx = rng.integers(0, self.order, size=(samples, 3))
        x, y, z = (self.elements[idx[:, i]] for i in range(3))
        zero = self.elements[0]
        return bool(np.array_equal(self.add(self.add(x, y), z), self.add(x, self.add(y, z)))
            and np.array_equal(self.add(x, zero), x)
            and not self.add(x, (-x) % self.orders).any())

    def __str__(self):
        return str(self.spec)

def brute_phi(g, k, m):
    """The solution set of Ey (k*y = m*x) by exhaustive search.

    >>> from .szmielew import FiniteGroupSpec
    >>> g = ExplicitGroup(FiniteGroupSpec((4,)))
    >>> brute_phi(g, 2, 1).to_tuples(g)
    [(0,), (2,)]
    """
    images = np.unique(g.scaled(k))
    return SubsetMask(np.isin(g.scaled(m), images))

def cosets(g, mask):
    """The distinct cosets of the subgroup `mask`."""
    res = []
    covered = np.zeros(g.order, dtype=bool)
    for pos in range(g.order):
        if not covered[pos]:
            c = g.translate(mask, g.elements[pos])
            covered |= c.bits
            res.append(c)
    return res

def definable_enum(g, atoms, depth):
    """Boolean combinations of cosets of the phi_{k,m} for (k, m) in `atoms`.

    Each round adds complements, pairwise intersections and pairwise
    unions of the sets found so far.

    >>> from .szmielew import FiniteGroupSpec
    >>> g = ExplicitGroup(FiniteGroupSpec((4,)))
    >>> len(definable_enum(g, [(2, 1)], 0)), len(definable_enum(g, [(2, 1)], 1))
    (2, 4)
    """
    found = {}
    for k, m in atoms:
        for c in cosets(g, brute_phi(g, k, m)):
            found.setdefault(c, None)
    for _ in range(depth):
        current = list(found)
        for a in current:
            found.setdefault(~a, None)
        for a, b in itertools.combinations(current, 2):
            found.setdefault(a & b, None)
            found.setdefault(a | b, None)
        if len(found) == len(current):
            break
    return list(found)

def symbolic_mask(g, k, m):
    """Expands the traces of phi_subgroup(k, m) to elements of `g`.

    A cyclic factor Z/n contributes its multiples of the product of
    p^s over the prime powers p^e of n, with p^s (Z/p^e) the trace.
    """
    h = phi_subgroup(g.spec.to_descriptor(), k, m)
    bits = np.ones(g.order, dtype=bool)
    for i, n in enumerate(g.spec.cyclic_orders):
        step = 1
        for p, e in sympy.factorint(n).items():
            step *= p ** h.trace_cyclic(p, e).level
        bits &= g.elements[:, i] % step == 0
    return SubsetMask(bits)

@dataclass(frozen=True)
class Mismatch:
    group: str
    k: int
    m: int
    symbolic: tuple
    brute: tuple

    def __str__(self):
        return '%s k=%d m=%d: symbolic %s, brute %s' % (self.group, self.k, self.m, list(self.symbolic), list(self.brute))

def cross_check(g, k_max, m_max):
    """Compares `symbolic_mask` with `brute_phi` on the grid, returning mismatches."""
    res = []
    for k in range(k_max + 1):
        for m in range(m_max + 1):
            sym, brute = symbolic_mask(g, k, m), brute_phi(g, k, m)
            if sym != brute:
                res.append(Mismatch(str(g), k, m, tuple(sym.to_tuples(g)), tuple(brute.to_tuples(g))))
    return res

def enumerate_groups(max_order):
    """All finite abelian groups of order 2..max_order, as sorted prime-power factor lists.

    >>> [str(spec) for spec in enumerate_groups(8)]
    ['Z/2', 'Z/3', 'Z/4', 'Z/2 (+) Z/2', 'Z/5', 'Z/2 (+) Z/3', 'Z/7', 'Z/8', 'Z/2 (+) Z/4', 'Z/2 (+) Z/2 (+) Z/2']
    """
    res = []
    for n in range(2, max_order + 1):
        per_prime = []
        for p, e in sorted(sympy.factorint(n).items()):
            choices = []
            for part in partitions(e):
                exps = sorted(itertools.chain.from_iterable([a] * mult for a, mult in part.items()))
                choices.append([p ** a for a in exps])
            choices.sort(key=len)
            per_prime.append(choices)
        for combo in itertools.product(*per_prime):
            res.append(FiniteGroupSpec(tuple(itertools.chain.from_iterable(combo))))
    return res

def _check_spec(args):
    spec, k_max, m_max, bound = args
    return cross_check(ExplicitGroup(spec, bound), k_max, m_max)

def cross_check_all(max_order, k_max, m_max, workers=1, bound=None):
    """Runs `cross_check` on every group up to `max_order`; returns (groups checked, mismatches)."""
    bound = oracle_bound() if bound is None else bound
    if max_order > bound:
        raise OracleBoundError('maximal order %d exceeds the oracle bound %d' % (max_order, bound))
    specs = enumerate_groups(max_order)
    jobs = [(spec, k_max, m_max, bound) for spec in specs]
    logger.info('cross-checking %d groups up to order %d on a %dx%d grid', len(specs), max_order, k_max + 1, m_max + 1)
    if workers == 1:
        results = map(_check_spec, jobs)
    else:
        logger.debug('splitting %d groups across %d workers', len(specs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_spec, jobs, chunksize=8))
    mismatches = [mm for res in results for mm in res]
    return len(specs), mismatches
