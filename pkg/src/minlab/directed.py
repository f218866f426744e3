"""Directed set families and the convex orders they admit.

A family is directed when any two members are nested or disjoint.
Every directed family has a linear order in which each member is an
interval: walk the containment forest depth first.

>>> f = SetFamily(range(1, 6), [{1, 2}, {3, 4}, {1, 2, 3, 4}])
>>> o = convex_order(f)
>>> o.points
(1, 2, 3, 4, 5)
>>> [count_components(o, m) for m in f.members]
[1, 1, 1]
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import logging
import numpy as np

logger = logging.getLogger(__name__)

class FamilyError(ValueError):
    """Raised on a malformed set family."""

class NotDirectedError(FamilyError):
    def __init__(self, pair):
        a, b = pair
        super().__init__('members %s and %s overlap without nesting' % (_fmt(a), _fmt(b)))
        self.pair = pair

class PartitionError(FamilyError):
    """Raised when the parts of a concatenation do not partition the points."""

def _fmt(s):
    return '{%s}' % ','.join(map(str, sorted(s)))

class SetFamily:
    """Nonempty subsets of a finite universe; duplicate members are dropped."""

    def __init__(self, universe, members):
        self.universe = tuple(sorted(set(universe)))
        points = set(self.universe)
        seen = set()
        res = []
        for m in members:
            m = frozenset(m)
            if not m:
                raise FamilyError('members must be nonempty')
            if not m <= points:
                raise FamilyError('member %s leaves the universe' % _fmt(m))
            if m not in seen:
                seen.add(m)
                res.append(m)
        self.members = tuple(res)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return 'SetFamily(%d points, %d members)' % (len(self.universe), len(self.members))

class ContainmentForest:
    """Members under strict containment; `parent[i]` is the index of the
    smallest member strictly containing member i, or None."""

    def __init__(self, family):
        self.family = family
        members = family.members
        order = sorted(range(len(members)), key=lambda i: -len(members[i]))
        owner = {}
        self.parent = [None] * len(members)
        for i in order:
            m = members[i]
            owners = {owner.get(x) for x in m}
            if len(owners) > 1:
                raise NotDirectedError(_violating_pair(members, m, owners))
            self.parent[i] = owners.pop()
            for x in m:
                owner[x] = i

        self.children = [[] for _ in members]
        self.roots = []
        for i, p in enumerate(self.parent):
            (self.roots if p is None else self.children[p]).append(i)
        key = lambda i: min(members[i])
        self.roots.sort(key=key)
        for ch in self.children:
            ch.sort(key=key)
        logger.debug('containment forest: %d members, %d roots', len(members), len(self.roots))

def _violating_pair(members, m, owners):
    # some owner overlaps m without containing it, or a point of m has no owner
    for o in owners:
        if o is not None and not m <= members[o]:
            return members[o], m
    raise AssertionError('no violating pair among the owners of %s' % _fmt(m))

def is_directed(family):
    """Returns (True, None) or (False, violating pair).

    >>> is_directed(SetFamily({1, 2, 3}, [{1, 2}, {2, 3}]))
    (False, (frozenset({1, 2}), frozenset({2, 3})))
    """
    try:
        ContainmentForest(family)
    except NotDirectedError as e:
        return False, e.pair
    return True, None

def violates_trichotomy(a, b):
    return bool(a & b) and not a <= b and not b <= a

class ConvexOrder:
    """A linear order on a finite set of points, listed from the bottom."""

    def __init__(self, points):
        self.points = tuple(points)
        self._rank = {x: i for i, x in enumerate(self.points)}
        if len(self._rank) != len(self.points):
            raise FamilyError('an order lists every point once')

    def rank(self, x):
        return self._rank[x]

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, ConvexOrder) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return 'ConvexOrder(%r)' % (self.points,)

def convex_order(family):
    """Orders the universe so that every member is an interval.

    Inside a member, child subtrees and points in no child are visited in
    the order of their smallest point; points in no member come last.
    """
    forest = ContainmentForest(family)
    members = family.members
    inside = set()
    res = []

    def items(i):
        covered = set().union(*(members[c] for c in forest.children[i]))
        loose = [(x, None) for x in members[i] if x not in covered]
        subtrees = [(min(members[c]), c) for c in forest.children[i]]
        return sorted(loose + subtrees, key=lambda item: item[0])

    stack = [iter([(min(members[r]), r) for r in forest.roots])]
    while stack:
        item = next(stack[-1], None)
        if item is None:
            stack.pop()
            continue
        x, node = item
        if node is None:
            res.append(x)
        else:
            inside |= members[node]
            stack.append(iter(items(node)))

    res.extend(x for x in family.universe if x not in inside)
    return ConvexOrder(res)

def count_components(order, subset):
    """The number of maximal runs of `subset` along `order`.

    >>> count_components(ConvexOrder(range(1, 7)), {1, 3, 5})
    3
    >>> count_components(ConvexOrder(range(1, 7)), set())
    0
    """
    if not subset:
        return 0
    ranks = np.sort(np.fromiter((order.rank(x) for x in subset), dtype=np.int64))
    return 1 + int(np.count_nonzero(np.diff(ranks) > 1))

def concat_partition_order(parts, universe=None):
    """Places the parts one after the other, keeping each part's order.

    >>> concat_partition_order([({1, 2}, ConvexOrder([2, 1])), ({3}, ConvexOrder([3]))]).points
    (2, 1, 3)
    """
    seen = set()
    res = []
    for subset, order in parts:
        subset = set(subset)
        if set(order.points) != subset:
            raise PartitionError('an order must list exactly the points of its part')
        if seen & subset:
            raise PartitionError('parts overlap in %s' % _fmt(seen & subset))
        seen |= subset
        res.extend(order.points)
    if universe is not None and seen != set(universe):
        raise PartitionError('parts miss %s' % _fmt(set(universe) - seen))
    return ConvexOrder(res)

@dataclass(frozen=True)
class SearchResult:
    best: int
    order: tuple

def _search_prefix(args):
    universe, masks, first = args
    rest = [x for x in range(len(universe)) if x != first]
    perms = np.array([(first,) + p for p in itertools.permutations(rest)], dtype=np.int64)
    worst = np.zeros(len(perms), dtype=np.int64)
    for mask in masks:
        inm = mask[perms]
        starts = inm.copy()
        starts[:, 1:] &= ~inm[:, :-1]
        worst = np.maximum(worst, starts.sum(axis=1))
    i = int(np.argmin(worst))
    return int(worst[i]), tuple(universe[j] for j in perms[i])

def exhaustive_minimum(family, workers=1):
    """The least, over all orders, of the largest component count of a member.

    Runs through all |X|! orders, split by first point across workers.

    >>> exhaustive_minimum(SetFamily({1, 2, 3}, [{1, 2}, {2, 3}, {1, 3}])).best
    2
    """
    n = len(family.universe)
    if n > 8:
        raise FamilyError('the exhaustive search handles at most 8 points, got %d' % n)
    if not family.members:
        return SearchResult(0, family.universe)
    index = {x: i for i, x in enumerate(family.universe)}
    masks = []
    for m in family.members:
        mask = np.zeros(n, dtype=bool)
        mask[[index[x] for x in m]] = True
        masks.append(mask)
    jobs = [(family.universe, masks, first) for first in range(n)]
    if workers == 1:
        results = list(map(_search_prefix, jobs))
    else:
        logger.debug('probing %d prefixes on %d workers', n, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_prefix, jobs))
    best, order = min(results, key=lambda r: r[0])
    return SearchResult(best, order)

def random_directed_family(rng, n_points, max_members):
    """A random directed family on 1..n_points built by nested splitting
    of a shuffled line of points."""
    labels = [int(x) + 1 for x in rng.permutation(n_points)]
    members = []
    stack = [(0, n_points)]
    while stack and len(members) < max_members:
        lo, hi = stack.pop()
        members.append(labels[lo:hi])
        if hi - lo < 2:
            continue
        cuts = sorted(int(c) for c in rng.choice(np.arange(lo + 1, hi), size=min(hi - lo - 1, int(rng.integers(1, 4))), replace=False))
        bounds = [lo] + cuts + [hi]
        for a, b in zip(bounds, bounds[1:]):
            if rng.random() < 0.8:
                stack.append((a, b))
    return SetFamily(range(1, n_points + 1), members)

def read_family(lines, filename='<family>'):
    """Reads the line format: the universe size, then one member per line.

    Points are 1..size; blank lines and lines starting with '#' are skipped.

    >>> read_family(['4', '1 2', '# note', '3 4', '1 2 3 4']).members
    (frozenset({1, 2}), frozenset({3, 4}), frozenset({1, 2, 3, 4}))
    """
    size = None
    members = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise FamilyError('%s(%d): expected integers, got %r' % (filename, lineno, line))
        if size is None:
            if len(values) != 1 or values[0] < 0:
                raise FamilyError('%s(%d): expected the universe size' % (filename, lineno))
            size = values[0]
        else:
            members.append(values)
    if size is None:
        raise FamilyError('%s: empty family file' % filename)
    try:
        return SetFamily(range(1, size + 1), members)
    except FamilyError as e:
        raise FamilyError('%s: %s' % (filename, e))

def write_family(family, fout):
    fout.write('%d\n' % len(family.universe))
    for m in family.members:
        fout.write(' '.join(map(str, sorted(m))) + '\n')

def dense_codense_demo(n=20):
    """Component counts on an n-point sample of (Q; <=, D), D dense and codense.

    The sample is 0..n-1 with D the even points; the order puts D first,
    each part in its natural order. Returns the largest component count
    over all parameters y for each formula.

    >>> dense_codense_demo()
    {'D(x) & x < y': 1, '~D(x) & x < y': 1, 'D(x)': 1, 'x = y': 1, 'x < y': 2}
    """
    sample = list(range(n))
    dense = [x for x in sample if x % 2 == 0]
    codense = [x for x in sample if x % 2 == 1]
    order = concat_partition_order([(dense, ConvexOrder(dense)), (codense, ConvexOrder(codense))], sample)
    formulas = {
        'D(x) & x < y': lambda x, y: x % 2 == 0 and x < y,
        '~D(x) & x < y': lambda x, y: x % 2 == 1 and x < y,
        'D(x)': lambda x, y: x % 2 == 0,
        'x = y': lambda x, y: x == y,
        'x < y': lambda x, y: x < y,
        }
    return {name: max(count_components(order, {x for x in sample if phi(x, y)}) for y in sample)
        for name, phi in formulas.items()}
