import io
import unittest
import numpy as np
from hypothesis import given, settings, strategies as st

from ..directed import (SetFamily, ContainmentForest, ConvexOrder, convex_order, count_components,
    is_directed, violates_trichotomy, concat_partition_order, exhaustive_minimum, random_directed_family,
    read_family, write_family, dense_codense_demo, FamilyError, NotDirectedError, PartitionError)

@st.composite
def laminar_families(draw, max_points=8):
    """Directed families from recursive interval splits of a shuffled line."""
    n = draw(st.integers(1, max_points))
    line = draw(st.permutations(range(1, n + 1)))
    members = []
    stack = [(0, n)]
    while stack:
        lo, hi = stack.pop()
        if draw(st.booleans()):
            members.append(line[lo:hi])
        if hi - lo > 1:
            cut = draw(st.integers(lo + 1, hi - 1))
            stack.extend([(lo, cut), (cut, hi)])
    return SetFamily(range(1, n + 1), members)

class TestFamily(unittest.TestCase):
    def test_dedupe(self):
        f = SetFamily(range(1, 4), [{1, 2}, [2, 1], {3}])
        self.assertEqual(len(f), 2)

    def test_invalid_members(self):
        self.assertRaises(FamilyError, SetFamily, range(1, 4), [set()])
        self.assertRaises(FamilyError, SetFamily, range(1, 4), [{4}])

    def test_trichotomy(self):
        self.assertTrue(violates_trichotomy(frozenset({1, 2}), frozenset({2, 3})))
        self.assertFalse(violates_trichotomy(frozenset({1, 2}), frozenset({1, 2, 3})))
        self.assertFalse(violates_trichotomy(frozenset({1}), frozenset({2})))

    def test_forest(self):
        f = SetFamily(range(1, 7), [{1, 2, 3, 4}, {1, 2}, {5, 6}, {2}])
        forest = ContainmentForest(f)
        self.assertEqual(forest.parent, [None, 0, None, 1])
        self.assertEqual(forest.roots, [0, 2])
        self.assertEqual(forest.children[0], [1])

    def test_not_directed(self):
        f = SetFamily(range(1, 5), [{1, 2, 3}, {3, 4}])
        with self.assertRaises(NotDirectedError) as cm:
            ContainmentForest(f)
        a, b = cm.exception.pair
        self.assertTrue(violates_trichotomy(a, b))
        ok, pair = is_directed(f)
        self.assertFalse(ok)
        self.assertEqual(set(pair), {frozenset({1, 2, 3}), frozenset({3, 4})})

class TestConvexOrder(unittest.TestCase):
    def test_nested(self):
        f = SetFamily(range(1, 9), [{1, 5}, {1, 5, 8}, {2, 7}, {3}, {2, 3, 7}])
        order = convex_order(f)
        self.assertEqual(sorted(order.points), list(range(1, 9)))
        for m in f.members:
            self.assertEqual(count_components(order, m), 1)

    def test_free_points_last(self):
        order = convex_order(SetFamily(range(1, 6), [{2, 4}]))
        self.assertEqual(order.points[:2], (2, 4))
        self.assertEqual(set(order.points[2:]), {1, 3, 5})

    def test_empty_family(self):
        self.assertEqual(convex_order(SetFamily(range(1, 4), [])).points, (1, 2, 3))

    def test_not_directed(self):
        self.assertRaises(NotDirectedError, convex_order, SetFamily(range(1, 4), [{1, 2}, {2, 3}]))

    def test_duplicate_points(self):
        self.assertRaises(FamilyError, ConvexOrder, [1, 2, 1])

    @given(laminar_families())
    def test_members_are_intervals(self, f):
        order = convex_order(f)
        self.assertEqual(len(order), len(f.universe))
        for m in f.members:
            self.assertEqual(count_components(order, m), 1)

    @settings(max_examples=25, deadline=None)
    @given(laminar_families(max_points=6))
    def test_exhaustive_agrees(self, f):
        self.assertEqual(exhaustive_minimum(f).best, 1 if f.members else 0)

    def test_random_large(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            f = random_directed_family(rng, 2000, 4000)
            self.assertTrue(is_directed(f)[0])
            order = convex_order(f)
            self.assertTrue(all(count_components(order, m) == 1 for m in f.members))

    def test_random_many(self):
        rng = np.random.default_rng(12)
        for i in range(1000):
            n = int(rng.integers(1, 400))
            f = random_directed_family(rng, n, 2 * n)
            with self.subTest(i=i, points=n):
                self.assertTrue(is_directed(f)[0])
                order = convex_order(f)
                self.assertTrue(all(count_components(order, m) == 1 for m in f.members))

class TestExhaustive(unittest.TestCase):
    def test_triangle(self):
        res = exhaustive_minimum(SetFamily({1, 2, 3}, [{1, 2}, {2, 3}, {1, 3}]))
        self.assertEqual(res.best, 2)

    def test_workers(self):
        f = SetFamily(range(1, 7), [{1, 2}, {3, 4}, {1, 2, 3, 4}, {5}])
        self.assertEqual(exhaustive_minimum(f, workers=2).best, 1)

    def test_too_large(self):
        self.assertRaises(FamilyError, exhaustive_minimum, SetFamily(range(1, 10), [{1}]))

class TestPartition(unittest.TestCase):
    def test_overlap(self):
        with self.assertRaises(PartitionError):
            concat_partition_order([({1, 2}, ConvexOrder([1, 2])), ({2}, ConvexOrder([2]))])

    def test_missing(self):
        with self.assertRaises(PartitionError):
            concat_partition_order([({1}, ConvexOrder([1]))], universe={1, 2})

    def test_mismatched_order(self):
        with self.assertRaises(PartitionError):
            concat_partition_order([({1, 2}, ConvexOrder([1]))])

    def test_demo(self):
        counts = dense_codense_demo(40)
        self.assertEqual(counts['D(x) & x < y'], 1)
        self.assertEqual(counts['~D(x) & x < y'], 1)
        self.assertEqual(counts['x < y'], 2)

class TestFileFormat(unittest.TestCase):
    def test_read(self):
        f = read_family(io.StringIO('# nested\n5\n1 2\n\n1 2 3\n4\n'))
        self.assertEqual(f.universe, (1, 2, 3, 4, 5))
        self.assertEqual(f.members, (frozenset({1, 2}), frozenset({1, 2, 3}), frozenset({4})))

    def test_write(self):
        out = io.StringIO()
        write_family(SetFamily(range(1, 4), [{3, 1}, {2}]), out)
        self.assertEqual(out.getvalue(), '3\n1 3\n2\n')

    def test_errors(self):
        self.assertRaises(FamilyError, read_family, ['x'])
        self.assertRaises(FamilyError, read_family, ['1 2'])
        self.assertRaises(FamilyError, read_family, ['# only a comment'])
        with self.assertRaises(FamilyError) as cm:
            read_family(['3', '1 4'], 'f.txt')
        self.assertIn('f.txt', str(cm.exception))

if __name__ == '__main__':
    unittest.main()
