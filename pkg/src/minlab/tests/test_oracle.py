import unittest
import numpy as np
from hypothesis import given, settings, strategies as st

from ..config import oracle_bound, ConfigError, RunConfig
from ..oracle import (ExplicitGroup, brute_phi, cosets, definable_enum, symbolic_mask, cross_check,
    cross_check_all, enumerate_groups, OracleBoundError, SubsetMask)
from ..szmielew import FiniteGroupSpec

prime_powers = st.sampled_from([2, 3, 4, 5, 7, 8, 9, 16, 25, 27])

@st.composite
def small_specs(draw):
    orders = draw(st.lists(prime_powers, min_size=1, max_size=3))
    spec = FiniteGroupSpec(tuple(orders))
    if spec.order > 128:
        spec = FiniteGroupSpec(tuple(orders[:1]))
    return spec

class TestExplicitGroup(unittest.TestCase):
    def test_elements(self):
        g = ExplicitGroup(FiniteGroupSpec((2, 3)))
        self.assertEqual(g.order, 6)
        self.assertEqual(g.elements.tolist(), [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2]])
        self.assertEqual(int(g.encode([[1, 2]])[0]), 5)

    def test_axioms(self):
        rng = np.random.default_rng(0)
        for spec in enumerate_groups(24):
            self.assertTrue(ExplicitGroup(spec).check_axioms(rng), str(spec))

    def test_bound(self):
        self.assertRaises(OracleBoundError, ExplicitGroup, FiniteGroupSpec((512,)), 256)
        self.assertEqual(ExplicitGroup(FiniteGroupSpec((512,)), 4096).order, 512)

class TestBrutePhi(unittest.TestCase):
    def test_z4(self):
        g = ExplicitGroup(FiniteGroupSpec((4,)))
        self.assertEqual(brute_phi(g, 2, 1).to_tuples(g), [(0,), (2,)])
        self.assertEqual(brute_phi(g, 0, 2).to_tuples(g), [(0,), (2,)])
        self.assertEqual(brute_phi(g, 0, 1).to_tuples(g), [(0,)])
        self.assertEqual(brute_phi(g, 3, 1), g.full())

    def test_z2_z4(self):
        g = ExplicitGroup(FiniteGroupSpec((2, 4)))
        self.assertEqual(brute_phi(g, 2, 1).to_tuples(g), [(0, 0), (0, 2)])
        self.assertEqual(brute_phi(g, 4, 2).count, 4)
        self.assertEqual(brute_phi(g, 0, 4), g.full())

    def test_subgroups_and_cosets(self):
        g = ExplicitGroup(FiniteGroupSpec((2, 4)))
        for k in range(5):
            for m in range(5):
                h = brute_phi(g, k, m)
                self.assertTrue(g.is_subgroup(h))
                self.assertEqual(len(cosets(g, h)) * h.count, g.order)

    def test_not_subgroup(self):
        g = ExplicitGroup(FiniteGroupSpec((4,)))
        self.assertFalse(g.is_subgroup(g.mask([0, 1])))
        self.assertFalse(g.is_subgroup(g.mask([1, 3])))

    def test_definable_sets(self):
        g = ExplicitGroup(FiniteGroupSpec((2, 2)))
        sets = definable_enum(g, [(0, 2), (2, 1)], 2)
        self.assertIn(g.full(), sets)
        self.assertIn(SubsetMask(np.zeros(4, dtype=bool)), sets)
        self.assertEqual(len(set(sets)), len(sets))

class TestDifferential(unittest.TestCase):
    def test_small_orders(self):
        groups, mismatches = cross_check_all(32, 8, 8)
        self.assertEqual(groups, 54)
        self.assertEqual(mismatches, [])

    def test_enumeration(self):
        self.assertEqual(len(enumerate_groups(16)), 24)
        self.assertEqual(sorted(str(s) for s in enumerate_groups(16) if s.order == 16),
            ['Z/16', 'Z/2 (+) Z/2 (+) Z/2 (+) Z/2', 'Z/2 (+) Z/2 (+) Z/4', 'Z/2 (+) Z/8', 'Z/4 (+) Z/4'])

    def test_mixed_factors(self):
        g = ExplicitGroup(FiniteGroupSpec((12, 18)))
        self.assertEqual(cross_check(g, 12, 12), [])

    @settings(max_examples=40, deadline=None)
    @given(small_specs(), st.integers(0, 30), st.integers(0, 30))
    def test_symbolic_matches_brute(self, spec, k, m):
        g = ExplicitGroup(spec)
        self.assertEqual(symbolic_mask(g, k, m), brute_phi(g, k, m))

    def test_bound(self):
        self.assertRaises(OracleBoundError, cross_check_all, 300, 2, 2, 1, 256)

    def test_workers(self):
        self.assertEqual(cross_check_all(16, 4, 4, workers=2), (24, []))

class TestConfig(unittest.TestCase):
    def test_bound_variable(self):
        self.assertEqual(oracle_bound({'MINLAB_ORACLE_BOUND': '1024'}), 1024)
        self.assertRaises(ConfigError, oracle_bound, {'MINLAB_ORACLE_BOUND': 'big'})
        self.assertRaises(ConfigError, oracle_bound, {'MINLAB_ORACLE_BOUND': '0'})

    def test_run_config(self):
        self.assertRaises(ConfigError, RunConfig, format='xml')
        self.assertRaises(ConfigError, RunConfig, precision=0)
        self.assertEqual(RunConfig(seed=5).as_dict()['seed'], 5)

if __name__ == '__main__':
    unittest.main()
