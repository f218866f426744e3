import unittest
import numpy as np
from hypothesis import given, strategies as st

from ..directed import ConvexOrder, convex_order, count_components, is_directed
from ..ordered import IntegersModel, DivisibilityProfile
from ..valued import (TruncatedSeries, Beyond, vdist, xb_member, gamma_seq, build_adversary, greedy_refute,
    exhaustive_greedy, random_greedy, valuation_order, ball_family, InterpretationSpec, induced_order,
    induced_relation, transfer_check, value_group_interpretation, quasi_verdict, convex_verdict,
    PrecisionError, ParameterError, InducedOrderError, NOT_QUASI_VC_MINIMAL, NOT_CONVEXLY_ORDERABLE, INCONCLUSIVE)

def _num(v):
    return v.bound if isinstance(v, Beyond) else v

series8 = st.lists(st.integers(0, 1), min_size=8, max_size=8).map(lambda c: TruncatedSeries(2, c))

class TestSeries(unittest.TestCase):
    def test_vdist(self):
        self.assertEqual(vdist(TruncatedSeries(2, [1, 1, 0, 0, 0, 0, 0, 0]), TruncatedSeries(2, [1] + [0] * 7)), 1)
        self.assertEqual(vdist(TruncatedSeries(3, [0, 0, 2]), TruncatedSeries(3, [0, 0, 1])), 2)
        self.assertEqual(vdist(TruncatedSeries(2, [1, 0]), TruncatedSeries(2, [1, 0])), Beyond(2))

    def test_mismatch(self):
        self.assertRaises(ParameterError, vdist, TruncatedSeries(2, [1, 0]), TruncatedSeries(3, [1, 0]))
        self.assertRaises(ParameterError, vdist, TruncatedSeries(2, [1, 0]), TruncatedSeries(2, [1, 0, 0]))

    def test_monomial_precision(self):
        self.assertRaises(PrecisionError, TruncatedSeries.monomial, 2, 3, 3)

    def test_str(self):
        self.assertEqual(str(TruncatedSeries(3, [2, 0, 1, 1])), '2 + t^2 + t^3')

    @given(series8, series8, series8)
    def test_ultrametric(self, a, b, c):
        self.assertEqual(vdist(a, b), vdist(b, a))
        self.assertGreaterEqual(_num(vdist(a, c)), min(_num(vdist(a, b)), _num(vdist(b, c))))

    def test_xb_member(self):
        zero = TruncatedSeries.zero(2, 4)
        self.assertTrue(xb_member(TruncatedSeries(2, [0, 0, 1, 0]), zero, 2))
        self.assertFalse(xb_member(TruncatedSeries(2, [0, 1, 0, 0]), zero, 2))
        self.assertTrue(xb_member(zero, zero, 2))
        self.assertTrue(xb_member(TruncatedSeries(3, [0, 0, 0, 1]), TruncatedSeries.zero(3, 4), 3))

class TestGamma(unittest.TestCase):
    def test_values(self):
        self.assertEqual(gamma_seq(2, 1, 6).values, (0, 1, 2, 3, 4, 5, 6))
        self.assertEqual(gamma_seq(3, 1, 5).values, (0, 1, 3, 4, 6, 7))
        self.assertEqual(gamma_seq(5, 2, 3).values, (0, 2, 10, 12))

    @given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 40))
    def test_parity(self, p, gamma1):
        if gamma1 % p == 0:
            self.assertRaises(ParameterError, gamma_seq, p, gamma1, 4)
            return
        g = gamma_seq(p, gamma1, 64)
        for n in range(65):
            self.assertEqual(g[n] % p == 0, n % 2 == 0)
        self.assertTrue(all(a < b for a, b in zip(g.values, g.values[1:])))

    def test_invalid(self):
        self.assertRaises(ParameterError, gamma_seq, 2, 2, 3)
        self.assertRaises(ParameterError, gamma_seq, 4, 1, 3)
        self.assertRaises(ParameterError, gamma_seq, 3, 0, 3)

class TestAdversary(unittest.TestCase):
    def test_levels(self):
        inst = build_adversary(2, 1, 2)
        self.assertEqual([str(a) for a in inst.level(2)], ['0', '1', 't', '1 + t'])
        self.assertEqual([str(a) for a in build_adversary(2, 1, 0).points], ['0'])

    def test_invariants(self):
        for p in (2, 3, 5):
            for n in range(1, 13):
                inst = build_adversary(p, 1, n)
                t = inst.table
                self.assertEqual(len(set(inst.points)), 2 ** n)
                self.assertEqual(int(t[~np.eye(len(t), dtype=bool)].max()), inst.gamma[n - 1])
                for i in range(n):
                    self.assertTrue((t == inst.gamma[i]).any(axis=1).all())

    def test_precision(self):
        self.assertRaises(PrecisionError, build_adversary, 2, 1, 3, 3)
        self.assertEqual(build_adversary(2, 1, 3, 10).precision, 10)

class TestGreedy(unittest.TestCase):
    def test_canonical_order(self):
        inst = build_adversary(2, 1, 3)
        rec = greedy_refute(inst, valuation_order(inst.points))
        self.assertEqual([str(inst.points[i]) for i in rec.chain], ['1', 't', 't^2', '0'])
        self.assertEqual(rec.b, 0)
        self.assertEqual((rec.lower_bound, rec.components), (2, 2))

    def test_alternation(self):
        inst = build_adversary(3, 1, 5)
        rng = np.random.default_rng(5)
        for _ in range(50):
            rec = greedy_refute(inst, rng.permutation(len(inst.points)))
            b = inst.points[rec.b]
            for i, a in enumerate(rec.chain[:-1]):
                self.assertEqual(xb_member(inst.points[a], b, 3), i % 2 == 0)
            self.assertGreaterEqual(rec.components, 3)

    def test_bad_input(self):
        self.assertRaises(ParameterError, greedy_refute, build_adversary(2, 1, 2), range(4))
        self.assertRaises(ParameterError, greedy_refute, build_adversary(2, 1, 3), [0, 1, 2])

    def test_every_order_of_a3(self):
        summary = exhaustive_greedy(2, 1, 1)
        self.assertEqual(summary.orders, 40320)
        self.assertTrue(summary.ok, summary.failures[:3])
        self.assertGreaterEqual(summary.min_components, 2)

    def test_random_orders_of_a5(self):
        summary = random_greedy(2, 1, 2, 10 ** 4, np.random.default_rng(0))
        self.assertEqual(summary.orders, 10 ** 4)
        self.assertTrue(summary.ok, summary.failures[:3])
        self.assertGreaterEqual(summary.min_components, 3)

    def test_other_primes(self):
        summary = random_greedy(3, 1, 1, 1000, np.random.default_rng(1))
        self.assertTrue(summary.ok)
        self.assertGreaterEqual(summary.min_components, 2)
        self.assertTrue(random_greedy(2, 3, 3, 200, np.random.default_rng(2)).ok)

class TestInterpretation(unittest.TestCase):
    def test_value_group(self):
        spec, base, induced = value_group_interpretation(3, 3)
        self.assertEqual(len(spec.domain), 80)
        self.assertEqual([next(iter(c)).valuation() for c in induced.points], [0, 1, 2, 3])
        classes = induced.points
        for i, c1 in enumerate(classes):
            for c2 in classes[i + 1:]:
                self.assertTrue(induced_relation(base, c1, c2))
                self.assertFalse(induced_relation(base, c2, c1))

    def test_transfer(self):
        spec, base, induced = value_group_interpretation()
        rng = np.random.default_rng(9)
        classes = list(induced.points)
        for _ in range(1000):
            marked = [c for c in classes if rng.random() < 0.5]
            check = transfer_check(base, induced, marked)
            self.assertTrue(check, check)

    def test_singletons(self):
        base = ConvexOrder([3, 1, 4, 0, 2])
        spec = InterpretationSpec(range(5), [{x} for x in range(5)])
        self.assertEqual(induced_order(spec, base).points, tuple(frozenset({x}) for x in base.points))

    def test_interleaved_classes(self):
        spec = InterpretationSpec(range(4), [{0, 2}, {1, 3}])
        with self.assertRaises(InducedOrderError) as cm:
            induced_order(spec, ConvexOrder(range(4)))
        self.assertEqual(cm.exception.sequence, (2, 1, 0))
        self.assertEqual(len(induced_order(spec, ConvexOrder(range(4)), max_pieces=2)), 2)

    def test_not_an_equivalence(self):
        self.assertRaises(InducedOrderError, InterpretationSpec.from_relation, range(3), lambda x, y: abs(x - y) <= 1)
        self.assertRaises(InducedOrderError, InterpretationSpec, range(3), [{0, 1}, {1, 2}])

    def test_balls(self):
        inst = build_adversary(2, 1, 4)
        f = ball_family(inst.points)
        self.assertTrue(is_directed(f)[0])
        order = convex_order(f)
        self.assertTrue(all(count_components(order, m) == 1 for m in f.members))

class TestVerdicts(unittest.TestCase):
    def test_quasi(self):
        z = IntegersModel().profile()
        for label in ('Q_p', 'k((t))'):
            v = quasi_verdict(z, label)
            self.assertEqual((v.status, v.prime), (NOT_QUASI_VC_MINIMAL, 2))
        self.assertEqual(quasi_verdict(DivisibilityProfile(default=True), 'ACVF').status, INCONCLUSIVE)

    def test_convex(self):
        self.assertEqual(convex_verdict(IntegersModel().profile(), 'Q_p').status, NOT_CONVEXLY_ORDERABLE)
        self.assertEqual(convex_verdict(DivisibilityProfile({3: False}, True), 'K').prime, 3)
        self.assertEqual(convex_verdict(DivisibilityProfile(default=True), 'K').status, INCONCLUSIVE)

if __name__ == '__main__':
    unittest.main()
