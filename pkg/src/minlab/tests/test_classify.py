import math
import unittest
import numpy as np

from ..classify import (dp_min_structural, vc_min_structural, dp_min_lattice, upwardly_coherent,
    witness_chain, verify_chain, cover_cell, factorial_depth, witness_failure, verify_failure, vc_min, summand_transfer_check,
    classify_corpus, random_descriptor, smallest_prime_not_in, GOLDEN_CORPUS, ChainWitness,
    FailureWitness, NonDpWitness, PreconditionError)
from ..config import RunConfig
from ..ppcalc import PPSubgroup, multiple_subgroup, is_subset, index
from ..szmielew import parse_descriptor, direct_sum, DescriptorError

class TestGoldenCorpus(unittest.TestCase):
    def test_verdicts(self):
        for entry in GOLDEN_CORPUS:
            with self.subTest(entry.name):
                v = vc_min(parse_descriptor(entry.text))
                self.assertTrue(v.route_agreement, v.routes)
                self.assertEqual((v.dp_minimal, v.vc_minimal), (entry.dp_minimal, entry.vc_minimal))
                self.assertEqual(v.convexly_orderable, v.vc_minimal)

    def test_evidence(self):
        for entry in GOLDEN_CORPUS:
            with self.subTest(entry.name):
                v = vc_min(parse_descriptor(entry.text))
                if not entry.dp_minimal:
                    self.assertIsInstance(v.evidence, NonDpWitness)
                elif entry.vc_minimal:
                    self.assertIsInstance(v.evidence, ChainWitness)
                    self.assertTrue(v.check.ok, v.check.message)
                else:
                    self.assertIsInstance(v.evidence, FailureWitness)
                    self.assertTrue(v.check.ok, v.check.message)
                    self.assertIsNotNone(v.failing_class)

class TestStructural(unittest.TestCase):
    def test_bounded_exponent(self):
        self.assertTrue(dp_min_structural(parse_descriptor('C(2,3)^w (+) C(2,4)^w (+) C(3,1)^5')))
        self.assertFalse(dp_min_structural(parse_descriptor('C(2,3)^w (+) Q')))
        self.assertFalse(dp_min_structural(parse_descriptor('C(2,3)^w (+) Zp8(2)')))

    def test_singular_primes(self):
        self.assertTrue(dp_min_structural(parse_descriptor('Zp8(2)^w (+) Zloc(3)^w (+) Q^w')))
        self.assertFalse(dp_min_structural(parse_descriptor('Zloc(2)^w (+) Zloc(3)^w')))
        self.assertFalse(dp_min_structural(parse_descriptor('cofinal(2) (+) cofinal(3)')))
        self.assertFalse(dp_min_structural(parse_descriptor('cofinal(2) (+) Zloc(3)^w')))

    def test_vc(self):
        self.assertTrue(vc_min_structural(parse_descriptor('Zloc(3)^w (+) Zp8(3)^2 (+) Q')))
        self.assertFalse(vc_min_structural(parse_descriptor('Zloc(3)^w (+) Zloc(2)')))
        self.assertTrue(vc_min_structural(parse_descriptor('Zloc(3)^w (+) tailZp8')))

    def test_smallest_prime(self):
        self.assertEqual(smallest_prime_not_in(()), 2)
        self.assertEqual(smallest_prime_not_in((2, 3, 7)), 5)

class TestRoutes(unittest.TestCase):
    def test_random_descriptors(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            d = random_descriptor(rng)
            with self.subTest(str(d)):
                dp_l, _ = dp_min_lattice(d)
                coherent, _ = upwardly_coherent(d)
                self.assertEqual(dp_min_structural(d), dp_l)
                self.assertEqual(vc_min_structural(d), dp_l and coherent)

    def test_random_descriptor_is_seeded(self):
        a = [random_descriptor(np.random.default_rng(7)) for _ in range(3)]
        self.assertEqual(len(set(a)), 1)

    def test_non_dp_witness(self):
        ok, w = dp_min_lattice(parse_descriptor('Zp8(2)^w (+) Zp8(3)^w'))
        self.assertFalse(ok)
        self.assertIsNotNone(w)

class TestChain(unittest.TestCase):
    def test_endpoints(self):
        d = parse_descriptor('C(2,1)^w (+) C(2,2)^w')
        w = witness_chain(d)
        self.assertEqual(w.chain[0], PPSubgroup.zero(d))
        self.assertEqual(w.chain[-1], PPSubgroup.full(d))
        self.assertEqual(w.coverage_bound, (20, 20))
        self.assertTrue(verify_chain(d, w))

    def test_strictly_increasing(self):
        d = parse_descriptor('Z (+) C(3,1)')
        chain = witness_chain(d, bounds=(8, 8)).chain
        for h1, h2 in zip(chain, chain[1:]):
            self.assertTrue(is_subset(h1, h2))
            self.assertNotEqual(h1, h2)

    def test_dropping_deepest_element(self):
        d = parse_descriptor('Z')
        w = witness_chain(d)
        cut = ChainWitness(w.chain[:1] + w.chain[2:], w.coverage_bound, w.depth)
        res = verify_chain(d, cut)
        self.assertFalse(res.ok)
        self.assertEqual(res.failing_cell, (19, 1))

    def test_factorial_chain(self):
        d = parse_descriptor('Z')
        w = witness_chain(d, 20, (6, 6))
        self.assertEqual(w.depth, 20)
        self.assertEqual(len(w.chain), 21)
        for n, h in zip(range(20, 1, -1), w.chain[1:]):
            self.assertEqual(h, multiple_subgroup(d, math.factorial(n)))
        self.assertEqual(w.chain[-1], PPSubgroup.full(d))

    def test_factorial_depth_is_raised(self):
        d = parse_descriptor('Z')
        w = witness_chain(d, 6, (20, 20))
        self.assertEqual(w.depth, factorial_depth(20))
        self.assertEqual(w.chain[1], multiple_subgroup(d, math.factorial(19)))
        self.assertTrue(verify_chain(d, w, 20, 20))

    def test_shallow_factorial_chain(self):
        d = parse_descriptor('Z')
        w = witness_chain(d, 6, (6, 6))
        res = verify_chain(d, w, 20, 20)
        self.assertFalse(res.ok)
        self.assertEqual(res.failing_cell, (7, 1))

    def test_dropping_six_factorial(self):
        d = parse_descriptor('Z')
        chain = witness_chain(d, 6, (6, 6)).chain
        self.assertEqual(chain[1], multiple_subgroup(d, 720))
        self.assertEqual(cover_cell(d, chain, 720, 1), chain[1])
        self.assertIsNone(cover_cell(d, chain[:1] + chain[2:], 720, 1))
        self.assertTrue(verify_chain(d, ChainWitness(chain[:1] + chain[2:], (6, 6), 6), 6, 6))

    def test_not_a_chain(self):
        d = parse_descriptor('Z')
        w = witness_chain(d, bounds=(6, 6))
        res = verify_chain(d, ChainWitness(tuple(reversed(w.chain)), w.coverage_bound, w.depth), 6, 6)
        self.assertEqual(res.failing_pair, (0, 1))

    def test_precondition(self):
        self.assertRaises(PreconditionError, witness_chain, parse_descriptor('cofinal(2)'))
        self.assertRaises(PreconditionError, witness_chain, parse_descriptor('C(2,1)^w (+) C(3,1)^w'))

class TestFailure(unittest.TestCase):
    def test_cofinal(self):
        d = parse_descriptor('cofinal(3)')
        w = witness_failure(d, depth=4)
        self.assertEqual(len(w.chain_a), 5)
        self.assertEqual(w.chain_a[2], multiple_subgroup(d, 9))
        self.assertTrue(verify_failure(w))

    def test_localized_partner(self):
        w = witness_failure(parse_descriptor('Zloc(3)^w (+) Zloc(2)'), depth=5)
        self.assertEqual(w.recipe, '2^i A against 3A')
        self.assertTrue(verify_failure(w))

    def test_integers_tail(self):
        d = parse_descriptor('Zloc(3)^w (+) Z')
        w = witness_failure(d, depth=4)
        self.assertEqual(w.chain_a[1], multiple_subgroup(d, 2))
        self.assertTrue(verify_failure(w))

    def test_conditions(self):
        w = witness_failure(parse_descriptor('cofinal(2)'), depth=6)
        for a in w.chain_a:
            self.assertFalse(index(a, w.b_group).is_finite)
            self.assertTrue(index(w.b_group, a).is_finite)

    def test_broken_witness(self):
        w = witness_failure(parse_descriptor('cofinal(2)'), depth=3)
        broken = FailureWitness(w.chain_a[:1] * 4, w.b_group, 3, w.recipe)
        self.assertFalse(verify_failure(broken))

    def test_precondition(self):
        self.assertRaises(PreconditionError, witness_failure, parse_descriptor('Z'))
        self.assertRaises(PreconditionError, witness_failure, parse_descriptor('C(2,1)^w (+) C(3,1)^w'))

class TestTransfer(unittest.TestCase):
    def test_finite_summand(self):
        self.assertTrue(summand_transfer_check(parse_descriptor('cofinal(2)'), parse_descriptor('C(2,5)')))
        self.assertTrue(summand_transfer_check(parse_descriptor('Zp8(5)^w'), parse_descriptor('C(3,1) (+) C(5,1)')))

    def test_random_pairs(self):
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(30):
            a, b = random_descriptor(rng), random_descriptor(rng)
            try:
                direct_sum(a, b)
            except DescriptorError:
                continue
            res = summand_transfer_check(a, b)
            self.assertTrue(res.ok, res.message)
            checked += 1
        self.assertGreater(checked, 0)

class TestCorpusRun(unittest.TestCase):
    def test_workers(self):
        ds = [parse_descriptor(t) for t in ('Z', 'cofinal(2)', 'C(2,1)^w (+) C(3,1)^w')]
        serial = classify_corpus(ds, RunConfig(k_max=6, m_max=6))
        parallel = classify_corpus(ds, RunConfig(k_max=6, m_max=6, workers=2))
        self.assertEqual([(v.dp_minimal, v.vc_minimal) for v in serial], [(True, True), (True, False), (False, False)])
        self.assertEqual([(v.dp_minimal, v.vc_minimal) for v in parallel], [(v.dp_minimal, v.vc_minimal) for v in serial])

if __name__ == '__main__':
    unittest.main()
