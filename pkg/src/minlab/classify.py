"""Deciding dp-minimality and VC-minimality of abelian groups.

Both properties are decided twice. The structural route reads the
answer off the descriptor; the lattice route inspects the quasi-order
≾ on a finite critical family of p.p. subgroups. The two must agree.

>>> from .szmielew import parse_descriptor
>>> d = parse_descriptor('C(2,1)^w (+) C(3,1)^w')
>>> dp_min_structural(d), dp_min_lattice(d)[0]
(False, False)
>>> v = vc_min(parse_descriptor('C(3,2)^w'))
>>> v.vc_minimal, v.route_agreement, [str(h) for h in v.evidence.chain]
(True, True, ['Zero', 'G(3;1,0)', 'Full'])
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, reduce
import logging
import math
import sympy

from .config import RunConfig
from .ppcalc import (PPSubgroup, phi_subgroup, intersect, index, precsim, commensurable,
    is_subset, precsim_key, torsion_subgroup, multiple_subgroup)
from .szmielew import parse_descriptor, direct_sum, is_nonsingular

logger = logging.getLogger(__name__)

class PreconditionError(ValueError):
    """Raised when a witness is requested for a group that cannot have one."""

@dataclass(frozen=True)
class NonDpWitness:
    """Two p.p. subgroups incomparable under ≾."""
    h1: PPSubgroup
    h2: PPSubgroup

@dataclass(frozen=True)
class ChainWitness:
    """A linear chain of p.p. subgroups, smallest first."""
    chain: tuple
    coverage_bound: tuple
    depth: int

@dataclass(frozen=True)
class FailureWitness:
    """A descending chain A_0 ⊇ A_1 ⊇ ... and a subgroup B such that
    A_i ∩ B strictly decreases while every A_i has infinite index over
    A_i ∩ B and B has finite index over it."""
    chain_a: tuple
    b_group: PPSubgroup
    depth: int
    recipe: str

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failing_cell: object = None
    failing_pair: object = None
    message: str = ''

    def __bool__(self):
        return self.ok

@dataclass
class Verdict:
    descriptor: object
    dp_minimal: bool
    vc_minimal: bool
    convexly_orderable: bool
    route_agreement: bool
    routes: dict
    evidence: object = None
    check: object = None
    failing_class: object = None

def smallest_prime_not_in(primes):
    p = 2
    while p in primes:
        p = sympy.nextprime(p)
    return p

def _torsion_primes(d):
    # A[p] infinite
    return {loc.p for loc in d.locals if loc.cofinal or not loc.beta.is_finite}

def _cotorsion_primes(d):
    # A/pA infinite
    return {loc.p for loc in d.locals if loc.cofinal or not loc.gamma.is_finite}

def _has_infinite_alpha(d):
    return any(not mult.is_finite for loc in d.locals for _, mult in loc.alpha)

def _bounded_exponent_case(d):
    """(Z/p^k)^(a) (+) (Z/p^{k+1})^(b) up to a finite summand."""
    if d.has_tail or d.delta:
        return False
    infinite_at = set()
    for loc in d.locals:
        if loc.cofinal or loc.beta or loc.gamma:
            return False
        exps = [n for n, mult in loc.alpha if not mult.is_finite]
        if exps:
            infinite_at.add(loc.p)
            if max(exps) - min(exps) > 1:
                return False
    return len(infinite_at) == 1

def dp_min_structural(d):
    """
    >>> from .szmielew import parse_descriptor
    >>> dp_min_structural(parse_descriptor('cofinal(2)'))
    True
    >>> dp_min_structural(parse_descriptor('C(5,1)^w (+) C(5,2)^w'))
    True
    """
    if _has_infinite_alpha(d):
        return _bounded_exponent_case(d)
    return len(_torsion_primes(d)) <= 1 and len(_cotorsion_primes(d)) <= 1

def vc_min_structural(d):
    """
    >>> from .szmielew import parse_descriptor
    >>> vc_min_structural(parse_descriptor('Z'))
    True
    >>> vc_min_structural(parse_descriptor('cofinal(2)'))
    False
    >>> vc_min_structural(parse_descriptor('Zloc(3)^w (+) tailC(p,1)'))
    False

    The golden corpus entry 'prufer and localisation at distinct primes'
    is VC-minimal: the two primes never share a slot, and the lattice
    route agrees.

    >>> vc_min_structural(parse_descriptor('Zp8(2)^w (+) Zloc(3)^w'))
    True
    """
    if _has_infinite_alpha(d):
        return _bounded_exponent_case(d)
    if not dp_min_structural(d):
        return False
    if any(loc.cofinal for loc in d.locals):
        return False
    rich = [loc.p for loc in d.locals if not loc.gamma.is_finite]
    if rich:
        q = rich[0]
        if any(loc.gamma for loc in d.locals if loc.p != q):
            return False
        if d.tail is not None and (d.tail.gamma or d.tail.alpha):
            return False
    return True

class _Class:
    def __init__(self, rep):
        self.rep = rep
        self.members = [rep]

def group_classes(members):
    """Splits subgroups into commensurability classes, keeping member order."""
    classes = []
    for h in members:
        for cls in classes:
            if commensurable(cls.rep, h):
                cls.members.append(h)
                break
        else:
            classes.append(_Class(h))
    return classes

def _find_incomparable(classes):
    for i, c1 in enumerate(classes):
        for c2 in classes[i+1:]:
            if not precsim(c1.rep, c2.rep) and not precsim(c2.rep, c1.rep):
                return NonDpWitness(c1.rep, c2.rep)
    return None

def _generating_atoms(d, primes, n):
    res = [PPSubgroup.full(d), PPSubgroup.zero(d)]
    for p in primes:
        for a in range(1, n + 1):
            for b in range(a):
                res.append(phi_subgroup(d, p ** a, p ** b))
        for j in range(1, n + 1):
            res.append(phi_subgroup(d, 0, p ** j))
    return _dedupe(res)

def _dedupe(members):
    seen = set()
    res = []
    for h in members:
        if h not in seen:
            seen.add(h)
            res.append(h)
    return res

class CriticalLattice:
    """The critical family of p.p. subgroups of a descriptor group.

    The family is generated by the prime-local atoms with exponents up
    to `bound` at the explicit primes and, if the group has a uniform
    tail, at the smallest other prime, closed under pairwise
    intersections.
    """

    def __init__(self, d):
        self.base = d
        self.bound = 2 + d.max_exponent
        self.spare_prime = smallest_prime_not_in(d.explicit_primes) if d.has_tail else None
        primes = list(d.explicit_primes) + ([self.spare_prime] if self.spare_prime else [])
        atoms = _generating_atoms(d, primes, self.bound)
        members = list(atoms)
        for i, h1 in enumerate(atoms):
            for h2 in atoms[i+1:]:
                members.append(intersect(h1, h2))
        self.members = _dedupe(members)
        self.classes = group_classes(self.members)
        self.witness = _find_incomparable(self.classes)
        if self.witness is None:
            self.classes.sort(key=lambda cls: precsim_key(cls.rep))
        logger.debug('critical family of %s: %d subgroups in %d classes', d, len(self.members), len(self.classes))

    @property
    def is_linear(self):
        return self.witness is None

    def is_inner(self, h):
        return h.max_param < self.bound and self.spare_prime not in h.atom_primes

@lru_cache(maxsize=256)
def critical_lattice(d):
    return CriticalLattice(d)

def dp_min_lattice(d):
    """Returns (dp-minimal, NonDpWitness or None).

    >>> from .szmielew import parse_descriptor
    >>> ok, w = dp_min_lattice(parse_descriptor('C(2,1)^w (+) C(3,1)^w'))
    >>> ok, str(w.h1), str(w.h2)
    (False, 'G(2;1,0)', 'G(3;1,0)')
    """
    lat = critical_lattice(d)
    return lat.is_linear, lat.witness

def upwardly_coherent(d):
    """Returns (coherent, representative of a failing class or None).

    Every class X must contain a subgroup lying inside every member of
    every class strictly ≾-above X.
    """
    lat = critical_lattice(d)
    if not lat.is_linear:
        logger.warning('%s is not dp-minimal; coherence is computed on a non-linear order', d)
    for cls in lat.classes:
        inner = [h for h in cls.members if lat.is_inner(h)] or cls.members
        hx = reduce(intersect, inner)
        for other in lat.classes:
            if other is cls or not precsim(cls.rep, other.rep) or precsim(other.rep, cls.rep):
                continue
            if not all(is_subset(hx, h1) for h1 in other.members):
                return False, cls.rep
    return True, None

def witness_chain(d, depth=8, bounds=(20, 20)):
    """Builds a chain of p.p. subgroups covering phi_{k,m} up to `bounds`.

    Classes are refined top-down: the elements of a class are the
    running intersections of its members, each cut down to the smallest
    element of the class above.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('Z')
    >>> w = witness_chain(d, bounds=(6, 6))
    >>> w.chain[0] == PPSubgroup.zero(d), w.chain[-1] == PPSubgroup.full(d)
    (True, True)
    >>> bool(verify_chain(d, w, 6, 6))
    True

    The integers get the factorial chain 0 < depth!·A < ... < 2·A < A.
    The depth is raised until every k within `bounds` divides depth!.

    >>> [str(h) for h in witness_chain(d, 3, (3, 3)).chain]
    ['Zero', 'G(2;1,0) ∧ G(3;1,0)', 'G(2;1,0)', 'Full']
    """
    if not vc_min_structural(d):
        raise PreconditionError('%s is not VC-minimal, no generating chain exists' % d)

    k_max, m_max = bounds
    if _is_integers(d):
        return _factorial_chain(d, depth, k_max, m_max)

    lat = critical_lattice(d)
    primes = list(d.explicit_primes) + ([lat.spare_prime] if lat.spare_prime else [])
    pool = _generating_atoms(d, primes, max(lat.bound, depth))
    pool.extend(phi_subgroup(d, k, m) for k in range(k_max + 1) for m in range(m_max + 1))
    classes = group_classes(_dedupe(pool))
    classes.sort(key=lambda cls: precsim_key(cls.rep))

    chain = []
    ceiling = PPSubgroup.full(d)
    for cls in reversed(classes):
        running = None
        elements = []
        for h in cls.members:
            running = h if running is None else intersect(running, h)
            e = intersect(running, ceiling)
            if e not in elements:
                elements.append(e)
        chain.extend(elements)
        ceiling = elements[-1]

    chain.reverse()
    logger.debug('chain of length %d for %s', len(chain), d)
    return ChainWitness(tuple(chain), (k_max, m_max), depth)

@lru_cache(maxsize=None)
def _integers():
    return parse_descriptor('Z')

def _is_integers(d):
    return d == _integers()

def factorial_depth(k_max):
    """The least n such that every positive k <= k_max divides n!.

    >>> factorial_depth(6), factorial_depth(20)
    (5, 19)
    """
    lcm = math.lcm(*range(1, k_max + 1))
    n = 1
    while math.factorial(n) % lcm:
        n += 1
    return n

def _factorial_chain(d, depth, k_max, m_max):
    needed = factorial_depth(k_max)
    if needed > depth:
        logger.info('raising the factorial chain depth from %d to %d to cover k <= %d', depth, needed, k_max)
        depth = needed
    chain = [PPSubgroup.zero(d)]
    for n in range(depth, 0, -1):
        h = multiple_subgroup(d, math.factorial(n))
        if h != chain[-1]:
            chain.append(h)
    return ChainWitness(tuple(chain), (k_max, m_max), depth)

def cover_cell(d, chain, k, m):
    """The largest chain element of finite index in phi_{k,m}, or None.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('Z')
    >>> chain = witness_chain(d, 6, (6, 6)).chain
    >>> print(cover_cell(d, chain, 720, 1))
    G(2;4,0) ∧ G(3;2,0) ∧ G(5;1,0)
    >>> cover_cell(d, chain[:1] + chain[2:], 720, 1) is None
    True
    """
    phi = phi_subgroup(d, k, m)
    best = next((h for h in reversed(chain) if is_subset(h, phi)), None)
    if best is None or not index(phi, best).is_finite:
        return None
    return best

def verify_chain(d, w, k_max=20, m_max=20):
    """Checks linearity of the chain and that every phi_{k,m} in range is a
    finite union of cosets of some chain element.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('Q^w')
    >>> bool(verify_chain(d, ChainWitness((PPSubgroup.zero(d), PPSubgroup.full(d)), (20, 20), 0)))
    True
    """
    chain = w.chain
    for i in range(len(chain) - 1):
        if chain[i] == chain[i+1] or not is_subset(chain[i], chain[i+1]):
            return CheckResult(False, failing_pair=(i, i + 1),
                message='%s is not strictly contained in %s' % (chain[i], chain[i+1]))

    for k in range(k_max + 1):
        for m in range(m_max + 1):
            if cover_cell(d, chain, k, m) is None:
                return CheckResult(False, failing_cell=(k, m),
                    message='no chain element has finite index in phi_{%d,%d}' % (k, m))
    return CheckResult(True)

def _localized_partner(d, q):
    candidates = [loc.p for loc in d.locals if loc.p != q and loc.gamma]
    if d.tail is not None and d.tail.gamma:
        candidates.append(smallest_prime_not_in({q}))
    return min(candidates) if candidates else None

def witness_failure(d, depth=8):
    """Builds the chain refuting upward coherence of a dp-minimal group.

    >>> from .szmielew import parse_descriptor
    >>> w = witness_failure(parse_descriptor('cofinal(2)'), depth=3)
    >>> [str(h) for h in w.chain_a], str(w.b_group)
    (['Full', 'G(2;1,0)', 'G(2;2,0)', 'G(2;3,0)'], 'T(2;1)')
    """
    if not dp_min_structural(d) or vc_min_structural(d):
        raise PreconditionError('%s must be dp-minimal and not VC-minimal' % d)

    cofinal = [loc.p for loc in d.locals if loc.cofinal]
    if cofinal:
        p = cofinal[0]
        chain_a = [multiple_subgroup(d, p ** i) for i in range(depth + 1)]
        return FailureWitness(tuple(chain_a), torsion_subgroup(d, p, 1), depth, '%d^i A against A[%d]' % (p, p))

    q = next(loc.p for loc in d.locals if not loc.gamma.is_finite)
    b = multiple_subgroup(d, q)
    p = _localized_partner(d, q)
    if p is not None:
        chain_a = [multiple_subgroup(d, p ** i) for i in range(depth + 1)]
        return FailureWitness(tuple(chain_a), b, depth, '%d^i A against %dA' % (p, q))

    primes = [r for r in sympy.primerange(2, sympy.prime(depth + 2) + 1) if r != q][:depth]
    chain_a = []
    n = 1
    for i in range(depth + 1):
        chain_a.append(multiple_subgroup(d, n))
        if i < depth:
            n *= primes[i]
    return FailureWitness(tuple(chain_a), b, depth, 'primorials prime to %d against %dA' % (q, q))

def verify_failure(w):
    """Re-checks the three failure conditions for every step of the chain."""
    b = w.b_group
    for i in range(w.depth):
        a0, a1 = w.chain_a[i], w.chain_a[i + 1]
        if intersect(a0, b) == intersect(a1, b):
            return CheckResult(False, failing_cell=i, message='A_%d ∩ B = A_%d ∩ B' % (i, i + 1))
        if index(a0, b).is_finite:
            return CheckResult(False, failing_cell=i, message='[A_%d : A_%d ∩ B] is finite' % (i, i))
        if not index(b, a0).is_finite:
            return CheckResult(False, failing_cell=i, message='[B : A_%d ∩ B] is infinite' % i)
    return CheckResult(True)

def vc_min(d, config=None):
    """Classifies a descriptor group and attaches checked evidence."""
    config = config or RunConfig()
    dp_s = dp_min_structural(d)
    dp_l, non_dp = dp_min_lattice(d)
    coherent, failing = upwardly_coherent(d)
    vc_s = vc_min_structural(d)
    vc_l = dp_l and coherent
    agreement = dp_s == dp_l and vc_s == vc_l
    routes = {
        'dp_structural': dp_s, 'dp_lattice': dp_l,
        'vc_structural': vc_s, 'vc_lattice': vc_l,
        'upwardly_coherent': coherent,
        }
    if not agreement:
        logger.error('route disagreement on %s: %r', d, routes)

    verdict = Verdict(d, dp_s, vc_s, vc_s, agreement, routes, failing_class=failing)
    if not dp_s:
        verdict.evidence = non_dp
    elif vc_s:
        verdict.evidence = witness_chain(d, config.depth, (config.k_max, config.m_max))
        verdict.check = verify_chain(d, verdict.evidence, config.k_max, config.m_max)
    else:
        verdict.evidence = witness_failure(d, config.depth)
        verdict.check = verify_failure(verdict.evidence)
    if verdict.check is not None and not verdict.check:
        logger.error('evidence for %s failed verification: %s', d, verdict.check.message)
    logger.info('%s: dp-minimal=%s vc-minimal=%s', d, dp_s, vc_s)
    return verdict

def _vc_by_both_routes(d):
    dp_l, _ = dp_min_lattice(d)
    coherent, _ = upwardly_coherent(d)
    return vc_min_structural(d), dp_l and coherent

def summand_transfer_check(a, b):
    """VC-minimality passes to summands, and finite summands never matter.

    >>> from .szmielew import parse_descriptor
    >>> bool(summand_transfer_check(parse_descriptor('Z'), parse_descriptor('C(2,1) (+) C(3,1)')))
    True
    """
    s = direct_sum(a, b)
    diagnostics = []
    decisions = {}
    for name, d in (('a', a), ('a+b', s)):
        structural, lattice = _vc_by_both_routes(d)
        if structural != lattice:
            diagnostics.append('routes disagree on %s (%s)' % (name, d))
        decisions[name] = structural
    if decisions['a+b'] and not decisions['a']:
        diagnostics.append('%s is VC-minimal but its summand %s is not' % (s, a))
    if b.is_finite_group and decisions['a'] != decisions['a+b']:
        diagnostics.append('adding the finite group %s changed the verdict on %s' % (b, a))
    return CheckResult(not diagnostics, message='; '.join(diagnostics))

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    dp_minimal: bool
    vc_minimal: bool

GOLDEN_CORPUS = (
    CorpusEntry('integers', 'Z', True, True),
    CorpusEntry('bounded exponent', 'C(2,3)^w', True, True),
    CorpusEntry('two adjacent exponents', 'C(3,2)^w (+) C(3,3)^w', True, True),
    CorpusEntry('prufer and localisation', 'Zp8(5)^w (+) Zloc(5)^3', True, True),
    CorpusEntry('prufer and rationals', 'Zp8(7)^w (+) Q', True, True),
    CorpusEntry('rational vector space', 'Q^w', True, True),
    CorpusEntry('trivial group', '0', True, True),
    CorpusEntry('sum of prime cyclics', 'tailC(p,1)', True, True),
    CorpusEntry('integers plus a finite group', 'Z (+) C(2,1) (+) C(3,1)', True, True),
    CorpusEntry('prufer and localisation at distinct primes', 'Zp8(2)^w (+) Zloc(3)^w', True, True),
    CorpusEntry('unbounded cyclic 2-groups', 'cofinal(2)', True, False),
    CorpusEntry('unbounded cyclic 3-groups with prufer', 'cofinal(3) (+) Zp8(3)^w', True, False),
    CorpusEntry('localisation with cyclic tail', 'Zloc(3)^w (+) tailC(p,1)', True, False),
    CorpusEntry('localisation with integers', 'Zloc(3)^w (+) Z', True, False),
    CorpusEntry('two primes', 'C(2,1)^w (+) C(3,1)^w', False, False),
    CorpusEntry('two prufer groups', 'Zp8(2)^w (+) Zp8(3)^w', False, False),
    CorpusEntry('two exponents apart', 'C(2,1)^w (+) C(2,3)^w', False, False),
    )

def random_descriptor(rng):
    """Draws a descriptor of bounded shape from a numpy Generator."""
    parts = []
    primes = sorted(int(p) for p in rng.choice([2, 3, 5], size=int(rng.integers(0, 3)), replace=False))
    for p in primes:
        for _ in range(int(rng.integers(0, 3))):
            parts.append('C(%d,%d)^%s' % (p, rng.integers(1, 4), rng.choice(['1', '2', 'w'])))
        if rng.random() < 0.3:
            parts.append('Zp8(%d)^%s' % (p, rng.choice(['1', 'w'])))
        if rng.random() < 0.3:
            parts.append('Zloc(%d)^%s' % (p, rng.choice(['1', 'w'])))
        if rng.random() < 0.15:
            parts.append('cofinal(%d)' % p)
    if rng.random() < 0.2:
        parts.append('Q^%s' % rng.choice(['1', 'w']))
    tail = rng.random()
    if tail < 0.1:
        parts.append('Z')
    elif tail < 0.2:
        parts.append('tailC(p,1)')
    return parse_descriptor(' (+) '.join(parts) or '0')

def classify_corpus(descriptors, config=None):
    """Runs `vc_min` on every descriptor, in worker processes if configured."""
    config = config or RunConfig()
    if config.workers == 1:
        return [vc_min(d, config) for d in descriptors]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(vc_min, descriptors, [config] * len(descriptors)))
