"""Positive-primitive definable subgroups of a descriptor group.

The formula phi_{k,m}(x) = Ey (k*y = m*x) splits prime by prime: at p
it is the atom G(p; v_p(k), v_p(m)) = {x : p^b x in p^a A} when k != 0,
and the torsion atom T(p; v_p(m)) = A[p^j] when k = 0. A `PPSubgroup`
stores the reduced atom set at every prime where it differs from a
default (everything, or the zero subgroup) and reads off its trace on
each basic summand.

>>> from .szmielew import parse_descriptor
>>> d = parse_descriptor('C(2,2)')
>>> h = phi_subgroup(d, 2, 1)
>>> print(h)
G(2;1,0)
>>> h.trace_cyclic(2, 2)
LocalTrace(kind='cyclic', p=2, n=2, level=1)
>>> print(index(phi_subgroup(d, 1, 1), h))
2
"""

from collections import namedtuple
from dataclasses import dataclass
from functools import cached_property, lru_cache, cmp_to_key
import re
import sympy


class BaseMismatchError(ValueError):
    """Raised when two subgroups of different groups are combined."""

class SubgroupSyntaxError(ValueError):
    pass

class G(namedtuple('G', 'p a b')):
    __slots__ = ()
    def __str__(self):
        return 'G(%d;%d,%d)' % self

class T(namedtuple('T', 'p j')):
    __slots__ = ()
    def __str__(self):
        return 'T(%d;%d)' % self

def _atom_sort_key(atom):
    return (atom.p, 0, atom.a, atom.b) if isinstance(atom, G) else (atom.p, 1, atom.j, 0)

def reduce_atoms(atoms):
    """Drops atoms implied by others.

    >>> sorted(map(str, reduce_atoms({G(2, 1, 1), G(2, 2, 0), G(2, 3, 1), T(2, 3), T(2, 4)})))
    ['G(2;2,0)', 'T(2;3)']
    >>> sorted(map(str, reduce_atoms({G(3, 2, 0), G(3, 1, 0), T(3, 1)})))
    ['G(3;2,0)', 'T(3;1)']
    """
    ts = [atom for atom in atoms if isinstance(atom, T)]
    gs = {atom for atom in atoms if isinstance(atom, G) and atom.a > atom.b}
    result = set()
    if ts:
        tmin = min(ts, key=lambda t: t.j)
        result.add(tmin)
        gs = {g for g in gs if g.b < tmin.j}
    for g in gs:
        if not any(h != g and h.b <= g.b and h.a - h.b >= g.a - g.b for h in gs):
            result.add(g)
    return frozenset(result)

def cyclic_level(atoms, n):
    """The exponent s with trace p^s C on a cyclic slot C = Z/p^n."""
    s = 0
    for atom in atoms:
        if isinstance(atom, G):
            s = max(s, min(atom.a, n) - atom.b)
        else:
            s = max(s, n - atom.j)
    return s

def prufer_level(atoms):
    """None for the whole Prufer group, j for its p^j-torsion."""
    js = [atom.j for atom in atoms if isinstance(atom, T)]
    return min(js) if js else None

def localized_level(atoms):
    """None for zero, s for p^s Z_(p)."""
    if any(isinstance(atom, T) for atom in atoms):
        return None
    return max([0] + [atom.a - atom.b for atom in atoms])

def _max_param(atoms):
    return max((max(atom[1:]) for atom in atoms), default=0)

def _eventual_level(atoms, n):
    # exact for n beyond 2 * _max_param(atoms) + 1
    ts = [atom.j for atom in atoms if isinstance(atom, T)]
    if ts:
        return n - min(ts)
    return max([0] + [atom.a - atom.b for atom in atoms])

def _cofinal_key(atoms):
    kink = 2 * _max_param(atoms) + 2
    levels = [cyclic_level(atoms, n) for n in range(1, kink + 1)]
    while levels and levels[-1] == _eventual_level(atoms, len(levels)):
        levels.pop()
    slope = 1 if any(isinstance(atom, T) for atom in atoms) else 0
    return (tuple(levels), slope, _eventual_level(atoms, 0))

def _shape_key(shape, atoms):
    if shape.cofinal:
        cyc = _cofinal_key(atoms)
    else:
        cyc = tuple(cyclic_level(atoms, n) for n, _ in shape.cyclic)
    prufer = prufer_level(atoms) if shape.prufer else '-'
    loc = localized_level(atoms) if shape.localized else '-'
    return (cyc, prufer, loc)

@dataclass(frozen=True)
class LocalTrace:
    """The subgroup a p.p. subgroup cuts out of one basic summand.

    `level` is the cyclic exponent s (p^s C), the Prufer torsion
    exponent (None for everything), the localisation exponent (None for
    zero), or a bool for the rational slot.
    """
    kind: str
    p: int
    n: int
    level: object

    def __str__(self):
        if self.kind == 'cyclic':
            return '%d^%d C(%d,%d)' % (self.p, self.level, self.p, self.n)
        if self.kind == 'prufer':
            return 'Zp8(%d)' % self.p if self.level is None else 'Zp8(%d)[%d^%d]' % (self.p, self.p, self.level)
        if self.kind == 'localized':
            return '0' if self.level is None else '%d^%d Zloc(%d)' % (self.p, self.level, self.p)
        return 'Q' if self.level else '0'

class PPSubgroup:
    """A finite intersection of phi_{k,m} subgroups of a descriptor group.

    `entries` maps primes to reduced atom sets; every other prime
    carries the default, no atoms when `default_full` is set and
    T(p;0) otherwise. Equality compares the traces on every slot.
    """

    def __init__(self, base, entries, default_full):
        self.base = base
        self.default_full = default_full
        default = self._default_atoms
        self.entries = tuple(sorted((p, atoms) for p, atoms in entries.items() if atoms != default(p)))

    @classmethod
    def full(cls, base):
        return cls(base, {}, True)

    @classmethod
    def zero(cls, base):
        return cls(base, {}, False)

    def _default_atoms(self, p):
        return frozenset() if self.default_full else frozenset([T(p, 0)])

    @cached_property
    def _entry_map(self):
        return dict(self.entries)

    def atoms_at(self, p):
        atoms = self._entry_map.get(p)
        return atoms if atoms is not None else self._default_atoms(p)

    @property
    def atom_primes(self):
        return tuple(p for p, _ in self.entries)

    @cached_property
    def max_param(self):
        return max((_max_param(atoms) for _, atoms in self.entries), default=0)

    def _tracked(self):
        # the rational slot and the generic tail primes only see the default
        return self.base.has_tail or bool(self.base.delta)

    def prime_key(self, p):
        return _shape_key(self.base.shape(p), self.atoms_at(p))

    def shown_atoms_at(self, p):
        """The atoms at `p` without the G atoms the slots of the base cannot see."""
        shape = self.base.shape(p)
        atoms = set(self.atoms_at(p))
        key = _shape_key(shape, atoms)
        for atom in sorted(atoms, key=_atom_sort_key, reverse=True):
            if isinstance(atom, G) and _shape_key(shape, atoms - {atom}) == key:
                atoms.discard(atom)
        return atoms

    @cached_property
    def key(self):
        explicit = tuple((p, self.prime_key(p)) for p in self.base.explicit_primes)
        generic = ()
        if self.base.has_tail:
            default_key = PPSubgroup(self.base, {}, self.default_full).prime_key
            generic = tuple((p, self.prime_key(p)) for p in self.atom_primes
                if p not in self.base.explicit_primes and self.prime_key(p) != default_key(p))
        return (explicit, self.default_full if self._tracked() else None, generic)

    def __eq__(self, other):
        if not isinstance(other, PPSubgroup):
            return NotImplemented
        return self.base == other.base and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def trace_cyclic(self, p, n):
        return LocalTrace('cyclic', p, n, cyclic_level(self.atoms_at(p), n))

    def trace_prufer(self, p):
        return LocalTrace('prufer', p, 0, prufer_level(self.atoms_at(p)))

    def trace_localized(self, p):
        return LocalTrace('localized', p, 0, localized_level(self.atoms_at(p)))

    def trace_rational(self):
        return LocalTrace('rational', 0, 0, self.default_full)

    def traces(self, primes=None):
        """Traces on the explicit slots of the base (and `primes`, if given)."""
        res = {}
        for p in sorted(set(self.base.explicit_primes) | set(primes or ())):
            shape = self.base.shape(p)
            for n, _ in shape.cyclic:
                res[('cyclic', p, n)] = self.trace_cyclic(p, n)
            if shape.prufer:
                res[('prufer', p)] = self.trace_prufer(p)
            if shape.localized:
                res[('localized', p)] = self.trace_localized(p)
        if self.base.delta:
            res[('rational',)] = self.trace_rational()
        return res

    def __str__(self):
        atoms = sorted((atom for p in self.atom_primes for atom in self.shown_atoms_at(p)), key=_atom_sort_key)
        if not atoms:
            return 'Full' if self.default_full else 'Zero'
        return ' ∧ '.join(str(atom) for atom in atoms)

    def __repr__(self):
        return 'PPSubgroup(%s)' % self

@dataclass(frozen=True)
class IndexValue:
    """A group index, kept factored; `exponents` is None for an infinite index.

    >>> FiniteIdx({2: 1}) * FiniteIdx({2: 2, 3: 1})
    IndexValue(exponents=((2, 3), (3, 1)))
    >>> (FiniteIdx({5: 1}) * INFINITE_INDEX).is_finite
    False
    """
    exponents: object = ()

    @property
    def is_finite(self):
        return self.exponents is not None

    @property
    def value(self):
        if not self.is_finite:
            return None
        res = 1
        for p, e in self.exponents:
            res *= p ** e
        return res

    def __mul__(self, other):
        if not self.is_finite or not other.is_finite:
            return INFINITE_INDEX
        exps = dict(self.exponents)
        for p, e in other.exponents:
            exps[p] = exps.get(p, 0) + e
        return FiniteIdx(exps)

    def __str__(self):
        return str(self.value) if self.is_finite else 'infinite'

def FiniteIdx(exponents):
    return IndexValue(tuple(sorted((p, e) for p, e in exponents.items() if e)))

INFINITE_INDEX = IndexValue(None)

def _check_base(h1, h2):
    if h1.base != h2.base:
        raise BaseMismatchError('subgroups of %s and %s cannot be combined' % (h1.base, h2.base))

@lru_cache(maxsize=4096)
def phi_subgroup(d, k, m):
    """Returns phi_{k,m}(A) for the group described by `d`.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('Zp8(3) (+) Z')
    >>> phi_subgroup(d, 0, 3).trace_prufer(3).level
    1
    >>> print(phi_subgroup(d, 1, 12))
    Full
    >>> print(phi_subgroup(d, 12, 2))
    G(2;2,1) ∧ G(3;1,0)
    """
    if k < 0 or m < 0:
        raise ValueError('k and m must be non-negative')
    if m == 0:
        return PPSubgroup.full(d)
    if k == 0:
        return PPSubgroup(d, {p: frozenset([T(p, e)]) for p, e in sympy.factorint(m).items()}, False)
    fk, fm = sympy.factorint(k), sympy.factorint(m)
    entries = {}
    for p in set(fk) | set(fm):
        atoms = reduce_atoms({G(p, fk.get(p, 0), fm.get(p, 0))})
        if atoms:
            entries[p] = atoms
    return PPSubgroup(d, entries, True)

def torsion_subgroup(d, p, j):
    """A[p^j]."""
    return phi_subgroup(d, 0, p ** j)

def multiple_subgroup(d, n):
    """nA."""
    return phi_subgroup(d, n, 1)

@lru_cache(maxsize=65536)
def intersect(h1, h2):
    """The meet of two p.p. subgroups.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('C(5,2)^w')
    >>> intersect(torsion_subgroup(d, 5, 1), multiple_subgroup(d, 5)) == multiple_subgroup(d, 5)
    True
    """
    _check_base(h1, h2)
    default_full = h1.default_full and h2.default_full
    entries = {}
    for p in set(h1.atom_primes) | set(h2.atom_primes):
        entries[p] = reduce_atoms(h1.atoms_at(p) | h2.atoms_at(p))
    return PPSubgroup(h1.base, entries, default_full)

def _local_exponent(shape, big, small):
    """The p-exponent of [big : small] on the slots of `shape`, or None if infinite."""
    e_total = 0

    def add(e, mult):
        nonlocal e_total
        if e <= 0:
            return True
        if not mult.is_finite:
            return False
        e_total += e * mult.n
        return True

    if shape.cofinal:
        bound = max(2 * _max_param(big) + 2, 2 * _max_param(small) + 2, shape.max_exponent) + 1
        for n in range(1, bound + 1):
            if not add(cyclic_level(small, n) - cyclic_level(big, n), shape.mult_at(n)):
                return None
        for n in (bound + 1, bound + 2):
            if cyclic_level(small, n) > cyclic_level(big, n):
                return None
    else:
        for n, mult in shape.cyclic:
            if not add(cyclic_level(small, n) - cyclic_level(big, n), mult):
                return None

    if shape.prufer:
        lb, ls = prufer_level(big), prufer_level(small)
        if lb is None:
            if ls is not None:
                return None
        elif not add(lb - ls, shape.prufer):
            return None

    if shape.localized:
        lb, ls = localized_level(big), localized_level(small)
        if lb is not None:
            if ls is None:
                return None
            if not add(ls - lb, shape.localized):
                return None

    return e_total

def index(h_big, h_small):
    """[h_big : h_big ∩ h_small].

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('Zp8(7)')
    >>> print(index(torsion_subgroup(d, 7, 2), torsion_subgroup(d, 7, 1)))
    7
    >>> print(index(PPSubgroup.full(d), torsion_subgroup(d, 7, 2)))
    infinite
    """
    _check_base(h_big, h_small)
    meet = intersect(h_big, h_small)
    return _index_of_subgroup(h_big, meet)

@lru_cache(maxsize=65536)
def _index_of_subgroup(big, small):
    base = big.base
    if big.default_full and not small.default_full:
        if base.has_tail or base.delta:
            return INFINITE_INDEX

    exps = {}
    primes = set(base.explicit_primes) | set(big.atom_primes) | set(small.atom_primes)
    for p in sorted(primes):
        shape = base.shape(p)
        if shape.is_empty:
            continue
        e = _local_exponent(shape, big.atoms_at(p), small.atoms_at(p))
        if e is None:
            return INFINITE_INDEX
        exps[p] = e
    return FiniteIdx(exps)

def precsim(h1, h2):
    """h1 ≾ h2, i.e. [h1 : h1 ∩ h2] is finite."""
    return index(h1, h2).is_finite

def commensurable(h1, h2):
    return precsim(h1, h2) and precsim(h2, h1)

def is_subset(h1, h2):
    """
    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('C(3,3)')
    >>> is_subset(multiple_subgroup(d, 9), multiple_subgroup(d, 3))
    True
    >>> is_subset(multiple_subgroup(d, 3), multiple_subgroup(d, 9))
    False
    """
    _check_base(h1, h2)
    return intersect(h1, h2) == h1

def precsim_cmp(h1, h2):
    """A comparison function for sorting along a linear ≾."""
    a, b = precsim(h1, h2), precsim(h2, h1)
    if a and b:
        return 0
    return -1 if a else 1

precsim_key = cmp_to_key(precsim_cmp)

_ATOM_RE = re.compile(r'\s*(?:G\((\d+);(\d+),(\d+)\)|T\((\d+);(\d+)\))\s*$')

def parse_subgroup(d, text):
    """Reads back the printed form of a p.p. subgroup of `d`.

    A subgroup whose atoms include a torsion atom, or which prints as
    Zero, is zero at every unlisted prime.

    >>> from .szmielew import parse_descriptor
    >>> d = parse_descriptor('C(2,2) (+) Z')
    >>> h = intersect(phi_subgroup(d, 2, 1), phi_subgroup(d, 0, 4))
    >>> str(h), parse_subgroup(d, str(h)) == h
    ('G(2;1,0) ∧ T(2;2)', True)
    """
    text = text.strip()
    if text == 'Full':
        return PPSubgroup.full(d)
    if text == 'Zero':
        return PPSubgroup.zero(d)
    entries = {}
    for part in text.split('∧'):
        m = _ATOM_RE.match(part)
        if not m:
            raise SubgroupSyntaxError('malformed subgroup atom %r' % part.strip())
        if m.group(1):
            atom = G(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        else:
            atom = T(int(m.group(4)), int(m.group(5)))
        entries.setdefault(atom.p, set()).add(atom)
    default_full = not any(isinstance(atom, T) for atoms in entries.values() for atom in atoms)
    return PPSubgroup(d, {p: frozenset(atoms) for p, atoms in entries.items()}, default_full)
