"""
Finite Abelian Groups
=====================

Arithmetic in G = Z_{n_1} x ... x Z_{n_t} kept in the user-given factor form.

Provides:
1. GroupSpec / GroupElement with mixed-radix indexing (last factor fastest)
2. The fixed pairing <x,y> = sum (n/n_i) x_i y_i mod n, n = exp(G)
3. Subgroup lattice enumeration, annihilators, and orbits
4. Automorphism enumeration, adjoints, and projections onto cyclic quotients
5. Isomorphism-type utilities (elementary divisors, invariant factors,
   automorphism counts, enumeration of all groups of an order)

Elements are handled internally as integer indices; element sets are sorted
index tuples. All tables are derived lazily and never mutated afterwards.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm, prod
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from sympy import factorint
from sympy.utilities.iterables import partitions

from core.exceptions import BoundExceededError, GroupMismatchError

logger = logging.getLogger(__name__)

ElementSet = Tuple[int, ...]

DEFAULT_SUBGROUP_BOUND = 4096
DEFAULT_AUTOMORPHISM_BOUND = 256
DEFAULT_PRODUCT_CAP = 10_000_000


# ===========================================
# GROUPS AND ELEMENTS
# ===========================================

@dataclass(frozen=True)
class GroupSpec:
    """
    A finite abelian group given by its cyclic factor orders.

    The empty factor list is the trivial group. Element index i corresponds to
    the coordinate vector obtained by mixed-radix expansion with the last
    factor varying fastest, e.g. in Z_2 x Z_4 the element (1,3) has index 7.
    """
    factors: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'factors', tuple(int(n) for n in self.factors))
        self._validate_inputs()

    def _validate_inputs(self):
        for n in self.factors:
            if n < 2:
                raise ValueError(f"Cyclic factor orders must be >= 2, got {n}")

    @classmethod
    def parse(cls, text: str) -> 'GroupSpec':
        """Parse '2,4,4' (or '' / '1' for the trivial group)."""
        text = text.strip().strip('[]')
        if text in ('', '1'):
            return cls(())
        return cls(tuple(int(part) for part in text.split(',') if part.strip()))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @cached_property
    def order(self) -> int:
        return prod(self.factors)

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.factors) if self.factors else 1

    @cached_property
    def moduli(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        """Mixed-radix weights: index = coords @ weights."""
        return np.array([prod(self.factors[i + 1:]) for i in range(self.rank)], dtype=np.int64)

    @cached_property
    def pairing_weights(self) -> np.ndarray:
        """n / n_i for the fixed pairing."""
        return np.array([self.exponent // n for n in self.factors], dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        """Coordinate table, shape (order, rank)."""
        if self.is_trivial:
            return np.zeros((1, 0), dtype=np.int64)
        idx = np.arange(self.order, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.moduli[None, :]

    @cached_property
    def element_orders(self) -> np.ndarray:
        if self.is_trivial:
            return np.ones(1, dtype=np.int64)
        quotient = self.moduli[None, :] // np.gcd(self.elements, self.moduli[None, :])
        return np.lcm.reduce(quotient, axis=1)

    @cached_property
    def negation(self) -> np.ndarray:
        """negation[i] = index of -x_i."""
        return self.index_array(-self.elements)

    @cached_property
    def generator_indices(self) -> Tuple[int, ...]:
        """Indices of the canonical generators e_i."""
        return tuple(int(w) for w in self.weights)

    @property
    def name(self) -> str:
        if self.is_trivial:
            return "1"
        return " x ".join(f"Z_{n}" for n in self.factors)

    def to_dict(self) -> Dict[str, List[int]]:
        return {'cyclic_factors': list(self.factors)}

    # -- index arithmetic -------------------------------------------------

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized mixed-radix rank of coordinate rows (reduced first)."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.is_trivial:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return (coords % self.moduli) @ self.weights

    def index_of(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise GroupMismatchError(f"Expected {self.rank} coordinates for {self.name}, got {len(coords)}")
        return int(self.index_array(np.array(coords, dtype=np.int64)))

    def coords_of(self, i: int) -> Tuple[int, ...]:
        self._check_index(i)
        return tuple(int(c) for c in self.elements[i])

    def _check_index(self, i: int):
        if not 0 <= i < self.order:
            raise ValueError(f"Element index {i} out of range for {self.name}")

    def add(self, i: int, j: int) -> int:
        return int(self.index_array(self.elements[i] + self.elements[j]))

    def sub(self, i: int, j: int) -> int:
        return int(self.index_array(self.elements[i] - self.elements[j]))

    def neg(self, i: int) -> int:
        return int(self.negation[i])

    def multiple(self, i: int, k: int) -> int:
        return int(self.index_array(k * self.elements[i]))

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.index_array(self.elements[a] + self.elements[b])

    @cached_property
    def difference_table(self) -> np.ndarray:
        """D[a, b] = index of a - b; only materialized for small groups."""
        if self.order > 1024:
            raise BoundExceededError(f"Difference table for {self.name} exceeds 1024 x 1024")
        diffs = self.elements[:, None, :] - self.elements[None, :, :]
        return self.index_array(diffs).astype(np.int32)

    def inner_row(self, y: int) -> np.ndarray:
        """<x, y> for every x, as residues mod exp(G)."""
        if self.is_trivial:
            return np.zeros(1, dtype=np.int64)
        return (self.elements @ (self.pairing_weights * self.elements[y])) % self.exponent

    def inner(self, x: int, y: int) -> int:
        return int(self.inner_row(y)[x])

    def normalize_set(self, items: Iterable[Union[int, Sequence[int]]]) -> ElementSet:
        """Accept indices or coordinate lists; return the sorted index tuple."""
        indices = []
        for item in items:
            if isinstance(item, (int, np.integer)):
                self._check_index(int(item))
                indices.append(int(item))
            else:
                indices.append(self.index_of(list(item)))
        if len(set(indices)) != len(indices):
            raise ValueError("Element set contains repeated elements")
        return tuple(sorted(indices))


@dataclass(frozen=True)
class GroupElement:
    """An element of a GroupSpec as a reduced residue vector."""
    spec: GroupSpec
    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.spec.rank:
            raise GroupMismatchError(
                f"Element has {len(coords)} coordinates but {self.spec.name} has {self.spec.rank} factors")
        for c, n in zip(coords, self.spec.factors):
            if not 0 <= c < n:
                raise ValueError(f"Residue {c} not reduced modulo {n}")
        object.__setattr__(self, 'coords', coords)

    @classmethod
    def from_index(cls, spec: GroupSpec, i: int) -> 'GroupElement':
        return cls(spec, spec.coords_of(i))

    @classmethod
    def zero(cls, spec: GroupSpec) -> 'GroupElement':
        return cls(spec, (0,) * spec.rank)

    @property
    def index(self) -> int:
        return self.spec.index_of(self.coords)

    def _check(self, other: 'GroupElement'):
        if other.spec != self.spec:
            raise GroupMismatchError(f"Elements of {self.spec.name} and {other.spec.name} cannot be combined")

    def __add__(self, other: 'GroupElement') -> 'GroupElement':
        self._check(other)
        return GroupElement(self.spec, tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.spec.factors)))

    def __neg__(self) -> 'GroupElement':
        return GroupElement(self.spec, tuple((-a) % n for a, n in zip(self.coords, self.spec.factors)))

    def __sub__(self, other: 'GroupElement') -> 'GroupElement':
        return self + (-other)

    def __rmul__(self, k: int) -> 'GroupElement':
        return GroupElement(self.spec, tuple((k * a) % n for a, n in zip(self.coords, self.spec.factors)))

    @property
    def order(self) -> int:
        return element_order(self)


def group_add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


def group_negate(g: GroupElement) -> GroupElement:
    return -g


def element_order(g: GroupElement) -> int:
    """Least l >= 1 with l*g = 0."""
    return lcm(*(n // gcd(n, c) for c, n in zip(g.coords, g.spec.factors))) if g.coords else 1


def inner_product(x: GroupElement, y: GroupElement) -> int:
    """The fixed pairing <x,y> in [0, exp(G))."""
    x._check(y)
    if x.spec.is_trivial:
        raise ValueError("The pairing is undefined on the trivial group")
    n = x.spec.exponent
    return sum((n // ni) * a * b for a, b, ni in zip(x.coords, y.coords, x.spec.factors)) % n


# ===========================================
# SUBGROUPS
# ===========================================

@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored by its sorted member indices."""
    spec: GroupSpec
    members: ElementSet
    generators: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def size(self) -> int:
        return len(self.members)

    @cached_property
    def indicator(self) -> np.ndarray:
        mask = np.zeros(self.spec.order, dtype=bool)
        mask[list(self.members)] = True
        return mask

    @cached_property
    def mask(self) -> int:
        """Python-int bitmask of the members."""
        bits = 0
        for i in self.members:
            bits |= 1 << i
        return bits

    def contains(self, i: int) -> bool:
        return bool(self.indicator[i])

    def is_subgroup_of(self, other: 'Subgroup') -> bool:
        return self.mask & other.mask == self.mask

    def to_dict(self) -> dict:
        return {'members': [list(self.spec.coords_of(i)) for i in self.members], 'size': self.size}


def _join_members(spec: GroupSpec, a: ElementSet, b: ElementSet) -> ElementSet:
    sums = spec.add_arrays(np.array(a)[:, None], np.array(b)[None, :])
    return tuple(int(i) for i in np.unique(sums))


def cyclic_subgroup(spec: GroupSpec, g: int) -> Subgroup:
    order = int(spec.element_orders[g])
    multiples = spec.index_array(np.arange(order)[:, None] * spec.elements[g][None, :])
    return Subgroup(spec, tuple(sorted(int(i) for i in multiples)), (g,))


def join(h: Subgroup, k: Subgroup) -> Subgroup:
    """The subgroup H + K."""
    if h.spec != k.spec:
        raise GroupMismatchError("Subgroups of different groups")
    return Subgroup(h.spec, _join_members(h.spec, h.members, k.members), h.generators + k.generators)


def subgroup_generated(spec: GroupSpec, generators: Iterable[int]) -> Subgroup:
    result = Subgroup(spec, (0,), ())
    for g in generators:
        result = join(result, cyclic_subgroup(spec, int(g)))
    return result


def trivial_subgroup(spec: GroupSpec) -> Subgroup:
    return Subgroup(spec, (0,), ())


def whole_group(spec: GroupSpec) -> Subgroup:
    return Subgroup(spec, tuple(range(spec.order)), spec.generator_indices)


@lru_cache(maxsize=256)
def orbit_partition(spec: GroupSpec) -> Tuple[np.ndarray, Tuple[ElementSet, ...]]:
    """
    Orbits orb(y) = {i*y : i a unit mod ord(y)} partition G; there is one
    orbit per cyclic subgroup (its generators).

    Returns (orbit_id per element, orbits ordered by smallest member).
    """
    orbit_id = np.full(spec.order, -1, dtype=np.int64)
    orbits: List[ElementSet] = []
    for y in range(spec.order):
        if orbit_id[y] >= 0:
            continue
        members = orbit_indices(spec, y)
        orbit_id[list(members)] = len(orbits)
        orbits.append(members)
    orbit_id.setflags(write=False)
    return orbit_id, tuple(orbits)


def orbit_indices(spec: GroupSpec, y: int) -> ElementSet:
    order = int(spec.element_orders[y])
    units = np.array([i for i in range(1, order + 1) if gcd(i, order) == 1], dtype=np.int64)
    images = spec.index_array(units[:, None] * spec.elements[y][None, :])
    return tuple(sorted(set(int(i) for i in images)))


def orbit_of(y: GroupElement) -> List[GroupElement]:
    return [GroupElement.from_index(y.spec, i) for i in orbit_indices(y.spec, y.index)]


@lru_cache(maxsize=256)
def cyclic_subgroups(spec: GroupSpec) -> Tuple[Subgroup, ...]:
    """One cyclic subgroup per orbit, aligned with orbit_partition order."""
    _, orbits = orbit_partition(spec)
    return tuple(cyclic_subgroup(spec, orbit[0]) for orbit in orbits)


@lru_cache(maxsize=128)
def enumerate_subgroups(spec: GroupSpec, bound: int = DEFAULT_SUBGROUP_BOUND) -> Tuple[Subgroup, ...]:
    """
    All subgroups, sorted by (size, members).

    Every subgroup is a join of cyclic subgroups, so the lattice is the
    closure of the cyclic subgroups under joining with a cyclic subgroup.
    """
    if spec.order > bound:
        raise BoundExceededError(f"{spec.name} has order {spec.order} > subgroup bound {bound}")

    cyclics = list({c.members: c for c in cyclic_subgroups(spec)}.values())
    lattice: Dict[ElementSet, Subgroup] = {c.members: c for c in cyclics}
    frontier = list(cyclics)
    while frontier:
        fresh = []
        for h in frontier:
            for c in cyclics:
                if c.is_subgroup_of(h):
                    continue
                j = join(h, c)
                if j.members not in lattice:
                    lattice[j.members] = j
                    fresh.append(j)
        frontier = fresh

    subgroups = sorted(lattice.values(), key=lambda s: (s.size, s.members))
    logger.debug(f"Enumerated {len(subgroups)} subgroups of {spec.name}")
    return tuple(subgroups)


def annihilator(spec: GroupSpec, n: Subgroup) -> Subgroup:
    """N~ = {y : <h,y> = 0 for all h in N}."""
    if spec.is_trivial:
        return whole_group(spec)
    gens = n.generators or n.members
    keep = np.ones(spec.order, dtype=bool)
    for h in gens:
        keep &= spec.inner_row(h) == 0
    members = tuple(int(i) for i in np.flatnonzero(keep))
    ann = Subgroup(spec, members, ())
    return Subgroup(spec, members, _small_generating_set(spec, ann))


def _small_generating_set(spec: GroupSpec, h: Subgroup) -> Tuple[int, ...]:
    gens: List[int] = []
    current = trivial_subgroup(spec)
    for x in sorted(h.members, key=lambda i: (-int(spec.element_orders[i]), i)):
        if current.size == h.size:
            break
        if not current.contains(x):
            current = join(current, cyclic_subgroup(spec, x))
            gens.append(x)
    return tuple(gens)


# ===========================================
# AUTOMORPHISMS
# ===========================================

@dataclass(frozen=True)
class Automorphism:
    """An automorphism given by the images of the canonical generators."""
    spec: GroupSpec
    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(int(i) for i in self.images))
        self._validate_inputs()

    def _validate_inputs(self):
        if len(self.images) != self.spec.rank:
            raise ValueError(f"Need {self.spec.rank} generator images, got {len(self.images)}")
        for img, n in zip(self.images, self.spec.factors):
            if n % int(self.spec.element_orders[img]) != 0:
                raise ValueError(f"Image of a generator of order {n} has order {self.spec.element_orders[img]}")

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.spec.is_trivial:
            return np.zeros((0, 0), dtype=np.int64)
        return self.spec.elements[list(self.images)]

    @cached_property
    def permutation(self) -> np.ndarray:
        """permutation[x] = index of phi(x)."""
        if self.spec.is_trivial:
            return np.zeros(1, dtype=np.int64)
        return self.spec.index_array(self.spec.elements @ self.matrix)

    @property
    def is_bijective(self) -> bool:
        return len(np.unique(self.permutation)) == self.spec.order

    def __call__(self, x: int) -> int:
        return int(self.permutation[x])

    def apply_set(self, s: Iterable[int]) -> ElementSet:
        return tuple(sorted(int(self.permutation[x]) for x in s))

    def compose(self, other: 'Automorphism') -> 'Automorphism':
        """self o other."""
        return Automorphism(self.spec, tuple(self(other(e)) for e in self.spec.generator_indices))

    def inverse(self) -> 'Automorphism':
        inv = np.empty_like(self.permutation)
        inv[self.permutation] = np.arange(self.spec.order)
        return Automorphism(self.spec, tuple(int(inv[e]) for e in self.spec.generator_indices))

    @property
    def is_identity(self) -> bool:
        return self.images == self.spec.generator_indices


def identity_automorphism(spec: GroupSpec) -> Automorphism:
    return Automorphism(spec, spec.generator_indices)


def automorphism_count(spec: GroupSpec) -> int:
    """
    |Aut(G)| from the elementary divisors, as a product over Sylow subgroups.
    For a p-group with exponents e_1 <= ... <= e_k, with d_j the last and c_j
    the first position holding e_j:
        prod (p^{d_j} - p^{j-1}) * prod p^{e_j (k - d_j)} * prod p^{(e_j - 1)(k - c_j + 1)}
    """
    total = 1
    for p in sorted(_primes_of(spec)):
        e = sylow_exponents(spec, p)
        k = len(e)
        d = [max(l for l in range(k) if e[l] == e[j]) + 1 for j in range(k)]
        c = [min(l for l in range(k) if e[l] == e[j]) + 1 for j in range(k)]
        term = 1
        for j in range(k):
            term *= p ** d[j] - p ** j
            term *= p ** (e[j] * (k - d[j]))
            term *= p ** ((e[j] - 1) * (k - c[j] + 1))
        total *= term
    return total


def enumerate_automorphisms(
    spec: GroupSpec,
    bound: int = DEFAULT_AUTOMORPHISM_BOUND,
    product_cap: int = DEFAULT_PRODUCT_CAP
) -> List[Automorphism]:
    """
    Complete Aut(G) by backtracking over generator images.

    e_i may go to any x of order exactly n_i with <x> meeting the span of the
    earlier images trivially; that is exactly injectivity on the partial product.
    """
    if spec.order > bound:
        raise BoundExceededError(f"{spec.name} has order {spec.order} > automorphism bound {bound}")
    expected = automorphism_count(spec)
    if expected * spec.order > product_cap:
        raise BoundExceededError(f"|Aut({spec.name})| * |G| = {expected * spec.order} exceeds {product_cap}")

    if spec.is_trivial:
        return [identity_automorphism(spec)]

    candidates = [np.flatnonzero(spec.element_orders == n) for n in spec.factors]
    found: List[Automorphism] = []

    def extend(i: int, span: np.ndarray, images: List[int]):
        if i == spec.rank:
            found.append(Automorphism(spec, tuple(images)))
            return
        n_i = spec.factors[i]
        steps = np.arange(1, n_i)[:, None]
        span_members = np.flatnonzero(span)
        for x in candidates[i]:
            multiples = spec.index_array(steps * spec.elements[x][None, :])
            if span[multiples].any():
                continue
            cyclic = np.concatenate(([0], multiples))
            new_members = spec.add_arrays(span_members[:, None], cyclic[None, :]).ravel()
            new_span = np.zeros(spec.order, dtype=bool)
            new_span[new_members] = True
            images.append(int(x))
            extend(i + 1, new_span, images)
            images.pop()

    start = np.zeros(spec.order, dtype=bool)
    start[0] = True
    extend(0, start, [])

    if len(found) != expected:
        logger.warning(f"⚠ Automorphism enumeration for {spec.name} found {len(found)}, formula says {expected}")
    return found


def adjoint_of(phi: Automorphism) -> Automorphism:
    """
    The unique phi* with <phi(x), y> = <x, phi*(y)>.

    phi*(y)_i = <phi(e_i), y> / (n / n_i) mod n_i, which is integral because
    n_i * phi(e_i) = 0.
    """
    spec = phi.spec
    if spec.is_trivial:
        return phi
    images = []
    for y in spec.generator_indices:
        row = spec.inner_row(y)
        coords = [int(row[phi(e)]) // int(w) % n
                  for e, w, n in zip(spec.generator_indices, spec.pairing_weights, spec.factors)]
        images.append(spec.index_of(coords))
    return Automorphism(spec, tuple(images))


def project_along(y: GroupElement, g: GroupElement) -> int:
    """rho_y(g) = <g,y> / (n/l) mod l, l = ord(y); a surjection onto Z_l with kernel ker chi_y."""
    l = element_order(y)
    if l == 1:
        raise ValueError("Projection along the identity is undefined")
    n = y.spec.exponent
    return (inner_product(g, y) // (n // l)) % l


# ===========================================
# ISOMORPHISM TYPES
# ===========================================

def _primes_of(spec: GroupSpec) -> List[int]:
    return sorted(factorint(spec.order).keys()) if spec.order > 1 else []


def elementary_divisors(spec: GroupSpec) -> List[int]:
    """Prime-power cyclic factors, sorted."""
    powers = []
    for n in spec.factors:
        for p, e in factorint(n).items():
            powers.append(p ** e)
    return sorted(powers)


def sylow_exponents(spec: GroupSpec, p: int) -> List[int]:
    """Exponents e with Z_{p^e} a factor of the Sylow p-subgroup, ascending."""
    exps = []
    for n in spec.factors:
        e = factorint(n).get(p, 0)
        if e:
            exps.append(e)
    return sorted(exps)


def sylow_is_cyclic(spec: GroupSpec, p: int) -> bool:
    return len(sylow_exponents(spec, p)) == 1


def invariant_factors(spec: GroupSpec) -> List[int]:
    """n_1 | n_2 | ... | n_k with G = Z_{n_1} x ... x Z_{n_k}."""
    per_prime = {p: sorted(sylow_exponents(spec, p), reverse=True) for p in _primes_of(spec)}
    k = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for j in range(k):
        factors.append(prod(p ** exps[j] for p, exps in per_prime.items() if j < len(exps)))
    return sorted(factors)


def minimal_generator_count(spec: GroupSpec) -> int:
    return len(invariant_factors(spec))


def is_isomorphic(a: GroupSpec, b: GroupSpec) -> bool:
    return elementary_divisors(a) == elementary_divisors(b)


def is_cyclic(spec: GroupSpec) -> bool:
    return minimal_generator_count(spec) <= 1


def abelian_groups_of_order(n: int) -> List[GroupSpec]:
    """One GroupSpec per isomorphism type, in elementary-divisor form."""
    if n == 1:
        return [GroupSpec(())]
    per_prime = []
    for p, e in sorted(factorint(n).items()):
        options = []
        for part in partitions(e):
            exps = sorted(k for k, mult in part.items() for _ in range(mult))
            options.append(tuple(p ** x for x in exps))
        per_prime.append(sorted(options, key=lambda f: (-len(f), f), reverse=True))
    groups = [GroupSpec(tuple(f for block in combo for f in block)) for combo in product(*per_prime)]
    return sorted(groups, key=lambda g: (g.rank, g.factors))


def translate_set(spec: GroupSpec, s: Iterable[int], g: int) -> ElementSet:
    s = np.fromiter(s, dtype=np.int64)
    return tuple(sorted(int(i) for i in spec.add_arrays(s, np.full_like(s, g))))


def product_group(a: GroupSpec, b: GroupSpec) -> GroupSpec:
    return GroupSpec(a.factors + b.factors)


def product_index(a: GroupSpec, b: GroupSpec, i: int, j: int) -> int:
    """Index of (x_i, y_j) in a x b (a's coordinates first)."""
    return i * b.order + j
