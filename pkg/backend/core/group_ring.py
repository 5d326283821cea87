"""
Group Ring Engine
=================

Integer-valued functions on a finite abelian group (elements of Z[G]).

Provides:
1. GroupMultiset with the weight enumerator AA^(-1) and power maps A^(i)
2. Exact character sums chi_y(A) as cyclotomic integers
3. |chi_y(A)|^2 by two independent paths (direct norm and via nu_A)
4. An integer orbit character table of Ramanujan sums, giving all
   character norms of an orbit-constant multiset in one matrix product
5. Fourier inversion and character / difference spectra
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.abelian import ElementSet, GroupSpec, orbit_partition
from core.cyclotomic import NOT_INTEGER, CyclotomicInt, NotInteger, ramanujan_sum
from core.exceptions import GroupMismatchError, InfeasibleError

logger = logging.getLogger(__name__)

NormValue = Union[int, NotInteger]


# ===========================================
# MULTISETS
# ===========================================

@dataclass(frozen=True, eq=False)
class GroupMultiset:
    """Integer coefficient per element index; a set has coefficients in {0, 1}."""
    spec: GroupSpec
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.int64)
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)
        self._validate_inputs()

    def _validate_inputs(self):
        if self.coeffs.shape != (self.spec.order,):
            raise ValueError(f"Multiset on {self.spec.name} needs {self.spec.order} coefficients, got {self.coeffs.shape}")

    @classmethod
    def from_set(cls, spec: GroupSpec, elements: Iterable[int]) -> 'GroupMultiset':
        coeffs = np.zeros(spec.order, dtype=np.int64)
        idx = list(elements)
        coeffs[idx] = 1
        if int(coeffs.sum()) != len(idx):
            raise ValueError("Set contains repeated elements")
        return cls(spec, coeffs)

    @classmethod
    def zero(cls, spec: GroupSpec) -> 'GroupMultiset':
        return cls(spec, np.zeros(spec.order, dtype=np.int64))

    @property
    def mass(self) -> int:
        return int(self.coeffs.sum())

    @property
    def support(self) -> ElementSet:
        return tuple(int(i) for i in np.flatnonzero(self.coeffs))

    @property
    def is_set(self) -> bool:
        return bool(np.all((self.coeffs == 0) | (self.coeffs == 1)))

    def __getitem__(self, g: int) -> int:
        return int(self.coeffs[g])

    def _check(self, other: 'GroupMultiset'):
        if other.spec != self.spec:
            raise GroupMismatchError(f"Multisets on {self.spec.name} and {other.spec.name}")

    def __add__(self, other: 'GroupMultiset') -> 'GroupMultiset':
        self._check(other)
        return GroupMultiset(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other: 'GroupMultiset') -> 'GroupMultiset':
        self._check(other)
        return GroupMultiset(self.spec, self.coeffs - other.coeffs)

    def __mul__(self, k: int) -> 'GroupMultiset':
        return GroupMultiset(self.spec, int(k) * self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupMultiset):
            return NotImplemented
        return self.spec == other.spec and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs.tobytes()))

    def to_dict(self) -> dict:
        return {'group': self.spec.to_dict(), 'coeffs': [int(c) for c in self.coeffs]}


def convolve(a: GroupMultiset, b: GroupMultiset) -> GroupMultiset:
    """Product in Z[G]."""
    a._check(b)
    spec = a.spec
    sa, sb = np.flatnonzero(a.coeffs), np.flatnonzero(b.coeffs)
    out = np.zeros(spec.order, dtype=np.int64)
    if len(sa) and len(sb):
        sums = spec.add_arrays(sa[:, None], sb[None, :])
        np.add.at(out, sums.ravel(), np.outer(a.coeffs[sa], b.coeffs[sb]).ravel())
    return GroupMultiset(spec, out)


def power_map(a: GroupMultiset, i: int) -> GroupMultiset:
    """A^(i): coefficient of g moves to i*g."""
    spec = a.spec
    out = np.zeros(spec.order, dtype=np.int64)
    np.add.at(out, spec.index_array(i * spec.elements), a.coeffs)
    return GroupMultiset(spec, out)


def difference_multiset(a: GroupMultiset) -> GroupMultiset:
    """AA^(-1); the coefficient at y is the weight enumerator nu_A(y)."""
    if np.any(a.coeffs < 0):
        raise ValueError("Weight enumerators are defined for nonnegative multisets only")
    return convolve(a, power_map(a, -1))


def weight_enumerator(spec: GroupSpec, s: Iterable[int]) -> np.ndarray:
    """nu_S as an integer array, for a plain element set."""
    return difference_multiset(GroupMultiset.from_set(spec, s)).coeffs


def subgroup_multiset(spec: GroupSpec, members: Iterable[int]) -> GroupMultiset:
    return GroupMultiset.from_set(spec, members)


# ===========================================
# CHARACTER SUMS
# ===========================================

def character_sum(a: GroupMultiset, y: int) -> CyclotomicInt:
    """chi_y(A) = sum_g [A]_g zeta_n^{<g,y>}, exact."""
    spec = a.spec
    if spec.is_trivial:
        return CyclotomicInt.integer(1, a.mass)
    support = np.flatnonzero(a.coeffs)
    exponents = spec.inner_row(y)[support]
    return CyclotomicInt.from_exponents(spec.exponent, exponents, a.coeffs[support])


def char_norm_sq(a: GroupMultiset, y: int) -> NormValue:
    """|chi_y(A)|^2 via the norm of the character sum."""
    return character_sum(a, y).norm_sq().as_integer()


def char_norm_sq_from_differences(a: GroupMultiset, y: int) -> NormValue:
    """|chi_y(A)|^2 = chi_y(AA^(-1)), the second evaluation path."""
    return character_sum(convolve(a, power_map(a, -1)), y).as_integer()


@lru_cache(maxsize=128)
def orbit_character_table(spec: GroupSpec) -> np.ndarray:
    """
    M[y, j] = sum over d in orbit j of zeta_n^{<d,y>}, an integer.

    For d of order l the orbit is {i*d : i a unit mod l}, so the entry is the
    Ramanujan sum c_l(<d,y> * l / n).
    """
    if spec.is_trivial:
        table = np.ones((1, 1), dtype=np.int64)
        table.setflags(write=False)
        return table
    _, orbits = orbit_partition(spec)
    n = spec.exponent
    table = np.zeros((spec.order, len(orbits)), dtype=np.int64)
    for j, orbit in enumerate(orbits):
        d = orbit[0]
        l = int(spec.element_orders[d])
        lookup = np.array([ramanujan_sum(l, e) for e in range(l)], dtype=np.int64)
        scaled = (spec.inner_row(d) * l) // n
        table[:, j] = lookup[scaled % l]
    table.setflags(write=False)
    logger.debug(f"Orbit character table for {spec.name}: {table.shape}")
    return table


def orbit_constancy_witness(spec: GroupSpec, values: np.ndarray) -> Optional[Tuple[int, int]]:
    """None if values are constant on every orbit, else (y, i*y) differing."""
    orbit_id, orbits = orbit_partition(spec)
    reps = np.array([o[0] for o in orbits], dtype=np.int64)
    rep_values = np.asarray(values)[reps][orbit_id]
    bad = np.flatnonzero(np.asarray(values) != rep_values)
    if len(bad) == 0:
        return None
    y = int(bad[0])
    return int(reps[orbit_id[y]]), y


def is_orbit_constant(spec: GroupSpec, values: np.ndarray) -> bool:
    return orbit_constancy_witness(spec, values) is None


def orbit_values(spec: GroupSpec, values: np.ndarray) -> np.ndarray:
    """Value on each orbit (taken at the smallest member)."""
    _, orbits = orbit_partition(spec)
    return np.asarray(values, dtype=np.int64)[[o[0] for o in orbits]]


def norm_spectrum(a: GroupMultiset) -> List[NormValue]:
    """|chi_y(A)|^2 for every y, in index order."""
    spec = a.spec
    nu = convolve(a, power_map(a, -1)).coeffs
    if is_orbit_constant(spec, nu):
        values = orbit_character_table(spec) @ orbit_values(spec, nu)
        return [int(v) for v in values]
    return [char_norm_sq(a, y) for y in range(spec.order)]


# ===========================================
# FOURIER INVERSION AND SPECTRA
# ===========================================

def fourier_invert(spec: GroupSpec, values: Union[Mapping[int, Union[int, CyclotomicInt]], Sequence]) -> GroupMultiset:
    """
    Reconstruct A from its character sums: a_g = (1/|G|) sum_y chi_y(A) conj(chi_y(g)).

    Raises InfeasibleError when the reconstruction is not integral.
    """
    if isinstance(values, Mapping):
        values = [values[y] for y in range(spec.order)]
    if len(values) != spec.order:
        raise ValueError(f"Need {spec.order} character values, got {len(values)}")

    order = spec.order
    if all(isinstance(v, (int, np.integer)) for v in values):
        ints = np.array([int(v) for v in values], dtype=np.int64)
        if is_orbit_constant(spec, ints):
            totals = orbit_character_table(spec) @ orbit_values(spec, ints)
            return _divide_exact(spec, [int(t) for t in totals])
        values = [CyclotomicInt.integer(max(spec.exponent, 1), int(v)) for v in values]

    n = max(spec.exponent, 1)
    totals = []
    for g in range(order):
        row = spec.inner_row(g)
        acc = CyclotomicInt.zero(n)
        for y in range(order):
            acc = acc + values[y] * CyclotomicInt.zeta(n, -int(row[y]))
        value = acc.as_integer()
        if value is NOT_INTEGER:
            raise InfeasibleError(f"Inconsistent spectrum: coefficient at {spec.coords_of(g)} is not rational")
        totals.append(value)
    return _divide_exact(spec, totals)


def _divide_exact(spec: GroupSpec, totals: List[int]) -> GroupMultiset:
    coeffs = []
    for g, total in enumerate(totals):
        if total % spec.order:
            raise InfeasibleError(
                f"Inconsistent spectrum: coefficient at {spec.coords_of(g)} is {total}/{spec.order}")
        coeffs.append(total // spec.order)
    return GroupMultiset(spec, np.array(coeffs, dtype=np.int64))


@dataclass
class SpectrumReport:
    """Sorted character and difference spectra of a multiset."""
    character_spectrum: List[int]
    difference_spectrum: List[int]
    non_integral: List[int] = field(default_factory=list)

    @property
    def is_integral(self) -> bool:
        return not self.non_integral

    def character_multiplicities(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.character_spectrum).items()))

    def difference_multiplicities(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.difference_spectrum).items()))

    def to_dict(self) -> dict:
        return {
            'character_spectrum': self.character_spectrum,
            'difference_spectrum': self.difference_spectrum,
            'non_integral': self.non_integral,
        }


def spectra(a: GroupMultiset) -> SpectrumReport:
    norms = norm_spectrum(a)
    integral = sorted((v for v in norms if v is not NOT_INTEGER), reverse=True)
    flagged = [y for y, v in enumerate(norms) if v is NOT_INTEGER]
    if flagged:
        logger.debug(f"{len(flagged)} non-integral character norms on {a.spec.name}")
    differences = sorted((int(v) for v in difference_multiset(a).coeffs), reverse=True)
    return SpectrumReport(integral, differences, flagged)


def product_spectrum(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Multiset tensor of two spectra, sorted descending."""
    return sorted((int(x) * int(y) for x in a for y in b), reverse=True)
