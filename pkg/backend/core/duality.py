"""
Formal Duality Engine
=====================

Exact verification and structure theory for formally dual pairs S, T in a
finite abelian group G under the fixed identification y -> chi_y.

Provides:
1. verify_pair with a per-y integer ledger and the mirrored S <-> T check
2. Primitivity tests with witnesses (coset containment / union of cosets)
3. Dual spectrum reconstruction nu_T from S alone
4. Equivalence: canonical forms under translations and Aut(G), transform_pair
5. Even-set decompositions SS^(-1) = sum lambda_i H_i and the dual transform
6. Recognition of (m,n,k,lambda)-RDSs and Galois-ring GRDSs
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint

from core.abelian import (
    DEFAULT_AUTOMORPHISM_BOUND,
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SUBGROUP_BOUND,
    Automorphism,
    ElementSet,
    GroupSpec,
    Subgroup,
    adjoint_of,
    annihilator,
    cyclic_subgroups,
    enumerate_automorphisms,
    enumerate_subgroups,
    join,
    orbit_partition,
    product_group,
    trivial_subgroup,
    whole_group,
)
from core.algebra import GaloisRing
from core.cyclotomic import NOT_INTEGER
from core.exceptions import BoundExceededError, GroupMismatchError, InfeasibleError
from core.group_ring import (
    GroupMultiset,
    SpectrumReport,
    norm_spectrum,
    orbit_constancy_witness,
    orbit_values,
    spectra,
    weight_enumerator,
)

logger = logging.getLogger(__name__)


def _normalize(spec: GroupSpec, s: Sequence[int], label: str) -> ElementSet:
    if len(s) == 0:
        raise ValueError(f"{label} must be nonempty")
    return spec.normalize_set(s)


# ===========================================
# VERIFICATION
# ===========================================

@dataclass
class LedgerRow:
    """One y of the check |T| |chi_y(S)|^2 = |S|^2 nu_T(y); None marks a non-integral norm."""
    y: int
    lhs: Optional[int]
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {'y': self.y, 'lhs': self.lhs, 'rhs': self.rhs}


@dataclass
class PrimitivityResult:
    """Outcome of the primitive-subset test with witnesses."""
    primitive: bool
    coset_witness: Optional[int] = None
    union_witness: Optional[Subgroup] = None

    def to_dict(self, spec: GroupSpec) -> dict:
        return {
            'primitive': self.primitive,
            'coset_witness': list(spec.coords_of(self.coset_witness)) if self.coset_witness is not None else None,
            'union_witness': self.union_witness.to_dict() if self.union_witness is not None else None,
        }


@dataclass
class DualityCertificate:
    """Machine-checkable result of verify_pair."""
    group: GroupSpec
    s: ElementSet
    t: ElementSet
    verified: bool
    mirrored_verified: bool
    primitive: bool
    s_primitivity: PrimitivityResult
    t_primitivity: PrimitivityResult
    ledger: List[LedgerRow]
    mirrored_ledger: List[LedgerRow]
    s_spectra: SpectrumReport
    t_spectra: SpectrumReport
    failure_y: Optional[int] = None

    @property
    def consistent(self) -> bool:
        return self.verified == self.mirrored_verified

    def to_dict(self, include_ledger: bool = False) -> dict:
        spec = self.group
        data = {
            'group': spec.to_dict(),
            'S': [list(spec.coords_of(i)) for i in self.s],
            'T': [list(spec.coords_of(i)) for i in self.t],
            'verified': self.verified,
            'mirrored_verified': self.mirrored_verified,
            'primitive': self.primitive,
            'S_primitivity': self.s_primitivity.to_dict(spec),
            'T_primitivity': self.t_primitivity.to_dict(spec),
            'S_spectra': self.s_spectra.to_dict(),
            'T_spectra': self.t_spectra.to_dict(),
            'failure_y': list(spec.coords_of(self.failure_y)) if self.failure_y is not None else None,
        }
        if include_ledger:
            data['ledger'] = [row.to_dict() for row in self.ledger]
            data['mirrored_ledger'] = [row.to_dict() for row in self.mirrored_ledger]
        return data


def _ledger(norms_a: List, nu_b: np.ndarray, size_a: int, size_b: int) -> List[LedgerRow]:
    rows = []
    for y, (norm, nu) in enumerate(zip(norms_a, nu_b)):
        lhs = None if norm is NOT_INTEGER else size_b * int(norm)
        rows.append(LedgerRow(y, lhs, size_a * size_a * int(nu)))
    return rows


def verify_pair(s: Sequence[int], t: Sequence[int], spec: GroupSpec) -> DualityCertificate:
    """
    Check |T| |chi_y(S)|^2 = |S|^2 nu_T(y) for every y, and the mirrored
    |S| |chi_y(T)|^2 = |T|^2 nu_S(y), in exact integers.
    """
    s = _normalize(spec, s, "S")
    t = _normalize(spec, t, "T")
    ms, mt = GroupMultiset.from_set(spec, s), GroupMultiset.from_set(spec, t)

    norms_s, norms_t = norm_spectrum(ms), norm_spectrum(mt)
    nu_s, nu_t = weight_enumerator(spec, s), weight_enumerator(spec, t)

    ledger = _ledger(norms_s, nu_t, len(s), len(t))
    mirrored = _ledger(norms_t, nu_s, len(t), len(s))
    verified = all(row.holds for row in ledger)
    mirrored_verified = all(row.holds for row in mirrored)
    failure_y = next((row.y for row in ledger if not row.holds), None)

    if verified != mirrored_verified:
        logger.error(f"Mirrored duality check disagrees on {spec.name} for |S|={len(s)}, |T|={len(t)}")

    s_prim = _primitivity(spec, s, norms_s, nu_s)
    t_prim = _primitivity(spec, t, norms_t, nu_t)

    cert = DualityCertificate(
        group=spec, s=s, t=t,
        verified=verified and mirrored_verified,
        mirrored_verified=mirrored_verified,
        primitive=s_prim.primitive and t_prim.primitive,
        s_primitivity=s_prim, t_primitivity=t_prim,
        ledger=ledger, mirrored_ledger=mirrored,
        s_spectra=spectra(ms), t_spectra=spectra(mt),
        failure_y=failure_y,
    )
    if cert.verified:
        logger.debug(f"✓ Formally dual pair verified in {spec.name} (|S|={len(s)}, |T|={len(t)})")
    return cert


def _primitivity(spec: GroupSpec, s: ElementSet, norms: List, nu: np.ndarray) -> PrimitivityResult:
    k = len(s)
    coset = next((y for y in range(1, spec.order) if norms[y] is not NOT_INTEGER and norms[y] == k * k), None)
    stabilizer = [h for h in range(1, spec.order) if nu[h] == k]
    union = None
    if stabilizer:
        union = Subgroup(spec, tuple([0] + stabilizer), tuple(stabilizer[:1]))
    return PrimitivityResult(coset is None and union is None, coset, union)


def is_primitive_subset(s: Sequence[int], spec: GroupSpec) -> PrimitivityResult:
    """
    S is primitive iff no nonprincipal chi_y has |chi_y(S)|^2 = |S|^2 (S inside
    a coset of ker chi_y) and no h != 0 has S + h = S (S a union of cosets).
    """
    s = _normalize(spec, s, "S")
    ms = GroupMultiset.from_set(spec, s)
    return _primitivity(spec, s, norm_spectrum(ms), weight_enumerator(spec, s))


# ===========================================
# DUAL SPECTRUM
# ===========================================

@dataclass
class Infeasible:
    """No partner T with the requested size can exist."""
    reason: str
    y: Optional[int] = None

    def __bool__(self) -> bool:
        return False


def reconstruct_dual_spectrum(s: Sequence[int], tsize: int, spec: GroupSpec) -> Union[np.ndarray, Infeasible]:
    """nu_T(y) = |T| |chi_y(S)|^2 / |S|^2 for every y, or Infeasible."""
    s = _normalize(spec, s, "S")
    k = len(s)
    if k * tsize != spec.order:
        raise ValueError(f"|S| * |T| = {k * tsize} differs from |G| = {spec.order}")

    norms = norm_spectrum(GroupMultiset.from_set(spec, s))
    values = np.zeros(spec.order, dtype=np.int64)
    for y, norm in enumerate(norms):
        if norm is NOT_INTEGER:
            return Infeasible(f"|chi_y(S)|^2 is not an integer at {spec.coords_of(y)}", y)
        numerator = tsize * int(norm)
        if numerator % (k * k):
            return Infeasible(f"nu_T would be {numerator}/{k * k} at {spec.coords_of(y)}", y)
        values[y] = numerator // (k * k)
    if values[0] != tsize:
        return Infeasible(f"nu_T(0) = {values[0]} differs from |T| = {tsize}", 0)
    if int(values.sum()) != tsize * tsize:
        return Infeasible(f"sum of nu_T is {int(values.sum())}, expected {tsize * tsize}")
    return values


# ===========================================
# EQUIVALENCE
# ===========================================

@lru_cache(maxsize=64)
def automorphism_table(
    spec: GroupSpec,
    bound: int = DEFAULT_AUTOMORPHISM_BOUND,
    product_cap: int = DEFAULT_PRODUCT_CAP
) -> np.ndarray:
    """Permutation matrix of Aut(G), one row per automorphism."""
    autos = enumerate_automorphisms(spec, bound=bound, product_cap=product_cap)
    table = np.stack([a.permutation for a in autos]).astype(np.int64)
    table.setflags(write=False)
    logger.debug(f"Aut({spec.name}) tabulated: {table.shape[0]} automorphisms")
    return table


@dataclass
class CanonicalForm:
    """Lexicographically smallest member of {g + phi(S)}; exact=False means spectra only."""
    elements: ElementSet
    exact: bool
    spectra: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None

    @property
    def key(self) -> tuple:
        return (self.elements,) if self.exact else ('spectra',) + self.spectra


def canonical_form(
    s: Sequence[int],
    spec: GroupSpec,
    bound: int = DEFAULT_AUTOMORPHISM_BOUND,
    product_cap: int = DEFAULT_PRODUCT_CAP
) -> CanonicalForm:
    """
    The minimum contains 0, so only translations by -x for x in phi(S)
    need to be tried.
    """
    s = _normalize(spec, s, "S")
    try:
        perms = automorphism_table(spec, bound, product_cap)
    except BoundExceededError as e:
        logger.warning(f"⚠ Equivalence on {spec.name} falls back to spectra: {e}")
        report = spectra(GroupMultiset.from_set(spec, s))
        return CanonicalForm(s, False, (tuple(report.character_spectrum), tuple(report.difference_spectrum)))
    return CanonicalForm(_canonical_from_table(spec, s, perms), True)


def _canonical_from_table(spec: GroupSpec, s: ElementSet, perms: np.ndarray) -> ElementSet:
    images = perms[:, list(s)]
    candidates = []
    for j in range(images.shape[1]):
        shifted = spec.add_arrays(images, spec.negation[images[:, j]][:, None])
        candidates.append(np.sort(shifted, axis=1))
    stacked = np.concatenate(candidates, axis=0)
    order = np.lexsort(stacked.T[::-1])
    return tuple(int(i) for i in stacked[order[0]])


def equivalent(a: Sequence[int], b: Sequence[int], spec: GroupSpec) -> Optional[bool]:
    """True/False when decidable; None when only spectra could be compared and they agree."""
    ca, cb = canonical_form(a, spec), canonical_form(b, spec)
    if ca.exact and cb.exact:
        return ca.elements == cb.elements
    sa = spectra(GroupMultiset.from_set(spec, spec.normalize_set(a)))
    sb = spectra(GroupMultiset.from_set(spec, spec.normalize_set(b)))
    if (sa.character_spectrum, sa.difference_spectrum) != (sb.character_spectrum, sb.difference_spectrum):
        return False
    return None


def transform_pair(phi: Automorphism, s: Sequence[int], t: Sequence[int]) -> Tuple[ElementSet, ElementSet]:
    """(phi(S), (phi*)^(-1)(T))."""
    spec = phi.spec
    adjoint_inverse = adjoint_of(phi).inverse()
    return phi.apply_set(spec.normalize_set(s)), adjoint_inverse.apply_set(spec.normalize_set(t))


def translate_to_origin(s: Sequence[int], spec: GroupSpec) -> ElementSet:
    """Translate so that 0 is the smallest element (S - min S)."""
    s = spec.normalize_set(s)
    shift = spec.neg(s[0])
    return tuple(sorted(spec.add(x, shift) for x in s))


# ===========================================
# EVEN SETS
# ===========================================

@dataclass
class EvenDecomposition:
    """SS^(-1) = sum lambda_i H_i."""
    spec: GroupSpec
    terms: List[Tuple[Subgroup, int]]
    minimal: bool = True
    rank_lower_bound: int = 0

    @property
    def rank(self) -> int:
        return len(self.terms)

    @property
    def subgroups(self) -> List[Subgroup]:
        return [h for h, _ in self.terms]

    @property
    def coefficients(self) -> List[int]:
        return [lam for _, lam in self.terms]

    def multiset(self) -> GroupMultiset:
        coeffs = np.zeros(self.spec.order, dtype=np.int64)
        for h, lam in self.terms:
            coeffs[list(h.members)] += lam
        return GroupMultiset(self.spec, coeffs)

    @property
    def is_chain(self) -> bool:
        hs = sorted(self.subgroups, key=lambda h: h.size)
        return all(a.is_subgroup_of(b) for a, b in zip(hs, hs[1:]))

    def to_dict(self) -> dict:
        return {
            'rank': self.rank,
            'minimal': self.minimal,
            'rank_lower_bound': self.rank_lower_bound,
            'terms': [{'subgroup': h.to_dict(), 'coefficient': lam} for h, lam in self.terms],
        }


@dataclass
class NotEven:
    """nu_S differs at y and at another generator z of <y>."""
    y: int
    z: int

    def __bool__(self) -> bool:
        return False


def even_decomposition(
    s: Sequence[int],
    spec: GroupSpec,
    lattice_cap: int = 64,
    max_rank: int = 6,
    subset_budget: int = 2_000_000,
    subgroup_bound: int = DEFAULT_SUBGROUP_BOUND
) -> Union[EvenDecomposition, NotEven]:
    """
    nu_S is a combination of subgroups iff it is constant on orbits. The
    minimal rank is found by trying r = 1, 2, ... subgroups; past the caps
    the cyclic Moebius decomposition is returned with minimal=False.
    """
    s = _normalize(spec, s, "S")
    nu = weight_enumerator(spec, s)
    witness = orbit_constancy_witness(spec, nu)
    if witness is not None:
        return NotEven(*witness)

    nu_orbit = orbit_values(spec, nu)
    orbit_id, orbits = orbit_partition(spec)

    try:
        lattice = enumerate_subgroups(spec, subgroup_bound)
    except BoundExceededError:
        lattice = ()
    if not lattice or len(lattice) > lattice_cap:
        logger.debug(f"Lattice of {spec.name} exceeds cap {lattice_cap}; using cyclic decomposition")
        return _moebius_decomposition(spec, nu_orbit, lower_bound=1)

    reps = [o[0] for o in orbits]
    membership = np.array([[h.contains(r) for h in lattice] for r in reps], dtype=bool)
    target_support = nu_orbit != 0
    cover = [int(sum(1 << i for i in np.flatnonzero(membership[:, j]))) for j in range(len(lattice))]
    needed = int(sum(1 << i for i in np.flatnonzero(target_support)))

    examined = 0
    for r in range(1, max_rank + 1):
        best = None
        for combo in combinations(range(len(lattice)), r):
            examined += 1
            if examined > subset_budget:
                logger.warning(f"⚠ Even decomposition budget exhausted on {spec.name} at rank {r}")
                return _moebius_decomposition(spec, nu_orbit, lower_bound=r)
            covered = 0
            for j in combo:
                covered |= cover[j]
            if covered & needed != needed:
                continue
            lam = _solve_combo(membership[:, list(combo)], nu_orbit)
            if lam is None:
                continue
            key = (tuple(sorted(lattice[j].size for j in combo)), combo)
            if best is None or key < best[0]:
                best = (key, combo, lam)
        if best is not None:
            _, combo, lam = best
            terms = sorted(((lattice[j], int(l)) for j, l in zip(combo, lam)), key=lambda t: (t[0].size, t[0].members))
            return EvenDecomposition(spec, terms, True, r)

    return _moebius_decomposition(spec, nu_orbit, lower_bound=max_rank + 1)


def _solve_combo(matrix: np.ndarray, target: np.ndarray) -> Optional[np.ndarray]:
    a = matrix.astype(np.int64)
    # Orbits with equal membership signatures must carry equal values
    signatures = a @ (1 << np.arange(a.shape[1], dtype=np.int64))
    _, first, inverse = np.unique(signatures, return_index=True, return_inverse=True)
    if np.any(target[first][inverse] != target):
        return None
    if np.linalg.matrix_rank(a) < a.shape[1]:
        return None
    solution, *_ = np.linalg.lstsq(a.astype(float), target.astype(float), rcond=None)
    lam = np.rint(solution).astype(np.int64)
    if np.any(lam == 0) or not np.array_equal(a @ lam, target):
        return None
    return lam


def _moebius_decomposition(spec: GroupSpec, nu_orbit: np.ndarray, lower_bound: int) -> EvenDecomposition:
    """
    Orbits correspond to cyclic subgroups; g(D) = sum over cyclic C >= D of
    mu(|C|/|D|) nu(C) expresses nu as a combination of cyclic subgroups.
    """
    cyclics = cyclic_subgroups(spec)
    terms = []
    for d in cyclics:
        total = 0
        for j, c in enumerate(cyclics):
            if d.is_subgroup_of(c):
                total += _mobius(c.size // d.size) * int(nu_orbit[j])
        if total:
            terms.append((d, total))
    terms.sort(key=lambda t: (t[0].size, t[0].members))
    return EvenDecomposition(spec, terms, False, min(lower_bound, len(terms)))


def _mobius(m: int) -> int:
    exps = factorint(m)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def even_dual_transform(d: EvenDecomposition, gsize: int, ssize: int) -> GroupMultiset:
    """
    Predicted TT^(-1) = sum lambda~_i N~(H_i), lambda~_i = lambda_i |G| |H_i| / |S|^3.

    Individual lambda~_i may be fractional when the decomposition is not
    minimal; only a non-integral total is infeasible.
    """
    spec = d.spec
    if gsize != spec.order:
        raise GroupMismatchError(f"Decomposition lives in a group of order {spec.order}, not {gsize}")
    coeffs = [Fraction(0)] * spec.order
    denominator = ssize ** 3
    for h, lam in d.terms:
        weight = Fraction(lam * gsize * h.size, denominator)
        for y in annihilator(spec, h).members:
            coeffs[y] += weight
    bad = [y for y, c in enumerate(coeffs) if c.denominator != 1]
    if bad:
        raise InfeasibleError(
            f"Dual transform is non-integral at {spec.coords_of(bad[0])}: no partner of size {gsize // ssize}")
    return GroupMultiset(spec, np.array([int(c) for c in coeffs], dtype=np.int64))


def dual_coefficients(d: EvenDecomposition, gsize: int, ssize: int) -> List[Fraction]:
    return [Fraction(lam * gsize * h.size, ssize ** 3) for h, lam in d.terms]


def primitive_even_checks(d: EvenDecomposition, ssize: int) -> Dict[str, bool]:
    """Structural conditions every primitive formally dual set's decomposition meets."""
    spec = d.spec
    span = trivial_subgroup(spec)
    common = whole_group(spec)
    for h in d.subgroups:
        span = join(span, h)
        common = Subgroup(spec, tuple(sorted(set(common.members) & set(h.members))), ())
    return {
        'generate_group': span.size == spec.order,
        'trivial_intersection': common.size == 1,
        'coefficient_sum': sum(d.coefficients) == ssize,
        'weighted_sum': sum(lam * h.size for h, lam in d.terms) == ssize * ssize,
    }


def chain_checks(d: EvenDecomposition, ssize: int) -> Optional[Dict[str, bool]]:
    """For a chain H_1 < ... < H_r: lambda_1 = |S| with H_1 = {0}, and lambda_r = 1."""
    if not d.is_chain or not d.terms:
        return None
    terms = sorted(d.terms, key=lambda t: t[0].size)
    return {
        'bottom_trivial': terms[0][0].size == 1,
        'bottom_coefficient': terms[0][1] == ssize,
        'top_coefficient': terms[-1][1] == 1,
    }


# ===========================================
# RELATIVE DIFFERENCE SETS
# ===========================================

@dataclass
class RdsParameters:
    """(m, n, k, lambda)-RDS relative to a forbidden subgroup N."""
    m: int
    n: int
    k: int
    lam: int
    forbidden: Subgroup

    def to_dict(self) -> dict:
        return {'m': self.m, 'n': self.n, 'k': self.k, 'lambda': self.lam, 'forbidden': self.forbidden.to_dict()}


def is_rds(s: Sequence[int], spec: GroupSpec) -> Optional[RdsParameters]:
    """
    RR^(-1) = k + lambda (G - N). With lambda >= 1 the forbidden subgroup is
    forced: N = {0} together with the zeros of nu. N must be nontrivial;
    plain difference sets (N = {0}) are not reported.
    """
    s = _normalize(spec, s, "S")
    nu = weight_enumerator(spec, s)
    k = len(s)
    zeros = np.flatnonzero(nu == 0)
    outside = np.flatnonzero(nu[1:]) + 1
    if len(outside) == 0:
        return None
    lam = int(nu[outside[0]])
    if np.any(nu[outside] != lam):
        return None
    members = tuple(sorted([0] + [int(z) for z in zeros]))
    if len(members) == 1:
        return None
    n_set = set(members)
    for a in members:
        for b in members:
            if spec.sub(a, b) not in n_set:
                return None
    forbidden = Subgroup(spec, members, ())
    return RdsParameters(spec.order // len(members), len(members), k, lam, forbidden)


def _half_valuations(ring: GaloisRing, spec: GroupSpec) -> Tuple[np.ndarray, np.ndarray]:
    s = ring.s
    coords = spec.elements
    v_a = np.array([_coord_valuation(row[:s], ring) for row in coords])
    v_b = np.array([_coord_valuation(row[s:], ring) for row in coords])
    return v_a, v_b


def _coord_valuation(coords: np.ndarray, ring: GaloisRing) -> int:
    return ring.valuation(ring.element(tuple(int(c) for c in coords)))


def grds_spec(ring: GaloisRing) -> GroupSpec:
    return GroupSpec((ring.characteristic,) * (2 * ring.s))


def is_grds(s: Sequence[int], ring: GaloisRing, orientation: str = 'first', spec: Optional[GroupSpec] = None) -> bool:
    """
    first:  nu_S((a,b)) = p^{v(a) s} if v(a) <= v(b), else 0
    second: nu_T((a,b)) = p^{v(b) s} if v(a) >= v(b), else 0
    """
    expected_spec = grds_spec(ring)
    if spec is not None and spec != expected_spec:
        raise GroupMismatchError(f"{spec.name} is not the additive group of {ring.name} x {ring.name}")
    if orientation not in ('first', 'second'):
        raise ValueError(f"Unknown orientation {orientation!r}")
    spec = expected_spec
    nu = weight_enumerator(spec, spec.normalize_set(s))
    v_a, v_b = _half_valuations(ring, spec)
    p, rank = ring.p, ring.s
    if orientation == 'first':
        expected = np.where(v_a <= v_b, p ** (v_a * rank), 0)
    else:
        expected = np.where(v_a >= v_b, p ** (v_b * rank), 0)
    return bool(np.array_equal(nu, expected))


def grds_character_pattern(s: Sequence[int], ring: GaloisRing, orientation: str = 'first') -> bool:
    """
    Cross-check through character norms:
    first:  |chi_(a,b)(S)|^2 = p^{(t + v(b)) s} if v(a) >= v(b), else 0
    second: |chi_(a,b)(T)|^2 = p^{(t + v(a)) s} if v(a) <= v(b), else 0
    """
    spec = grds_spec(ring)
    norms = norm_spectrum(GroupMultiset.from_set(spec, spec.normalize_set(s)))
    if any(v is NOT_INTEGER for v in norms):
        return False
    values = np.array(norms, dtype=np.int64)
    v_a, v_b = _half_valuations(ring, spec)
    p, t, rank = ring.p, ring.t, ring.s
    if orientation == 'first':
        expected = np.where(v_a >= v_b, p ** ((t + v_b) * rank), 0)
    else:
        expected = np.where(v_a <= v_b, p ** ((t + v_a) * rank), 0)
    return bool(np.array_equal(values, expected))


def lift_pair(
    spec: GroupSpec,
    s: Sequence[int],
    t: Sequence[int],
    extension: GroupSpec
) -> Tuple[GroupSpec, ElementSet, ElementSet]:
    """
    Degenerate lifting to G = H x K: S x {0} and T x K, the preimage of T
    under restriction of characters to H x {0}.
    """
    lifted = product_group(spec, extension)
    k = extension.order
    s_lift = tuple(sorted(x * k for x in spec.normalize_set(s)))
    t_lift = tuple(sorted(y * k + z for y in spec.normalize_set(t) for z in range(k)))
    return lifted, s_lift, t_lift
