"""
Formally Dual Pair Constructions
================================

Generators for the known families of formally dual pairs. Every builder
returns a DualPair (G, S, T) whose coordinates follow the additive
embeddings of core.algebra, so outputs are reproducible element for element.

Provides:
1. Trivial, TITO, subgroup and explicit small pairs
2. Planar-function RDS pairs in Z_p^{2m}
3. Teichmueller RDS pairs in Z_4^m
4. Square GRDS pairs over Galois rings GR(p^t, s), with their chain decomposition
5. Skew Hadamard pairs from a difference set and its dual set
6. Products, and the product mixes that separate equivalence classes
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint

from core.abelian import (
    ElementSet,
    GroupSpec,
    Subgroup,
    annihilator,
    product_group,
    product_index,
    subgroup_generated,
)
from core.algebra import FiniteField, GaloisRing, RingElement
from core.cyclotomic import NOT_INTEGER, imag_sign
from core.duality import DualityCertificate, EvenDecomposition, grds_spec, verify_pair
from core.exceptions import ConstructionError
from core.group_ring import GroupMultiset, character_sum, weight_enumerator

logger = logging.getLogger(__name__)

PlanarMap = Union[Callable[[RingElement], RingElement], Mapping[int, int], Sequence[int]]


class Family(str, Enum):
    """Construction family tags"""
    TRIVIAL = "trivial"
    TITO = "tito"
    SUBGROUP = "subgroup"
    RDS_PLANAR = "rds_planar"
    TEICHMULLER = "teichmuller"
    GRDS_SQUARE = "grds_square"
    SKEW_HADAMARD = "skew_hadamard"
    PRODUCT = "product"
    EXPLICIT = "explicit"


@dataclass
class DualPair:
    """A candidate formally dual pair together with the family that produced it."""
    group: GroupSpec
    s: ElementSet
    t: ElementSet
    family: Family
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.s = self.group.normalize_set(self.s)
        self.t = self.group.normalize_set(self.t)
        self._validate_inputs()

    def _validate_inputs(self):
        if not self.s or not self.t:
            raise ValueError("Both sets of a pair must be nonempty")

    def verify(self) -> DualityCertificate:
        return verify_pair(self.s, self.t, self.group)

    def swapped(self) -> 'DualPair':
        return DualPair(self.group, self.t, self.s, self.family, dict(self.params))

    def to_dict(self) -> dict:
        spec = self.group
        return {
            'family': self.family.value,
            'params': self.params,
            'group': spec.to_dict(),
            'S': [list(spec.coords_of(i)) for i in self.s],
            'T': [list(spec.coords_of(i)) for i in self.t],
        }


# ===========================================
# SMALL PAIRS
# ===========================================

def build_trivial() -> DualPair:
    return DualPair(GroupSpec(()), (0,), (0,), Family.TRIVIAL)


def build_tito() -> DualPair:
    """S = T = {0, 1} in Z_4."""
    return DualPair(GroupSpec((4,)), (0, 1), (0, 1), Family.TITO)


def build_trivial_and_tito() -> List[DualPair]:
    return [build_trivial(), build_tito()]


def build_subgroup_pair(spec: GroupSpec, h: Subgroup) -> DualPair:
    """S = H and T = N~(H); never primitive in a nontrivial group."""
    if h.spec != spec:
        raise ConstructionError(f"Subgroup lives in {h.spec.name}, not {spec.name}")
    return DualPair(spec, h.members, annihilator(spec, h).members, Family.SUBGROUP,
                    {'subgroup': [list(spec.coords_of(i)) for i in h.members]})


def unequal_sizes_pair() -> DualPair:
    """The primitive pair with |S| = 4, |T| = 8 in Z_2 x Z_4 x Z_4."""
    spec = GroupSpec((2, 4, 4))
    s = [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 1, 1)]
    t = [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 3), (1, 3, 0), (1, 3, 3)]
    return DualPair(spec, spec.normalize_set(s), spec.normalize_set(t), Family.EXPLICIT, {'name': 'unequal-4-8'})


# ===========================================
# RELATIVE DIFFERENCE SET PAIRS
# ===========================================

def _graph(field_or_ring: GaloisRing, xs: Sequence[int], ys: Sequence[int]) -> ElementSet:
    """Indices of (x_j, y_j) in R x R."""
    size = field_or_ring.size
    return tuple(sorted(int(x) * size + int(y) for x, y in zip(xs, ys)))


def build_rds_pair(p: int, m: int, f1: Optional[PlanarMap] = None, f2: Optional[PlanarMap] = None) -> DualPair:
    """
    S = {(x, f1(x))} and T = {(f2(x), x)} in F_{p^m} x F_{p^m} = Z_p^{2m}.

    Both are (p^m, p^m, p^m, 1)-RDSs, relative to {0} x H and H x {0}.
    Planar maps default to squaring and may be given as callables or as
    lookup tables on embedding indices.
    """
    if p == 2:
        raise ConstructionError("Planar functions do not exist in characteristic 2")
    if m < 1:
        raise ConstructionError(f"Degree must be >= 1, got {m}")
    try:
        fld = FiniteField(p, m)
    except ValueError as e:
        raise ConstructionError(str(e)) from e

    square = fld.square_map()
    tables = []
    for label, f in (('f1', f1), ('f2', f2)):
        table = [square[i] for i in range(fld.size)] if f is None else fld.as_table(f)
        if f is not None and not fld.is_planar(table):
            raise ConstructionError(f"{label} is not planar on {fld.name}")
        tables.append(table)

    xs = list(range(fld.size))
    spec = GroupSpec((p,) * (2 * m))
    s = _graph(fld, xs, tables[0])
    t = _graph(fld, tables[1], xs)
    params = {'p': p, 'm': m, 'planar': 'square' if f1 is None and f2 is None else 'custom'}
    return DualPair(spec, s, t, Family.RDS_PLANAR, params)


def build_teichmuller_pair(m: int) -> DualPair:
    """S = T = Teichmueller set of GR(4, m) inside Z_4^m."""
    if m < 1:
        raise ConstructionError(f"Rank must be >= 1, got {m}")
    ring = GaloisRing(2, 2, m)
    members = tuple(a.index for a in ring.teichmuller_set())
    return DualPair(ring.embedding.spec, members, members, Family.TEICHMULLER, {'m': m})


# ===========================================
# GALOIS RING PAIRS
# ===========================================

def build_grds_square_pair(p: int, t: int, s: int) -> DualPair:
    """S = {(x, x^2)} and T = {(x^2, x)} in GR(p^t, s) x GR(p^t, s)."""
    if p == 2:
        raise ConstructionError("The square construction fails for p = 2")
    try:
        ring = GaloisRing(p, t, s)
    except ValueError as e:
        raise ConstructionError(str(e)) from e
    xs = [a.index for a in ring.elements]
    squares = [ring.mul(a, a).index for a in ring.elements]
    return DualPair(grds_spec(ring), _graph(ring, xs, squares), _graph(ring, squares, xs),
                    Family.GRDS_SQUARE, {'p': p, 't': t, 's': s})


def grds_chain_decomposition(ring: GaloisRing) -> EvenDecomposition:
    """
    nu_S for the first-orientation GRDS as a chain of 2t+1 subgroups:
    sum_{i<=t} p^{is} (p^i)x(p^i) - sum_{i<t} p^{is} (p^{i+1})x(p^i).
    """
    spec = grds_spec(ring)
    p, t, rank = ring.p, ring.t, ring.s
    coords = spec.elements
    first, second = coords[:, :rank], coords[:, rank:]

    def layer(i: int, j: int) -> Subgroup:
        inside = np.all(first % p ** i == 0, axis=1) & np.all(second % p ** j == 0, axis=1)
        return Subgroup(spec, tuple(int(k) for k in np.flatnonzero(inside)), ())

    terms = [(layer(i, i), p ** (i * rank)) for i in range(t + 1)]
    terms += [(layer(i + 1, i), -p ** (i * rank)) for i in range(t)]
    terms.sort(key=lambda term: (term[0].size, term[0].members))
    return EvenDecomposition(spec, terms, True, 2 * t + 1)


# ===========================================
# SKEW HADAMARD PAIRS
# ===========================================

def _prime_power(q: int) -> Tuple[int, int]:
    exps = factorint(q)
    if len(exps) != 1:
        raise ConstructionError(f"{q} is not a prime power")
    (p, m), = exps.items()
    return p, m


def is_skew_hadamard(d: Sequence[int], fld: FiniteField) -> bool:
    """{0}, D, -D partition the group and D is a (q, (q-1)/2, (q-3)/4) difference set."""
    q = fld.size
    spec = fld.embedding.spec
    d = spec.normalize_set(d)
    negated = {spec.neg(x) for x in d}
    if len(d) != (q - 1) // 2 or 0 in d or negated & set(d):
        return False
    nu = weight_enumerator(spec, d)
    return bool(np.all(nu[1:] == (q - 3) // 4))


def dual_set(d: Sequence[int], fld: FiniteField) -> ElementSet:
    """
    D* = {a : chi_a(D) = (-1 + sqrt(-q)) / 2}.

    Every chi_a(D), a != 0, is a root of z^2 + z + (q+1)/4; the two roots are
    told apart by the certified sign of the imaginary part under
    zeta_p = exp(2 pi i / p).
    """
    q = fld.size
    if q % 4 != 3:
        raise ConstructionError(f"Skew Hadamard difference sets need q = 3 mod 4, got {q}")
    if not is_skew_hadamard(d, fld):
        raise ConstructionError(f"Set is not a skew Hadamard difference set in {fld.name}")

    spec = fld.embedding.spec
    multiset = GroupMultiset.from_set(spec, spec.normalize_set(d))
    members = []
    for a in range(1, q):
        value = character_sum(multiset, a)
        trace_value = (value + value.conjugate()).as_integer()
        norm_value = value.norm_sq().as_integer()
        if trace_value is NOT_INTEGER or norm_value is NOT_INTEGER or trace_value != -1 or norm_value != (q + 1) // 4:
            raise ConstructionError(f"Character value at {spec.coords_of(a)} is not (-1 +- sqrt(-{q}))/2")
        if imag_sign(value) > 0:
            members.append(a)

    result = tuple(members)
    if not is_skew_hadamard(result, fld):
        raise ConstructionError("Dual set is not skew Hadamard")
    return result


def build_skew_hadamard_pair(
    q: int,
    alpha: int = 1,
    beta: int = 2,
    d: Optional[Sequence[int]] = None
) -> DualPair:
    """
    S = (0,0) + {(x, a x) : x in D} + {(x, b x) : x in -D}
    T = (0,0) + {(a/(a-b) x, 1/(b-a) x) : x in D*} + {(b/(a-b) x, 1/(b-a) x) : x in -D*}

    with a = alpha, b = beta scalars in Z_p acting on F_q = Z_p^m.
    """
    if q % 4 != 3:
        raise ConstructionError(f"q must be 3 mod 4, got {q}")
    p, m = _prime_power(q)
    alpha, beta = alpha % p, beta % p
    if alpha == 0 or beta == 0 or alpha == beta:
        raise ConstructionError(f"alpha and beta must be distinct and nonzero mod {p}, got {alpha}, {beta}")

    fld = FiniteField(p, m)
    spec = fld.embedding.spec
    if d is None:
        d = tuple(a.index for a in fld.quadratic_residues())
    d = spec.normalize_set(d)
    d_star = dual_set(d, fld)

    inv = pow((alpha - beta) % p, -1, p)
    c_plus, c_minus, c_second = alpha * inv % p, beta * inv % p, (-inv) % p
    group = GroupSpec((p,) * (2 * m))
    params = {'q': q, 'alpha': alpha, 'beta': beta}

    def element(x: int) -> RingElement:
        return fld.element_at(x)

    def negate(xs: Sequence[int]) -> List[int]:
        return [spec.neg(x) for x in xs]

    def point(u: RingElement, v: RingElement) -> int:
        return product_index(spec, spec, u.index, v.index)

    s = [0]
    s += [point(element(x), fld.scalar(alpha, element(x))) for x in d]
    s += [point(element(x), fld.scalar(beta, element(x))) for x in negate(d)]

    t = [0]
    t += [point(fld.scalar(c_plus, element(x)), fld.scalar(c_second, element(x))) for x in d_star]
    t += [point(fld.scalar(c_minus, element(x)), fld.scalar(c_second, element(x))) for x in negate(d_star)]

    pair = DualPair(group, tuple(s), tuple(t), Family.SKEW_HADAMARD, params)
    if not pair.verify().verified:
        raise ConstructionError(f"Skew Hadamard construction did not verify for q={q}, alpha={alpha}, beta={beta}")
    return pair


# ===========================================
# PRODUCTS
# ===========================================

def build_product_pair(first: DualPair, second: DualPair) -> DualPair:
    """(G1 x G2, S1 x S2, T1 x T2); both operands must verify."""
    for label, pair in (('first', first), ('second', second)):
        if not pair.verify().verified:
            raise ConstructionError(f"The {label} operand ({pair.family.value}) is not a formally dual pair")
    a, b = first.group, second.group
    s = tuple(product_index(a, b, i, j) for i in first.s for j in second.s)
    t = tuple(product_index(a, b, i, j) for i in first.t for j in second.t)
    params = {'factors': [first.to_dict(), second.to_dict()]}
    return DualPair(product_group(a, b), s, t, Family.PRODUCT, params)


def _product_of(pairs: Sequence[DualPair]) -> DualPair:
    return reduce(build_product_pair, pairs)


def product_mixes(m: int) -> List[DualPair]:
    """
    For m1 = 0..m: m1 copies of TITO times the Teichmueller pair of GR(4, m - m1).

    The m2 = 1 block is TITO itself, so the mixes with m2 = 0 and m2 = 1
    coincide; all other choices are pairwise inequivalent.
    """
    if m < 1:
        raise ConstructionError(f"m must be >= 1, got {m}")
    mixes = []
    for m1 in range(m + 1):
        m2 = m - m1
        factors = [build_tito()] * m1
        if m2:
            factors.append(build_teichmuller_pair(m2))
        pair = _product_of(factors)
        pair.params = {'m': m, 'm1': m1, 'm2': m2}
        mixes.append(pair)
    return mixes


def mix_spectrum_values(m: int, m1: int) -> List[int]:
    """Distinct character norm values of the (m1, m - m1) mix, descending."""
    m2 = m - m1
    values = {0}
    for s in range(m1 + 1):
        values.add(2 ** (m + s))
        values.add(2 ** (m + m2 + s))
    return sorted(values, reverse=True)


def mix_zero_multiplicity(m: int, m1: int) -> int:
    m2 = m - m1
    return 4 ** m - 3 ** m1 * (4 ** m2 - 2 ** m2 + 1)


def rds_product_mixes(p: int, m: int) -> List[DualPair]:
    """RDS pair of Z_p^{2 m1} times RDS pair of Z_p^{2 m2} for m1 <= m2, m1 + m2 = m."""
    if m < 1:
        raise ConstructionError(f"m must be >= 1, got {m}")
    mixes = []
    for m1 in range(m // 2 + 1):
        m2 = m - m1
        first = build_rds_pair(p, m1) if m1 else build_trivial()
        pair = build_product_pair(first, build_rds_pair(p, m2))
        pair.params = {'p': p, 'm': m, 'm1': m1, 'm2': m2}
        mixes.append(pair)
    return mixes


def rds_mix_spectrum_values(p: int, m: int, m1: int) -> List[int]:
    m2 = m - m1
    return sorted({0, p ** m, p ** (m + m1), p ** (m + m2), p ** (2 * m)}, reverse=True)


# ===========================================
# DISPATCH
# ===========================================

@dataclass
class ConstructionRequest:
    """A family tag with its parameters, as accepted by build()."""
    family: Family
    params: Dict[str, Any] = field(default_factory=dict)

    _REQUIRED = {
        Family.TRIVIAL: (),
        Family.TITO: (),
        Family.SUBGROUP: ('group', 'generators'),
        Family.RDS_PLANAR: ('p', 'm'),
        Family.TEICHMULLER: ('m',),
        Family.GRDS_SQUARE: ('p', 't', 's'),
        Family.SKEW_HADAMARD: ('q',),
        Family.PRODUCT: ('operands',),
        Family.EXPLICIT: (),
    }

    def __post_init__(self):
        self.family = Family(self.family)
        self._validate_inputs()

    def _validate_inputs(self):
        missing = [k for k in self._REQUIRED[self.family] if k not in self.params]
        if missing:
            raise ValueError(f"Family {self.family.value} needs parameters {missing}")
        if self.family is Family.PRODUCT and len(self.params['operands']) < 2:
            raise ValueError("A product needs at least two operands")


def build(request: ConstructionRequest) -> DualPair:
    """Run the builder selected by the request's family."""
    params = request.params
    family = request.family
    if family is Family.TRIVIAL:
        return build_trivial()
    if family is Family.TITO:
        return build_tito()
    if family is Family.SUBGROUP:
        spec = params['group'] if isinstance(params['group'], GroupSpec) else GroupSpec(tuple(params['group']))
        gens = spec.normalize_set(params['generators']) if params['generators'] else ()
        return build_subgroup_pair(spec, subgroup_generated(spec, gens))
    if family is Family.RDS_PLANAR:
        return build_rds_pair(int(params['p']), int(params['m']), params.get('f1'), params.get('f2'))
    if family is Family.TEICHMULLER:
        return build_teichmuller_pair(int(params['m']))
    if family is Family.GRDS_SQUARE:
        return build_grds_square_pair(int(params['p']), int(params['t']), int(params['s']))
    if family is Family.SKEW_HADAMARD:
        return build_skew_hadamard_pair(int(params['q']), int(params.get('alpha', 1)),
                                        int(params.get('beta', 2)), params.get('D'))
    if family is Family.PRODUCT:
        operands = [op if isinstance(op, DualPair) else build(op) for op in params['operands']]
        return _product_of(operands)
    return unequal_sizes_pair()


def construction_battery() -> List[DualPair]:
    """The standard set of constructions every release must verify as primitive."""
    pairs = build_trivial_and_tito() + [unequal_sizes_pair()]
    pairs += [build_rds_pair(p, m) for p, m in ((3, 1), (5, 1), (7, 1), (3, 2))]
    pairs += [build_teichmuller_pair(m) for m in (1, 2, 3)]
    pairs += [build_grds_square_pair(p, t, s) for p, t, s in ((3, 2, 1), (5, 2, 1), (3, 1, 2), (3, 3, 1))]
    pairs += [build_skew_hadamard_pair(q, 1, 2) for q in (7, 11, 19, 27)]
    logger.info(f"✓ Construction battery assembled: {len(pairs)} pairs")
    return pairs
