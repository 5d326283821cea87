"""
Galois Rings and Finite Fields
==============================

GR(p^t, s) = Z_{p^t}[x] / (f(x)) with f monic of degree s and irreducible
modulo p. Finite fields are the case t = 1.

Provides:
1. find_irreducible(p, m): deterministic smallest monic irreducible
2. GaloisRing / FiniteField with RingElement arithmetic
3. Valuations, the Teichmueller set and p-adic digit expansions
4. Frobenius automorphism and trace to Z_{p^t}
5. Additive embedding into Z_{p^t}^s (polynomial coefficients, constant first)
6. Quadratic residues and planarity tests over finite fields
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, Symbol, isprime

from core.abelian import GroupSpec

logger = logging.getLogger(__name__)

_X = Symbol('x')


@lru_cache(maxsize=None)
def find_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible of degree m over Z_p,
    ordered by (c_{m-1}, ..., c_0). Returned constant term first.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError(f"Degree must be >= 1, got {m}")
    if m == 1:
        return (0, 1)
    for lower in product(range(p), repeat=m):
        if Poly([1, *lower], _X, modulus=p).is_irreducible:
            return tuple(reversed(lower)) + (1,)
    raise RuntimeError(f"No irreducible polynomial of degree {m} over Z_{p}")


def _is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    if len(coeffs) == 2:
        return True
    return Poly(list(reversed([c % p for c in coeffs])), _X, modulus=p).is_irreducible


@dataclass(frozen=True)
class RingElement:
    """Polynomial residue of degree < s, coefficients mod p^t, constant first."""
    ring: 'GaloisRing'
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        q = self.ring.characteristic
        coeffs = tuple(int(c) % q for c in self.coeffs)
        if len(coeffs) != self.ring.s:
            raise ValueError(f"Expected {self.ring.s} coefficients, got {len(coeffs)}")
        object.__setattr__(self, 'coeffs', coeffs)

    def _lift(self, other) -> 'RingElement':
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise ValueError("Elements of different rings")
            return other
        return self.ring.from_int(int(other))

    def __add__(self, other) -> 'RingElement':
        other = self._lift(other)
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> 'RingElement':
        return RingElement(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> 'RingElement':
        return self + (-self._lift(other))

    def __rsub__(self, other) -> 'RingElement':
        return self._lift(other) - self

    def __mul__(self, other) -> 'RingElement':
        return self.ring.mul(self, self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'RingElement':
        return self.ring.power(self, k)

    @property
    def index(self) -> int:
        return self.ring.index_of(self)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        return self.ring.valuation(self)

    def __repr__(self) -> str:
        terms = [f"{c}x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class GaloisRing:
    """GR(p^t, s); the default modulus is the coefficientwise lift of find_irreducible(p, s)."""
    p: int
    t: int
    s: int
    modulus: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.modulus is None:
            object.__setattr__(self, 'modulus', find_irreducible(self.p, self.s))
        object.__setattr__(self, 'modulus', tuple(int(c) for c in self.modulus))
        self._validate_inputs()

    def _validate_inputs(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.t < 1 or self.s < 1:
            raise ValueError(f"Need t >= 1 and s >= 1, got t={self.t}, s={self.s}")
        if len(self.modulus) != self.s + 1 or self.modulus[-1] != 1:
            raise ValueError(f"Modulus must be monic of degree {self.s} (constant term first)")
        if not _is_irreducible_mod_p(self.modulus, self.p):
            raise ValueError(f"Modulus {self.modulus} is not irreducible modulo {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p ** self.t

    @property
    def size(self) -> int:
        return self.p ** (self.t * self.s)

    @property
    def name(self) -> str:
        return f"GR({self.characteristic},{self.s})"

    # -- elements ---------------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> RingElement:
        return RingElement(self, tuple(coeffs))

    def from_int(self, a: int) -> RingElement:
        return RingElement(self, (a,) + (0,) * (self.s - 1))

    @property
    def zero(self) -> RingElement:
        return self.from_int(0)

    @property
    def one(self) -> RingElement:
        return self.from_int(1)

    @cached_property
    def embedding(self) -> 'AdditiveEmbedding':
        return AdditiveEmbedding(self, GroupSpec((self.characteristic,) * self.s))

    def index_of(self, a: RingElement) -> int:
        return self.embedding.spec.index_of(a.coeffs)

    def element_at(self, index: int) -> RingElement:
        return RingElement(self, self.embedding.spec.coords_of(index))

    @cached_property
    def elements(self) -> Tuple[RingElement, ...]:
        """All elements in embedding index order."""
        return tuple(self.element_at(i) for i in range(self.size))

    # -- arithmetic -------------------------------------------------------

    @cached_property
    def _modulus_array(self) -> np.ndarray:
        return np.array(self.modulus, dtype=np.int64)

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        q = self.characteristic
        c = np.convolve(np.array(a.coeffs, dtype=np.int64), np.array(b.coeffs, dtype=np.int64)) % q
        # x^s = -(f_0 + ... + f_{s-1} x^{s-1}); fold from the top degree down
        for k in range(len(c) - 1, self.s - 1, -1):
            lead = c[k]
            if lead:
                c[k - self.s:k + 1] = (c[k - self.s:k + 1] - lead * self._modulus_array) % q
        return RingElement(self, tuple(int(x) for x in c[:self.s]))

    def power(self, a: RingElement, k: int) -> RingElement:
        if k < 0:
            raise ValueError("Negative exponents are not supported")
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def valuation(self, a: RingElement) -> int:
        """Largest i <= t with a in (p^i); v(0) = t."""
        v = self.t
        for c in a.coeffs:
            if c:
                i = 0
                while c % self.p == 0:
                    c //= self.p
                    i += 1
                v = min(v, i)
        return v

    def reduce_mod_p(self, a: RingElement) -> Tuple[int, ...]:
        return tuple(c % self.p for c in a.coeffs)

    # -- Teichmueller set -------------------------------------------------

    @cached_property
    def _teichmuller_by_residue(self) -> Dict[Tuple[int, ...], RingElement]:
        """Teichmueller representative of each residue class mod p."""
        field_size = self.p ** self.s
        cap = self.t * self.s + 4
        table: Dict[Tuple[int, ...], RingElement] = {}
        for residue in product(range(self.p), repeat=self.s):
            a = self.element(residue)
            for _ in range(cap):
                nxt = self.power(a, field_size)
                if nxt == a:
                    break
                a = nxt
            else:
                raise RuntimeError(f"Teichmueller iteration did not stabilize in {self.name} after {cap} steps")
            table[residue] = a
        return table

    def teichmuller_set(self) -> List[RingElement]:
        """The p^s solutions of x^{p^s} = x, in embedding index order."""
        return sorted(self._teichmuller_by_residue.values(), key=lambda a: a.index)

    def teichmuller_digits(self, a: RingElement) -> List[RingElement]:
        """x = sum p^i x_i with every x_i in the Teichmueller set."""
        digits = []
        r = a
        for _ in range(self.t):
            d = self._teichmuller_by_residue[self.reduce_mod_p(r)]
            digits.append(d)
            diff = (r - d).coeffs
            r = RingElement(self, tuple(c // self.p for c in diff))
        return digits

    # -- Frobenius and trace ----------------------------------------------

    def frobenius(self, a: RingElement) -> RingElement:
        """sigma(sum p^i x_i) = sum p^i x_i^p."""
        result = self.zero
        for i, d in enumerate(self.teichmuller_digits(a)):
            result = result + self.power(d, self.p) * (self.p ** i)
        return result

    def trace(self, a: RingElement) -> int:
        """Tr(a) = sum_{i<s} sigma^i(a), an element of Z_{p^t}."""
        total = self.zero
        current = a
        for _ in range(self.s):
            total = total + current
            current = self.frobenius(current)
        if any(total.coeffs[1:]):
            raise ValueError(f"Trace of {a} in {self.name} is not in the base ring")
        return total.coeffs[0]


class FiniteField(GaloisRing):
    """F_{p^m} as GR(p, m)."""

    def __init__(self, p: int, m: int, modulus: Optional[Tuple[int, ...]] = None):
        super().__init__(p=p, t=1, s=m, modulus=modulus)

    @property
    def m(self) -> int:
        return self.s

    @property
    def name(self) -> str:
        return f"F_{self.size}"

    def inverse(self, a: RingElement) -> RingElement:
        if a.is_zero:
            raise ZeroDivisionError("Zero has no inverse")
        return self.power(a, self.size - 2)

    def scalar(self, c: int, a: RingElement) -> RingElement:
        """Multiplication by c in the prime field Z_p."""
        return RingElement(self, tuple(c * x for x in a.coeffs))

    def quadratic_residues(self) -> List[RingElement]:
        """Nonzero squares, in embedding index order."""
        if self.p == 2:
            raise ValueError("Quadratic residues are only defined here for odd characteristic")
        squares = {self.mul(a, a) for a in self.elements if not a.is_zero}
        return sorted(squares, key=lambda a: a.index)

    def square_map(self) -> Dict[int, int]:
        return {a.index: self.mul(a, a).index for a in self.elements}

    def is_planar(self, f: Union[Callable[[RingElement], RingElement], Mapping[int, int], Sequence[int]]) -> bool:
        """True iff x -> f(a+x) - f(x) is a bijection for every a != 0."""
        table = self.as_table(f)
        for a in self.elements:
            if a.is_zero:
                continue
            images = set()
            for x in self.elements:
                images.add((self.element_at(table[(a + x).index]) - self.element_at(table[x.index])).index)
            if len(images) != self.size:
                return False
        return True

    def as_table(self, f) -> List[int]:
        if callable(f):
            return [f(a).index for a in self.elements]
        if isinstance(f, Mapping):
            return [int(f[i]) for i in range(self.size)]
        table = [int(v) for v in f]
        if len(table) != self.size:
            raise ValueError(f"Planar table needs {self.size} entries, got {len(table)}")
        return table


@dataclass(frozen=True)
class AdditiveEmbedding:
    """(R, +) as Z_{p^t}^s through polynomial coefficients, constant term first."""
    ring: GaloisRing
    spec: GroupSpec

    def coords(self, a: RingElement) -> Tuple[int, ...]:
        return a.coeffs

    def index(self, a: RingElement) -> int:
        return self.spec.index_of(a.coeffs)

    def element(self, index: int) -> RingElement:
        return self.ring.element_at(index)


def additive_embedding(ring: GaloisRing) -> AdditiveEmbedding:
    return ring.embedding


def valuation(a: RingElement) -> int:
    return a.valuation()


def frobenius(a: RingElement) -> RingElement:
    return a.ring.frobenius(a)


def trace(a: RingElement) -> int:
    return a.ring.trace(a)


def teichmuller_set(ring: GaloisRing) -> List[RingElement]:
    return ring.teichmuller_set()


def quadratic_residues(field: FiniteField) -> List[RingElement]:
    return field.quadratic_residues()


def is_planar(field: FiniteField, f) -> bool:
    return field.is_planar(f)
