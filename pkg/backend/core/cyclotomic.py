"""
Exact Cyclotomic Integers
=========================

Elements of Z[zeta_n] kept as length-n integer coefficient vectors (the
redundant representation modulo x^n - 1). Reduction modulo the cyclotomic
polynomial happens only when comparing or extracting an integer value.

Provides:
1. cyclotomic_polynomial(n) by exact division (memoized)
2. CyclotomicInt with +, -, *, **, conjugation and norm_sq
3. as_integer() returning an int or the NOT_INTEGER sentinel
4. ramanujan_sum(l, e): exact sum of zeta_l^{ie} over units i
5. imag_sign(a): certified numeric sign of the imaginary part
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, pi
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from sympy import Poly, Symbol, ZZ, divisors, factorint, totient

logger = logging.getLogger(__name__)

_X = Symbol('x')

# Rounding error per term when evaluating zeta_n^k in double precision
_UNIT_ROUNDOFF = 2.3e-16


class NotInteger:
    """Sentinel for a cyclotomic value that does not reduce to a rational integer."""
    _instance: Optional['NotInteger'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotInteger"

    def __reduce__(self):
        return (NotInteger, ())


NOT_INTEGER = NotInteger()


def is_integer_value(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


# ===========================================
# CYCLOTOMIC POLYNOMIALS
# ===========================================

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Poly:
    """Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division."""
    if n < 1:
        raise ValueError(f"Cyclotomic index must be >= 1, got {n}")
    result = Poly(_X ** n - 1, _X, domain=ZZ)
    for d in divisors(n)[:-1]:
        result = result.exquo(cyclotomic_polynomial(d))
    return result


def cyclotomic_coefficients(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    return tuple(int(c) for c in reversed(cyclotomic_polynomial(n).all_coeffs()))


def ramanujan_sum(l: int, e: int) -> int:
    """
    c_l(e) = sum over units i mod l of zeta_l^{i e}
           = mu(l/g) * phi(l) / phi(l/g), g = gcd(l, e).
    """
    if l < 1:
        raise ValueError(f"Ramanujan sum modulus must be >= 1, got {l}")
    g = gcd(l, e)
    m = l // g
    exps = factorint(m)
    if any(v > 1 for v in exps.values()):
        return 0
    mu = -1 if len(exps) % 2 else 1
    return mu * int(totient(l)) // int(totient(m))


# ===========================================
# CYCLOTOMIC INTEGERS
# ===========================================

@dataclass(frozen=True, eq=False)
class CyclotomicInt:
    """sum_k coeffs[k] * zeta_n^k with arbitrary-precision integer coefficients."""
    n: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(int(c) for c in self.coeffs))
        self._validate_inputs()

    def _validate_inputs(self):
        if self.n < 1:
            raise ValueError(f"Root order must be >= 1, got {self.n}")
        if len(self.coeffs) != self.n:
            raise ValueError(f"Expected {self.n} coefficients, got {len(self.coeffs)}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def integer(cls, n: int, value: int) -> 'CyclotomicInt':
        return cls(n, (value,) + (0,) * (n - 1))

    @classmethod
    def zero(cls, n: int) -> 'CyclotomicInt':
        return cls(n, (0,) * n)

    @classmethod
    def one(cls, n: int) -> 'CyclotomicInt':
        return cls.integer(n, 1)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> 'CyclotomicInt':
        coeffs = [0] * n
        coeffs[k % n] = 1
        return cls(n, tuple(coeffs))

    @classmethod
    def from_exponents(
        cls,
        n: int,
        exponents: Iterable[int],
        weights: Optional[Iterable[int]] = None
    ) -> 'CyclotomicInt':
        """sum_j w_j zeta_n^{e_j}; the usual shape of a character sum."""
        coeffs = [0] * n
        if weights is None:
            counts = np.bincount(np.asarray(list(exponents), dtype=np.int64) % n, minlength=n)
            return cls(n, tuple(int(c) for c in counts))
        for e, w in zip(exponents, weights):
            coeffs[int(e) % n] += int(w)
        return cls(n, tuple(coeffs))

    # -- arithmetic -------------------------------------------------------

    def lift(self, m: int) -> 'CyclotomicInt':
        """The same value in Z[zeta_m] for a multiple m of n."""
        if m % self.n:
            raise ValueError(f"Cannot lift Z[zeta_{self.n}] into Z[zeta_{m}]")
        if m == self.n:
            return self
        step = m // self.n
        coeffs = [0] * m
        for k, c in enumerate(self.coeffs):
            coeffs[k * step] = c
        return CyclotomicInt(m, tuple(coeffs))

    def _align(self, other: 'CyclotomicInt') -> Tuple['CyclotomicInt', 'CyclotomicInt']:
        if self.n == other.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    def _coerce(self, other: Union['CyclotomicInt', int]) -> 'CyclotomicInt':
        if isinstance(other, CyclotomicInt):
            return other
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt.integer(self.n, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return CyclotomicInt(a.n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> 'CyclotomicInt':
        return CyclotomicInt(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt(self.n, tuple(int(other) * c for c in self.coeffs))
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        a, b = self._align(other)
        n = a.n
        out = [0] * n
        # Cyclic convolution over the nonzero terms only
        b_terms = [(j, c) for j, c in enumerate(b.coeffs) if c]
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in b_terms:
                out[(i + j) % n] += x * y
        return CyclotomicInt(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'CyclotomicInt':
        if exponent < 0:
            raise ValueError("Negative powers are not cyclotomic integers in general")
        result = CyclotomicInt.one(self.n)
        base = self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> 'CyclotomicInt':
        """Complex conjugation: zeta^k -> zeta^{-k}."""
        n = self.n
        return CyclotomicInt(n, tuple(self.coeffs[(-k) % n] for k in range(n)))

    def norm_sq(self) -> 'CyclotomicInt':
        return self * self.conjugate()

    # -- canonical reduction ----------------------------------------------

    def _poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), _X, domain=ZZ)

    def reduced(self) -> Tuple[int, ...]:
        """Residue modulo Phi_n, constant term first, length phi(n)."""
        r = self._poly().rem(cyclotomic_polynomial(self.n))
        coeffs = [int(c) for c in reversed(r.all_coeffs())]
        width = cyclotomic_polynomial(self.n).degree()
        return tuple(coeffs + [0] * (width - len(coeffs)))[:max(width, 1)]

    def as_integer(self) -> Union[int, NotInteger]:
        """The rational integer this element equals, or NOT_INTEGER."""
        residue = self._poly().rem(cyclotomic_polynomial(self.n))
        coeffs = residue.all_coeffs()
        if len(coeffs) == 1:
            return int(coeffs[0])
        return NOT_INTEGER

    def is_zero(self) -> bool:
        return self._poly().rem(cyclotomic_polynomial(self.n)).is_zero

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if not isinstance(other, CyclotomicInt) else other
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.n, self.reduced()))

    # -- numeric embedding ------------------------------------------------

    def to_complex(self) -> complex:
        """Value under zeta_n = exp(2 pi i / n); for display and sign decisions only."""
        k = np.arange(self.n)
        weights = np.array([float(c) for c in self.coeffs])
        return complex(np.sum(weights * np.exp(2j * pi * k / self.n)))

    def error_bound(self) -> float:
        return (self.n + 2) * sum(abs(c) for c in self.coeffs) * _UNIT_ROUNDOFF

    def __repr__(self) -> str:
        terms = [f"{c}*z{self.n}^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicInt({' + '.join(terms) or '0'})"


def norm_sq(a: CyclotomicInt) -> CyclotomicInt:
    return a.norm_sq()


def as_integer(a: CyclotomicInt) -> Union[int, NotInteger]:
    return a.as_integer()


def imag_sign(a: CyclotomicInt) -> int:
    """
    Sign of Im(a) under zeta_n = exp(2 pi i / n).

    Returns 0 when a is exactly real. Raises ValueError when the numeric
    value lies inside the error bound, so callers never act on an
    uncertified sign.
    """
    if (a - a.conjugate()).is_zero():
        return 0
    imag = a.to_complex().imag
    bound = a.error_bound()
    if abs(imag) <= bound:
        raise ValueError(f"Imaginary part {imag:.3e} within error bound {bound:.3e}; sign not certified")
    return 1 if imag > 0 else -1
