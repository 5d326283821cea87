"""
Test Suite for Exact Cyclotomic Arithmetic
==========================================

Run with: pytest test_cyclotomic.py -v
"""

import pytest
import numpy as np
import sys
import os
from functools import reduce

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sympy import Poly, Symbol, divisors

from core.cyclotomic import (
    NOT_INTEGER,
    CyclotomicInt,
    as_integer,
    cyclotomic_coefficients,
    cyclotomic_polynomial,
    imag_sign,
    norm_sq,
    ramanujan_sum,
)


class TestCyclotomicPolynomials:
    """Phi_n by exact division"""

    def test_small_cases(self):
        assert cyclotomic_coefficients(1) == (-1, 1)
        assert cyclotomic_coefficients(4) == (1, 0, 1)
        assert cyclotomic_coefficients(12) == (1, 0, -1, 0, 1)

    def test_degree_is_totient(self):
        assert cyclotomic_polynomial(15).degree() == 8
        assert cyclotomic_polynomial(105).degree() == 48

    @pytest.mark.parametrize("n", [1, 6, 30, 64, 105, 210, 360, 997, 1000])
    def test_product_over_divisors(self, n):
        x = Symbol('x')
        product = reduce(lambda a, b: a * b, (cyclotomic_polynomial(d) for d in divisors(n)))
        assert product == Poly(x ** n - 1, x)

    def test_invalid_index(self):
        with pytest.raises(ValueError, match=">= 1"):
            cyclotomic_polynomial(0)


class TestArithmetic:
    """Convolution, conjugation and reduction"""

    def test_zeta_squared(self):
        z = CyclotomicInt.zeta(4)
        assert z * z == CyclotomicInt.zeta(4, 2)

    def test_conjugate(self):
        assert CyclotomicInt.zeta(8, 3).conjugate() == CyclotomicInt.zeta(8, 5)

    def test_difference_of_squares(self):
        one, z = CyclotomicInt.one(4), CyclotomicInt.zeta(4)
        assert ((one + z) * (one - z)).as_integer() == 2

    def test_equality_after_reduction(self):
        """1 + i + i^2 + i^3 is zero although its coefficients are not"""
        full = CyclotomicInt(4, (1, 1, 1, 1))
        assert full == 0
        assert full.coeffs != (0, 0, 0, 0)

    def test_mixed_orders_lift(self):
        a = CyclotomicInt.zeta(2) + CyclotomicInt.zeta(3)
        assert a.n == 6

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError, match="Expected 4 coefficients"):
            CyclotomicInt(4, (1, 2))


class TestAsInteger:
    """Rational integer extraction"""

    def test_orthogonality_sum(self):
        assert as_integer(CyclotomicInt(4, (1, 1, 1, 1))) == 0

    def test_phi5_relation(self):
        assert as_integer(CyclotomicInt(5, (0, 1, 1, 1, 1))) == -1

    def test_non_integer(self):
        assert as_integer(CyclotomicInt.zeta(4)) is NOT_INTEGER


class TestNormSquared:
    """a * conj(a)"""

    def test_one_plus_i(self):
        assert as_integer(norm_sq(CyclotomicInt(4, (1, 1, 0, 0)))) == 2

    def test_zero(self):
        assert as_integer(norm_sq(CyclotomicInt.zero(9))) == 0

    def test_quadratic_residue_gauss_period(self):
        a = CyclotomicInt.from_exponents(7, [1, 2, 4])
        assert as_integer(norm_sq(a)) == 2

    def test_conjugation_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            a = CyclotomicInt(n, tuple(int(c) for c in rng.integers(-3, 4, size=n)))
            assert a.conjugate().conjugate() == a
            assert norm_sq(a) == norm_sq(a.conjugate())
            assert norm_sq(a) == norm_sq(a).conjugate()


class TestRamanujanSums:
    """Exact sums of zeta_l^{ie} over units i"""

    @pytest.mark.parametrize("l", [1, 4, 6, 9, 12, 30])
    def test_against_direct_sum(self, l):
        units = [i for i in range(1, l + 1) if np.gcd(i, l) == 1]
        for e in range(l):
            direct = CyclotomicInt.from_exponents(l, [i * e for i in units])
            assert as_integer(direct) == ramanujan_sum(l, e)


class TestImagSign:
    """Certified sign of the imaginary part"""

    def test_real_value(self):
        assert imag_sign(CyclotomicInt.integer(7, 3)) == 0

    def test_gauss_period_sign(self):
        """zeta + zeta^2 + zeta^4 = (-1 + sqrt(-7)) / 2"""
        assert imag_sign(CyclotomicInt.from_exponents(7, [1, 2, 4])) == 1
        assert imag_sign(CyclotomicInt.from_exponents(7, [3, 5, 6])) == -1
