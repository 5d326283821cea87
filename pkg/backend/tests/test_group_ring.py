"""
Test Suite for the Group Ring Engine
====================================

This module tests:
1. Weight enumerators and power maps
2. Exact character sums and both norm evaluation paths
3. Fourier inversion
4. Character and difference spectra

Run with: pytest test_group_ring.py -v
"""

import pytest
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.abelian import GroupSpec, subgroup_generated, annihilator
from core.constructions import unequal_sizes_pair
from core.cyclotomic import NOT_INTEGER, CyclotomicInt
from core.exceptions import InfeasibleError
from core.group_ring import (
    GroupMultiset,
    char_norm_sq,
    char_norm_sq_from_differences,
    character_sum,
    difference_multiset,
    fourier_invert,
    norm_spectrum,
    power_map,
    product_spectrum,
    spectra,
    weight_enumerator,
)

Z4 = GroupSpec((4,))


def random_set(spec, rng):
    size = int(rng.integers(1, spec.order + 1))
    return tuple(sorted(int(i) for i in rng.choice(spec.order, size=size, replace=False)))


class TestWeightEnumerator:
    """nu_A = AA^(-1)"""

    def test_tito(self):
        assert list(difference_multiset(GroupMultiset.from_set(Z4, [0, 1])).coeffs) == [2, 1, 0, 1]

    def test_singleton(self):
        nu = weight_enumerator(GroupSpec((2, 4)), [5])
        assert nu[0] == 1
        assert nu.sum() == 1

    def test_mass_and_identity_coefficient(self):
        spec = GroupSpec((3, 4))
        s = [0, 1, 5, 7, 10]
        nu = weight_enumerator(spec, s)
        assert nu.sum() == len(s) ** 2
        assert nu[0] == len(s)

    def test_negative_coefficients_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            difference_multiset(GroupMultiset(Z4, [1, -1, 0, 0]))

    def test_symmetric_under_negation(self):
        spec = GroupSpec((2, 8))
        rng = np.random.default_rng(3)
        for _ in range(50):
            nu = weight_enumerator(spec, random_set(spec, rng))
            for y in range(spec.order):
                assert nu[y] == nu[spec.neg(y)]


class TestPowerMap:
    """A^(i)"""

    def test_identity_power(self):
        a = GroupMultiset.from_set(Z4, [0, 1, 3])
        assert power_map(a, 1) == a

    def test_inverse(self):
        assert power_map(GroupMultiset.from_set(Z4, [0, 1]), -1).support == (0, 3)

    def test_collisions_accumulate(self):
        doubled = power_map(GroupMultiset.from_set(Z4, [0, 1, 2]), 2)
        assert list(doubled.coeffs) == [2, 0, 1, 0]


class TestCharacterSums:
    """chi_y(A) as exact cyclotomic integers"""

    def test_principal_character(self):
        a = GroupMultiset.from_set(GroupSpec((2, 4)), [0, 3, 6])
        assert character_sum(a, 0).as_integer() == 3

    def test_subgroup_orthogonality(self):
        spec = GroupSpec((2, 4))
        for gens in ([], [2], [4], [1], [4, 2]):
            h = subgroup_generated(spec, gens)
            ann = annihilator(spec, h)
            a = GroupMultiset.from_set(spec, h.members)
            for y in range(spec.order):
                expected = h.size if ann.contains(y) else 0
                assert character_sum(a, y).as_integer() == expected

    def test_tito_value(self):
        value = character_sum(GroupMultiset.from_set(Z4, [0, 1]), 1)
        assert value == CyclotomicInt(4, (1, 1, 0, 0))

    def test_tito_norm(self):
        assert char_norm_sq(GroupMultiset.from_set(Z4, [0, 1]), 1) == 2

    def test_principal_norm(self):
        a = GroupMultiset.from_set(GroupSpec((9,)), [0, 1, 4, 7])
        assert char_norm_sq(a, 0) == 16

    def test_non_integral_norm(self):
        a = GroupMultiset.from_set(GroupSpec((5,)), [0, 1, 2])
        assert char_norm_sq(a, 1) is NOT_INTEGER

    def test_two_paths_agree(self):
        rng = np.random.default_rng(5)
        for factors in [(4,), (2, 4), (3, 3), (12,), (2, 2, 4)]:
            spec = GroupSpec(factors)
            for _ in range(10):
                a = GroupMultiset.from_set(spec, random_set(spec, rng))
                for y in range(spec.order):
                    assert char_norm_sq(a, y) == char_norm_sq_from_differences(a, y)


class TestFourierInversion:
    """Reconstruction from character sums"""

    def test_whole_group(self):
        spec = GroupSpec((2, 4))
        values = [spec.order] + [0] * (spec.order - 1)
        assert list(fourier_invert(spec, values).coeffs) == [1] * spec.order

    def test_point_mass(self):
        spec = GroupSpec((3, 3))
        assert fourier_invert(spec, [1] * spec.order).support == (0,)

    def test_mapping_input(self):
        assert fourier_invert(Z4, {0: 4, 1: 0, 2: 0, 3: 0}) == GroupMultiset(Z4, [1, 1, 1, 1])

    def test_round_trip_on_difference_multisets(self):
        spec = GroupSpec((2, 4))
        rng = np.random.default_rng(17)
        for _ in range(100):
            a = GroupMultiset.from_set(spec, random_set(spec, rng))
            assert fourier_invert(spec, norm_spectrum(a)) == difference_multiset(a)

    def test_inconsistent_spectrum(self):
        with pytest.raises(InfeasibleError, match="Inconsistent"):
            fourier_invert(GroupSpec((2,)), [1, 0])


class TestSpectra:
    """Character and difference spectra"""

    def test_tito(self):
        report = spectra(GroupMultiset.from_set(Z4, [0, 1]))
        assert report.character_spectrum == [4, 2, 2, 0]
        assert report.difference_spectrum == [2, 1, 1, 0]
        assert report.is_integral

    def test_subgroup(self):
        report = spectra(GroupMultiset.from_set(Z4, [0, 2]))
        assert report.character_spectrum == [4, 4, 0, 0]

    def test_unequal_sizes_top_value_is_unique(self):
        pair = unequal_sizes_pair()
        report = spectra(GroupMultiset.from_set(pair.group, pair.s))
        assert report.character_multiplicities()[16] == 1
        assert len(report.character_spectrum) == pair.group.order

    def test_non_integral_entries_flagged(self):
        report = spectra(GroupMultiset.from_set(GroupSpec((5,)), [0, 1, 2]))
        assert report.non_integral
        assert len(report.difference_spectrum) == 5

    @pytest.mark.slow
    def test_parseval(self):
        rng = np.random.default_rng(23)
        for factors in [(8,), (2, 4), (4, 4), (2, 2, 2, 4), (32,)]:
            spec = GroupSpec(factors)
            for _ in range(200):
                s = random_set(spec, rng)
                a = GroupMultiset.from_set(spec, s)
                total = CyclotomicInt.zero(spec.exponent)
                for y in range(spec.order):
                    total = total + character_sum(a, y).norm_sq()
                assert total.as_integer() == spec.order * len(s)

    def test_product_spectrum(self):
        assert product_spectrum([4, 0], [4, 0]) == [16, 0, 0, 0]
