"""
Test Suite for Finite Abelian Groups
====================================

Covers:
1. Element arithmetic and the mixed-radix index
2. The fixed inner product and projections
3. Subgroup lattice, annihilators and orbits
4. Automorphisms and adjoints
5. Isomorphism types

Run with: pytest test_abelian.py -v
"""

import pytest
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.abelian import (
    Automorphism,
    GroupElement,
    GroupSpec,
    abelian_groups_of_order,
    adjoint_of,
    annihilator,
    automorphism_count,
    element_order,
    enumerate_automorphisms,
    enumerate_subgroups,
    identity_automorphism,
    inner_product,
    invariant_factors,
    is_cyclic,
    is_isomorphic,
    minimal_generator_count,
    orbit_of,
    orbit_partition,
    project_along,
    subgroup_generated,
)
from core.exceptions import BoundExceededError, GroupMismatchError


def el(factors, coords):
    return GroupElement(GroupSpec(tuple(factors)), tuple(coords))


class TestGroupSpec:
    """Group construction and validation"""

    def test_order_and_exponent(self):
        spec = GroupSpec((2, 4, 4))
        assert spec.order == 32
        assert spec.exponent == 4

    def test_trivial_group(self):
        spec = GroupSpec(())
        assert spec.order == 1
        assert spec.exponent == 1
        assert spec.is_trivial

    def test_parse(self):
        assert GroupSpec.parse('2,4,4').factors == (2, 4, 4)
        assert GroupSpec.parse('').is_trivial
        assert GroupSpec.parse('1').is_trivial

    def test_factor_below_two_rejected(self):
        with pytest.raises(ValueError, match="must be >= 2"):
            GroupSpec((1, 4))

    def test_normalize_set_accepts_coordinates(self):
        spec = GroupSpec((2, 4))
        assert spec.normalize_set([[1, 3], [0, 0]]) == (0, 7)

    def test_normalize_set_rejects_repeats(self):
        with pytest.raises(ValueError, match="repeated"):
            GroupSpec((4,)).normalize_set([1, 1])


class TestArithmetic:
    """Componentwise modular arithmetic"""

    def test_addition_in_z4(self):
        assert (el([4], [3]) + el([4], [2])).coords == (1,)

    def test_negation(self):
        assert (-el([2, 4], [1, 3])).coords == (1, 1)

    def test_mixed_radix_index(self):
        """Last factor varies fastest"""
        assert el([2, 4], [1, 3]).index == 7
        spec = GroupSpec((2, 4))
        assert spec.coords_of(7) == (1, 3)

    def test_index_is_bijective(self):
        spec = GroupSpec((3, 4, 2))
        indices = [spec.index_of(spec.coords_of(i)) for i in range(spec.order)]
        assert indices == list(range(spec.order))

    def test_mismatched_specs_rejected(self):
        with pytest.raises(GroupMismatchError):
            el([4], [1]) + el([2, 2], [1, 0])

    def test_unreduced_residue_rejected(self):
        with pytest.raises(ValueError, match="not reduced"):
            el([4], [4])


class TestElementOrder:
    """Least l with l*g = 0"""

    def test_identity(self):
        assert element_order(el([2, 4], [0, 0])) == 1

    def test_cyclic(self):
        assert element_order(el([4], [2])) == 2

    def test_lcm_of_coordinates(self):
        assert element_order(el([2, 4], [1, 2])) == 2
        assert element_order(el([2, 4], [1, 1])) == 4


class TestInnerProduct:
    """The fixed symmetric bilinear pairing"""

    def test_cyclic_value(self):
        assert inner_product(el([4], [1]), el([4], [3])) == 3

    def test_mixed_factors(self):
        assert inner_product(el([2, 4], [1, 0]), el([2, 4], [1, 1])) == 2

    def test_zero_pairs_to_zero(self):
        spec = GroupSpec((2, 4))
        zero = GroupElement.zero(spec)
        for i in range(spec.order):
            assert inner_product(GroupElement.from_index(spec, i), zero) == 0

    def test_symmetric_and_bilinear(self):
        spec = GroupSpec((2, 4))
        elems = [GroupElement.from_index(spec, i) for i in range(spec.order)]
        for x in elems:
            for y in elems:
                assert inner_product(x, y) == inner_product(y, x)
                for z in elems:
                    assert inner_product(x + z, y) == (inner_product(x, y) + inner_product(z, y)) % 4

    def test_trivial_group_rejected(self):
        zero = GroupElement.zero(GroupSpec(()))
        with pytest.raises(ValueError, match="undefined"):
            inner_product(zero, zero)


class TestSubgroups:
    """Lattice enumeration and annihilators"""

    @pytest.mark.parametrize("factors,count", [((4,), 3), ((2, 2), 5), ((3, 3), 6), ((5, 5), 8)])
    def test_subgroup_counts(self, factors, count):
        assert len(enumerate_subgroups(GroupSpec(factors))) == count

    def test_sorted_and_duplicate_free(self):
        subgroups = enumerate_subgroups(GroupSpec((2, 4)))
        keys = [(h.size, h.members) for h in subgroups]
        assert keys == sorted(set(keys))

    def test_sizes_divide_order(self):
        spec = GroupSpec((2, 4, 4))
        for h in enumerate_subgroups(spec):
            assert spec.order % h.size == 0
            assert 0 in h.members

    def test_bound_exceeded(self):
        with pytest.raises(BoundExceededError):
            enumerate_subgroups(GroupSpec((64,)), bound=32)

    def test_annihilator_of_trivial_is_whole_group(self):
        spec = GroupSpec((2, 4))
        assert annihilator(spec, subgroup_generated(spec, [])).size == 8

    def test_annihilator_in_z4(self):
        spec = GroupSpec((4,))
        assert annihilator(spec, subgroup_generated(spec, [2])).members == (0, 2)

    def test_annihilator_of_coordinate_subgroup(self):
        """{0} x Z_3 annihilates to Z_3 x {0}"""
        spec = GroupSpec((3, 3))
        n = subgroup_generated(spec, [spec.index_of([0, 1])])
        assert annihilator(spec, n).members == (0, 3, 6)

    def test_annihilator_is_an_involution(self):
        spec = GroupSpec((2, 4))
        for h in enumerate_subgroups(spec):
            ann = annihilator(spec, h)
            assert h.size * ann.size == spec.order
            assert annihilator(spec, ann).members == h.members


class TestOrbits:
    """orb(y) = generators of <y>"""

    def test_orbit_of_zero(self):
        assert [g.coords for g in orbit_of(el([4], [0]))] == [(0,)]

    def test_orbit_of_unit(self):
        assert sorted(g.coords for g in orbit_of(el([4], [1]))) == [(1,), (3,)]

    def test_order_two_orbit_is_a_point(self):
        assert [g.coords for g in orbit_of(el([2, 2], [1, 1]))] == [(1, 1)]

    def test_orbits_partition(self):
        for factors in [(12,), (2, 4, 4), (3, 9)]:
            spec = GroupSpec(factors)
            _, orbits = orbit_partition(spec)
            assert sum(len(o) for o in orbits) == spec.order
            assert sorted(i for o in orbits for i in o) == list(range(spec.order))


class TestAutomorphisms:
    """Aut(G) enumeration and adjoints"""

    @pytest.mark.parametrize("factors,count", [((4,), 2), ((2, 2), 6), ((3, 3), 48), ((2, 4), 8)])
    def test_counts(self, factors, count):
        spec = GroupSpec(factors)
        assert automorphism_count(spec) == count
        autos = enumerate_automorphisms(spec)
        assert len(autos) == count
        assert all(phi.is_bijective for phi in autos)

    def test_bound_exceeded(self):
        with pytest.raises(BoundExceededError):
            enumerate_automorphisms(GroupSpec((2,) * 9))

    def test_adjoint_of_identity(self):
        spec = GroupSpec((2, 4))
        assert adjoint_of(identity_automorphism(spec)).is_identity

    def test_adjoint_of_scalar_on_cyclic(self):
        spec = GroupSpec((7,))
        for a in range(1, 7):
            assert adjoint_of(Automorphism(spec, (a,))).images == (a,)

    def test_defining_relation_exhaustive(self):
        spec = GroupSpec((2, 4))
        for phi in enumerate_automorphisms(spec):
            star = adjoint_of(phi)
            for x in range(spec.order):
                for y in range(spec.order):
                    assert spec.inner(phi(x), y) == spec.inner(x, star(y))

    def test_adjoint_reverses_composition(self):
        spec = GroupSpec((3, 3))
        autos = enumerate_automorphisms(spec)
        rng = np.random.default_rng(7)
        for _ in range(20):
            phi, psi = (autos[i] for i in rng.integers(0, len(autos), size=2))
            lhs = adjoint_of(phi.compose(psi))
            rhs = adjoint_of(psi).compose(adjoint_of(phi))
            assert lhs.images == rhs.images
            assert adjoint_of(adjoint_of(phi)).images == phi.images


class TestProjection:
    """rho_y: G -> Z_ord(y)"""

    def test_cyclic(self):
        assert project_along(el([4], [2]), el([4], [1])) == 1

    def test_mixed(self):
        assert project_along(el([2, 4], [0, 1]), el([2, 4], [1, 3])) == 3

    def test_kernel_maps_to_zero(self):
        y = el([2, 4], [1, 2])
        spec = y.spec
        for i in range(spec.order):
            g = GroupElement.from_index(spec, i)
            if inner_product(g, y) == 0:
                assert project_along(y, g) == 0

    def test_surjective_homomorphism(self):
        spec = GroupSpec((2, 4, 4))
        y = GroupElement(spec, (1, 1, 2))
        l = element_order(y)
        elems = [GroupElement.from_index(spec, i) for i in range(spec.order)]
        assert {project_along(y, g) for g in elems} == set(range(l))
        for g in elems[:8]:
            for h in elems:
                assert project_along(y, g + h) == (project_along(y, g) + project_along(y, h)) % l

    def test_identity_rejected(self):
        with pytest.raises(ValueError, match="undefined"):
            project_along(el([4], [0]), el([4], [1]))


class TestIsomorphismTypes:
    """Invariant factors and group enumeration"""

    def test_invariant_factors(self):
        assert invariant_factors(GroupSpec((4, 3, 3))) == [3, 12]
        assert minimal_generator_count(GroupSpec((2, 3))) == 1

    def test_is_isomorphic(self):
        assert is_isomorphic(GroupSpec((2, 3)), GroupSpec((6,)))
        assert not is_isomorphic(GroupSpec((2, 2)), GroupSpec((4,)))

    def test_is_cyclic(self):
        assert is_cyclic(GroupSpec((4, 9)))
        assert not is_cyclic(GroupSpec((2, 2, 9)))

    @pytest.mark.parametrize("n,count", [(16, 5), (36, 4), (32, 7), (30, 1)])
    def test_groups_of_order(self, n, count):
        groups = abelian_groups_of_order(n)
        assert len(groups) == count
        assert all(g.order == n for g in groups)
