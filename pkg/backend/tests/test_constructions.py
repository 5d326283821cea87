"""
Test Suite for the Construction Families
========================================

This module tests:
1. The construction battery (every pair verifies and is primitive)
2. RDS, Teichmueller, GRDS and skew Hadamard spectra
3. Product pairs and product mixes
4. Request dispatch and parameter validation

Run with: pytest test_constructions.py -v
"""

import pytest
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.abelian import GroupSpec, subgroup_generated
from core.algebra import FiniteField
from core.constructions import (
    ConstructionRequest,
    DualPair,
    Family,
    build,
    build_product_pair,
    build_rds_pair,
    build_skew_hadamard_pair,
    build_subgroup_pair,
    build_teichmuller_pair,
    build_tito,
    build_trivial,
    construction_battery,
    dual_set,
    is_skew_hadamard,
    mix_spectrum_values,
    mix_zero_multiplicity,
    product_mixes,
    rds_mix_spectrum_values,
    rds_product_mixes,
)
from core.duality import is_rds
from core.exceptions import ConstructionError
from core.group_ring import GroupMultiset, spectra


def distinct_values(group, members):
    return sorted(set(spectra(GroupMultiset.from_set(group, members)).character_spectrum), reverse=True)


class TestBattery:
    """Every family in the standard battery"""

    @pytest.mark.slow
    def test_all_verify_and_are_primitive(self):
        for pair in construction_battery():
            cert = pair.verify()
            assert cert.verified, f"{pair.family.value} {pair.params} failed at {cert.failure_y}"
            assert cert.primitive, f"{pair.family.value} {pair.params} is not primitive"

    def test_sizes_multiply_to_group_order(self):
        for pair in (build_tito(), build_rds_pair(3, 1), build_teichmuller_pair(2)):
            assert len(pair.s) * len(pair.t) == pair.group.order


class TestSmallPairs:
    """Trivial, TITO and subgroup pairs"""

    def test_trivial(self):
        pair = build_trivial()
        assert pair.group.is_trivial
        assert pair.verify().verified

    def test_subgroup_pair_verifies_but_is_not_primitive(self):
        spec = GroupSpec((2, 4))
        pair = build_subgroup_pair(spec, subgroup_generated(spec, [2]))
        cert = pair.verify()
        assert cert.verified
        assert not cert.primitive

    def test_subgroup_from_another_group(self):
        other = GroupSpec((4,))
        with pytest.raises(ConstructionError, match="lives in"):
            build_subgroup_pair(GroupSpec((2, 2)), subgroup_generated(other, [2]))

    def test_swapped_pair_verifies(self):
        pair = build_rds_pair(3, 1)
        assert pair.swapped().verify().verified

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            DualPair(GroupSpec((4,)), (), (0,), Family.EXPLICIT)


class TestRdsPairs:
    """Planar graphs in Z_p^{2m}"""

    @pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (3, 2)])
    def test_spectrum(self, p, m):
        pair = build_rds_pair(p, m)
        n = p ** m
        assert distinct_values(pair.group, pair.s) == [n * n, n, 0]
        params = is_rds(pair.s, pair.group)
        assert (params.m, params.n, params.k, params.lam) == (n, n, n, 1)

    def test_custom_planar_table(self):
        table = [(2 * i * i) % 5 for i in range(5)]
        pair = build_rds_pair(5, 1, f1=table)
        assert pair.params['planar'] == 'custom'
        assert pair.verify().verified

    def test_non_planar_rejected(self):
        with pytest.raises(ConstructionError, match="not planar"):
            build_rds_pair(3, 1, f1=lambda a: a)

    def test_characteristic_two_rejected(self):
        with pytest.raises(ConstructionError, match="characteristic 2"):
            build_rds_pair(2, 1)


class TestTeichmuller:
    """Teichmueller sets of GR(4, m) in Z_4^m"""

    def test_rank_one_is_tito(self):
        assert build_teichmuller_pair(1).s == build_tito().s

    @pytest.mark.parametrize("m", [2, 3])
    def test_spectrum(self, m):
        pair = build_teichmuller_pair(m)
        assert len(pair.s) == 2 ** m
        assert distinct_values(pair.group, pair.s) == [4 ** m, 2 ** m, 0]
        assert pair.verify().verified

    def test_invalid_rank(self):
        with pytest.raises(ConstructionError):
            build_teichmuller_pair(0)


class TestSkewHadamard:
    """Pairs from skew Hadamard difference sets"""

    def test_is_skew_hadamard(self):
        fld = FiniteField(7, 1)
        assert is_skew_hadamard([1, 2, 4], fld)
        assert not is_skew_hadamard([1, 2, 3], fld)

    def test_dual_set_of_quadratic_residues(self):
        assert dual_set([1, 2, 4], FiniteField(7, 1)) == (1, 2, 4)

    def test_dual_set_needs_q_three_mod_four(self):
        with pytest.raises(ConstructionError, match="3 mod 4"):
            dual_set([1, 4], FiniteField(5, 1))

    def test_q7_spectrum(self):
        pair = build_skew_hadamard_pair(7, 1, 2)
        assert len(pair.s) == 7 and len(pair.t) == 7
        assert distinct_values(pair.group, pair.s) == [49, 14, 7, 0]
        assert pair.verify().verified

    @pytest.mark.parametrize('q', [3, 7, 11, 19, 27])
    def test_partner_built_from_dual_set(self, q):
        pair = build_skew_hadamard_pair(q)
        assert len(pair.s) == q and len(pair.t) == q
        assert pair.verify().verified

    @pytest.mark.parametrize('q', [3, 7, 11, 19, 23])
    def test_prime_dual_set_is_residues(self, q):
        fld = FiniteField(q, 1)
        residues = tuple(sorted(a.index for a in fld.quadratic_residues()))
        assert dual_set(residues, fld) == residues

    def test_other_scalars(self):
        assert build_skew_hadamard_pair(11, 3, 5).verify().verified

    def test_equal_scalars_rejected(self):
        with pytest.raises(ConstructionError, match="distinct"):
            build_skew_hadamard_pair(7, 2, 2)

    def test_composite_q_rejected(self):
        with pytest.raises(ConstructionError, match="prime power"):
            build_skew_hadamard_pair(15)


class TestProducts:
    """Direct products of pairs and product mixes"""

    def test_product_verifies(self):
        pair = build_product_pair(build_tito(), build_rds_pair(3, 1))
        assert pair.group.factors == (4, 3, 3)
        assert pair.verify().verified
        assert pair.verify().primitive

    def test_non_dual_operand_rejected(self):
        bad = DualPair(GroupSpec((4,)), (0, 1), (0, 2), Family.EXPLICIT)
        with pytest.raises(ConstructionError, match="not a formally dual pair"):
            build_product_pair(build_tito(), bad)

    def test_mix_spectra_and_zero_counts(self):
        mixes = product_mixes(3)
        assert [pair.params['m1'] for pair in mixes] == [0, 1, 2, 3]
        for pair in mixes:
            m1 = pair.params['m1']
            report = spectra(GroupMultiset.from_set(pair.group, pair.s))
            assert sorted(set(report.character_spectrum), reverse=True) == mix_spectrum_values(3, m1)
            assert report.character_multiplicities()[0] == mix_zero_multiplicity(3, m1)

    def test_zero_multiplicities(self):
        assert [mix_zero_multiplicity(3, m1) for m1 in range(4)] == [7, 25, 37, 37]

    def test_teichmuller_block_of_rank_one_coincides_with_tito(self):
        mixes = product_mixes(3)
        assert mixes[2].s == mixes[3].s

    def test_rds_mixes(self):
        for pair in rds_product_mixes(3, 2):
            m1 = pair.params['m1']
            assert pair.verify().verified
            assert distinct_values(pair.group, pair.s) == rds_mix_spectrum_values(3, 2, m1)


class TestDispatch:
    """ConstructionRequest and build()"""

    def test_missing_parameters(self):
        with pytest.raises(ValueError, match="needs parameters"):
            ConstructionRequest(Family.RDS_PLANAR, {'p': 3})

    def test_product_needs_two_operands(self):
        with pytest.raises(ValueError, match="at least two"):
            ConstructionRequest('product', {'operands': [ConstructionRequest('tito')]})

    def test_subgroup_request(self):
        pair = build(ConstructionRequest('subgroup', {'group': [2, 4], 'generators': [[0, 2]]}))
        assert pair.s == (0, 2)
        assert pair.verify().verified

    def test_nested_product(self):
        request = ConstructionRequest('product', {'operands': [
            ConstructionRequest('tito'), ConstructionRequest('teichmuller', {'m': 2})]})
        pair = build(request)
        assert pair.group.factors == (4, 4, 4)
        assert pair.verify().verified

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            ConstructionRequest('hadamard')
