"""
Test Suite for Search and Classification
========================================

This module tests:
1. Single-group searches against known rows
2. The pruned search against the brute-force oracle
3. Budgets and the inconclusive status
4. classify_range against the reference table, with cache resume
5. Rank statistics of the classes found

Run with: pytest test_search.py -v
"""

import pytest
import json
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.abelian import GroupSpec
from core.constructions import unequal_sizes_pair
from core.duality import canonical_form, verify_pair
from core.exceptions import BoundExceededError
from core.search import (
    COMPUTER_SEARCH,
    ClassificationRow,
    RowStatus,
    SearchJob,
    class_keys,
    classify_group,
    classify_range,
    naive_search,
    rank3_scope,
    rank_census,
    reference_status,
    row_sizes,
    search_formally_dual_sets,
)
from performance_optimizer import ResultCache


def search(factors, k, **kwargs):
    return search_formally_dual_sets(SearchJob(GroupSpec(tuple(factors)), k, **kwargs))


class TestSearchJob:
    """Job validation"""

    def test_size_must_divide_order(self):
        with pytest.raises(ValueError, match="does not divide"):
            SearchJob(GroupSpec((4,)), 3)

    def test_defaults_from_config(self):
        job = SearchJob(GroupSpec((4,)), 2)
        assert job.node_cap >= 1
        assert job.time_cap_seconds > 0
        assert job.partner_size == 2


class TestKnownRows:
    """Rows whose answer is published"""

    def test_z4_has_only_tito(self):
        result = search([4], 2)
        assert result.status == RowStatus.EXISTS
        assert len(result.pairs) == 1
        pair = result.pairs[0]
        assert 0 in pair.s
        assert verify_pair(pair.s, pair.t, GroupSpec((4,))).verified

    def test_z2_z8_is_empty(self):
        result = search([2, 8], 4)
        assert result.status == RowStatus.NONE
        assert result.exhausted
        assert not result.ruled_out

    def test_z9_empty_without_filters(self):
        result = search([9], 3, use_filters=False)
        assert result.status == RowStatus.NONE
        assert result.nodes > 0

    def test_z9_ruled_out_by_filters(self):
        result = search([9], 3)
        assert result.status == RowStatus.NONE
        assert 'odd-prime-size' in [v.rule for v in result.ruled_out]

    def test_z4_squared_has_two_classes(self):
        result = search([4, 4], 4)
        assert len(result.pairs) >= 2
        assert all(0 in p.s for p in result.pairs)
        assert len(set(class_keys(GroupSpec((4, 4)), result.pairs))) == len(result.pairs)

    def test_z3_squared_witnesses_are_rds(self):
        result = search([3, 3], 3)
        assert result.status == RowStatus.EXISTS
        assert all(p.is_nnn1_rds for p in result.pairs)

    @pytest.mark.slow
    def test_unequal_sizes_class_found(self):
        pair = unequal_sizes_pair()
        result = search(pair.group.factors, 4)
        assert canonical_form(pair.s, pair.group).key in class_keys(pair.group, result.pairs)

    def test_to_dict(self):
        data = search([4], 2).to_dict()
        assert data['status'] == 'exists'
        assert data['classes'][0]['S'][0] == [0]


class TestAgainstBruteForce:
    """Pruning never loses a class"""

    @pytest.mark.parametrize("factors,k", [((4,), 2), ((2, 2), 2), ((3, 3), 3), ((2, 4), 2), ((4, 4), 4), ((2, 2, 4), 4)])
    def test_same_classes(self, factors, k):
        spec = GroupSpec(factors)
        optimized = search(factors, k, use_filters=False)
        assert class_keys(spec, optimized.pairs) == class_keys(spec, naive_search(spec, k))

    def test_naive_limit(self):
        with pytest.raises(BoundExceededError):
            naive_search(GroupSpec((2, 4, 4)), 4)


class TestBudgets:
    """Exhausted budgets never report nonexistence"""

    def test_node_cap_is_inconclusive(self):
        result = search([4, 4], 4, node_cap=1)
        assert not result.exhausted
        assert result.status in (RowStatus.INCONCLUSIVE, RowStatus.EXISTS)
        assert result.status != RowStatus.NONE

    def test_threads_do_not_change_classes(self):
        spec = GroupSpec((4, 4))
        single = search([4, 4], 4, threads=1)
        pooled = search([4, 4], 4, threads=2)
        assert class_keys(spec, single.pairs) == class_keys(spec, pooled.pairs)


class TestClassification:
    """Rows, reference statuses and caching"""

    def test_row_sizes(self):
        assert row_sizes(GroupSpec((36,))) == [2, 3, 4, 6]

    def test_reference_lookup_uses_isomorphism_type(self):
        assert reference_status(GroupSpec((2, 2, 9)), 6) == RowStatus.NONE
        assert reference_status(GroupSpec((4, 9)), 3) == RowStatus.NONE
        assert reference_status(GroupSpec((4, 3, 3)), 6) == RowStatus.EXISTS

    def test_row_needs_justification(self):
        with pytest.raises(ValueError, match="witness"):
            ClassificationRow(4, 2, GroupSpec((4,)), RowStatus.EXISTS)
        with pytest.raises(ValueError, match="rule tag"):
            ClassificationRow(4, 2, GroupSpec((2, 2)), RowStatus.NONE)

    def test_up_to_16_matches_reference(self):
        table = classify_range(16, threads=1)
        assert table.mismatches() == []
        assert table.inconclusive == []
        assert table.find((4,), 2).status == RowStatus.EXISTS
        assert table.find((16,), 4).source == 'cyclic-prime-power'
        assert table.find((2, 8), 4).source == COMPUTER_SEARCH
        assert table.find((2, 2), 2).status == RowStatus.NONE
        assert len(table.find((4, 4), 4).witnesses) >= 2

    def test_frame_columns(self):
        frame = classify_range(9, threads=1).to_frame()
        assert list(frame.columns) == ['order', 'k', 'group', 'status', 'classes', 'source']
        assert set(frame['order']) == {4, 8, 9}

    def test_order_64_refused(self):
        with pytest.raises(BoundExceededError):
            classify_range(64, extended=True)

    def test_above_hard_limit_needs_extended(self):
        with pytest.raises(BoundExceededError, match="extended"):
            classify_range(50)

    def test_cache_resume_is_identical(self, tmp_path):
        first = classify_range(16, threads=1, cache_dir=str(tmp_path))
        assert list(tmp_path.glob('*.json'))
        second = classify_range(16, threads=1, cache_dir=str(tmp_path))
        assert json.dumps(first.to_dict(), sort_keys=True) == json.dumps(second.to_dict(), sort_keys=True)

    def test_corrupted_cache_entry_is_recomputed(self, tmp_path):
        spec = GroupSpec((4, 4))
        cache = ResultCache(str(tmp_path))
        rows = classify_group(spec, cache=cache)
        entry = sorted(tmp_path.glob('*.json'))[0]
        data = json.loads(entry.read_text())
        data['payload']['status'] = 'none'
        entry.write_text(json.dumps(data))

        again = classify_group(spec, cache=ResultCache(str(tmp_path)))
        assert [r.to_dict() for r in again] == [r.to_dict() for r in rows]

    @pytest.mark.slow
    def test_up_to_36(self):
        table = classify_range(36, threads=4)
        assert table.mismatches() == []
        assert table.find((4, 3, 3), 6).status == RowStatus.EXISTS
        assert table.find((2, 2, 3, 3), 6).status == RowStatus.NONE


class TestRankStatistics:
    """Ranks of everything found"""

    def test_tito_has_rank_three(self):
        census = rank_census([(GroupSpec((4,)), (0, 1))])
        assert census.distribution() == {3: 1}
        assert census.rank3_non_rds == []

    def test_scope_on_small_table(self):
        census = rank3_scope(classify_range(16, threads=1), max_order=16, max_size=4)
        assert census.entries
        assert census.rank3_non_rds == []
        assert list(census.to_frame().columns) == ['group', 'k', 'rank', 'minimal', 'nnn1_rds']

    @pytest.mark.slow
    def test_scope_up_to_36(self):
        census = rank3_scope(threads=4)
        assert census.rank3_non_rds == []
        assert census.cyclic_flags == []
