"""
Search Handlers

- search: all primitive formally dual sets of one size in one group
- classify: the classification table for every group up to an order
"""

import logging
from typing import Any, Dict, Tuple

from api.parsing import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_OK, parse_group
from core.search import (
    RowStatus,
    SearchJob,
    classify_range,
    search_formally_dual_sets,
)
from models.schemas import JobConfig

logger = logging.getLogger(__name__)

STATUS_EXIT = {
    RowStatus.EXISTS: EXIT_OK,
    RowStatus.NONE: EXIT_FAILED,
    RowStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def handle_search(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    """Exit 0 when a class exists, 1 when none exists or a filter rules it out, 2 on budget exhaustion."""
    spec = parse_group(job.group)
    search_job = SearchJob(
        group=spec,
        set_size=job.size,
        node_cap=job.node_cap,
        time_cap_seconds=job.time_cap_seconds,
        threads=job.threads,
        use_filters=job.use_filters,
    )
    result = search_formally_dual_sets(search_job)
    return STATUS_EXIT[result.status], result.to_dict()


def handle_classify(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    """Exit 2 if any row stayed inconclusive, 0 otherwise."""
    table = classify_range(
        max_order=job.max_order,
        extended=job.extended,
        threads=job.threads,
        cache_dir=job.cache_dir,
        node_cap=job.node_cap,
        time_cap_seconds=job.time_cap_seconds,
        use_filters=job.use_filters,
    )
    mismatches = table.mismatches()
    for m in mismatches:
        logger.warning(f"⚠ {m['group']} with |S|={m['k']}: expected {m['expected']}, found {m['found']}")
    payload = table.to_dict()
    payload['mismatches'] = mismatches
    return (EXIT_INCONCLUSIVE if table.inconclusive else EXIT_OK), payload
