"""
Filter Handlers

- filters: every nonexistence rule applied to one (G, |S|, |T|)
- scan-cyclic: the rule sweep over cyclic groups up to N
"""

import logging
from typing import Any, Dict, Iterator, Tuple

from api.parsing import EXIT_FAILED, EXIT_OK, parse_group, parse_sizes
from core.nonexistence import PairParams, kills, run_all_filters, scan_cyclic_report
from models.schemas import JobConfig

logger = logging.getLogger(__name__)


def handle_filters(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    """Exit 1 when some rule rules the triple out."""
    spec = parse_group(job.group)
    ssize, tsize = parse_sizes(job.sizes)
    params = PairParams(spec, ssize, tsize)
    verdicts = run_all_filters(params)
    killed = kills(verdicts)
    payload = {
        **params.to_dict(),
        'ruled_out': bool(killed),
        'verdicts': [v.to_dict() for v in verdicts],
    }
    if killed:
        logger.info(f"{spec.name} with sizes ({ssize}, {tsize}) ruled out by {killed[0].rule}")
    return (EXIT_FAILED if killed else EXIT_OK), payload


def handle_scan_cyclic(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    report = scan_cyclic_report(job.n_max, threads=job.threads)
    return EXIT_OK, report.to_dict(include_ledger=job.report_rules)


def ledger_lines(payload: Dict[str, Any]) -> Iterator[Dict[str, Any]]:
    """One record per triple: open survivors, known pairs, then every ruled-out triple with its tags."""
    for triple in payload['survivors']:
        yield {'triple': triple, 'rules': []}
    for entry in payload.get('known') or []:
        yield {'triple': entry['triple'], 'rules': [], 'known': entry['family']}
    for entry in payload.get('ledger') or []:
        yield entry
