"""
Verification Handlers

Handlers for the set-level commands:
- verify: exact duality certificate for (G, S, T)
- spectra: character and difference spectra of S
- rank: even-set decomposition of S with its duality checks
"""

import logging
from typing import Any, Dict, Tuple

from api.parsing import EXIT_FAILED, EXIT_OK, parse_group, parse_set
from config import get_config
from core.duality import (
    EvenDecomposition,
    chain_checks,
    even_decomposition,
    is_rds,
    primitive_even_checks,
    verify_pair,
)
from core.group_ring import GroupMultiset, spectra
from models.schemas import JobConfig
from observability import metrics

logger = logging.getLogger(__name__)

HandlerResult = Tuple[int, Dict[str, Any]]


def handle_verify(job: JobConfig) -> HandlerResult:
    """Exit 0 when the pair verifies, 1 otherwise."""
    spec = parse_group(job.group)
    s, t = parse_set(job.S, spec), parse_set(job.T, spec)
    cert = verify_pair(s, t, spec)
    metrics.increment('pairs_verified')
    if cert.verified:
        logger.info(f"✓ Pair verified in {spec.name} (primitive: {cert.primitive})")
    else:
        logger.warning(f"⚠ Pair fails in {spec.name} at {spec.coords_of(cert.failure_y) if cert.failure_y is not None else 'mirror'}")
    return (EXIT_OK if cert.verified else EXIT_FAILED), cert.to_dict(include_ledger=job.include_ledger)


def handle_spectra(job: JobConfig) -> HandlerResult:
    spec = parse_group(job.group)
    s = parse_set(job.S, spec)
    report = spectra(GroupMultiset.from_set(spec, s))
    payload = {
        'group': spec.to_dict(),
        'S': [list(spec.coords_of(i)) for i in s],
        **report.to_dict(),
        'character_multiplicities': {str(v): c for v, c in report.character_multiplicities().items()},
        'difference_multiplicities': {str(v): c for v, c in report.difference_multiplicities().items()},
    }
    return EXIT_OK, payload


def handle_rank(job: JobConfig) -> HandlerResult:
    """Exit 0 with the decomposition when S is even, 1 when it is not."""
    cfg = get_config()
    spec = parse_group(job.group)
    s = parse_set(job.S, spec)
    decomposition = even_decomposition(s, spec, lattice_cap=cfg.lattice_cap, max_rank=cfg.max_rank,
                                       subset_budget=cfg.rank_subset_budget, subgroup_bound=cfg.subgroup_bound)
    payload: Dict[str, Any] = {'group': spec.to_dict(), 'S': [list(spec.coords_of(i)) for i in s]}
    if not isinstance(decomposition, EvenDecomposition):
        payload['even'] = False
        payload['witness'] = [list(spec.coords_of(decomposition.y)), list(spec.coords_of(decomposition.z))]
        return EXIT_FAILED, payload

    rds = is_rds(s, spec)
    payload.update({
        'even': True,
        'decomposition': decomposition.to_dict(),
        'primitive_even_checks': primitive_even_checks(decomposition, len(s)),
        'chain_checks': chain_checks(decomposition, len(s)),
        'rds': rds.to_dict() if rds else None,
    })
    return EXIT_OK, payload
