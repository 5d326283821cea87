"""
Construction Handler

Builds a pair from a named family, verifies it and returns the pair with
its certificate. Product operands are nested {"family", "params"} objects.
"""

import logging
from typing import Any, Dict, List, Tuple

from api.parsing import EXIT_FAILED, EXIT_OK
from core.constructions import (
    ConstructionRequest,
    DualPair,
    Family,
    build,
    mix_spectrum_values,
    mix_zero_multiplicity,
    product_mixes,
)
from models.schemas import JobConfig
from observability import metrics

logger = logging.getLogger(__name__)

FAMILY_ALIASES = {
    'rds': Family.RDS_PLANAR,
    'planar': Family.RDS_PLANAR,
    'grds': Family.GRDS_SQUARE,
    'skew': Family.SKEW_HADAMARD,
    'unequal-4-8': Family.EXPLICIT,
}

MIXES = 'product-mixes'


def resolve_family(name: str) -> Family:
    key = name.strip().lower()
    if key in FAMILY_ALIASES:
        return FAMILY_ALIASES[key]
    try:
        return Family(key.replace('-', '_'))
    except ValueError:
        known = sorted([f.value for f in Family] + list(FAMILY_ALIASES) + [MIXES])
        raise ValueError(f"Unknown family '{name}'. Known: {', '.join(known)}")


def request_from(family: str, params: Dict[str, Any]) -> ConstructionRequest:
    resolved = resolve_family(family)
    params = dict(params)
    if resolved is Family.PRODUCT:
        operands = params.get('operands', [])
        if not isinstance(operands, list):
            raise ValueError("'operands' must be a list of {family, params} objects")
        params['operands'] = [request_from(op['family'], op.get('params', {})) for op in operands]
    return ConstructionRequest(resolved, params)


def _verified_entry(pair: DualPair, include_ledger: bool) -> Tuple[bool, Dict[str, Any]]:
    cert = pair.verify()
    metrics.increment('pairs_verified')
    entry = pair.to_dict()
    entry['certificate'] = cert.to_dict(include_ledger=include_ledger)
    return cert.verified, entry


def _handle_mixes(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    if 'm' not in job.params:
        raise ValueError("product-mixes needs parameter m")
    m = int(job.params['m'])
    entries: List[Dict[str, Any]] = []
    all_ok = True
    for pair in product_mixes(m):
        ok, entry = _verified_entry(pair, job.include_ledger)
        m1 = pair.params['m1']
        entry['expected_values'] = mix_spectrum_values(m, m1)
        entry['expected_zero_multiplicity'] = mix_zero_multiplicity(m, m1)
        all_ok = all_ok and ok
        entries.append(entry)
    logger.info(f"{'✓' if all_ok else '⚠'} {len(entries)} product mixes for m={m}")
    return (EXIT_OK if all_ok else EXIT_FAILED), {'family': MIXES, 'm': m, 'pairs': entries}


def handle_construct(job: JobConfig) -> Tuple[int, Dict[str, Any]]:
    """Exit 0 when the constructed pair verifies, 1 otherwise."""
    if job.family.strip().lower() == MIXES:
        return _handle_mixes(job)

    pair = build(request_from(job.family, job.params))
    ok, entry = _verified_entry(pair, job.include_ledger)
    if ok:
        logger.info(f"✓ {pair.family.value} pair in {pair.group.name} verified (|S|={len(pair.s)}, |T|={len(pair.t)})")
    else:
        logger.error(f"{pair.family.value} pair in {pair.group.name} failed verification")
    return (EXIT_OK if ok else EXIT_FAILED), entry
