"""
Report Envelopes

Every command's payload is wrapped with the schema and engine versions and a
sha256 content hash, so a stored report can be re-checked on load.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from config import get_config
from core.exceptions import CacheIntegrityError, SchemaVersionError
from models.schemas import (
    EXPORTED_MODELS,
    SCHEMA_VERSION,
    CertificateModel,
    ClassificationTableModel,
    Command,
    FilterReportModel,
    ReportModel,
    ScanReportModel,
    SearchResultModel,
)
from performance_optimizer import canonical_json, content_hash

logger = logging.getLogger(__name__)

# Commands whose payload has a fixed contract
PAYLOAD_MODELS = {
    Command.VERIFY: CertificateModel,
    Command.FILTERS: FilterReportModel,
    Command.SCAN_CYCLIC: ScanReportModel,
    Command.SEARCH: SearchResultModel,
    Command.CLASSIFY: ClassificationTableModel,
}


def build_report(command: Union[Command, str], exit_code: int, payload: Dict[str, Any]) -> Dict[str, Any]:
    command = Command(command)
    # Round-trip through canonical JSON so the hash matches what is written
    payload = json.loads(canonical_json(payload))
    if command in PAYLOAD_MODELS:
        PAYLOAD_MODELS[command].model_validate(payload)
    report = ReportModel(
        schema_version=SCHEMA_VERSION,
        engine_version=get_config().engine_version,
        command=command,
        exit_code=exit_code,
        content_hash=content_hash(payload),
        payload=payload,
    )
    return report.model_dump(mode='json')


def save_report(report: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(report) + "\n", encoding='utf-8')
    logger.info(f"✓ Report written to {path}")
    return path


def export_schemas(directory: Union[str, Path]) -> List[Path]:
    """Write one JSON schema file per exported model."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, model in sorted(EXPORTED_MODELS.items()):
        path = directory / f"{name}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n", encoding='utf-8')
        written.append(path)
    logger.info(f"✓ {len(written)} schemas written to {directory}")
    return written


def load_report(path: Union[str, Path]) -> ReportModel:
    """Read a report, rejecting other schema versions and tampered payloads."""
    data = json.loads(Path(path).read_text(encoding='utf-8'))
    version = data.get('schema_version')
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"Report {path} has schema version {version}, expected {SCHEMA_VERSION}")
    report = ReportModel.model_validate(data)
    if content_hash(report.payload) != report.content_hash:
        raise CacheIntegrityError(f"Content hash mismatch in {path}")
    return report
