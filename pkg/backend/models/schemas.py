"""
Pydantic models for report validation and job configuration.
These models define the JSON contracts between the CLI and its report files.
"""
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import List, Optional, Dict, Any
from enum import Enum

SCHEMA_VERSION = "1.0"


class Command(str, Enum):
    """CLI commands"""
    VERIFY = "verify"
    CONSTRUCT = "construct"
    SEARCH = "search"
    CLASSIFY = "classify"
    SCAN_CYCLIC = "scan-cyclic"
    RANK = "rank"
    SPECTRA = "spectra"
    FILTERS = "filters"


class RowStatusEnum(str, Enum):
    """Classification row status"""
    EXISTS = "exists"
    NONE = "none"
    INCONCLUSIVE = "inconclusive"


Coordinates = List[List[int]]


# ===========================================
# GROUPS AND SETS
# ===========================================

class GroupSpecModel(BaseModel):
    """Finite abelian group as a list of cyclic factor orders"""
    cyclic_factors: List[int] = Field(default_factory=list, description="Orders of the cyclic factors; empty = trivial group")

    @field_validator('cyclic_factors')
    @classmethod
    def factors_at_least_two(cls, v):
        if any(n < 2 for n in v):
            raise ValueError("Cyclic factor orders must be >= 2")
        return v


class MultisetModel(BaseModel):
    """Integer coefficient per element, in index order"""
    group: GroupSpecModel
    coeffs: List[int]


class LedgerRowModel(BaseModel):
    """One y of the duality check: |T||chi_y(S)|^2 against |S|^2 nu_T(y)"""
    y: int = Field(ge=0, description="Element index")
    lhs: Optional[int] = Field(default=None, description="None when |chi_y(S)|^2 is not an integer")
    rhs: int


class SpectraModel(BaseModel):
    """Sorted character and difference spectra"""
    character_spectrum: List[int]
    difference_spectrum: List[int]
    non_integral: List[int] = Field(default_factory=list)


class CertificateModel(BaseModel):
    """Self-contained duality certificate; re-checkable with `verify`"""
    group: GroupSpecModel
    S: Coordinates
    T: Coordinates
    verified: bool
    mirrored_verified: bool
    primitive: bool
    S_primitivity: Dict[str, Any]
    T_primitivity: Dict[str, Any]
    S_spectra: SpectraModel
    T_spectra: SpectraModel
    failure_y: Optional[List[int]] = None
    ledger: Optional[List[LedgerRowModel]] = None
    mirrored_ledger: Optional[List[LedgerRowModel]] = None


# ===========================================
# FILTERS AND SEARCH
# ===========================================

class FilterVerdictModel(BaseModel):
    """Outcome of one nonexistence rule"""
    ruled_out: bool
    rule: Optional[str] = None
    reason: str = ""

    @model_validator(mode='after')
    def ruled_out_needs_rule(self):
        if self.ruled_out and not self.rule:
            raise ValueError("A ruled-out verdict needs a rule tag")
        return self


class FilterReportModel(BaseModel):
    """All verdicts for one (G, |S|, |T|)"""
    group: GroupSpecModel
    ssize: int = Field(ge=1)
    tsize: int = Field(ge=1)
    ruled_out: bool
    verdicts: List[FilterVerdictModel]


class ScanReportModel(BaseModel):
    """Cyclic scan survivors and per-triple kill ledger"""
    n_max: int = Field(ge=1)
    survivors: List[List[int]]
    known: List[Dict[str, Any]] = Field(default_factory=list, description="Triples carrying a known construction")
    rule_counts: Dict[str, int]
    ledger: Optional[List[Dict[str, Any]]] = None


class FoundPairModel(BaseModel):
    """Class representative S with one partner T"""
    S: Coordinates
    T: Coordinates
    exact_class: bool = True
    rds: Optional[List[int]] = Field(default=None, description="(m, n, k, lambda) when S is an RDS")


class ClassificationRowModel(BaseModel):
    """One (|G|, |S|, G) row"""
    order: int = Field(ge=1)
    set_size: int = Field(ge=1)
    group: GroupSpecModel
    group_name: str
    status: RowStatusEnum
    source: str = ""
    classes: int = Field(ge=0)
    nodes: int = Field(default=0, ge=0)
    witnesses: List[FoundPairModel] = Field(default_factory=list)

    @model_validator(mode='after')
    def status_is_justified(self):
        if self.status == RowStatusEnum.EXISTS and not self.witnesses:
            raise ValueError("An 'exists' row needs at least one witness")
        if self.status == RowStatusEnum.NONE and not self.source:
            raise ValueError("A 'none' row needs a rule tag or 'computer search'")
        return self


class ClassificationTableModel(BaseModel):
    """Classification of every abelian group up to max_order"""
    max_order: int = Field(ge=1)
    rows: List[ClassificationRowModel]


class SearchResultModel(BaseModel):
    """Classes found by one search job"""
    job: Dict[str, Any]
    status: RowStatusEnum
    exhausted: bool
    nodes: int = Field(ge=0)
    candidates: int = Field(ge=0)
    elapsed_seconds: float = Field(ge=0)
    classes: List[FoundPairModel]
    ruled_out: List[FilterVerdictModel] = Field(default_factory=list)


class RankCensusModel(BaseModel):
    """Rank distribution of found primitive formally dual sets"""
    distribution: Dict[str, int]
    cyclic_flags: List[Dict[str, Any]]
    rank3_non_rds: List[Dict[str, Any]]
    entries: List[Dict[str, Any]]


# ===========================================
# REPORT ENVELOPE
# ===========================================

class ReportModel(BaseModel):
    """Envelope written by every command"""
    schema_version: str = Field(default=SCHEMA_VERSION)
    engine_version: str
    command: Command
    exit_code: int = Field(ge=0, le=3)
    content_hash: str = Field(description="sha256 of the canonical JSON payload")
    payload: Dict[str, Any]


# ===========================================
# JOB CONFIGURATION
# ===========================================

class JobConfig(BaseModel):
    """Validated request for one CLI command; unknown fields are rejected."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: Command
    group: Optional[str] = Field(default=None, description="Comma-separated cyclic factor orders, e.g. '2,4,4'")
    S: Optional[str] = Field(default=None, description="Element indices '0,1' or JSON coordinate lists")
    T: Optional[str] = Field(default=None, description="Element indices or JSON coordinate lists")
    sizes: Optional[str] = Field(default=None, description="'|S|,|T|' for filters")
    size: Optional[int] = Field(default=None, ge=1, description="|S| for search")
    family: Optional[str] = Field(default=None, description="Construction family")
    params: Dict[str, Any] = Field(default_factory=dict, description="Construction parameters")
    max_order: Optional[int] = Field(default=None, ge=1, description="Largest order to classify")
    extended: bool = Field(default=False, description="Allow orders above the hard limit")
    n_max: int = Field(default=1000, ge=1, description="Largest N for scan-cyclic")
    report_rules: bool = Field(default=False, description="Include the per-triple rule ledger")
    include_ledger: bool = Field(default=False, description="Include per-y duality ledgers")
    use_filters: bool = Field(default=True, description="Apply nonexistence filters before searching")
    threads: int = Field(default=1, ge=1, le=256)
    node_cap: Optional[int] = Field(default=None, ge=1)
    time_cap_seconds: Optional[float] = Field(default=None, gt=0)
    out: Optional[str] = Field(default=None, description="Report output path")
    cache_dir: Optional[str] = Field(default=None, description="Resumable result cache directory")

    @model_validator(mode='after')
    def command_arguments_present(self):
        needs = {
            Command.VERIFY: ('group', 'S', 'T'),
            Command.CONSTRUCT: ('family',),
            Command.SEARCH: ('group', 'size'),
            Command.RANK: ('group', 'S'),
            Command.SPECTRA: ('group', 'S'),
            Command.FILTERS: ('group', 'sizes'),
        }
        missing = [name for name in needs.get(self.command, ()) if getattr(self, name) is None]
        if missing:
            raise ValueError(f"'{self.command.value}' requires {', '.join(missing)}")
        return self


EXPORTED_MODELS = {
    'report': ReportModel,
    'job_config': JobConfig,
    'certificate': CertificateModel,
    'filter_report': FilterReportModel,
    'scan_report': ScanReportModel,
    'search_result': SearchResultModel,
    'classification_table': ClassificationTableModel,
    'rank_census': RankCensusModel,
}
