"""
Formally Dual Set Search
========================

Exhaustive search for primitive formally dual sets in small abelian groups
and the classification table built on it.

Provides:
1. search_formally_dual_sets(): two-stage backtracking (candidate S, then a
   partner T for the forced nu_T) with equivalence-class deduplication
2. naive_search(): unpruned brute force used as a completeness oracle
3. classify_group() / classify_range(): filters first, search second,
   one ClassificationRow per (|G|, |S|) with |S| <= sqrt(|G|)
4. rank_census() and rank3_scope(): rank statistics of everything found
5. TABLE1_REFERENCE: published status of every (|G|, |S|, G) up to order 63

Search budgets (node cap per top-level branch, wall-clock cap per job) turn
an unfinished search into an "inconclusive" status, never into "none".
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import gcd, isqrt
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy import divisors, factorint

from config import get_config
from core.abelian import (
    ElementSet,
    GroupSpec,
    abelian_groups_of_order,
    elementary_divisors,
    is_cyclic,
    orbit_partition,
)
from core.duality import (
    EvenDecomposition,
    Infeasible,
    canonical_form,
    even_decomposition,
    is_primitive_subset,
    is_rds,
    reconstruct_dual_spectrum,
    verify_pair,
)
from core.exceptions import BoundExceededError
from core.group_ring import weight_enumerator
from core.nonexistence import FilterVerdict, PairParams, kills, run_all_filters
from observability import StructuredLogger, metrics, track_job
from performance_optimizer import ResultCache, perf_monitor, run_parallel

logger = logging.getLogger(__name__)

COMPUTER_SEARCH = "computer search"
NAIVE_ORDER_LIMIT = 16
REFUSED_ORDER = 64


class RowStatus(str, Enum):
    """Classification outcome for one (G, |S|)"""
    EXISTS = "exists"
    NONE = "none"
    INCONCLUSIVE = "inconclusive"


# ===========================================
# JOBS AND RESULTS
# ===========================================

@dataclass
class SearchJob:
    """
    One exhaustive search: all primitive formally dual S of size set_size in
    group, up to equivalence. 0 is always in S.
    """
    group: GroupSpec
    set_size: int
    node_cap: Optional[int] = None
    time_cap_seconds: Optional[float] = None
    threads: int = 1
    use_filters: bool = True
    automorphism_bound: Optional[int] = None

    def __post_init__(self):
        cfg = get_config()
        if self.node_cap is None:
            self.node_cap = cfg.node_cap
        if self.time_cap_seconds is None:
            self.time_cap_seconds = cfg.time_cap_seconds
        if self.automorphism_bound is None:
            self.automorphism_bound = cfg.automorphism_bound
        self._validate_inputs()

    def _validate_inputs(self):
        n = self.group.order
        if self.set_size < 1 or self.set_size > n:
            raise ValueError(f"Set size must be between 1 and {n}, got {self.set_size}")
        if n % self.set_size:
            raise ValueError(f"Set size {self.set_size} does not divide |G| = {n}")
        if self.node_cap < 1:
            raise ValueError("Node cap must be positive")
        if self.time_cap_seconds <= 0:
            raise ValueError("Time cap must be positive")
        if self.threads < 1:
            raise ValueError("Thread count must be >= 1")

    @property
    def partner_size(self) -> int:
        return self.group.order // self.set_size

    def to_dict(self) -> dict:
        return {
            'group': self.group.to_dict(),
            'set_size': self.set_size,
            'node_cap': self.node_cap,
            'time_cap_seconds': self.time_cap_seconds,
            'use_filters': self.use_filters,
        }


@dataclass
class FoundPair:
    """Class representative S (0 in S) with one primitive partner T."""
    s: ElementSet
    t: ElementSet
    exact_class: bool = True
    rds: Optional[Tuple[int, int, int, int]] = None

    @property
    def is_nnn1_rds(self) -> bool:
        if self.rds is None:
            return False
        m, n, k, lam = self.rds
        return m == n == k and lam == 1 and n > 1

    def to_dict(self, spec: GroupSpec) -> dict:
        return {
            'S': [list(spec.coords_of(i)) for i in self.s],
            'T': [list(spec.coords_of(i)) for i in self.t],
            'exact_class': self.exact_class,
            'rds': list(self.rds) if self.rds else None,
        }

    @classmethod
    def from_dict(cls, spec: GroupSpec, data: Dict[str, Any]) -> 'FoundPair':
        return cls(
            spec.normalize_set(data['S']),
            spec.normalize_set(data['T']),
            bool(data.get('exact_class', True)),
            tuple(data['rds']) if data.get('rds') else None,
        )


@dataclass
class SearchResult:
    """Classes found by one job; exhausted=False means the budget ran out."""
    job: SearchJob
    pairs: List[FoundPair] = field(default_factory=list)
    exhausted: bool = True
    nodes: int = 0
    candidates: int = 0
    elapsed_seconds: float = 0.0
    ruled_out: List[FilterVerdict] = field(default_factory=list)

    @property
    def status(self) -> RowStatus:
        if self.pairs:
            return RowStatus.EXISTS
        if not self.exhausted:
            return RowStatus.INCONCLUSIVE
        return RowStatus.NONE

    def to_dict(self) -> dict:
        spec = self.job.group
        return {
            'job': self.job.to_dict(),
            'status': self.status.value,
            'exhausted': self.exhausted,
            'nodes': self.nodes,
            'candidates': self.candidates,
            'elapsed_seconds': round(self.elapsed_seconds, 3),
            'classes': [p.to_dict(spec) for p in self.pairs],
            'ruled_out': [v.to_dict() for v in self.ruled_out],
        }


# ===========================================
# BUDGET
# ===========================================

class _BudgetExhausted(Exception):
    pass


class _Budget:
    """Node cap and an absolute wall-clock deadline, checked every 1024 nodes."""

    def __init__(self, node_cap: int, deadline: float):
        self.node_cap = node_cap
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise _BudgetExhausted(f"node cap {self.node_cap}")
        if self.nodes & 1023 == 0 and time.time() > self.deadline:
            raise _BudgetExhausted("time cap")


# ===========================================
# STAGE 1: CANDIDATE SETS
# ===========================================

@dataclass(frozen=True)
class _BranchTask:
    """Enumerate candidates whose smallest nonzero element is `second`."""
    factors: Tuple[int, ...]
    set_size: int
    second: int
    node_cap: int
    deadline: float
    prune: bool = True


@dataclass
class _BranchResult:
    candidates: List[ElementSet]
    nodes: int
    exhausted: bool


class _CandidateEnumerator:
    """
    Ordered extension of {0} by increasing indices. Partial weight
    enumerators are lower bounds of the final nu_S, which is constant on
    orbits, divisible by b_S off 0, below |S| off 0 (primitivity) and sums
    to |S|(|S| - 1) off 0.
    """

    def __init__(self, spec: GroupSpec, k: int, prune: bool = True):
        self.spec = spec
        self.k = k
        self.n = spec.order
        self.prune = prune
        l = self.n // k
        self.b = k // gcd(k, l * l)
        self.diff = spec.difference_table
        orbit_id, orbits = orbit_partition(spec)
        self.orbit_id = np.asarray(orbit_id)
        self.orbit_sizes = np.array([len(o) for o in orbits], dtype=np.int64)
        self.num_orbits = len(orbits)

    def _partial_ok(self, nu: np.ndarray) -> bool:
        if not self.prune:
            return True
        k = self.k
        if k > 1 and int(nu[1:].max(initial=0)) >= k:
            return False
        lower = np.zeros(self.num_orbits, dtype=np.int64)
        np.maximum.at(lower, self.orbit_id, nu)
        lower = -(-lower // self.b) * self.b
        return int((lower[1:] * self.orbit_sizes[1:]).sum()) <= k * (k - 1)

    def _complete_ok(self, nu: np.ndarray) -> bool:
        if not self.prune:
            return True
        rest = nu[1:]
        if np.any(rest % self.b) or np.any(rest >= self.k):
            return False
        reps = np.zeros(self.num_orbits, dtype=np.int64)
        reps[self.orbit_id] = nu
        return bool(np.array_equal(reps[self.orbit_id], nu))

    def _add(self, chosen: List[int], nu: np.ndarray, x: int) -> np.ndarray:
        out = nu.copy()
        np.add.at(out, self.diff[x, chosen], 1)
        np.add.at(out, self.diff[chosen, x], 1)
        return out

    def branch(self, second: int, budget: _Budget) -> Iterator[ElementSet]:
        """Candidates containing 0 whose smallest nonzero element is second."""
        nu = np.zeros(self.n, dtype=np.int64)
        chosen = [0]
        if self.k == 1:
            yield (0,)
            return
        nu = self._add(chosen, nu, second)
        if not self._partial_ok(nu):
            return
        chosen.append(second)
        yield from self._extend(chosen, nu, second + 1, budget)

    def _extend(self, chosen: List[int], nu: np.ndarray, start: int, budget: _Budget) -> Iterator[ElementSet]:
        budget.tick()
        if len(chosen) == self.k:
            if self._complete_ok(nu):
                yield tuple(chosen)
            return
        remaining = self.k - len(chosen)
        for x in range(start, self.n - remaining + 1):
            nu2 = self._add(chosen, nu, x)
            if not self._partial_ok(nu2):
                continue
            chosen.append(x)
            yield from self._extend(chosen, nu2, x + 1, budget)
            chosen.pop()

    def branch_roots(self) -> List[int]:
        if self.k == 1:
            return [0]
        return list(range(1, self.n - self.k + 2))


def _run_branch(task: _BranchTask) -> _BranchResult:
    spec = GroupSpec(task.factors)
    enumerator = _CandidateEnumerator(spec, task.set_size, task.prune)
    budget = _Budget(task.node_cap, task.deadline)
    found: List[ElementSet] = []
    try:
        for s in enumerator.branch(task.second, budget):
            found.append(s)
    except _BudgetExhausted as e:
        logger.warning(f"⚠ Branch {task.second} on {spec.name} stopped: {e}")
        return _BranchResult(found, budget.nodes, False)
    return _BranchResult(found, budget.nodes, True)


# ===========================================
# STAGE 2: PARTNERS
# ===========================================

def partner_sets(spec: GroupSpec, target: np.ndarray, size: int, budget: _Budget) -> Iterator[ElementSet]:
    """Every T with 0 in T, |T| = size and nu_T == target, in index order."""
    n = spec.order
    target = np.asarray(target, dtype=np.int64)
    if size == 1:
        if not np.any(target[1:]):
            yield (0,)
        return
    diff = spec.difference_table

    def extend(chosen: List[int], nu: np.ndarray, start: int) -> Iterator[ElementSet]:
        budget.tick()
        if len(chosen) == size:
            if np.array_equal(nu[1:], target[1:]):
                yield tuple(chosen)
            return
        remaining = size - len(chosen)
        for x in range(start, n - remaining + 1):
            nu2 = nu.copy()
            np.add.at(nu2, diff[x, chosen], 1)
            np.add.at(nu2, diff[chosen, x], 1)
            if np.any(nu2 > target):
                continue
            chosen.append(x)
            yield from extend(chosen, nu2, x + 1)
            chosen.pop()

    nu0 = np.zeros(n, dtype=np.int64)
    nu0[0] = target[0]
    yield from extend([0], nu0, 1)


def _rds_signature(spec: GroupSpec, s: ElementSet) -> Optional[Tuple[int, int, int, int]]:
    params = is_rds(s, spec)
    if params is None:
        return None
    return (params.m, params.n, params.k, params.lam)


def _find_partner(spec: GroupSpec, s: ElementSet, tsize: int, budget: _Budget) -> Optional[ElementSet]:
    target = reconstruct_dual_spectrum(s, tsize, spec)
    if isinstance(target, Infeasible):
        return None
    for t in partner_sets(spec, target, tsize, budget):
        cert = verify_pair(s, t, spec)
        if cert.verified and cert.primitive:
            return t
    return None


# ===========================================
# SEARCH
# ===========================================

@perf_monitor.track_operation("search_formally_dual_sets")
def search_formally_dual_sets(job: SearchJob) -> SearchResult:
    """
    Stage 1 fans the top-level branches out to job.threads workers and
    merges candidates in index order; stage 2 runs in-process, one partner
    search per new equivalence class.
    """
    spec, k = job.group, job.set_size
    product_cap = get_config().canonical_product_cap
    started = time.monotonic()
    deadline = time.time() + job.time_cap_seconds
    result = SearchResult(job)

    if job.use_filters and k > 1:
        found_kills = kills(run_all_filters(PairParams(spec, k, job.partner_size)))
        if found_kills:
            result.ruled_out = found_kills
            logger.debug(f"{spec.name} k={k} skipped: {[v.rule for v in found_kills]}")
            return result

    enumerator = _CandidateEnumerator(spec, k)
    tasks = [
        _BranchTask(spec.factors, k, root, job.node_cap, deadline)
        for root in enumerator.branch_roots()
    ]
    branches = run_parallel(_run_branch, tasks, max_workers=job.threads)
    candidates = sorted(s for b in branches for s in b.candidates)
    result.nodes = sum(b.nodes for b in branches)
    result.exhausted = all(b.exhausted for b in branches)
    result.candidates = len(candidates)

    budget = _Budget(job.node_cap, deadline)
    decided: Dict[tuple, bool] = {}
    try:
        for s in candidates:
            if not is_primitive_subset(s, spec).primitive:
                continue
            form = canonical_form(s, spec, bound=job.automorphism_bound, product_cap=product_cap)
            if decided.get(form.key) is True or (form.exact and form.key in decided):
                continue
            t = _find_partner(spec, s, job.partner_size, budget)
            if t is None:
                # Spectra-only keys can merge inequivalent sets; keep trying those
                if form.exact:
                    decided[form.key] = False
                continue
            decided[form.key] = True
            result.pairs.append(FoundPair(s, t, form.exact, _rds_signature(spec, s)))
    except _BudgetExhausted as e:
        logger.warning(f"⚠ Partner search on {spec.name} k={k} stopped: {e}")
        result.exhausted = False

    result.nodes += budget.nodes
    result.elapsed_seconds = time.monotonic() - started
    metrics.increment('search_nodes', result.nodes)
    metrics.increment('search_candidates', result.candidates)
    metrics.increment('search_classes', len(result.pairs))

    marker = "✓" if result.exhausted else "⚠"
    logger.info(f"{marker} {spec.name} k={k}: {len(result.pairs)} classes, "
                f"{result.candidates} candidates, {result.nodes} nodes, status {result.status.value}")
    return result


def naive_search(spec: GroupSpec, k: int) -> List[FoundPair]:
    """
    Brute force over every k-subset and every partner of the forced size;
    no normalization and no pruning. Limited to |G| <= 16.
    """
    n = spec.order
    if n > NAIVE_ORDER_LIMIT:
        raise BoundExceededError(f"Naive search is limited to |G| <= {NAIVE_ORDER_LIMIT}, got {n}")
    if n % k:
        raise ValueError(f"Set size {k} does not divide |G| = {n}")
    l = n // k

    partners: Dict[bytes, List[ElementSet]] = {}
    for t in combinations(range(n), l):
        nu = weight_enumerator(spec, t)
        partners.setdefault(nu.tobytes(), []).append(t)

    classes: Dict[tuple, FoundPair] = {}
    for s in combinations(range(n), k):
        target = reconstruct_dual_spectrum(s, l, spec)
        if isinstance(target, Infeasible):
            continue
        for t in partners.get(np.asarray(target, dtype=np.int64).tobytes(), []):
            cert = verify_pair(s, t, spec)
            if cert.verified and cert.primitive:
                form = canonical_form(s, spec)
                classes.setdefault(form.key, FoundPair(form.elements, t, form.exact, _rds_signature(spec, s)))
                break
    return [classes[key] for key in sorted(classes)]


def class_keys(spec: GroupSpec, pairs: Sequence[FoundPair]) -> List[tuple]:
    return sorted(canonical_form(p.s, spec).key for p in pairs)


# ===========================================
# CLASSIFICATION
# ===========================================

@dataclass
class ClassificationRow:
    """One row of the table: group, |S|, status and its justification."""
    order: int
    set_size: int
    group: GroupSpec
    status: RowStatus
    witnesses: List[FoundPair] = field(default_factory=list)
    source: str = ""
    nodes: int = 0

    def __post_init__(self):
        self.status = RowStatus(self.status)
        self._validate_inputs()

    def _validate_inputs(self):
        if self.order != self.group.order:
            raise ValueError(f"Row order {self.order} differs from |{self.group.name}| = {self.group.order}")
        if self.status == RowStatus.EXISTS and not self.witnesses:
            raise ValueError("An 'exists' row needs at least one witness")
        if self.status == RowStatus.NONE and not self.source:
            raise ValueError("A 'none' row needs a rule tag or 'computer search'")

    @property
    def classes(self) -> int:
        return len(self.witnesses)

    def to_dict(self) -> dict:
        return {
            'order': self.order,
            'set_size': self.set_size,
            'group': self.group.to_dict(),
            'group_name': self.group.name,
            'status': self.status.value,
            'source': self.source,
            'classes': self.classes,
            'nodes': self.nodes,
            'witnesses': [w.to_dict(self.group) for w in self.witnesses],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ClassificationRow':
        spec = GroupSpec(tuple(data['group']['cyclic_factors']))
        return cls(
            order=int(data['order']),
            set_size=int(data['set_size']),
            group=spec,
            status=RowStatus(data['status']),
            witnesses=[FoundPair.from_dict(spec, w) for w in data.get('witnesses', [])],
            source=data.get('source', ''),
            nodes=int(data.get('nodes', 0)),
        )


def _witness_source(spec: GroupSpec, pairs: List[FoundPair]) -> str:
    kinds = []
    for pair in pairs:
        if pair.is_nnn1_rds:
            n = pair.rds[1]
            kinds.append(f"({n},{n},{n},1)-RDS")
        else:
            kinds.append(COMPUTER_SEARCH)
    return "; ".join(kinds)


def _cache_key(spec: GroupSpec, k: int, use_filters: bool) -> Dict[str, Any]:
    return {
        'group': list(spec.factors),
        'k': k,
        'engine_version': get_config().engine_version,
        'use_filters': use_filters,
    }


def row_sizes(spec: GroupSpec) -> List[int]:
    """|S| with 2 <= |S| <= sqrt(|G|) and |S| dividing |G|."""
    n = spec.order
    return [k for k in divisors(n) if 2 <= k <= isqrt(n)]


def classify_group(
    spec: GroupSpec,
    node_cap: Optional[int] = None,
    time_cap_seconds: Optional[float] = None,
    threads: int = 1,
    use_filters: bool = True,
    cache: Optional[ResultCache] = None
) -> List[ClassificationRow]:
    """Filters decide what they can; the rest goes to the search."""
    rows = []
    for k in row_sizes(spec):
        key = _cache_key(spec, k, use_filters)
        if cache is not None:
            cached = cache.get(key)
            if cached is not None:
                metrics.increment('cache_hits')
                rows.append(ClassificationRow.from_dict(cached))
                continue
            metrics.increment('cache_misses')

        job = SearchJob(spec, k, node_cap, time_cap_seconds, threads, use_filters)
        result = search_formally_dual_sets(job)
        if result.ruled_out:
            row = ClassificationRow(spec.order, k, spec, RowStatus.NONE, source=result.ruled_out[0].rule)
        elif result.status == RowStatus.EXISTS:
            row = ClassificationRow(spec.order, k, spec, RowStatus.EXISTS, result.pairs,
                                    _witness_source(spec, result.pairs), result.nodes)
        elif result.status == RowStatus.NONE:
            row = ClassificationRow(spec.order, k, spec, RowStatus.NONE, source=COMPUTER_SEARCH, nodes=result.nodes)
        else:
            row = ClassificationRow(spec.order, k, spec, RowStatus.INCONCLUSIVE, source="budget exhausted",
                                    nodes=result.nodes)

        if cache is not None and row.status != RowStatus.INCONCLUSIVE:
            cache.set(key, row.to_dict())
        rows.append(row)
    return rows


@dataclass(frozen=True)
class _ClassifyTask:
    factors: Tuple[int, ...]
    node_cap: Optional[int]
    time_cap_seconds: Optional[float]
    use_filters: bool
    cache_dir: Optional[str]


def _classify_task(task: _ClassifyTask) -> List[dict]:
    cache = ResultCache(task.cache_dir, ttl=get_config().cache_ttl) if task.cache_dir else None
    rows = classify_group(GroupSpec(task.factors), task.node_cap, task.time_cap_seconds,
                          1, task.use_filters, cache)
    return [row.to_dict() for row in rows]


@dataclass
class ClassificationTable:
    """All rows for abelian groups of non-square-free order <= max_order."""
    max_order: int
    rows: List[ClassificationRow] = field(default_factory=list)

    @property
    def inconclusive(self) -> List[ClassificationRow]:
        return [r for r in self.rows if r.status == RowStatus.INCONCLUSIVE]

    def find(self, factors: Sequence[int], k: int) -> Optional[ClassificationRow]:
        target = elementary_divisors(GroupSpec(tuple(factors)))
        for row in self.rows:
            if row.set_size == k and elementary_divisors(row.group) == target:
                return row
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                'order': r.order,
                'k': r.set_size,
                'group': r.group.name,
                'status': r.status.value,
                'classes': r.classes,
                'source': r.source,
            }
            for r in self.rows
        ], columns=['order', 'k', 'group', 'status', 'classes', 'source'])

    def mismatches(self) -> List[dict]:
        """Rows whose status differs from TABLE1_REFERENCE."""
        out = []
        for row in self.rows:
            expected = reference_status(row.group, row.set_size)
            if expected is not None and expected != row.status:
                out.append({'group': row.group.name, 'k': row.set_size,
                            'expected': expected.value, 'found': row.status.value})
        return out

    def to_dict(self) -> dict:
        return {'max_order': self.max_order, 'rows': [r.to_dict() for r in self.rows]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ClassificationTable':
        return cls(int(data['max_order']), [ClassificationRow.from_dict(r) for r in data['rows']])


def _is_square_free(n: int) -> bool:
    return all(v == 1 for v in factorint(n).values())


def classification_groups(max_order: int) -> List[GroupSpec]:
    groups = []
    for n in range(4, max_order + 1):
        if not _is_square_free(n):
            groups.extend(abelian_groups_of_order(n))
    return groups


@track_job("classify_range")
def classify_range(
    max_order: Optional[int] = None,
    extended: bool = False,
    threads: Optional[int] = None,
    cache_dir: Optional[str] = None,
    node_cap: Optional[int] = None,
    time_cap_seconds: Optional[float] = None,
    use_filters: bool = True
) -> ClassificationTable:
    """
    Classify every abelian group of non-square-free order up to max_order.

    Orders above the configured hard limit need extended=True; order 64
    and beyond are refused.
    """
    cfg = get_config()
    max_order = cfg.classify_default_max_order if max_order is None else max_order
    threads = cfg.threads if threads is None else threads
    if max_order >= REFUSED_ORDER:
        raise BoundExceededError(f"Classification stops below order {REFUSED_ORDER}, got {max_order}")
    if max_order > cfg.classify_hard_limit and not extended:
        raise BoundExceededError(
            f"Orders above {cfg.classify_hard_limit} need the extended flag, got {max_order}")

    groups = classification_groups(max_order)
    job_logger = StructuredLogger(__name__)
    job_logger.info("Classification", max_order=max_order, groups=len(groups), threads=threads)

    tasks = [_ClassifyTask(g.factors, node_cap, time_cap_seconds, use_filters, cache_dir) for g in groups]
    table = ClassificationTable(max_order)
    for rows in run_parallel(_classify_task, tasks, max_workers=threads):
        table.rows.extend(ClassificationRow.from_dict(r) for r in rows)
    table.rows.sort(key=lambda r: (r.order, r.set_size, r.group.rank, r.group.factors))

    exists = sum(1 for r in table.rows if r.status == RowStatus.EXISTS)
    logger.info(f"✓ Classified {len(groups)} groups up to order {max_order}: "
                f"{len(table.rows)} rows, {exists} with examples, {len(table.inconclusive)} inconclusive")
    return table


# ===========================================
# RANK STATISTICS
# ===========================================

@dataclass
class RankEntry:
    group: GroupSpec
    set_size: int
    s: ElementSet
    rank: Optional[int]
    minimal: bool
    rds: Optional[Tuple[int, int, int, int]] = None

    @property
    def is_nnn1_rds(self) -> bool:
        if self.rds is None:
            return False
        m, n, k, lam = self.rds
        return m == n == k and lam == 1 and n > 1

    def to_dict(self) -> dict:
        return {
            'group': self.group.to_dict(),
            'group_name': self.group.name,
            'set_size': self.set_size,
            'S': [list(self.group.coords_of(i)) for i in self.s],
            'rank': self.rank,
            'minimal': self.minimal,
            'rds': list(self.rds) if self.rds else None,
        }


@dataclass
class RankCensus:
    """Rank distribution of found primitive formally dual sets."""
    entries: List[RankEntry] = field(default_factory=list)

    def distribution(self) -> Dict[int, int]:
        counts = Counter(e.rank for e in self.entries if e.rank is not None and e.minimal)
        return dict(sorted(counts.items()))

    @property
    def cyclic_flags(self) -> List[RankEntry]:
        """Witnesses in cyclic groups whose minimal rank is not 3."""
        return [e for e in self.entries if is_cyclic(e.group) and e.minimal and e.rank != 3]

    @property
    def rank3_non_rds(self) -> List[RankEntry]:
        return [e for e in self.entries if e.minimal and e.rank == 3 and not e.is_nnn1_rds]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'group': e.group.name, 'k': e.set_size, 'rank': e.rank, 'minimal': e.minimal,
             'nnn1_rds': e.is_nnn1_rds}
            for e in self.entries
        ], columns=['group', 'k', 'rank', 'minimal', 'nnn1_rds'])

    def to_dict(self) -> dict:
        return {
            'distribution': {str(r): c for r, c in self.distribution().items()},
            'cyclic_flags': [e.to_dict() for e in self.cyclic_flags],
            'rank3_non_rds': [e.to_dict() for e in self.rank3_non_rds],
            'entries': [e.to_dict() for e in self.entries],
        }


def rank_entry(spec: GroupSpec, s: Sequence[int]) -> RankEntry:
    cfg = get_config()
    s = spec.normalize_set(s)
    decomposition = even_decomposition(s, spec, lattice_cap=cfg.lattice_cap, max_rank=cfg.max_rank,
                                       subset_budget=cfg.rank_subset_budget, subgroup_bound=cfg.subgroup_bound)
    if isinstance(decomposition, EvenDecomposition):
        rank, minimal = decomposition.rank, decomposition.minimal
    else:
        rank, minimal = None, False
    return RankEntry(spec, len(s), s, rank, minimal, _rds_signature(spec, s))


def rank_census(results: Sequence[Tuple[GroupSpec, Sequence[int]]]) -> RankCensus:
    """results: (group, S) for every primitive formally dual set found."""
    census = RankCensus([rank_entry(spec, s) for spec, s in results])
    for entry in census.cyclic_flags:
        logger.warning(f"⚠ Cyclic witness in {entry.group.name} has rank {entry.rank}")
    for entry in census.rank3_non_rds:
        logger.error(f"Rank three set in {entry.group.name} is not an (n,n,n,1)-RDS: {entry.s}")
    return census


def table_witnesses(table: ClassificationTable) -> List[Tuple[GroupSpec, ElementSet]]:
    out = []
    for row in table.rows:
        for w in row.witnesses:
            out.append((row.group, w.s))
    return out


def rank3_scope(
    table: Optional[ClassificationTable] = None,
    threads: Optional[int] = None,
    max_order: int = 36,
    max_size: int = 6
) -> RankCensus:
    """
    Every class with 2 <= |S| <= max_size, |S|^2 <= |G| <= max_order; the
    rank three ones must all be (n,n,n,1)-RDSs.
    """
    if table is None:
        table = classify_range(max_order, threads=threads)
    scoped = [
        (row.group, w.s) for row in table.rows for w in row.witnesses
        if row.order <= max_order and 2 <= row.set_size <= max_size
    ]
    census = rank_census(scoped)
    hits = [e for e in census.entries if e.rank == 3]
    logger.info(f"✓ Rank three scope: {len(census.entries)} classes, {len(hits)} of rank three, "
                f"{len(census.rank3_non_rds)} not (n,n,n,1)-RDS")
    return census


# ===========================================
# REFERENCE TABLE
# ===========================================

# (order, |S|, cyclic factors or None for every group of that order, status, source)
TABLE1_REFERENCE: List[Tuple[int, int, Optional[Tuple[int, ...]], str, str]] = [
    (4, 2, (4,), 'exists', '(2,2,2,1)-RDS'),
    (4, 2, (2, 2), 'none', 'size-two'),
    (8, 2, None, 'none', 'size-two'),
    (9, 3, (9,), 'none', 'odd-prime-size'),
    (9, 3, (3, 3), 'exists', '(3,3,3,1)-RDS'),
    (12, 2, None, 'none', 'size-two'),
    (12, 3, None, 'none', 'coprime-sizes'),
    (16, 2, None, 'none', 'size-two'),
    (16, 4, (16,), 'none', 'cyclic-prime-power'),
    (16, 4, (2, 8), 'none', COMPUTER_SEARCH),
    (16, 4, (4, 4), 'exists', 'product of two (2,2,2,1)-RDSs; (4,4,4,1)-RDS'),
    (16, 4, (2, 2, 4), 'none', COMPUTER_SEARCH),
    (16, 4, (2, 2, 2, 2), 'none', 'generator-bound'),
    (18, 2, None, 'none', 'size-two'),
    (18, 3, (2, 9), 'none', 'odd-prime-size'),
    (18, 3, (2, 3, 3), 'none', 'self-conjugacy'),
    (20, 2, None, 'none', 'size-two'),
    (20, 4, None, 'none', 'coprime-sizes'),
    (24, 2, None, 'none', 'size-two'),
    (24, 3, None, 'none', 'coprime-sizes'),
    (24, 4, None, 'none', 'self-conjugacy'),
    (25, 5, (25,), 'none', 'odd-prime-size'),
    (25, 5, (5, 5), 'exists', '(5,5,5,1)-RDS'),
    (27, 3, (27,), 'none', 'odd-prime-size'),
    (27, 3, (3, 9), 'none', 'odd-prime-size'),
    (27, 3, (3, 3, 3), 'none', 'generator-bound'),
    (28, 2, None, 'none', 'size-two'),
    (28, 4, None, 'none', 'coprime-sizes'),
    (32, 2, None, 'none', 'size-two'),
    (32, 4, (32,), 'none', 'cyclic-prime-power'),
    (32, 4, (2, 16), 'none', COMPUTER_SEARCH),
    (32, 4, (4, 8), 'none', COMPUTER_SEARCH),
    (32, 4, (2, 2, 8), 'none', COMPUTER_SEARCH),
    (32, 4, (2, 4, 4), 'exists', 'explicit 4-element set'),
    (32, 4, (2, 2, 2, 4), 'none', 'generator-bound'),
    (32, 4, (2, 2, 2, 2, 2), 'none', 'generator-bound'),
    (36, 2, None, 'none', 'size-two'),
    (36, 3, (4, 9), 'none', 'odd-prime-size'),
    (36, 3, (2, 2, 9), 'none', 'odd-prime-size'),
    (36, 3, (4, 3, 3), 'none', COMPUTER_SEARCH),
    (36, 3, (2, 2, 3, 3), 'none', COMPUTER_SEARCH),
    (36, 4, None, 'none', 'coprime-sizes'),
    (36, 6, (4, 9), 'none', 'cyclic-two-primes'),
    (36, 6, (2, 2, 9), 'none', COMPUTER_SEARCH),
    (36, 6, (4, 3, 3), 'exists', 'product of a (2,2,2,1)-RDS and a (3,3,3,1)-RDS'),
    (36, 6, (2, 2, 3, 3), 'none', COMPUTER_SEARCH),
    (40, 2, None, 'none', 'size-two'),
    (40, 4, (8, 5), 'none', 'self-conjugacy'),
    (40, 4, (2, 4, 5), 'none', 'weight'),
    (40, 4, (2, 2, 2, 5), 'none', 'weight'),
    (40, 5, None, 'none', 'coprime-sizes'),
    (44, 2, None, 'none', 'size-two'),
    (44, 4, None, 'none', 'coprime-sizes'),
    (45, 3, (9, 5), 'none', 'odd-prime-size'),
    (45, 3, (3, 3, 5), 'none', 'self-conjugacy'),
    (45, 5, None, 'none', 'coprime-sizes'),
    (48, 2, None, 'none', 'size-two'),
    (48, 3, None, 'none', 'coprime-sizes'),
    (48, 4, (16, 3), 'none', 'cyclic-two-primes'),
    (48, 4, (2, 8, 3), 'none', COMPUTER_SEARCH),
    (48, 4, (4, 4, 3), 'none', 'self-conjugacy'),
    (48, 4, (2, 2, 4, 3), 'none', 'self-conjugacy'),
    (48, 4, (2, 2, 2, 2, 3), 'none', 'self-conjugacy'),
    (48, 6, (16, 3), 'none', 'cyclic-two-primes'),
    (48, 6, (2, 8, 3), 'none', COMPUTER_SEARCH),
    (48, 6, (4, 4, 3), 'none', 'self-conjugacy'),
    (48, 6, (2, 2, 4, 3), 'none', 'self-conjugacy'),
    (48, 6, (2, 2, 2, 2, 3), 'none', 'self-conjugacy'),
    (49, 7, (49,), 'none', 'cyclic-prime-power'),
    (49, 7, (7, 7), 'exists', '(7,7,7,1)-RDS; skew Hadamard dual set'),
    (50, 2, None, 'none', 'size-two'),
    (50, 5, (2, 25), 'none', 'cyclic-two-primes'),
    (50, 5, (2, 5, 5), 'none', 'self-conjugacy'),
    (52, 2, None, 'none', 'size-two'),
    (52, 4, None, 'none', 'coprime-sizes'),
    (54, 2, None, 'none', 'size-two'),
    (54, 3, (2, 27), 'none', 'exponent-bound'),
    (54, 3, (2, 3, 9), 'none', 'self-conjugacy'),
    (54, 3, (2, 3, 3, 3), 'none', 'generator-bound'),
    (54, 6, None, 'none', 'self-conjugacy'),
    (56, 2, None, 'none', 'size-two'),
    (56, 4, None, 'none', 'self-conjugacy'),
    (56, 7, None, 'none', 'coprime-sizes'),
    (60, 2, None, 'none', 'size-two'),
    (60, 3, None, 'none', 'coprime-sizes'),
    (60, 4, None, 'none', 'coprime-sizes'),
    (60, 5, None, 'none', 'coprime-sizes'),
    (60, 6, None, 'none', 'weight'),
    (63, 3, None, 'none', 'weight'),
    (63, 7, None, 'none', 'coprime-sizes'),
]


def reference_status(spec: GroupSpec, k: int) -> Optional[RowStatus]:
    """Published status for (G, k), or None if the table has no such row."""
    divisors_of = elementary_divisors(spec)
    for order, size, factors, status, _ in TABLE1_REFERENCE:
        if order != spec.order or size != k:
            continue
        if factors is None or elementary_divisors(GroupSpec(factors)) == divisors_of:
            return RowStatus(status)
    return None


def reference_exists_rows(max_order: int) -> List[Tuple[int, int, Tuple[int, ...]]]:
    return [(o, k, f) for o, k, f, status, _ in TABLE1_REFERENCE
            if status == 'exists' and o <= max_order]
