"""
Performance Utilities for the Formally Dual Pairs Engines

This module provides timing instrumentation, deterministic cache keys,
a resumable on-disk result cache, and parallel fan-out helpers.

Key pieces:
1. Operation timing with slow-operation warnings
2. Content-addressed cache keys (sorted JSON + hashlib)
3. Disk cache with embedded content hash and corruption recovery
4. Process/thread pool fan-out with deterministic result order
"""

import time
import functools
import contextvars
import hashlib
import json
import os
from pathlib import Path
from typing import Dict, Any, Optional, Callable, Iterable, List
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor, ProcessPoolExecutor
import logging

import numpy as np

from core.exceptions import CacheIntegrityError

logger = logging.getLogger(__name__)


# ===========================================
# PERFORMANCE METRICS & MONITORING
# ===========================================

@dataclass
class PerformanceMetrics:
    """Track performance metrics for operations"""
    operation_name: str
    duration_ms: float
    timestamp: float


class PerformanceMonitor:
    """Monitor and log performance metrics"""

    def __init__(self, slow_threshold_ms: float = 5000.0):
        self.metrics: list[PerformanceMetrics] = []
        self.slow_threshold_ms = slow_threshold_ms
        self._enabled = True

    def track_operation(self, operation_name: str):
        """Decorator to track operation performance"""
        def decorator(func: Callable):
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                if not self._enabled:
                    return func(*args, **kwargs)

                start_time = time.time()
                result = func(*args, **kwargs)
                duration_ms = (time.time() - start_time) * 1000

                self.metrics.append(PerformanceMetrics(
                    operation_name=operation_name,
                    duration_ms=duration_ms,
                    timestamp=time.time()
                ))
                if len(self.metrics) > 10000:
                    self.metrics = self.metrics[-10000:]

                if duration_ms > self.slow_threshold_ms:
                    logger.warning(f"Slow operation: {operation_name} took {duration_ms:.0f}ms")

                return result
            return wrapper
        return decorator

    def get_stats(self) -> Dict[str, Any]:
        """Get performance statistics"""
        if not self.metrics:
            return {}

        by_operation: Dict[str, list] = {}
        for metric in self.metrics:
            by_operation.setdefault(metric.operation_name, []).append(metric.duration_ms)

        stats = {}
        for op_name, durations in by_operation.items():
            stats[op_name] = {
                'count': len(durations),
                'mean_ms': float(np.mean(durations)),
                'median_ms': float(np.median(durations)),
                'p95_ms': float(np.percentile(durations, 95)),
                'max_ms': float(np.max(durations))
            }

        return stats


# Global performance monitor
perf_monitor = PerformanceMonitor()


# ===========================================
# CACHE KEYS AND CANONICAL JSON
# ===========================================

def canonical_json(data: Any) -> str:
    """Byte-stable JSON text: sorted keys, no whitespace variance."""
    return json.dumps(data, sort_keys=True, separators=(',', ':'), default=str)


def generate_cache_key(data: Dict[str, Any]) -> str:
    """Generate deterministic cache key from data dictionary"""
    return hashlib.md5(canonical_json(data).encode()).hexdigest()


def content_hash(payload: Any) -> str:
    """sha256 over the canonical JSON of a payload."""
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


# ===========================================
# RESUMABLE DISK CACHE
# ===========================================

class ResultCache:
    """
    Disk cache for search and classification results.

    Each entry is a JSON file holding the key material, the payload, and a
    sha256 of the payload. A mismatching or unreadable entry is deleted and
    reported as a miss so the caller recomputes it.
    """

    def __init__(self, cache_dir: Optional[str] = None, ttl: int = 0):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.ttl = ttl
        self.hits = 0
        self.misses = 0
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.cache_dir is not None

    def _path(self, key: str) -> Path:
        return self.cache_dir / f"{key}.json"

    def get(self, key_material: Dict[str, Any]) -> Optional[Any]:
        """Return the cached payload or None (missing, expired, or corrupted)."""
        if not self.enabled:
            return None
        key = generate_cache_key(key_material)
        path = self._path(key)
        if not path.exists():
            self.misses += 1
            return None

        try:
            entry = json.loads(path.read_text())
            if content_hash(entry['payload']) != entry['sha256']:
                raise CacheIntegrityError(f"content hash mismatch for {key}")
        except (ValueError, KeyError, TypeError) as e:
            logger.warning(f"⚠ Corrupted cache entry {key}: {e}; recomputing")
            path.unlink(missing_ok=True)
            self.misses += 1
            return None

        if self.ttl and time.time() - entry.get('stored_at', 0) > self.ttl:
            path.unlink(missing_ok=True)
            self.misses += 1
            return None

        self.hits += 1
        logger.debug(f"Cache HIT: {key}")
        return entry['payload']

    def set(self, key_material: Dict[str, Any], payload: Any):
        """Store a JSON-serializable payload atomically."""
        if not self.enabled:
            return
        key = generate_cache_key(key_material)
        entry = {
            'key': key_material,
            'payload': payload,
            'sha256': content_hash(payload),
            'stored_at': time.time(),
        }
        tmp = self._path(key).with_suffix('.tmp')
        tmp.write_text(canonical_json(entry))
        os.replace(tmp, self._path(key))
        logger.debug(f"Cache SET: {key}")


# ===========================================
# PARALLEL FAN-OUT
# ===========================================

def run_parallel(
    func: Callable,
    items: Iterable,
    max_workers: int = 1,
    use_processes: bool = True
) -> List[Any]:
    """
    Apply func to every item, preserving input order in the result list.

    max_workers=1 runs inline so results and logs stay deterministic.
    """
    items = list(items)
    if max_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.info(f"Fanning out {len(items)} tasks to {max_workers} workers")
    if use_processes:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            return list(executor.map(func, items))

    # Threads run in a copy of the caller's context so correlation ids carry over
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(contextvars.copy_context().run, func, item) for item in items]
        return [f.result() for f in futures]
