"""
Observability for the Formally Dual Pairs Engines
=================================================

Provides:
1. JSON job logs tagged with a correlation id (python-json-logger)
2. Work counters for searches, filters and the result cache
3. A timing decorator for long-running jobs
4. Optional Sentry error tracking
"""

import time
import logging
import uuid
from datetime import datetime, timezone
from typing import Dict, Any, Optional
from functools import wraps
from contextlib import contextmanager
from contextvars import ContextVar

import psutil
from pythonjsonlogger import jsonlogger

logger = logging.getLogger(__name__)

_JSON_FIELDS = '%(timestamp)s %(level)s %(name)s %(correlation_id)s %(message)s'


# ===========================================
# CORRELATION IDS
# ===========================================

_correlation_id: ContextVar[Optional[str]] = ContextVar('correlation_id', default=None)


def get_correlation_id() -> str:
    """Current job id; one is created on first use."""
    current = _correlation_id.get()
    if current is None:
        current = uuid.uuid4().hex
        _correlation_id.set(current)
    return current


@contextmanager
def correlation_context(correlation_id: Optional[str] = None):
    """Scope one CLI job under its own id, restoring the previous one afterwards."""
    token = _correlation_id.set(correlation_id or uuid.uuid4().hex)
    try:
        yield _correlation_id.get()
    finally:
        _correlation_id.reset(token)


# ===========================================
# STRUCTURED LOGGING
# ===========================================

class StructuredLogger:
    """
    JSON lines on stderr for job milestones.

    Keyword arguments become top-level fields of the record, next to the
    timestamp, level and correlation id.
    """

    def __init__(self, name: str, level: int = logging.INFO):
        self.logger = logging.getLogger(name)
        if not any(getattr(h, '_fdp_json', False) for h in self.logger.handlers):
            handler = logging.StreamHandler()
            handler.setFormatter(jsonlogger.JsonFormatter(fmt=_JSON_FIELDS))
            handler._fdp_json = True
            self.logger.addHandler(handler)
        self.logger.setLevel(level)

    def log(self, level: int, message: str, **fields):
        fields.setdefault('timestamp', datetime.now(timezone.utc).isoformat())
        fields.setdefault('correlation_id', get_correlation_id())
        fields.setdefault('level', logging.getLevelName(level))
        self.logger.log(level, message, extra=fields)

    def info(self, message: str, **fields):
        self.log(logging.INFO, message, **fields)

    def warning(self, message: str, **fields):
        self.log(logging.WARNING, message, **fields)

    def error(self, message: str, **fields):
        self.log(logging.ERROR, message, **fields)


# ===========================================
# METRICS
# ===========================================

COUNTERS = (
    'job_count', 'error_count', 'search_nodes', 'search_candidates', 'search_classes',
    'filter_kills', 'pairs_verified', 'cache_hits', 'cache_misses',
)


class MetricsCollector:
    """In-process work counters; durations are kept as sum and count."""

    def __init__(self):
        self.metrics: Dict[str, float] = dict.fromkeys(COUNTERS, 0)

    def increment(self, metric: str, value: float = 1.0):
        self.metrics[metric] = self.metrics.get(metric, 0) + value

    def record_duration(self, metric: str, duration: float):
        self.increment(f'{metric}_sum', duration)
        self.increment(f'{metric}_count')

    def reset(self):
        self.metrics = dict.fromkeys(COUNTERS, 0)

    def get_stats(self) -> Dict[str, Any]:
        """Counters, cache hit rate and the process footprint."""
        process = psutil.Process()
        hits, misses = self.metrics['cache_hits'], self.metrics['cache_misses']
        stats = {
            'counters': {k: self.metrics[k] for k in COUNTERS},
            'cache_hit_rate': hits / max(1, hits + misses),
            'process': {
                'memory_mb': round(process.memory_info().rss / 2 ** 20, 1),
                'threads': process.num_threads(),
            },
        }
        runs = self.metrics.get('job_duration_count', 0)
        if runs:
            stats['avg_job_seconds'] = self.metrics['job_duration_sum'] / runs
        return stats


metrics = MetricsCollector()


def track_job(name: str):
    """Log start, finish and duration of a long-running call; failures are counted and re-raised."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            job_logger = StructuredLogger(func.__module__)
            job_logger.info(f"Job started: {name}")
            start = time.time()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                metrics.increment('error_count')
                job_logger.error(f"Job failed: {name}", error=str(e), seconds=round(time.time() - start, 3))
                raise
            elapsed = time.time() - start
            metrics.increment('job_count')
            metrics.record_duration('job_duration', elapsed)
            job_logger.info(f"Job completed: {name}", seconds=round(elapsed, 3),
                            search_nodes=metrics.metrics['search_nodes'])
            return result
        return wrapper
    return decorator


# ===========================================
# ERROR TRACKING
# ===========================================

def init_error_tracking(sentry_dsn: Optional[str] = None, environment: str = 'development'):
    """Enable Sentry when a DSN is configured; a missing package only disables it."""
    if not sentry_dsn:
        logger.info("Sentry DSN not provided, error tracking disabled")
        return
    try:
        import sentry_sdk
        from sentry_sdk.integrations.logging import LoggingIntegration
    except ImportError:
        logger.warning("⚠ sentry-sdk not installed, error tracking disabled")
        return
    sentry_sdk.init(
        dsn=sentry_dsn,
        traces_sample_rate=0.0,
        integrations=[LoggingIntegration(level=logging.INFO, event_level=logging.ERROR)],
        environment=environment,
    )
    logger.info("✓ Sentry error tracking initialized")


def capture_exception(exception: Exception, context: Optional[Dict] = None):
    """Report to Sentry with the job context and correlation id."""
    try:
        import sentry_sdk
    except ImportError:
        logger.error(f"Sentry not available: {exception}")
        return
    with sentry_sdk.push_scope() as scope:
        for key, value in (context or {}).items():
            scope.set_context(key, value)
        scope.set_tag('correlation_id', get_correlation_id())
        sentry_sdk.capture_exception(exception)
