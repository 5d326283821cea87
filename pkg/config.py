"""
Configuration for the formally dual pairs toolkit.

Values come from the environment (optionally through a .env file); CLI flags
override them per invocation. APP_ENV selects a preset for development,
staging or production runs.
"""

import os
import logging
from dataclasses import dataclass, field
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()

logger = logging.getLogger(__name__)

ENGINE_VERSION = "1.0.0"


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


def _env_flag(name: str, default: str = 'false') -> bool:
    return os.getenv(name, default).lower() == 'true'


def _env(name: str, default: Optional[str] = None):
    """Field default read from the environment each time a config is built."""
    return field(default_factory=lambda: os.getenv(name, default))


def _env_int_field(name: str, default: int):
    return field(default_factory=lambda: _env_int(name, default))


@dataclass
class AppConfig:
    """Bounds, budgets, cache and observability settings."""

    # Environment
    env: str = _env('APP_ENV', 'development')
    debug: bool = field(default_factory=lambda: _env_flag('DEBUG'))
    log_level: str = _env('LOG_LEVEL', 'INFO')

    # Group-theory bounds
    subgroup_bound: int = _env_int_field('SUBGROUP_BOUND', 4096)
    automorphism_bound: int = _env_int_field('AUTOMORPHISM_BOUND', 256)
    canonical_product_cap: int = _env_int_field('CANONICAL_PRODUCT_CAP', 10_000_000)
    lattice_cap: int = _env_int_field('LATTICE_CAP', 64)
    max_rank: int = _env_int_field('MAX_RANK', 6)
    rank_subset_budget: int = _env_int_field('RANK_SUBSET_BUDGET', 2_000_000)

    # Search budgets
    node_cap: int = _env_int_field('NODE_CAP', 1_000_000_000)
    time_cap_seconds: float = field(default_factory=lambda: float(os.getenv('TIME_CAP_SECONDS', '3600')))
    threads: int = _env_int_field('THREADS', 1)
    classify_default_max_order: int = _env_int_field('CLASSIFY_DEFAULT_MAX_ORDER', 40)
    classify_hard_limit: int = _env_int_field('CLASSIFY_HARD_LIMIT', 49)

    # Result cache
    cache_dir: str = _env('FDP_CACHE_DIR', '.fdp_cache')
    cache_ttl: int = _env_int_field('CACHE_TTL', 0)  # 0 = never expires
    engine_version: str = ENGINE_VERSION

    # Observability
    sentry_dsn: Optional[str] = _env('SENTRY_DSN')
    sentry_environment: str = field(
        default_factory=lambda: os.getenv('SENTRY_ENVIRONMENT', os.getenv('APP_ENV', 'development')))

    def __post_init__(self):
        self._validate_config()
        logger.info(f"Configuration loaded for environment: {self.env}")

    def _validate_config(self):
        """Raise ValueError on out-of-range settings."""
        ranges = {
            'SUBGROUP_BOUND': (self.subgroup_bound, 1, None),
            'AUTOMORPHISM_BOUND': (self.automorphism_bound, 1, None),
            'LATTICE_CAP': (self.lattice_cap, 1, 4096),
            'MAX_RANK': (self.max_rank, 1, 12),
            'NODE_CAP': (self.node_cap, 1, None),
            'THREADS': (self.threads, 1, 256),
            'CACHE_TTL': (self.cache_ttl, 0, None),
        }
        for name, (value, low, high) in ranges.items():
            if value < low or (high is not None and value > high):
                bound = f"between {low} and {high}" if high is not None else f">= {low}"
                raise ValueError(f"{name} must be {bound}, got {value}")

        if self.time_cap_seconds <= 0:
            raise ValueError("TIME_CAP_SECONDS must be positive")

        if self.classify_default_max_order > self.classify_hard_limit:
            logger.warning("⚠ CLASSIFY_DEFAULT_MAX_ORDER exceeds the hard limit; --extended will be required")

    def get_safe_dict(self) -> dict:
        """Settings worth logging (no secrets)."""
        return {
            'env': self.env,
            'log_level': self.log_level,
            'automorphism_bound': self.automorphism_bound,
            'lattice_cap': self.lattice_cap,
            'max_rank': self.max_rank,
            'node_cap': self.node_cap,
            'time_cap_seconds': self.time_cap_seconds,
            'threads': self.threads,
            'cache_dir': self.cache_dir,
            'engine_version': self.engine_version,
            'error_tracking': bool(self.sentry_dsn),
        }


class DevelopmentConfig(AppConfig):
    """Verbose logs, default budgets."""
    def __init__(self):
        super().__init__()
        self.env = 'development'
        self.debug = True
        self.log_level = 'DEBUG'


class StagingConfig(AppConfig):
    def __init__(self):
        super().__init__()
        self.env = 'staging'
        self.debug = False


class ProductionConfig(AppConfig):
    """Quiet logs and a longer time cap for classification runs."""
    def __init__(self):
        super().__init__()
        self.env = 'production'
        self.debug = False
        self.log_level = 'WARNING'
        self.time_cap_seconds = 6 * 3600.0


ENV_CONFIGS = {
    'development': DevelopmentConfig,
    'staging': StagingConfig,
    'production': ProductionConfig,
}


def get_config_for_env(env: Optional[str]) -> AppConfig:
    """Preset for env; unknown or unset env gives the plain environment-driven config."""
    return ENV_CONFIGS.get(env or '', AppConfig)()


# Global configuration instance; presets apply only when APP_ENV is set
config = get_config_for_env(os.getenv('APP_ENV'))


def get_config() -> AppConfig:
    return config


def reload_config() -> AppConfig:
    """Re-read the environment (and .env) into the global instance."""
    global config
    load_dotenv(override=True)
    config = get_config_for_env(os.getenv('APP_ENV'))
    return config
