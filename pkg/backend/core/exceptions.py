"""
Exception hierarchy for the formally dual pairs engines.

All errors derive from ValueError so callers that only know the
validation contract (ValueError on bad input) keep working.
"""


class DualityError(ValueError):
    """Base class for engine errors."""


class GroupMismatchError(DualityError):
    """Operands belong to different groups."""


class BoundExceededError(DualityError):
    """A configured size bound (subgroups, automorphisms, lattice) was exceeded."""


class InfeasibleError(DualityError):
    """No formally dual partner can exist with the requested data."""


class ConstructionError(DualityError):
    """A construction family received parameters outside its domain."""


class SchemaVersionError(DualityError):
    """A stored report was written by an incompatible schema version."""


class CacheIntegrityError(DualityError):
    """A stored report or cache entry does not match its content hash."""
