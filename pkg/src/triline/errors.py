"""Shared exception taxonomy.

Four failure classes are distinguished: bad caller input, refusal of a
computation that would exceed a configured resource bound, a structural
violation of an expected algebraic shape in otherwise valid data, and
internal invariant breakage that indicates a bug rather than bad input.
"""


class TrilineError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TrilineError, ValueError):
    """Caller-supplied data fails a precondition (shape, bounds, hermiticity)."""


class ResourceLimitError(TrilineError):
    """Requested computation exceeds a configured enumeration or size cap."""


class StructureError(TrilineError):
    """Valid-looking data violates an expected algebraic structure.

    Raised e.g. when a log-series coefficient falls off the genus/link
    lattice; signals an assembly inconsistency upstream, not bad user input.
    """


class InvariantViolation(TrilineError, RuntimeError):
    """An internal self-check failed; indicates a bug in this package."""
