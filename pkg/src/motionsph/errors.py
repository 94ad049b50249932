"""Exception hierarchy for motionsph."""


class MotionsphError(Exception):
    """Base class for all library errors."""


class ConfigurationError(MotionsphError):
    """Unsupported root-system label or malformed configuration."""


class PreconditionError(MotionsphError):
    """An operation was called outside its stated domain."""


class SingularParameterError(MotionsphError):
    """A regular-parameter routine was called at (or too close to) a
    singular spectral parameter; use the singular/regularized path."""


class RegularParameterError(MotionsphError):
    """A singular-parameter routine was called at a regular parameter."""


class ProbeCollisionError(MotionsphError):
    """The probe direction makes two coset frequencies collide; re-pick."""


class InvariantViolationError(MotionsphError):
    """An internal invariant failed; indicates a bug, not bad input."""
