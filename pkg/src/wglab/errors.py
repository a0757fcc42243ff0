"""Exception hierarchy shared by every module.

DomainError marks bad parameters (the CLI maps it to exit code 2); every other
WGError is a computation failure (exit code 1).
"""


class WGError(Exception):
    """Base class for all library errors."""

    kind = "computation_error"


class DomainError(WGError, ValueError):
    """A parameter lies outside the domain of the operation."""

    kind = "domain_error"


class OverlapError(DomainError):
    """Major arcs would overlap (T <= 2 Q^2)."""

    kind = "overlap_error"


class AliasingError(DomainError):
    """Grid too coarse for an exact identity (M too small)."""

    kind = "aliasing_error"


class RegimeError(DomainError):
    """No lower-density regime covers the requested exponent."""

    kind = "regime_error"


class RestrictionError(DomainError):
    """s <= k^2 + k, outside the restriction-estimate range."""

    kind = "restriction_error"


class ScaleError(WGError):
    """Requested size is too small to be meaningful or too large to compute."""

    kind = "scale_error"


class NoSolutionError(WGError):
    """A congruence or selection problem has no solution."""

    kind = "no_solution"


class EmptySupportError(WGError):
    """A weighted sequence would be identically zero by construction."""

    kind = "empty_support"


class DegeneratePlanError(WGError):
    """A sieve plan is too small to be used (D < 2)."""

    kind = "degenerate_plan"


class GenerationError(WGError):
    """A random instance generator could not meet its constraints."""

    kind = "generation_error"
