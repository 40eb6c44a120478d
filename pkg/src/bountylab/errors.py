"""Exception hierarchy shared across the solver library and the CLI.

Construction-time validation problems raise :class:`ParameterError` so the
CLI can map them to a usage error, while solver-domain failures (a fixed
point pushed against the support boundary, a vanishing limit) raise
:class:`NonInteriorError` or :class:`NoLimitError` and map to a distinct
exit code.
"""

from __future__ import annotations


class BountyLabError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BountyLabError, ValueError):
    """Invalid model or configuration parameters, rejected up front."""


class ZeroDensityError(BountyLabError, ValueError):
    """The cost density vanishes where a positive value is required."""


class SizeLimitError(BountyLabError, ValueError):
    """An exact evaluation was requested beyond its supported size."""


class NonInteriorError(BountyLabError, RuntimeError):
    """The interiority conditions fail, so no interior fixed point exists.

    ``lower_ok`` / ``upper_ok`` record which side of the support passed its
    check, so callers can report exactly which inequality failed.
    """

    def __init__(self, lower_ok: bool, upper_ok: bool, detail: str = ""):
        self.lower_ok = bool(lower_ok)
        self.upper_ok = bool(upper_ok)
        parts = []
        if not lower_ok:
            parts.append("expected reward at the lower support does not exceed the lowest cost")
        if not upper_ok:
            parts.append("expected reward at the upper support is not below the highest cost")
        msg = "; ".join(parts) or "interiority check failed"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class NoLimitError(BountyLabError, RuntimeError):
    """Large-contest participation vanishes: the limit equation has no root."""
