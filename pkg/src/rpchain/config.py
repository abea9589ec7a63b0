"""Numerical tolerances and exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Default thresholds; every public routine accepts an override via ``tol=``.

    ``psd`` is a per-dimension slack: an eigenvalue of an ``n x n`` matrix is
    treated as nonnegative when it is at least ``-psd * n``.
    """

    hermitian: float = 1e-12
    state: float = 1e-12
    psd: float = 1e-10
    j_invariance: float = 1e-10
    rank: float = 1e-10
    eigen: float = 1e-10

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value}")

    def psd_slack(self, dim: int) -> float:
        return self.psd * dim


DEFAULT_TOL = Tolerances()


class RpChainError(Exception):
    """Base class for package errors."""


class DimensionError(RpChainError, ValueError):
    """Shapes, subsystem tags or frames do not match."""


class PreconditionError(RpChainError, ValueError):
    """A documented precondition of an operation does not hold."""


class ClaimViolation(RpChainError, RuntimeError):
    """A numerically checked statement failed; points to a convention bug."""
