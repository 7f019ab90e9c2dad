"""Canonical numerical tolerances shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    simplex_sum: float = 1e-12
    identity: float = 1e-12
    finite_diff_step: float = 1e-6
    finite_diff: float = 1e-6
    tight: float = 1e-7
    support: float = 1e-8
    fw_gap: float = 1e-8
    ascent: float = 1e-12
    converged_distance: float = 1e-5


TOL = Tolerances()


def close(a, b, tol):
    """Absolute comparison below magnitude 1, relative above."""
    return abs(a - b) <= tol * max(1.0, abs(b))
