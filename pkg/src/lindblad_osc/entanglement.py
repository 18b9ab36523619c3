"""Two-mode Gaussian entanglement: squeezed thermal states, logarithmic negativity, sudden death.

Covariances use the ordering ``(q1, p1, q2, p2)`` and the vacuum variance
``hbar/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "SqueezedThermalSpec",
    "NegativityTrajectory",
    "NegativityDomainError",
    "squeezed_thermal_covariance",
    "smallest_pt_symplectic_eigenvalue",
    "log_negativity",
    "printed_log_negativity",
    "critical_squeezing",
    "printed_critical_squeezing",
    "sudden_death_time",
]


class NegativityDomainError(ValueError):
    """The partially transposed spectrum is complex beyond round-off."""


@dataclass(frozen=True)
class SqueezedThermalSpec:
    n1: float
    n2: float
    r: float

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or self.r < 0:
            raise ValueError(f"n1, n2, r must be non-negative, got {self.n1}, {self.n2}, {self.r}")

    @property
    def xi1(self) -> float:
        c, s = math.cosh(self.r), math.sinh(self.r)
        return self.n1 * c * c + self.n2 * s * s + 0.5 * math.cosh(2 * self.r)

    @property
    def xi2(self) -> float:
        c, s = math.cosh(self.r), math.sinh(self.r)
        return self.n2 * c * c + self.n1 * s * s + 0.5 * math.cosh(2 * self.r)

    @property
    def theta(self) -> float:
        return 0.5 * (self.n1 + self.n2 + 1) * math.sinh(2 * self.r)


@dataclass(frozen=True)
class NegativityTrajectory:
    times: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise ValueError("times and values must be non-empty vectors of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def squeezed_thermal_covariance(spec: SqueezedThermalSpec) -> NDArray[np.float64]:
    xi1, xi2, th = spec.xi1, spec.xi2, spec.theta
    return np.array(
        [
            [xi1, 0.0, th, 0.0],
            [0.0, xi1, 0.0, -th],
            [th, 0.0, xi2, 0.0],
            [0.0, -th, 0.0, xi2],
        ]
    )


def _invariants(sigma: ArrayLike) -> tuple[float, float]:
    s = np.asarray(sigma, dtype=float)
    if s.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got shape {s.shape}")
    det_a = np.linalg.det(s[:2, :2])
    det_b = np.linalg.det(s[2:, 2:])
    det_c = np.linalg.det(s[:2, 2:])
    return det_a + det_b - 2.0 * det_c, float(np.linalg.det(s))


def _pt_discriminant(sigma: ArrayLike) -> tuple[float, float, float]:
    delta, det = _invariants(sigma)
    disc = delta * delta - 4.0 * det
    if disc < 0:
        if disc < -1e-10 * max(1.0, delta * delta):
            raise NegativityDomainError(f"negative discriminant {disc:.3g}: not a valid covariance matrix")
        disc = 0.0
    return delta, disc, det


def smallest_pt_symplectic_eigenvalue(sigma: ArrayLike) -> float:
    delta, disc, det = _pt_discriminant(sigma)
    # (delta - sqrt(disc))/2 rewritten to avoid cancellation when nu is small
    big = delta + math.sqrt(disc)
    if big <= 0:
        return 0.0
    return math.sqrt(max(0.0, 2.0 * det / big))


def log_negativity(sigma: ArrayLike, hbar: float = 1.0) -> float:
    """``max(0, -log2(2 nu / hbar))`` for the smallest partially transposed symplectic eigenvalue ``nu``."""
    nu = smallest_pt_symplectic_eigenvalue(sigma)
    if nu == 0:
        raise NegativityDomainError("vanishing symplectic eigenvalue")
    return max(0.0, -math.log2(2.0 * nu / hbar))


def printed_log_negativity(sigma: ArrayLike) -> float:
    """Diagnostic: ``-log2(Delta - sqrt(Delta**2 - 4 det sigma))`` without clipping.

    Equals ``-log2(2 nu**2)``; kept only to compare against the standard measure.
    """
    delta, disc, _ = _pt_discriminant(sigma)
    return -math.log2(delta - math.sqrt(disc))


def critical_squeezing(n1: float, n2: float, *, hi: float = 5.0, tol: float = 1e-8) -> float:
    """Smallest squeezing at which the two-mode squeezed thermal state becomes entangled.

    Bisection of ``nu(r) - 1/2`` on ``[0, hi]``.  Returns ``0`` when the state is
    entangled for every ``r > 0``.
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("thermal occupations must be non-negative")

    def f(r: float) -> float:
        return smallest_pt_symplectic_eigenvalue(squeezed_thermal_covariance(SqueezedThermalSpec(n1, n2, r))) - 0.5

    lo = 0.0
    f_lo = f(lo)
    if f_lo <= 0:
        return 0.0
    if f(hi) > 0:
        raise ValueError(f"no separability threshold in [0, {hi}] for n1={n1}, n2={n2}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def printed_critical_squeezing(n1: float, n2: float) -> float:
    """Diagnostic: ``acosh((n1+1)(n2+1)/(n1+n2+1))``."""
    return math.acosh((n1 + 1) * (n2 + 1) / (n1 + n2 + 1))


def sudden_death_time(traj: NegativityTrajectory, eps: float = 1e-9) -> float | None:
    """Earliest sample time after which the negativity stays at or below ``eps``."""
    above = np.flatnonzero(traj.values > eps)
    if above.size == 0:
        return float(traj.times[0])
    last = above[-1]
    if last == traj.times.size - 1:
        return None
    return float(traj.times[last + 1])
