"""Mapping of a quadratic bosonic (Bogoliubov) Hamiltonian onto oscillator parameters.

The mode Hamiltonian is ``sum K_lm a_l^+ a_m + 1/2 sum (Delta_lm a_l^+ a_m^+ + h.c.)``
with ``a_l = sqrt(K_ll/2) (q_l + i p_l / (hbar K_ll))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .model import (
    LindbladSpec,
    OscillatorNetwork,
    PhysicsError,
    StructureError,
    UnitSystem,
)

__all__ = ["BogoliubovModel", "UnstableModeError", "to_canonical", "two_mode_drift"]

_TOL = 1e-12


class UnstableModeError(PhysicsError):
    """A mode has ``K_ll <= |Re Delta_ll|``."""


@dataclass(frozen=True, eq=False)
class BogoliubovModel:
    k_matrix: NDArray[np.complex128]
    delta: NDArray[np.complex128]
    delta_tilde_diag: NDArray[np.complex128] = None

    def __post_init__(self):
        k = np.atleast_2d(np.array(self.k_matrix, dtype=complex))
        d = np.atleast_2d(np.array(self.delta, dtype=complex))
        if k.ndim != 2 or k.shape[0] != k.shape[1] or d.shape != k.shape:
            raise StructureError(f"K and Delta must be square and equal-shaped, got {k.shape}, {d.shape}")
        n = k.shape[0]
        dt = np.zeros(n, dtype=complex) if self.delta_tilde_diag is None else np.array(self.delta_tilde_diag, dtype=complex)
        dt = np.atleast_1d(dt)
        if dt.shape != (n,):
            raise StructureError(f"delta_tilde_diag must have length {n}, got shape {dt.shape}")
        for name, arr in (("k_matrix", k), ("delta", d), ("delta_tilde_diag", dt)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.k_matrix.shape[0]

    @classmethod
    def with_zeta(cls, k_matrix: ArrayLike, delta: ArrayLike, zeta: float) -> BogoliubovModel:
        """Steady state with ``Delta~_ll = i zeta`` on every mode."""
        k = np.atleast_2d(np.asarray(k_matrix, dtype=complex))
        return cls(k, delta, np.full(k.shape[0], 1j * zeta))

    def validate(self) -> None:
        k, d = self.k_matrix, self.delta
        scale = max(1.0, float(np.max(np.abs(k))), float(np.max(np.abs(d))))
        for ell in range(self.n):
            if k[ell, ell].imag != 0:
                raise PhysicsError(f"K_{ell + 1}{ell + 1} must be real, got {k[ell, ell]}")
        if np.max(np.abs(k - k.conj().T)) > _TOL * scale:
            raise PhysicsError("K must be Hermitian")
        if np.max(np.abs(d - d.T)) > _TOL * scale:
            raise PhysicsError("Delta must be symmetric")
        for ell in range(self.n):
            kll = k[ell, ell]
            if not kll.real > abs(d[ell, ell].real):
                raise UnstableModeError(
                    f"mode {ell + 1}: K_ll = {kll.real:g} must exceed |Re Delta_ll| = {abs(d[ell, ell].real):g}"
                )


def to_canonical(
    bog: BogoliubovModel, units: UnitSystem = UnitSystem()
) -> tuple[OscillatorNetwork, NDArray[np.float64]]:
    """Return the equivalent oscillator network and the steady-state ``mu_tilde``."""
    bog.validate()
    hbar = units.hbar
    k, d = bog.k_matrix, bog.delta
    kd = k.diagonal().real
    red = d.diagonal().real
    freqs = np.sqrt(kd**2 - red**2) / hbar
    masses = kd / (kd - red)
    root = np.sqrt(np.outer(kd, kd))
    mu = (d - k).imag * np.sqrt(np.outer(kd, 1.0 / kd)) / hbar
    nu = (k + d).real * root
    kappa = (k - d).real / (hbar**2 * root)
    np.fill_diagonal(nu, 0.0)
    np.fill_diagonal(kappa, 0.0)
    mu_tilde = bog.delta_tilde_diag.imag / hbar
    return OscillatorNetwork(masses, freqs, mu, nu, kappa), mu_tilde


def two_mode_drift(
    bog: BogoliubovModel, lind: LindbladSpec, units: UnitSystem = UnitSystem()
) -> NDArray[np.float64]:
    """The 4x4 drift matrix written directly in terms of ``K``, ``Delta`` and the friction coefficients."""
    if bog.n != 2 or lind.n != 2:
        raise StructureError("two_mode_drift needs exactly two modes")
    bog.validate()
    h = units.hbar
    k, d = bog.k_matrix, bog.delta
    lam, al, et = lind.lam, lind.alpha[0, 1], lind.eta[0, 1]
    k11, k22 = k[0, 0].real, k[1, 1].real
    r12 = np.sqrt(k11 / k22)
    r21 = np.sqrt(k22 / k11)
    s = np.sqrt(k11 * k22)
    im12 = (d[0, 1] - k[0, 1]).imag
    im21 = (d[1, 0] - k[1, 0]).imag
    re_km = (k[0, 1] - d[0, 1]).real
    re_kp = (k[0, 1] + d[0, 1]).real
    return np.array(
        [
            [
                -lam[0, 0] + d[0, 0].imag / h,
                (k11 - d[0, 0].real) / k11,
                -lam[0, 1] + im12 / h * r12,
                -al + re_km / s,
            ],
            [
                -k11 * (k11 + d[0, 0].real) / h**2,
                -lam[0, 0] - d[0, 0].imag / h,
                et - re_kp / h**2 * s,
                -lam[1, 0] - im21 / h * r21,
            ],
            [
                -lam[1, 0] + im21 / h * r21,
                al + re_km / s,
                -lam[1, 1] + d[1, 1].imag / h,
                (k22 - d[1, 1].real) / k22,
            ],
            [
                -et - re_kp / h**2 * s,
                -lam[0, 1] - im12 / h * r12,
                -k22 * (k22 + d[1, 1].real) / h**2,
                -lam[1, 1] - d[1, 1].imag / h,
            ],
        ]
    )
