"""Drift matrix, Gibbs covariance, steady states and covariance propagation.

The second moments obey ``d sigma/dt = M sigma + sigma M^T + 2 D``.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._numerics import coth
from .model import (
    EquilibriumSpec,
    LindbladSpec,
    OscillatorNetwork,
    PhysicsError,
    StructureError,
    UnitSystem,
    UnstableEquilibriumError,
    hamiltonian_matrix,
    symplectic_form,
)

__all__ = [
    "NotHurwitzError",
    "drift_matrix",
    "gibbs_covariance",
    "oracle_diffusion",
    "matrix_exponential",
    "solve_steady_state",
    "evolve_covariance",
    "symmetrize",
    "uncertainty_min_eigenvalue",
    "max_real_eigenvalue",
]

Array = NDArray[np.float64]


class NotHurwitzError(PhysicsError):
    """The drift matrix has an eigenvalue with non-negative real part."""

    def __init__(self, eigenvalue: complex):
        self.eigenvalue = complex(eigenvalue)
        super().__init__(
            f"no stable steady state: drift eigenvalue {self.eigenvalue.real:.6g}"
            f"{self.eigenvalue.imag:+.6g}j has non-negative real part"
        )


def symmetrize(a: ArrayLike) -> Array:
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def drift_matrix(
    net: OscillatorNetwork, lind: LindbladSpec, units: UnitSystem = UnitSystem()
) -> Array:
    """Return ``M = J G + M_diss``.

    The dissipative part has, in row ``q_k``, ``-lambda_kj`` (column ``q_j``)
    and ``-alpha_kj`` (column ``p_j``); in row ``p_k``, ``+eta_kj`` (column
    ``q_j``) and ``-lambda_jk`` (column ``p_j``).
    """
    n = net.n
    if lind.n != n:
        raise StructureError(f"lindblad dimension {lind.n} does not match network dimension {n}")
    m = symplectic_form(n) @ hamiltonian_matrix(net)
    m[0::2, 0::2] -= lind.lam
    m[0::2, 1::2] -= lind.alpha
    m[1::2, 0::2] += lind.eta
    m[1::2, 1::2] -= lind.lam.T
    return m


def gibbs_covariance(
    net: OscillatorNetwork, eq: EquilibriumSpec, units: UnitSystem = UnitSystem()
) -> Array:
    """Covariance of ``exp(-beta H_eq)/Z``; block diagonal over oscillators."""
    n = net.n
    if eq.n != n:
        raise StructureError(f"mu_tilde length {eq.n} does not match network dimension {n}")
    beta = eq.beta(units)
    sigma = np.zeros((2 * n, 2 * n))
    for k in range(n):
        m, w, mt = net.masses[k], net.frequencies[k], eq.mu_tilde[k]
        if not w > abs(mt):
            raise UnstableEquilibriumError(f"stability: ω_{k + 1} ≤ |μ̃_{k + 1}{k + 1}|")
        omega = math.sqrt(w * w - mt * mt)
        c = units.hbar / (2.0 * omega) * coth(units.hbar * beta * omega / 2.0)
        sigma[2 * k, 2 * k] = c / m
        sigma[2 * k + 1, 2 * k + 1] = c * m * w * w
        sigma[2 * k, 2 * k + 1] = sigma[2 * k + 1, 2 * k] = -c * mt
    return sigma


def oracle_diffusion(m: ArrayLike, sigma_tilde: ArrayLike) -> Array:
    """The unique ``D`` making ``sigma_tilde`` stationary under drift ``m``."""
    m = np.asarray(m, dtype=float)
    s = np.asarray(sigma_tilde, dtype=float)
    if m.shape != s.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"shape mismatch: drift {m.shape}, covariance {s.shape}")
    a = m @ s
    return -0.5 * (a + a.T)


# Pade coefficients and 1-norm thresholds from Higham (2005), "The scaling and
# squaring method for the matrix exponential revisited".
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0,
    ),
    13: (
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
        33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
    ),
}
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _pade_uv(a: Array, order: int) -> tuple[Array, Array]:
    b = _PADE[order]
    ident = np.eye(a.shape[0])
    a2 = a @ a
    if order < 13:
        powers = [ident, a2]
        while len(powers) <= order // 2:
            powers.append(powers[-1] @ a2)
        u = sum(b[2 * i + 1] * powers[i] for i in range(order // 2 + 1))
        v = sum(b[2 * i] * powers[i] for i in range(order // 2 + 1))
        return a @ u, v
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    return u, v


def matrix_exponential(a: ArrayLike) -> Array:
    """``exp(a)`` by scaling and squaring with a diagonal Pade approximant."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructureError(f"matrix_exponential needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exponential: non-finite entries")
    if a.shape[0] == 0:
        return np.zeros((0, 0))
    norm = np.linalg.norm(a, 1)
    for order in (3, 5, 7, 9):
        if norm <= _THETA[order]:
            u, v = _pade_uv(a, order)
            return np.linalg.solve(v - u, v + u)
    s = max(0, int(math.ceil(math.log2(norm / _THETA[13]))))
    u, v = _pade_uv(a / 2.0**s, 13)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def max_real_eigenvalue(m: ArrayLike) -> complex:
    """Eigenvalue of ``m`` with the largest real part."""
    ev = np.linalg.eigvals(np.asarray(m, dtype=float))
    return complex(ev[np.argmax(ev.real)])


def solve_steady_state(m: ArrayLike, d: ArrayLike) -> Array:
    """Solve ``M s + s M^T = -2 D`` by a dense Kronecker-vectorised solve.

    Raises
    ------
    NotHurwitzError
        If ``M`` has an eigenvalue with real part ``>= 0``.
    """
    m = np.asarray(m, dtype=float)
    d = np.asarray(d, dtype=float)
    if m.shape != d.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"shape mismatch: drift {m.shape}, diffusion {d.shape}")
    lead = max_real_eigenvalue(m)
    if lead.real >= 0:
        raise NotHurwitzError(lead)
    n = m.shape[0]
    ident = np.eye(n)
    # row-major vec: vec(M S) = (M kron I) vec S, vec(S M^T) = (I kron M) vec S
    op = np.kron(m, ident) + np.kron(ident, m)
    s = np.linalg.solve(op, -2.0 * d.reshape(-1)).reshape(n, n)
    return symmetrize(s)


def evolve_covariance(
    sigma0: ArrayLike, m: ArrayLike, sigma_tilde: ArrayLike, t: float
) -> Array:
    """``sigma(t) = e^{Mt} (sigma0 - sigma_tilde) e^{M^T t} + sigma_tilde``."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    sigma0 = np.asarray(sigma0, dtype=float)
    sigma_tilde = np.asarray(sigma_tilde, dtype=float)
    m = np.asarray(m, dtype=float)
    if not (sigma0.shape == sigma_tilde.shape == m.shape):
        raise StructureError(
            f"shape mismatch: sigma0 {sigma0.shape}, drift {m.shape}, sigma_tilde {sigma_tilde.shape}"
        )
    if t == 0:
        return symmetrize(sigma0)
    e = matrix_exponential(m * t)
    return symmetrize(e @ (sigma0 - sigma_tilde) @ e.T + sigma_tilde)


def uncertainty_min_eigenvalue(sigma: ArrayLike, units: UnitSystem = UnitSystem()) -> float:
    """Smallest eigenvalue of the Hermitian ``sigma + (i hbar / 2) J``."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    h = sigma + 0.5j * units.hbar * symplectic_form(n)
    return float(np.linalg.eigvalsh(h)[0])
