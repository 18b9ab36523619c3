"""Closed-form diffusion coefficients driving the network to its Gibbs state.

Besides the analytical coefficients this module provides the diagnostic
``Phi``/``Psi``/``Gamma`` system, complete-positivity checks and the
Einstein-relation report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from ._numerics import coth
from .dynamics import NotHurwitzError, drift_matrix, gibbs_covariance, max_real_eigenvalue, oracle_diffusion
from .model import (
    EquilibriumSpec,
    LindbladSpec,
    OscillatorNetwork,
    StructureError,
    UnitSystem,
    UnstableEquilibriumError,
    require_valid,
)

__all__ = [
    "diagonal_diffusion",
    "cross_diffusion",
    "assemble_diffusion",
    "compare_diffusion",
    "DiffusionComparison",
    "phi_psi_gamma_residuals",
    "PhiPsiGamma",
    "ConstraintCheck",
    "ConstraintReport",
    "verify_cp_constraints",
    "lindblad_coefficient_matrix",
    "EinsteinReport",
    "einstein_report",
    "EINSTEIN_REGIME_THRESHOLD",
]

Array = NDArray[np.float64]

EINSTEIN_REGIME_THRESHOLD = 0.05


def _mode(net: OscillatorNetwork, eq: EquilibriumSpec, units: UnitSystem, k: int):
    """Return ``(m, omega, mu_tilde, Omega, C)`` with ``C = hbar/(2 Omega) coth``."""
    m = net.masses[k]
    w = net.frequencies[k]
    mt = eq.mu_tilde[k]
    if not w > abs(mt):
        raise UnstableEquilibriumError(f"stability: ω_{k + 1} ≤ |μ̃_{k + 1}{k + 1}|")
    omega = math.sqrt(w * w - mt * mt)
    x = units.hbar * eq.beta(units) * omega / 2.0
    return m, w, mt, omega, units.hbar / (2.0 * omega) * coth(x)


def _check_index(n: int, *idx: int):
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"oscillator index {i} out of range for N={n}")


def diagonal_diffusion(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    k: int = 0,
) -> tuple[float, float, float]:
    """``(D_qkqk, D_pkpk, D_qkpk)`` for oscillator ``k``."""
    _check_index(net.n, k)
    m, w, mt, _, c = _mode(net, eq, units, k)
    lam = lind.lam[k, k]
    mu = net.mu[k, k]
    dqq = c * (lam - mu + mt) / m
    dpp = c * m * w * w * (lam + mu - mt)
    dpq = -c * lam * mt
    return dqq, dpp, dpq


def cross_diffusion(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    k: int = 0,
    j: int = 1,
    *,
    verbatim: bool = False,
) -> tuple[float, float, float, float]:
    """``(D_qkqj, D_pkpj, D_qkpj, D_qjpk)`` for ``k != j``.

    With ``verbatim=True`` the momentum-momentum coefficient pairs
    ``lambda_jk + mu_jk`` with oscillator ``k`` (and vice versa).  The default
    pairs ``lambda_kj + mu_kj`` with oscillator ``k``, which is the pairing
    that makes the Gibbs state stationary.
    """
    if k == j:
        raise ValueError("cross_diffusion needs k != j; use diagonal_diffusion")
    _check_index(net.n, k, j)
    mk, wk, tk, _, ck = _mode(net, eq, units, k)
    mj, wj, tj, _, cj = _mode(net, eq, units, j)
    lam, alpha, eta = lind.lam, lind.alpha, lind.eta
    mu, nu, kappa = net.mu, net.nu, net.kappa

    dqq = 0.5 * ck * ((lam[j, k] - mu[j, k]) / mk + tk * (alpha[k, j] - kappa[k, j])) + 0.5 * cj * (
        (lam[k, j] - mu[k, j]) / mj - tj * (alpha[k, j] + kappa[k, j])
    )

    if verbatim:
        fk, fj = lam[j, k] + mu[j, k], lam[k, j] + mu[k, j]
    else:
        fk, fj = lam[k, j] + mu[k, j], lam[j, k] + mu[j, k]
    dpp = 0.5 * ck * (mk * wk * wk * fk - tk * (eta[k, j] + nu[k, j])) + 0.5 * cj * (
        mj * wj * wj * fj + tj * (eta[k, j] - nu[k, j])
    )

    def mixed(a: int, b: int, ca: float, cb: float, ma: float, mb: float, wb: float, ta: float, tb: float):
        return 0.5 * ca * ((eta[a, b] + nu[a, b]) / ma - ta * (lam[a, b] + mu[a, b])) + 0.5 * cb * (
            mb * wb * wb * (alpha[a, b] - kappa[a, b]) - tb * (lam[a, b] - mu[a, b])
        )

    dqkpj = mixed(k, j, ck, cj, mk, mj, wj, tk, tj)
    dqjpk = mixed(j, k, cj, ck, mj, mk, wk, tj, tk)
    return dqq, dpp, dqkpj, dqjpk


def _closed_form(net, lind, eq, units, verbatim: bool = False) -> Array:
    n = net.n
    d = np.zeros((2 * n, 2 * n))
    for k in range(n):
        dqq, dpp, dqp = diagonal_diffusion(net, lind, eq, units, k)
        d[2 * k, 2 * k] = dqq
        d[2 * k + 1, 2 * k + 1] = dpp
        d[2 * k, 2 * k + 1] = d[2 * k + 1, 2 * k] = dqp
    for k in range(n):
        for j in range(k + 1, n):
            qq, pp, qkpj, qjpk = cross_diffusion(net, lind, eq, units, k, j, verbatim=verbatim)
            d[2 * k, 2 * j] = d[2 * j, 2 * k] = qq
            d[2 * k + 1, 2 * j + 1] = d[2 * j + 1, 2 * k + 1] = pp
            d[2 * k, 2 * j + 1] = d[2 * j + 1, 2 * k] = qkpj
            d[2 * j, 2 * k + 1] = d[2 * k + 1, 2 * j] = qjpk
    return d


def assemble_diffusion(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    source: Literal["closed_form", "oracle"] = "oracle",
) -> Array:
    """Full ``2N x 2N`` diffusion matrix from the chosen source.

    ``"oracle"`` returns ``-(M s + s M^T)/2`` for the Gibbs covariance ``s``
    and requires a Hurwitz drift; ``"closed_form"`` evaluates the analytical
    coefficients entry by entry.
    """
    require_valid(net, lind, eq)
    if source == "closed_form":
        return _closed_form(net, lind, eq, units)
    if source == "oracle":
        m = drift_matrix(net, lind, units)
        lead = max_real_eigenvalue(m)
        if lead.real >= 0:
            raise NotHurwitzError(lead)
        return oracle_diffusion(m, gibbs_covariance(net, eq, units))
    raise ValueError(f"unknown diffusion source {source!r}")


@dataclass
class DiffusionComparison:
    """Entrywise comparison of the analytical coefficients with the oracle."""

    labels: list[str]
    closed_form: Array
    verbatim: Array
    oracle: Array
    rtol: float

    @property
    def abs_diff(self) -> Array:
        return np.abs(self.closed_form - self.oracle)

    def agree(self) -> NDArray[np.bool_]:
        scale = np.maximum(np.abs(self.oracle), 1.0)
        return self.abs_diff <= self.rtol * scale

    def discrepancies(self) -> list[tuple[str, str, float, float]]:
        ok = self.agree()
        n = len(self.labels)
        return [
            (self.labels[a], self.labels[b], float(self.closed_form[a, b]), float(self.oracle[a, b]))
            for a in range(n)
            for b in range(a, n)
            if not ok[a, b]
        ]

    def rows(self):
        """Upper-triangle records: ``(F, G, closed_form, verbatim, oracle, abs_diff, agree)``."""
        ok = self.agree()
        n = len(self.labels)
        for a in range(n):
            for b in range(a, n):
                yield (
                    self.labels[a],
                    self.labels[b],
                    float(self.closed_form[a, b]),
                    float(self.verbatim[a, b]),
                    float(self.oracle[a, b]),
                    float(self.abs_diff[a, b]),
                    bool(ok[a, b]),
                )


def phase_space_labels(n: int) -> list[str]:
    return [f"{v}{k + 1}" for k in range(n) for v in ("q", "p")]


def compare_diffusion(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    rtol: float = 1e-10,
) -> DiffusionComparison:
    """Closed-form, verbatim-printed and oracle diffusion matrices side by side."""
    require_valid(net, lind, eq)
    oracle = oracle_diffusion(drift_matrix(net, lind, units), gibbs_covariance(net, eq, units))
    return DiffusionComparison(
        labels=phase_space_labels(net.n),
        closed_form=_closed_form(net, lind, eq, units),
        verbatim=_closed_form(net, lind, eq, units, verbatim=True),
        oracle=oracle,
        rtol=rtol,
    )


@dataclass
class PhiPsiGamma:
    k: int
    j: int
    phi: float
    psi: float
    gamma_kj: float
    gamma_jk: float
    residuals: tuple[float, float, float, float]


def _phi_psi_gamma_terms(net, lind, eq, units, k, j):
    """Evaluate ``Phi_kj``, ``Psi_kj``, ``Gamma_kj``, ``Gamma_jk`` as written."""
    nu = net.nu_full()
    kappa = net.kappa_full()
    lam, alpha, eta, mu = lind.lam, lind.alpha, lind.eta, net.mu
    m = net.masses
    w = net.frequencies
    modes = {i: _mode(net, eq, units, i) for i in {k, j}}

    def coth_of(i):
        _, _, _, omega, c = modes[i]
        return c * 2.0 * omega / units.hbar

    def ratio(i):
        # (omega_i - mu_tilde_i) / (omega_i * Omega_i)
        _, wi, ti, om, _ = modes[i]
        return (wi - ti) / (wi * om)

    def inv_ratio(i):
        _, wi, ti, om, _ = modes[i]
        return wi * om / (wi - ti)

    h = units.hbar
    phi = h / 4 * ratio(k) * (
        (eta[k, j] + nu[k, j]) / w[j]
        - m[k] * m[j] * w[k] * (alpha[k, j] + kappa[k, j])
        + m[k] * w[k] / w[j] * (lam[k, j] + mu[k, j])
        + m[j] * (lam[j, k] - mu[j, k])
    ) * coth_of(k) + h / 4 * ratio(j) * (
        (eta[j, k] + nu[k, j]) / w[k]
        - m[k] * m[j] * w[j] * (alpha[j, k] + kappa[k, j])
        + m[j] * w[j] / w[k] * (lam[j, k] + mu[j, k])
        + m[k] * (lam[k, j] - mu[k, j])
    ) * coth_of(j)

    psi = h / 16 * inv_ratio(k) * (
        -(eta[k, j] + nu[k, j]) / w[k]
        + m[k] * m[j] * w[j] * (alpha[k, j] + kappa[k, j])
        + m[j] * w[j] / w[k] * (lam[j, k] - mu[j, k])
        + m[k] * (lam[k, j] + mu[k, j])
    ) * coth_of(k) + h / 16 * inv_ratio(j) * (
        -(eta[j, k] + nu[j, k]) / w[j]
        + m[j] * m[k] * w[k] * (alpha[j, k] + kappa[j, k])
        + m[k] * w[k] / w[j] * (lam[k, j] - mu[k, j])
        + m[j] * (lam[j, k] + mu[j, k])
    ) * coth_of(j)

    def gamma(a, b):
        return h / 8 * ratio(a) * (
            eta[a, b] + nu[a, b]
            - m[a] * m[b] * w[a] * w[b] * (alpha[a, b] + kappa[a, b])
            + m[a] * w[a] * (lam[a, b] + mu[a, b])
            - m[b] * w[b] * (lam[b, a] - mu[b, a])
        ) * coth_of(a) + h / 8 * inv_ratio(b) * (
            (eta[b, a] - nu[b, a]) / (w[a] * w[b])
            + m[a] * m[b] * (alpha[b, a] - kappa[b, a])
            - m[a] / w[b] * (lam[a, b] - mu[a, b])
            + m[b] / w[a] * (lam[b, a] + mu[b, a])
        ) * coth_of(b)

    return phi, psi, gamma(k, j), gamma(j, k)


def phi_psi_gamma_residuals(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    k: int = 0,
    j: int = 0,
) -> PhiPsiGamma:
    """Residuals (LHS - RHS) of the four linear relations tying ``D`` to ``Phi``, ``Psi``, ``Gamma``.

    ``D`` is taken from the closed-form coefficients.  Residuals are reported,
    not enforced.
    """
    require_valid(net, lind, eq)
    _check_index(net.n, k, j)
    d = _closed_form(net, lind, eq, units)
    phi, psi, g_kj, g_jk = _phi_psi_gamma_terms(net, lind, eq, units, k, j)
    m, w = net.masses, net.frequencies
    dqq = d[2 * k, 2 * j]
    dpp = d[2 * k + 1, 2 * j + 1]
    dqkpj = d[2 * k, 2 * j + 1]
    dqjpk = d[2 * j, 2 * k + 1]
    mmww = m[k] * m[j] * w[k] * w[j]
    res = (
        mmww * dqq + dpp - (0.5 * w[k] * w[j] * phi + 2 * psi),
        m[k] * w[k] * dqkpj + m[j] * w[j] * dqjpk - (0.5 * w[k] * w[j] * phi - 2 * psi),
        -mmww * dqq + dpp - (w[k] * g_kj + w[j] * g_jk),
        m[k] * w[k] * dqkpj - m[j] * w[j] * dqjpk - (w[k] * g_kj - w[j] * g_jk),
    )
    return PhiPsiGamma(k, j, phi, psi, g_kj, g_jk, tuple(float(r) for r in res))


@dataclass
class ConstraintCheck:
    name: str
    k: int
    j: int
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def tol(self) -> float:
        return 1e-12 * max(abs(self.lhs), abs(self.rhs), 1.0)

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol


@dataclass
class ConstraintReport:
    checks: list[ConstraintCheck] = field(default_factory=list)
    d_min_eigenvalue: float = 0.0
    cp_min_eigenvalue: float = 0.0
    scale: float = 1.0

    @property
    def d_psd(self) -> bool:
        return self.d_min_eigenvalue >= -1e-12 * self.scale

    @property
    def completely_positive(self) -> bool:
        return self.cp_min_eigenvalue >= -1e-12 * self.scale

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[ConstraintCheck]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str, k: int, j: int) -> ConstraintCheck:
        for c in self.checks:
            if (c.name, c.k, c.j) == (name, k, j):
                return c
        raise KeyError((name, k, j))


def lindblad_coefficient_matrix(d: Array, lind: LindbladSpec, units: UnitSystem = UnitSystem()) -> NDArray:
    """Hermitian ``sum_l v_l^* v_l^T`` with ``v_l = (a^l, b^l)`` rebuilt from ``D``, ``lambda``, ``alpha``, ``eta``.

    Complete positivity holds iff this matrix is positive semidefinite; the
    pairwise inequalities are its 2x2 principal minors.
    """
    n = lind.n
    s = 2.0 / units.hbar
    dq = d[0::2, 0::2]
    dp = d[1::2, 1::2]
    dqp = d[0::2, 1::2]
    aa = s * dq - 1j * lind.alpha
    bb = s * dp - 1j * lind.eta
    ab = -s * dqp - 1j * lind.lam
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = aa
    out[n:, n:] = bb
    out[:n, n:] = ab
    out[n:, :n] = ab.conj().T
    return out


def verify_cp_constraints(
    d: Array, lind: LindbladSpec, units: UnitSystem = UnitSystem()
) -> ConstraintReport:
    """Check the three Cauchy-Schwarz inequalities for every ordered pair ``(k, j)``.

    Failures are recorded in the report, never raised.
    """
    d = np.asarray(d, dtype=float)
    n = lind.n
    if d.shape != (2 * n, 2 * n):
        raise StructureError(f"diffusion matrix shape {d.shape} does not match N={n}")
    h2 = units.hbar**2 / 4.0
    checks = []
    for k in range(n):
        for j in range(n):
            qk, pk, qj, pj = 2 * k, 2 * k + 1, 2 * j, 2 * j + 1
            checks.append(
                ConstraintCheck("qp", k, j, d[qk, qk] * d[pj, pj] - d[qk, pj] ** 2, h2 * lind.lam[k, j] ** 2)
            )
            checks.append(
                ConstraintCheck("qq", k, j, d[qk, qk] * d[qj, qj] - d[qk, qj] ** 2, h2 * lind.alpha[k, j] ** 2)
            )
            checks.append(
                ConstraintCheck("pp", k, j, d[pk, pk] * d[pj, pj] - d[pk, pj] ** 2, h2 * lind.eta[k, j] ** 2)
            )
    sym = 0.5 * (d + d.T)
    cp = lindblad_coefficient_matrix(sym, lind, units)
    return ConstraintReport(
        checks=checks,
        d_min_eigenvalue=float(np.linalg.eigvalsh(sym)[0]),
        cp_min_eigenvalue=float(np.linalg.eigvalsh(cp)[0]),
        scale=max(1.0, float(np.max(np.abs(cp)))),
    )


@dataclass
class EinsteinReport:
    k: int
    effective_friction: float
    regime_flag: bool
    regime_parameter: float
    dpp_over_mkT: float
    limit_ratio: float
    lambda_lower_bound: float
    min_temperature: float | None
    """``0.0`` when ``mu_kk == mu_tilde_kk``; ``None`` when no finite temperature suffices."""


def einstein_report(
    net: OscillatorNetwork,
    lind: LindbladSpec,
    eq: EquilibriumSpec,
    units: UnitSystem = UnitSystem(),
    k: int = 0,
) -> EinsteinReport:
    """Einstein-relation diagnostics and the friction/temperature bounds for oscillator ``k``."""
    _check_index(net.n, k)
    m, w, mt, omega, _ = _mode(net, eq, units, k)
    lam = lind.lam[k, k]
    mu = net.mu[k, k]
    x = units.hbar * eq.beta(units) * omega / 2.0
    gamma = w * w * (lam + mu - mt) / (w * w - mt * mt)
    _, dpp, _ = diagonal_diffusion(net, lind, eq, units, k)
    ratio_d = dpp / (m * units.kb * eq.temperature)
    shift = abs(mu - mt)
    threshold = shift * w / omega
    lower = threshold * math.cosh(x)
    if shift == 0:
        t_min: float | None = 0.0
    elif lam > threshold:
        t_min = units.hbar * omega / (2.0 * units.kb * math.acosh(lam / threshold))
    else:
        t_min = None
    return EinsteinReport(
        k=k,
        effective_friction=gamma,
        regime_flag=x < EINSTEIN_REGIME_THRESHOLD,
        regime_parameter=x,
        dpp_over_mkT=ratio_d,
        limit_ratio=ratio_d / gamma if gamma != 0 else math.nan,
        lambda_lower_bound=lower,
        min_temperature=t_min,
    )
