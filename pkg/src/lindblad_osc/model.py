"""Domain types and validation for a dissipative network of coupled oscillators.

Canonical phase-space ordering is ``(q1, p1, q2, p2, ..., qN, pN)`` throughout
the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "UnitSystem",
    "OscillatorNetwork",
    "LindbladSpec",
    "EquilibriumSpec",
    "Violation",
    "StructureError",
    "PhysicsError",
    "UnstableEquilibriumError",
    "validate_model",
    "require_valid",
    "hamiltonian_matrix",
    "symplectic_form",
    "q_index",
    "p_index",
]

_SYM_TOL = 1e-12


class StructureError(ValueError):
    """Inputs are malformed (shape or dimension mismatch)."""


class PhysicsError(ValueError):
    """Inputs are well-formed but physically inadmissible."""


class UnstableEquilibriumError(PhysicsError):
    """An oscillator violates ``omega_k > |mu_tilde_kk|``."""


def _frozen(a: ArrayLike, dtype=float) -> NDArray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _square(a: ArrayLike | None, n: int, name: str) -> NDArray[np.float64]:
    if a is None:
        return _frozen(np.zeros((n, n)))
    arr = np.asarray(a, dtype=float)
    if arr.shape != (n, n):
        raise StructureError(f"{name}: expected shape ({n}, {n}), got {arr.shape}")
    return _frozen(arr)


def q_index(k: int) -> int:
    return 2 * k


def p_index(k: int) -> int:
    return 2 * k + 1


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    kb: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.kb > 0):
            raise PhysicsError(f"units must be positive, got hbar={self.hbar}, kb={self.kb}")


@dataclass(frozen=True, eq=False)
class OscillatorNetwork:
    """Masses, frequencies and bilinear couplings of ``N`` oscillators.

    ``mu[k, j]`` multiplies ``p_k q_j`` (the diagonal ``mu[k, k]`` is the
    symmetrised self coupling).  ``nu`` and ``kappa`` hold the off-diagonal
    position-position and momentum-momentum couplings; their diagonals are
    fixed by convention to ``m_k omega_k**2`` and ``1/m_k`` and must be left
    at zero on input.
    """

    masses: NDArray[np.float64]
    frequencies: NDArray[np.float64]
    mu: NDArray[np.float64] = None
    nu: NDArray[np.float64] = None
    kappa: NDArray[np.float64] = None

    def __post_init__(self):
        masses = np.atleast_1d(np.asarray(self.masses, dtype=float))
        freqs = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        if masses.ndim != 1 or freqs.shape != masses.shape or masses.size == 0:
            raise StructureError(
                f"masses and frequencies must be equal-length vectors, got {masses.shape} and {freqs.shape}"
            )
        n = masses.size
        object.__setattr__(self, "masses", _frozen(masses))
        object.__setattr__(self, "frequencies", _frozen(freqs))
        for name in ("mu", "nu", "kappa"):
            object.__setattr__(self, name, _square(getattr(self, name), n, name))

    @property
    def n(self) -> int:
        return self.masses.size

    def nu_full(self) -> NDArray[np.float64]:
        """``nu`` with the diagonal set to ``m_k omega_k**2``."""
        out = np.array(self.nu)
        np.fill_diagonal(out, self.masses * self.frequencies**2)
        return out

    def kappa_full(self) -> NDArray[np.float64]:
        """``kappa`` with the diagonal set to ``1/m_k``."""
        out = np.array(self.kappa)
        np.fill_diagonal(out, 1.0 / self.masses)
        return out


@dataclass(frozen=True, eq=False)
class LindbladSpec:
    """Friction ``lambda`` and the antisymmetric ``alpha``, ``eta`` matrices."""

    lam: NDArray[np.float64]
    alpha: NDArray[np.float64] = None
    eta: NDArray[np.float64] = None

    def __post_init__(self):
        lam = np.atleast_2d(np.asarray(self.lam, dtype=float))
        if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
            raise StructureError(f"lambda must be square, got shape {lam.shape}")
        n = lam.shape[0]
        object.__setattr__(self, "lam", _frozen(lam))
        object.__setattr__(self, "alpha", _square(self.alpha, n, "alpha"))
        object.__setattr__(self, "eta", _square(self.eta, n, "eta"))

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    @classmethod
    def zeros(cls, n: int) -> LindbladSpec:
        return cls(np.zeros((n, n)))


@dataclass(frozen=True, eq=False)
class EquilibriumSpec:
    """Self couplings ``mu_tilde_kk`` and temperature of the target Gibbs state."""

    mu_tilde: NDArray[np.float64]
    temperature: float

    def __post_init__(self):
        mt = np.atleast_1d(np.asarray(self.mu_tilde, dtype=float))
        if mt.ndim != 1:
            raise StructureError(f"mu_tilde must be a vector, got shape {mt.shape}")
        object.__setattr__(self, "mu_tilde", _frozen(mt))
        object.__setattr__(self, "temperature", float(self.temperature))

    @property
    def n(self) -> int:
        return self.mu_tilde.size

    def beta(self, units: UnitSystem = UnitSystem()) -> float:
        return 1.0 / (units.kb * self.temperature)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    indices: tuple[int, ...] = field(default=())

    def __str__(self) -> str:
        return self.message


def _check_dims(net: OscillatorNetwork, lind: LindbladSpec | None, eq: EquilibriumSpec | None):
    n = net.n
    if lind is not None and lind.n != n:
        raise StructureError(f"lindblad dimension {lind.n} does not match network dimension {n}")
    if eq is not None and eq.n != n:
        raise StructureError(f"mu_tilde length {eq.n} does not match network dimension {n}")


def _asym_pairs(a: NDArray, sign: int) -> list[tuple[int, int]]:
    n = a.shape[0]
    return [
        (k, j)
        for k in range(n)
        for j in range(k + 1, n)
        if abs(a[k, j] - sign * a[j, k]) > _SYM_TOL * max(1.0, abs(a[k, j]), abs(a[j, k]))
    ]


def validate_model(
    net: OscillatorNetwork,
    lind: LindbladSpec | None = None,
    eq: EquilibriumSpec | None = None,
) -> list[Violation]:
    """Return every physical invariant the inputs violate (empty when valid).

    Raises
    ------
    StructureError
        If matrix dimensions disagree.
    """
    _check_dims(net, lind, eq)
    out: list[Violation] = []
    for k in range(net.n):
        if not net.masses[k] > 0:
            out.append(Violation("positivity", f"positivity: m_{k + 1} must be > 0", (k,)))
        if not net.frequencies[k] > 0:
            out.append(Violation("positivity", f"positivity: ω_{k + 1} must be > 0", (k,)))
    for name, sym, mat in (("ν", "nu", net.nu), ("κ", "kappa", net.kappa)):
        pairs = _asym_pairs(mat, +1)
        if pairs:
            out.append(Violation("onsager", f"Onsager: {name} not symmetric", tuple(pairs[0])))
        diag = np.flatnonzero(np.diag(mat))
        if diag.size:
            out.append(
                Violation(
                    "convention",
                    f"convention: {sym} diagonal is derived and must be zero on input",
                    tuple(int(i) for i in diag),
                )
            )
    if lind is not None:
        for name, mat in (("α", lind.alpha), ("η", lind.eta)):
            if _asym_pairs(mat, -1) or np.any(np.diag(mat) != 0):
                out.append(Violation("antisymmetry", f"antisymmetry: {name} not antisymmetric"))
    if eq is not None:
        if not eq.temperature > 0:
            out.append(Violation("positivity", "positivity: temperature must be > 0"))
        for k in range(net.n):
            if not net.frequencies[k] > abs(eq.mu_tilde[k]):
                out.append(
                    Violation(
                        "stability",
                        f"stability: ω_{k + 1} ≤ |μ̃_{k + 1}{k + 1}|",
                        (k,),
                    )
                )
    return out


def require_valid(
    net: OscillatorNetwork,
    lind: LindbladSpec | None = None,
    eq: EquilibriumSpec | None = None,
) -> None:
    """Raise if :func:`validate_model` reports anything."""
    report = validate_model(net, lind, eq)
    if not report:
        return
    msg = "; ".join(v.message for v in report)
    if any(v.kind == "stability" for v in report):
        raise UnstableEquilibriumError(msg)
    raise PhysicsError(msg)


def hamiltonian_matrix(net: OscillatorNetwork) -> NDArray[np.float64]:
    """Symmetric ``G`` with ``H = z^T G z / 2`` in the canonical ordering."""
    n = net.n
    g = np.zeros((2 * n, 2 * n))
    nu = net.nu_full()
    kappa = net.kappa_full()
    for k in range(n):
        for j in range(n):
            g[2 * k, 2 * j] = nu[k, j]
            g[2 * k + 1, 2 * j + 1] = kappa[k, j]
            # p_k q_j coupling, split over the (p_k, q_j) and (q_j, p_k) slots
            g[2 * k + 1, 2 * j] = net.mu[k, j]
            g[2 * j, 2 * k + 1] = net.mu[k, j]
    return g


def symplectic_form(n: int) -> NDArray[np.float64]:
    """Block-diagonal ``J`` with ``[z_a, z_b] = i hbar J_ab``."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
