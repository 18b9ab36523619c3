"""JSON run configuration for the command-line front end."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .bogoliubov import BogoliubovModel, to_canonical
from .entanglement import SqueezedThermalSpec
from .model import (
    EquilibriumSpec,
    LindbladSpec,
    OscillatorNetwork,
    PhysicsError,
    StructureError,
    UnitSystem,
)

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]

DEFAULT_TMAX = 50.0
DEFAULT_DT = 0.01


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _get(block: dict, key: str, path: str, default: Any = ..., kind=None):
    if not isinstance(block, dict):
        raise ConfigError(path, "expected an object")
    if key not in block:
        if default is ...:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    val = block[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise ConfigError(f"{path}.{key}", f"expected a finite number, got {val!r}")
        return float(val)
    return val


def _vector(val, path: str, n: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(path, "expected a list of numbers") from None
    if arr.ndim != 1 or (n is not None and arr.size != n):
        raise ConfigError(path, f"expected a vector of length {n}" if n else "expected a vector")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(path, "non-finite entry")
    return arr


def _matrix(val, path: str, n: int) -> np.ndarray:
    if val is None:
        return np.zeros((n, n))
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(path, "expected a row-major list of lists of numbers") from None
    if arr.shape != (n, n):
        raise ConfigError(path, f"expected a {n}x{n} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(path, "non-finite entry")
    return arr


def _complex_matrix(val, path: str, n: int | None = None) -> np.ndarray:
    """Either a real matrix or ``{"re": [[...]], "im": [[...]]}``."""
    if isinstance(val, dict):
        unknown = set(val) - {"re", "im"}
        if unknown:
            raise ConfigError(path, f"unknown keys {sorted(unknown)}")
        re = val.get("re")
        im = val.get("im")
        if n is None:
            ref = re if re is not None else im
            n = len(ref) if isinstance(ref, list) else 0
        return _matrix(re, f"{path}.re", n) + 1j * _matrix(im, f"{path}.im", n)
    if n is None:
        n = len(val) if isinstance(val, list) else 0
    return _matrix(val, path, n).astype(complex)


@dataclass
class RunConfig:
    units: UnitSystem
    lindblad: LindbladSpec
    temperature: float
    network: OscillatorNetwork | None = None
    mu_tilde: np.ndarray | None = None
    bogoliubov: BogoliubovModel | None = None
    zeta: float | None = None
    initial: SqueezedThermalSpec | None = None
    initial_steady: bool = False
    tmax: float = DEFAULT_TMAX
    dt: float = DEFAULT_DT
    sweep_values: list[float] = field(default_factory=list)
    digest: str = ""

    @property
    def n(self) -> int:
        return self.lindblad.n

    @property
    def time_unit(self) -> str:
        return "1/K" if self.bogoliubov is not None else "model units"

    def build(self, zeta: float | None = None) -> tuple[OscillatorNetwork, LindbladSpec, EquilibriumSpec]:
        """Resolve the model, optionally overriding the steady-state coupling ``zeta``."""
        z = self.zeta if zeta is None else zeta
        if self.bogoliubov is not None:
            bog = self.bogoliubov
            if z is not None:
                bog = BogoliubovModel(bog.k_matrix, bog.delta, np.full(bog.n, 1j * z))
            net, mu_tilde = to_canonical(bog, self.units)
        else:
            net = self.network
            mu_tilde = np.full(net.n, z / self.units.hbar) if z is not None else self.mu_tilde
        return net, self.lindblad, EquilibriumSpec(mu_tilde, self.temperature)

    def time_grid(self) -> np.ndarray:
        steps = int(math.floor(self.tmax / self.dt + 1e-9))
        return np.arange(steps + 1) * self.dt


_TOP_KEYS = {"units", "network", "bogoliubov", "lindblad", "equilibrium", "initial_state", "grid", "sweep"}


def parse_config(data: dict, digest: str = "") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("$", "top level must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError("$", f"unknown keys {sorted(unknown)}")

    u = data.get("units", {})
    try:
        units = UnitSystem(_get(u, "hbar", "units", 1.0, float), _get(u, "kb", "units", 1.0, float))
    except PhysicsError as exc:
        raise ConfigError("units", str(exc)) from None

    has_net = "network" in data
    has_bog = "bogoliubov" in data
    if has_net == has_bog:
        raise ConfigError("$", "exactly one of 'network' or 'bogoliubov' must be present")

    eqb = _get(data, "equilibrium", "$")
    temperature = _get(eqb, "temperature", "equilibrium", kind=float)
    if not temperature > 0:
        raise ConfigError("equilibrium.temperature", "must be > 0")
    eq_zeta = _get(eqb, "zeta", "equilibrium", None, float) if "zeta" in eqb else None

    cfg_kwargs: dict[str, Any] = {}
    if has_bog:
        b = data["bogoliubov"]
        k = _complex_matrix(_get(b, "K", "bogoliubov"), "bogoliubov.K")
        n = k.shape[0]
        if n == 0:
            raise ConfigError("bogoliubov.K", "empty matrix")
        delta = _complex_matrix(_get(b, "delta", "bogoliubov", None) or np.zeros((n, n)).tolist(), "bogoliubov.delta", n)
        zeta = _get(b, "zeta", "bogoliubov", None, float) if "zeta" in b else None
        if zeta is not None and eq_zeta is not None and zeta != eq_zeta:
            raise ConfigError("equilibrium.zeta", "conflicts with bogoliubov.zeta")
        zeta = zeta if zeta is not None else eq_zeta
        dt_diag = np.zeros(n, dtype=complex)
        if "delta_tilde" in b:
            if zeta is not None:
                raise ConfigError("bogoliubov.delta_tilde", "give either delta_tilde or zeta, not both")
            dtb = b["delta_tilde"]
            if isinstance(dtb, dict):
                dt_diag = _vector(dtb.get("re", [0.0] * n), "bogoliubov.delta_tilde.re", n) + 1j * _vector(
                    dtb.get("im", [0.0] * n), "bogoliubov.delta_tilde.im", n
                )
            else:
                dt_diag = _vector(dtb, "bogoliubov.delta_tilde", n).astype(complex)
        if "mu_tilde" in eqb:
            raise ConfigError("equilibrium.mu_tilde", "not allowed with a bogoliubov block; use zeta or delta_tilde")
        try:
            bog = BogoliubovModel(k, delta, dt_diag)
            bog.validate()
        except (StructureError, PhysicsError) as exc:
            raise ConfigError("bogoliubov", str(exc)) from None
        cfg_kwargs.update(bogoliubov=bog, zeta=zeta)
    else:
        nb = data["network"]
        masses = _vector(_get(nb, "masses", "network"), "network.masses")
        n = masses.size
        if n == 0:
            raise ConfigError("network.masses", "empty")
        freqs = _vector(_get(nb, "frequencies", "network"), "network.frequencies", n)
        mats = {name: _matrix(nb.get(name), f"network.{name}", n) for name in ("mu", "nu", "kappa")}
        net = OscillatorNetwork(masses, freqs, **mats)
        if "mu_tilde" in eqb and eq_zeta is not None:
            raise ConfigError("equilibrium", "give either mu_tilde or zeta, not both")
        if "mu_tilde" in eqb:
            mu_tilde = _vector(eqb["mu_tilde"], "equilibrium.mu_tilde", n)
        else:
            mu_tilde = np.zeros(n)
        cfg_kwargs.update(network=net, mu_tilde=mu_tilde, zeta=eq_zeta)

    lb = _get(data, "lindblad", "$")
    lind = LindbladSpec(
        _matrix(_get(lb, "lambda", "lindblad"), "lindblad.lambda", n),
        _matrix(lb.get("alpha"), "lindblad.alpha", n),
        _matrix(lb.get("eta"), "lindblad.eta", n),
    )

    if "initial_state" in data:
        ib = data["initial_state"]
        if _get(ib, "type", "initial_state", "squeezed_thermal") == "steady":
            cfg_kwargs["initial_steady"] = True
        else:
            try:
                cfg_kwargs["initial"] = SqueezedThermalSpec(
                    _get(ib, "n1", "initial_state", 0.0, float),
                    _get(ib, "n2", "initial_state", 0.0, float),
                    _get(ib, "r", "initial_state", 0.0, float),
                )
            except ValueError as exc:
                raise ConfigError("initial_state", str(exc)) from None

    gb = data.get("grid", {})
    tmax = _get(gb, "tmax", "grid", DEFAULT_TMAX, float)
    dt = _get(gb, "dt", "grid", DEFAULT_DT, float)

    if "sweep" in data:
        sb = data["sweep"]
        param = _get(sb, "parameter", "sweep")
        if param != "zeta":
            raise ConfigError("sweep.parameter", f"only 'zeta' can be swept, got {param!r}")
        values = sorted(float(v) for v in _vector(_get(sb, "values", "sweep"), "sweep.values"))
        if not values:
            raise ConfigError("sweep.values", "empty")
        cfg_kwargs["sweep_values"] = values

    cfg = RunConfig(units=units, lindblad=lind, temperature=temperature, digest=digest, **cfg_kwargs)
    set_grid(cfg, tmax, dt)
    return cfg


def set_grid(cfg: RunConfig, tmax: float | None, dt: float | None) -> None:
    tmax = cfg.tmax if tmax is None else tmax
    dt = cfg.dt if dt is None else dt
    if not dt > 0:
        raise ConfigError("grid.dt", "must be > 0")
    if not tmax >= dt:
        raise ConfigError("grid.tmax", "must be >= dt")
    cfg.tmax, cfg.dt = float(tmax), float(dt)


def load_config(path: str | Path) -> RunConfig:
    raw = Path(path).read_bytes()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    return parse_config(data, digest=hashlib.sha256(raw).hexdigest())
