"""Command-line front end: ``check``, ``diffusion``, ``einstein``, ``evolve``, ``sweep``.

Exit codes: 0 success, 2 configuration error, 3 physics error (instability),
4 constraint failure in ``check``.
"""

from __future__ import annotations

import argparse
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .config import ConfigError, RunConfig, load_config, set_grid
from .diffusion import (
    assemble_diffusion,
    compare_diffusion,
    einstein_report,
    phi_psi_gamma_residuals,
    verify_cp_constraints,
)
from .dynamics import NotHurwitzError, drift_matrix, evolve_covariance, solve_steady_state
from .entanglement import NegativityTrajectory, log_negativity, squeezed_thermal_covariance, sudden_death_time
from .model import PhysicsError, StructureError, validate_model

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_CONSTRAINT = 4

EVOLVE_HEADER = (
    "t,E,sigma_q1q1,sigma_p1p1,sigma_q1p1,sigma_q2q2,sigma_p2p2,sigma_q2p2,sigma_q1q2,sigma_p1p2"
)
SWEEP_HEADER = "zeta,t_sudden_death,E_initial,E_max"
# (row, col) of each covariance column in EVOLVE_HEADER
_SIGMA_CELLS = ((0, 0), (1, 1), (0, 1), (2, 2), (3, 3), (2, 3), (0, 2), (1, 3))

_SOURCES = {"oracle": "oracle", "closed-form": "closed_form"}


class PhysicsFailure(Exception):
    """Raised inside a command to exit with the physics code."""


def fmt(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in output")
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _preamble(cfg: RunConfig, command: str, source: str) -> list[str]:
    lines = [
        f"# lindblad-osc {command}",
        f"# config_sha256={cfg.digest}",
        f"# diffusion_source={source}",
        f"# units: hbar={fmt(cfg.units.hbar)} kb={fmt(cfg.units.kb)} time={cfg.time_unit}",
    ]
    if command in ("evolve", "sweep"):
        lines.append(f"# grid: tmax={fmt(cfg.tmax)} dt={fmt(cfg.dt)}")
    return lines


def _checked_model(cfg: RunConfig, zeta: float | None = None):
    net, lind, eq = cfg.build(zeta)
    report = validate_model(net, lind, eq)
    if any(v.kind == "stability" for v in report):
        raise PhysicsFailure("; ".join(v.message for v in report))
    if report:
        raise ConfigError("$", "; ".join(v.message for v in report))
    return net, lind, eq


def _require_two_mode(cfg: RunConfig, command: str):
    if cfg.n != 2:
        raise ConfigError("$", f"{command} needs a two-mode model, got N={cfg.n}")
    if cfg.initial is None and not cfg.initial_steady:
        raise ConfigError("initial_state", f"{command} needs an initial_state block")


def _trajectory(cfg: RunConfig, source: str, zeta: float | None, workers: int):
    """Return ``(times, covariances)`` for one model; raises ``NotHurwitzError``."""
    net, lind, eq = _checked_model(cfg, zeta)
    m = drift_matrix(net, lind, cfg.units)
    d = assemble_diffusion(net, lind, eq, cfg.units, source)
    steady = solve_steady_state(m, d)
    sigma0 = steady if cfg.initial_steady else squeezed_thermal_covariance(cfg.initial)
    times = cfg.time_grid()

    def at(t):
        return evolve_covariance(sigma0, m, steady, float(t))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sigmas = list(pool.map(at, times))
    else:
        sigmas = [at(t) for t in times]
    return times, sigmas


def run_evolve(cfg: RunConfig, source: str = "oracle", workers: int = 1) -> str:
    _require_two_mode(cfg, "evolve")
    try:
        times, sigmas = _trajectory(cfg, source, None, workers)
    except NotHurwitzError as exc:
        raise PhysicsFailure(str(exc)) from None
    lines = _preamble(cfg, "evolve", source)
    if cfg.zeta is not None:
        lines.append(f"# zeta={fmt(cfg.zeta)}")
    lines.append(EVOLVE_HEADER)
    for t, s in zip(times, sigmas):
        cells = [fmt(t), fmt(log_negativity(s, cfg.units.hbar))]
        cells.extend(fmt(s[a, b]) for a, b in _SIGMA_CELLS)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _sweep_row(cfg: RunConfig, source: str, zeta: float) -> str:
    try:
        times, sigmas = _trajectory(cfg, source, zeta, 1)
    except (NotHurwitzError, PhysicsFailure):
        return f"{fmt(zeta)},unstable,unstable,unstable"
    values = np.array([log_negativity(s, cfg.units.hbar) for s in sigmas])
    t_sd = sudden_death_time(NegativityTrajectory(times, values))
    return ",".join(
        [fmt(zeta), "none" if t_sd is None else fmt(t_sd), fmt(values[0]), fmt(values.max())]
    )


def run_sweep(cfg: RunConfig, source: str = "oracle", workers: int = 1) -> str:
    _require_two_mode(cfg, "sweep")
    if not cfg.sweep_values:
        raise ConfigError("sweep", "sweep needs a sweep block")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda z: _sweep_row(cfg, source, z), cfg.sweep_values))
    else:
        rows = [_sweep_row(cfg, source, z) for z in cfg.sweep_values]
    lines = _preamble(cfg, "sweep", source) + [SWEEP_HEADER] + rows
    return "\n".join(lines) + "\n"


def run_diffusion(cfg: RunConfig, source: str = "oracle") -> str:
    net, lind, eq = _checked_model(cfg)
    try:
        active = assemble_diffusion(net, lind, eq, cfg.units, source)
    except NotHurwitzError as exc:
        raise PhysicsFailure(str(exc)) from None
    cmp = compare_diffusion(net, lind, eq, cfg.units)
    idx = {label: i for i, label in enumerate(cmp.labels)}
    lines = _preamble(cfg, "diffusion", source)
    lines.append("F,G,active,closed_form,verbatim,oracle,abs_diff,agree")
    for f, g, closed, verb, orc, diff, ok in cmp.rows():
        lines.append(
            ",".join([f, g, fmt(active[idx[f], idx[g]]), fmt(closed), fmt(verb), fmt(orc), fmt(diff), str(int(ok))])
        )
    return "\n".join(lines) + "\n"


def run_einstein(cfg: RunConfig) -> str:
    net, lind, eq = _checked_model(cfg)
    lines = _preamble(cfg, "einstein", "closed_form")
    lines.append(
        "k,effective_friction,regime_flag,regime_parameter,dpp_over_mkT,limit_ratio,lambda_lower_bound,min_temperature"
    )
    for k in range(net.n):
        r = einstein_report(net, lind, eq, cfg.units, k)
        lines.append(
            ",".join(
                [
                    str(k + 1),
                    fmt(r.effective_friction),
                    str(int(r.regime_flag)),
                    fmt(r.regime_parameter),
                    fmt(r.dpp_over_mkT),
                    fmt(r.limit_ratio),
                    fmt(r.lambda_lower_bound),
                    "unattainable" if r.min_temperature is None else fmt(r.min_temperature),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def run_check(cfg: RunConfig, source: str = "oracle") -> tuple[str, bool]:
    """Constraint, Einstein and Phi/Psi/Gamma reports; the flag is ``True`` iff every inequality holds."""
    net, lind, eq = _checked_model(cfg)
    try:
        d = assemble_diffusion(net, lind, eq, cfg.units, source)
    except NotHurwitzError as exc:
        raise PhysicsFailure(str(exc)) from None
    report = verify_cp_constraints(d, lind, cfg.units)
    out = io.StringIO()
    out.write("\n".join(_preamble(cfg, "check", source)) + "\n")
    out.write("[constraints]\nname,k,j,lhs,rhs,margin,pass\n")
    for c in report.checks:
        out.write(f"{c.name},{c.k + 1},{c.j + 1},{fmt(c.lhs)},{fmt(c.rhs)},{fmt(c.margin)},{int(c.passed)}\n")
    out.write(f"# diffusion_min_eigenvalue={fmt(report.d_min_eigenvalue)}\n")
    out.write(f"# cp_matrix_min_eigenvalue={fmt(report.cp_min_eigenvalue)}\n")
    out.write("[einstein]\nk,effective_friction,regime_flag,limit_ratio,lambda_lower_bound,min_temperature\n")
    for k in range(net.n):
        r = einstein_report(net, lind, eq, cfg.units, k)
        t_min = "unattainable" if r.min_temperature is None else fmt(r.min_temperature)
        out.write(
            f"{k + 1},{fmt(r.effective_friction)},{int(r.regime_flag)},{fmt(r.limit_ratio)},"
            f"{fmt(r.lambda_lower_bound)},{t_min}\n"
        )
    out.write("[phi_psi_gamma]  # diagnostic only\nk,j,phi,psi,gamma_kj,gamma_jk,res1,res2,res3,res4\n")
    for k in range(net.n):
        for j in range(k, net.n):
            p = phi_psi_gamma_residuals(net, lind, eq, cfg.units, k, j)
            vals = [p.phi, p.psi, p.gamma_kj, p.gamma_jk, *p.residuals]
            out.write(f"{k + 1},{j + 1}," + ",".join(fmt(v) for v in vals) + "\n")
    out.write(f"# result={'pass' if report.passed else 'fail'}\n")
    return out.getvalue(), report.passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindblad-osc",
        description="Diffusion coefficients and Gaussian dynamics of dissipative oscillator networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("check", "complete-positivity, Einstein and Phi/Psi/Gamma reports"),
        ("diffusion", "diffusion matrix with closed-form/oracle comparison"),
        ("einstein", "Einstein-relation diagnostics per oscillator"),
        ("evolve", "covariance and logarithmic-negativity trajectory"),
        ("sweep", "sudden-death summary over a zeta sweep"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output", default="-", help="output file (default: stdout)")
        p.add_argument("--diffusion-source", choices=sorted(_SOURCES), default="oracle")
        if name in ("evolve", "sweep"):
            p.add_argument("--tmax", type=float)
            p.add_argument("--dt", type=float)
            p.add_argument("--workers", type=int, default=1, help="worker threads (output is order-independent)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    source = _SOURCES[args.diffusion_source]
    status = EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.command in ("evolve", "sweep"):
            set_grid(cfg, args.tmax, args.dt)
        if args.command == "evolve":
            text = run_evolve(cfg, source, max(1, args.workers))
        elif args.command == "sweep":
            text = run_sweep(cfg, source, max(1, args.workers))
        elif args.command == "diffusion":
            text = run_diffusion(cfg, source)
        elif args.command == "einstein":
            text = run_einstein(cfg)
        else:
            text, ok = run_check(cfg, source)
            status = EXIT_OK if ok else EXIT_CONSTRAINT
    except (ConfigError, StructureError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PhysicsFailure, PhysicsError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
