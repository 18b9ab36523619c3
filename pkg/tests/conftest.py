import sys
from pathlib import Path

import numpy as np
import pytest

from lindblad_osc import BogoliubovModel, EquilibriumSpec, LindbladSpec, OscillatorNetwork, to_canonical

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

FIG_K = np.array([[1.0, 0.2], [0.2, 1.0]], dtype=complex)
FIG_DELTA = np.array([[0.05j, 0.05], [0.05, 0.05j]])
FIG_LAMBDA = np.diag([0.15, 0.15])
FIG_T = 0.5


def fig_model(zeta=0.0):
    net, mu_tilde = to_canonical(BogoliubovModel.with_zeta(FIG_K, FIG_DELTA, zeta))
    return net, LindbladSpec(FIG_LAMBDA), EquilibriumSpec(mu_tilde, FIG_T)


def random_model(rng, n, *, mu_tilde_zero=False, coupling=0.1):
    """Random valid network with strong diagonal friction (usually Hurwitz)."""
    masses = rng.uniform(0.5, 2.0, n)
    freqs = rng.uniform(0.5, 2.0, n)

    def sym():
        a = rng.normal(0, coupling, (n, n))
        a = 0.5 * (a + a.T)
        np.fill_diagonal(a, 0.0)
        return a

    def asym():
        a = rng.normal(0, coupling, (n, n))
        return 0.5 * (a - a.T)

    mu = rng.normal(0, coupling, (n, n))
    lam = np.diag(rng.uniform(0.2, 1.0, n)) + rng.normal(0, coupling, (n, n)) * (1 - np.eye(n))
    net = OscillatorNetwork(masses, freqs, mu, sym(), sym())
    lind = LindbladSpec(lam, asym(), asym())
    mt = np.zeros(n) if mu_tilde_zero else rng.uniform(-0.8, 0.8, n) * freqs
    eq = EquilibriumSpec(mt, rng.uniform(0.1, 5.0))
    return net, lind, eq


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
