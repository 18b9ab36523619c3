import numpy as np
import pytest

from lindblad_osc.bogoliubov import BogoliubovModel, UnstableModeError, to_canonical, two_mode_drift
from lindblad_osc.dynamics import drift_matrix
from lindblad_osc.model import LindbladSpec, PhysicsError, StructureError, UnitSystem

from conftest import FIG_DELTA, FIG_K, FIG_LAMBDA


def random_bogoliubov(rng):
    a = rng.normal(0, 0.3, (2, 2)) + 1j * rng.normal(0, 0.3, (2, 2))
    k = 0.5 * (a + a.conj().T)
    b = rng.normal(0, 0.3, (2, 2)) + 1j * rng.normal(0, 0.3, (2, 2))
    d = 0.5 * (b + b.T)
    diag = rng.uniform(0.5, 2.0, 2)
    k[np.diag_indices(2)] = diag + np.abs(d.diagonal().real) + 0.05
    return BogoliubovModel(k, d, 1j * rng.uniform(-0.2, 0.2, 2))


def random_lindblad(rng):
    al = rng.normal(0, 0.1)
    et = rng.normal(0, 0.1)
    return LindbladSpec(rng.uniform(-0.3, 0.5, (2, 2)), [[0, al], [-al, 0]], [[0, et], [-et, 0]])


def test_free_modes():
    net, mt = to_canonical(BogoliubovModel(np.diag([1.5, 0.7]), np.zeros((2, 2))))
    np.testing.assert_allclose(net.frequencies, [1.5, 0.7])
    np.testing.assert_allclose(net.masses, [1.0, 1.0])
    assert not net.mu.any() and not net.nu.any() and not net.kappa.any()
    assert not mt.any()


def test_fig1_identification():
    net, mt = to_canonical(BogoliubovModel.with_zeta(FIG_K, FIG_DELTA, 0.1))
    np.testing.assert_allclose(net.frequencies, [1, 1])
    np.testing.assert_allclose(net.masses, [1, 1])
    np.testing.assert_allclose(net.mu, [[0.05, 0], [0, 0.05]], atol=1e-15)
    assert net.nu[0, 1] == pytest.approx(0.25) and net.nu[1, 0] == pytest.approx(0.25)
    assert net.kappa[0, 1] == pytest.approx(0.15) and net.kappa[1, 0] == pytest.approx(0.15)
    np.testing.assert_allclose(mt, [0.1, 0.1])


def test_hbar_scaling():
    net, mt = to_canonical(BogoliubovModel(np.diag([2.0]), np.array([[0.5 + 0.3j]]), [0.4j]), UnitSystem(hbar=2.0))
    assert net.frequencies[0] == pytest.approx(np.sqrt(4 - 0.25) / 2)
    assert net.masses[0] == pytest.approx(2.0 / 1.5)
    assert net.mu[0, 0] == pytest.approx(0.15)
    assert mt[0] == pytest.approx(0.2)


def test_positive_mass_and_frequency(rng):
    for _ in range(50):
        net, _ = to_canonical(random_bogoliubov(rng))
        assert (net.masses > 0).all() and (net.frequencies > 0).all()


def test_rejects_unstable_mode():
    with pytest.raises(UnstableModeError):
        to_canonical(BogoliubovModel(np.diag([1.0]), np.array([[1.2]])))


def test_rejects_imaginary_diagonal_k():
    with pytest.raises(PhysicsError, match="must be real"):
        to_canonical(BogoliubovModel(np.array([[1.0 + 0.1j]]), np.zeros((1, 1))))


def test_rejects_non_hermitian_and_non_symmetric():
    with pytest.raises(PhysicsError):
        to_canonical(BogoliubovModel([[1, 0.2], [0.1, 1]], np.zeros((2, 2))))
    with pytest.raises(PhysicsError):
        to_canonical(BogoliubovModel(np.eye(2), [[0, 0.2], [0.1, 0]]))


def test_shape_errors():
    with pytest.raises(StructureError):
        BogoliubovModel(np.eye(2), np.zeros((3, 3)))
    with pytest.raises(StructureError):
        BogoliubovModel(np.eye(2), np.zeros((2, 2)), [0.1j])


class TestTwoModeDrift:
    def test_fig1_entry(self):
        bog = BogoliubovModel.with_zeta(FIG_K, FIG_DELTA, 0.0)
        m = two_mode_drift(bog, LindbladSpec(FIG_LAMBDA))
        assert m[0, 0] == pytest.approx(-0.10, abs=1e-15)

    def test_fig1_matches_canonical_route(self):
        bog = BogoliubovModel.with_zeta(FIG_K, FIG_DELTA, 0.0)
        lind = LindbladSpec(FIG_LAMBDA)
        net, _ = to_canonical(bog)
        assert np.max(np.abs(two_mode_drift(bog, lind) - drift_matrix(net, lind))) <= 1e-12

    def test_free_rotation_generators(self):
        m = two_mode_drift(BogoliubovModel(np.diag([1.0, 2.0]), np.zeros((2, 2))), LindbladSpec.zeros(2))
        np.testing.assert_allclose(m[:2, :2], [[0, 1], [-1, 0]])
        np.testing.assert_allclose(m[2:, 2:], [[0, 1], [-4, 0]])
        assert not m[:2, 2:].any() and not m[2:, :2].any()

    def test_random_models_match_canonical_route(self, rng):
        worst = 0.0
        for _ in range(100):
            bog = random_bogoliubov(rng)
            lind = random_lindblad(rng)
            net, _ = to_canonical(bog)
            worst = max(worst, float(np.max(np.abs(two_mode_drift(bog, lind) - drift_matrix(net, lind)))))
        assert worst <= 1e-12

    def test_needs_two_modes(self):
        with pytest.raises(StructureError):
            two_mode_drift(BogoliubovModel(np.eye(3), np.zeros((3, 3))), LindbladSpec.zeros(3))
