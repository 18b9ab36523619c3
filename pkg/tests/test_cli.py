import json
import math

import pytest

from lindblad_osc.cli import EVOLVE_HEADER, SWEEP_HEADER, fmt, main
from lindblad_osc.config import ConfigError, load_config, parse_config

from conftest import CONFIGS

FIG1 = json.loads((CONFIGS / "fig1.json").read_text())


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_fmt():
    assert fmt(-0.0) == "0"
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(1 / 3) == "0.333333333333"
    with pytest.raises(ValueError):
        fmt(math.nan)


class TestEvolve:
    def test_grid_rows(self, capsys):
        code, out, _ = run(capsys, "evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "1", "--dt", "0.1")
        assert code == 0
        rows = data_rows(out)
        assert rows[0] == EVOLVE_HEADER
        assert len(rows) == 12
        assert rows[-1].startswith("1,")
        assert float(rows[1].split(",")[1]) == pytest.approx(0.1463, abs=1e-3)

    def test_provenance_preamble(self, capsys):
        _, out, _ = run(capsys, "evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "0.1", "--dt", "0.1")
        comments = [line for line in out.splitlines() if line.startswith("#")]
        assert any(line.startswith("# config_sha256=") and len(line) == len("# config_sha256=") + 64 for line in comments)
        assert "# diffusion_source=oracle" in comments
        assert any("time=1/K" in line for line in comments)

    def test_steady_initial_state_is_constant(self, tmp_path, capsys):
        cfg = dict(FIG1, initial_state={"type": "steady"})
        code, out, _ = run(capsys, "evolve", "--config", write(tmp_path, cfg), "--tmax", "2", "--dt", "0.5")
        assert code == 0
        rows = [r.split(",")[2:] for r in data_rows(out)[1:]]
        for row in rows[1:]:
            for a, b in zip(row, rows[0]):
                assert float(a) == pytest.approx(float(b), rel=1e-10, abs=1e-12)

    def test_fig1_reaches_sudden_death(self, capsys):
        _, out, _ = run(capsys, "evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "5", "--dt", "0.05")
        e = [float(r.split(",")[1]) for r in data_rows(out)[1:]]
        assert e[0] > 0.14 and e[-1] == 0.0

    def test_output_file_and_closed_form_source(self, tmp_path, capsys):
        target = tmp_path / "out.csv"
        code, out, _ = run(
            capsys, "evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "0.2", "--dt", "0.1",
            "--diffusion-source", "closed-form", "--output", str(target),
        )
        assert code == 0 and out == ""
        text = target.read_bytes().decode()
        assert "# diffusion_source=closed_form" in text
        assert "\r" not in text

    def test_all_cells_finite(self, capsys):
        _, out, _ = run(capsys, "evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "3", "--dt", "0.1")
        for row in data_rows(out)[1:]:
            assert all(math.isfinite(float(c)) for c in row.split(","))

    def test_deterministic_across_workers(self, capsys):
        argv = ["evolve", "--config", str(CONFIGS / "fig1.json"), "--tmax", "2", "--dt", "0.01"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv, "--workers", "4")
        _, c, _ = run(capsys, *argv)
        assert a == b == c


class TestSweep:
    def test_fig1_nondecreasing(self, capsys):
        code, out, _ = run(capsys, "sweep", "--config", str(CONFIGS / "fig1.json"), "--tmax", "5")
        assert code == 0
        rows = data_rows(out)
        assert rows[0] == SWEEP_HEADER
        zetas = [float(r.split(",")[0]) for r in rows[1:]]
        times = [float(r.split(",")[1]) for r in rows[1:]]
        assert zetas == [0, 0.05, 0.1, 0.15, 0.2]
        assert all(b >= a for a, b in zip(times, times[1:]))

    def test_single_point_matches_evolve(self, tmp_path, capsys):
        cfg = dict(FIG1, sweep={"parameter": "zeta", "values": [0.0]})
        path = write(tmp_path, cfg)
        _, sweep, _ = run(capsys, "sweep", "--config", path, "--tmax", "1", "--dt", "0.1")
        _, evolve, _ = run(capsys, "evolve", "--config", path, "--tmax", "1", "--dt", "0.1")
        rows = data_rows(sweep)
        assert len(rows) == 2
        assert rows[1].split(",")[2] == data_rows(evolve)[1].split(",")[1]

    def test_unstable_and_none_cells(self, tmp_path, capsys):
        # zeta = 1.5 violates the equilibrium stability condition
        cfg = dict(FIG1, sweep={"parameter": "zeta", "values": [1.5, 0.0]})
        code, out, _ = run(capsys, "sweep", "--config", write(tmp_path, cfg), "--tmax", "0.2", "--dt", "0.1")
        assert code == 0
        rows = data_rows(out)[1:]
        assert rows[0].split(",")[1] == "none"
        assert rows[1] == "1.5,unstable,unstable,unstable"

    def test_deterministic_across_workers(self, capsys):
        argv = ["sweep", "--config", str(CONFIGS / "fig2.json"), "--tmax", "3", "--dt", "0.02"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv, "--workers", "3")
        assert a == b


class TestReports:
    def test_check_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--config", str(CONFIGS / "single_oscillator.json"))
        assert code == 0
        assert "# result=pass" in out
        assert "[phi_psi_gamma]" in out

    def test_check_fails_with_exit_4(self, tmp_path, capsys):
        cfg = {
            "network": {"masses": [1.0], "frequencies": [1.0]},
            "lindblad": {"lambda": [[0.05]]},
            "equilibrium": {"temperature": 0.05, "mu_tilde": [0.1]},
        }
        code, out, _ = run(capsys, "check", "--config", write(tmp_path, cfg))
        assert code == 4
        assert "qp,1,1," in out and "# result=fail" in out

    def test_diffusion_report(self, capsys):
        code, out, _ = run(capsys, "diffusion", "--config", str(CONFIGS / "single_oscillator.json"))
        assert code == 0
        rows = data_rows(out)
        assert rows[0] == "F,G,active,closed_form,verbatim,oracle,abs_diff,agree"
        q1q1 = rows[1].split(",")
        assert q1q1[:2] == ["q1", "q1"] and float(q1q1[2]) == pytest.approx(3.914585, abs=1e-4)
        assert all(r.endswith(",1") for r in rows[1:])

    def test_einstein_report(self, capsys):
        code, out, _ = run(capsys, "einstein", "--config", str(CONFIGS / "single_oscillator.json"))
        assert code == 0
        row = data_rows(out)[1].split(",")
        assert float(row[1]) == pytest.approx(0.78125)
        assert float(row[5]) == pytest.approx(1.0021, abs=1e-3)
        assert row[7] == "0"


class TestExitCodes:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "--config", "/nonexistent.json")
        assert code == 2 and "config error" in err

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{")
        assert run(capsys, "check", "--config", str(p))[0] == 2

    def test_field_path_reported(self, tmp_path, capsys):
        cfg = dict(FIG1, grid={"tmax": 1.0, "dt": -0.1})
        code, _, err = run(capsys, "evolve", "--config", write(tmp_path, cfg))
        assert code == 2 and "grid.dt" in err

    def test_unstable_equilibrium(self, tmp_path, capsys):
        cfg = dict(FIG1, equilibrium={"temperature": 0.5, "zeta": 1.5})
        code, _, err = run(capsys, "evolve", "--config", write(tmp_path, cfg), "--tmax", "1")
        assert code == 3 and "stability" in err

    def test_non_hurwitz_drift(self, tmp_path, capsys):
        cfg = dict(FIG1, lindblad={"lambda": [[-0.1, 0.0], [0.0, -0.1]]})
        code, _, err = run(capsys, "evolve", "--config", write(tmp_path, cfg), "--tmax", "1")
        assert code == 3 and "physics error" in err

    def test_evolve_needs_two_modes(self, capsys):
        assert run(capsys, "evolve", "--config", str(CONFIGS / "single_oscillator.json"))[0] == 2


class TestConfig:
    def test_both_model_blocks_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(dict(FIG1, network={"masses": [1, 1], "frequencies": [1, 1]}))

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown"):
            parse_config(dict(FIG1, extra=1))

    def test_sweep_sorted(self):
        cfg = parse_config(dict(FIG1, sweep={"parameter": "zeta", "values": [0.2, 0.0, 0.1]}))
        assert cfg.sweep_values == [0.0, 0.1, 0.2]

    def test_only_zeta_sweeps(self):
        with pytest.raises(ConfigError, match="sweep.parameter"):
            parse_config(dict(FIG1, sweep={"parameter": "r", "values": [0.1]}))

    def test_time_grid(self):
        cfg = parse_config(dict(FIG1, grid={"tmax": 1.0, "dt": 0.1}))
        assert len(cfg.time_grid()) == 11
        assert cfg.time_grid()[-1] == pytest.approx(1.0)

    def test_digest(self):
        cfg = load_config(CONFIGS / "fig1.json")
        assert len(cfg.digest) == 64

    def test_zeta_override(self):
        cfg = parse_config(FIG1)
        _, _, eq = cfg.build(0.3)
        assert list(eq.mu_tilde) == [0.3, 0.3]
