"""Command-line behavior: exit codes, file outputs, determinism, and the
fault-injection hook of the self-test."""

import json
from pathlib import Path

import pytest

from aggdiff.cli import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG,
    EXIT_NO_CONVERGENCE,
    EXIT_OK,
    EXIT_REGIME,
    load_config,
    main,
)


def write_cfg(path: Path, extra: str = "") -> Path:
    cfg = path / "run.cfg"
    cfg.write_text(
        "params.d = 3\n"
        "params.s = 1.1\n"
        "params.m = 1.2\n"
        "grid.n = 384\n"
        "grid.r_max = 4.0\n"
        "seed = 5\n"
        + extra
    )
    return cfg


class TestConfig:
    def test_defaults_round_trip(self, tmp_path):
        cfg = load_config(write_cfg(tmp_path))
        assert cfg.params.d == 3
        assert cfg.grid_n == 384
        assert cfg.kappas == (0.8, 1.2)

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("params.zz = 1\n")
        assert main(["validate", "--config", str(cfg)]) == EXIT_CONFIG

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("params.s 1.1\n")
        assert main(["validate", "--config", str(cfg)]) == EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        assert main(["validate", "--config", str(tmp_path / "nope.cfg")]) == EXIT_CONFIG

    def test_unknown_command(self, tmp_path):
        cfg = write_cfg(tmp_path)
        assert main(["frobnicate", "--config", str(cfg)]) == EXIT_CONFIG


class TestValidate:
    def test_ok(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["validate", "--config", str(cfg)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "beta" in out and "c_ds" in out

    def test_regime_violation(self, tmp_path, capsys):
        cfg = tmp_path / "r.cfg"
        cfg.write_text("params.s = 1.0\n")
        assert main(["validate", "--config", str(cfg)]) == EXIT_REGIME
        assert "2 < 2s" in capsys.readouterr().err


class TestExtremal:
    def test_writes_profile_and_sidecar(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out = tmp_path / "out"
        assert main(["extremal", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        csv = (out / "extremal_profile.csv").read_text().splitlines()
        assert csv[0] == "r,w"
        sidecar = json.loads((out / "extremal_profile.json").read_text())
        assert sidecar["converged"] is True
        assert 1.6 < sidecar["cstar"] < 1.9107373657
        assert sidecar["el_residual"] <= 1e-4

    def test_deterministic_csv_bodies(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["extremal", "--config", str(cfg), "--out", str(out1)])
        main(["extremal", "--config", str(cfg), "--out", str(out2)])
        assert (out1 / "extremal_profile.csv").read_bytes() \
            == (out2 / "extremal_profile.csv").read_bytes()

    def test_budget_exhaustion_exit_code(self, tmp_path):
        cfg = write_cfg(tmp_path, "extremal.max_iter = 1\n")
        out = tmp_path / "out"
        code = main(["extremal", "--config", str(cfg), "--out", str(out)])
        assert code == EXIT_NO_CONVERGENCE
        # best-so-far profile still written
        sidecar = json.loads((out / "extremal_profile.json").read_text())
        assert sidecar["converged"] is False
        assert (out / "extremal_profile.csv").exists()

    def test_regime_violation_exit_code(self, tmp_path):
        cfg = tmp_path / "r.cfg"
        cfg.write_text("params.m = 1.3\n")
        out = tmp_path / "out"
        assert main(["extremal", "--config", str(cfg), "--out", str(out)]) \
            == EXIT_REGIME


class TestThresholds:
    def test_json_payload(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out = tmp_path / "out"
        assert main(["thresholds", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        payload = json.loads((out / "thresholds.json").read_text())
        assert payload["x_star"] > 0 and payload["g_at_xstar"] > 0
        assert payload["cstar"] < 1.9107373657


class TestClassify:
    @pytest.mark.parametrize("kappa,verdict", [(0.8, "GlobalExistence"),
                                               (1.2, "FiniteTimeBlowup"),
                                               (1.0, "Indeterminate")])
    def test_threshold_scaled_family(self, tmp_path, kappa, verdict):
        cfg = write_cfg(tmp_path, f"init.kind = threshold_scaled\ninit.kappa = {kappa}\n")
        out = tmp_path / "out"
        assert main(["classify", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        payload = json.loads((out / "classification.json").read_text())
        assert payload["verdict"] == verdict


class TestEvolve:
    def test_gaussian_run_outputs(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            "init.kind = gaussian\ninit.amplitude = 0.4\ninit.width = 1.0\n"
            "grid.r_max = 8.0\nsim.t_end = 0.05\nsim.record_every = 50\n",
        )
        out = tmp_path / "out"
        assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        lines = (out / "trace.csv").read_text().splitlines()
        assert lines[0] == "t,mass,lm,linf,F,m2,dissipation,dt"
        footer = json.loads((out / "trace.json").read_text())
        assert footer["outcome"] == "CompletedBounded"
        assert (out / "final_state.csv").exists()


class TestTraceDeterminism:
    def test_evolve_rerun_byte_identical(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            "init.kind = gaussian\ninit.amplitude = 0.4\ninit.width = 1.0\n"
            "grid.r_max = 8.0\nsim.t_end = 0.02\nsim.record_every = 20\n",
        )
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["evolve", "--config", str(cfg), "--out", str(out1)])
        main(["evolve", "--config", str(cfg), "--out", str(out2)])
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()


class TestDichotomy:
    def test_threshold_amplitude_row(self, tmp_path):
        # kappa = 1 sits in the tolerance band: Indeterminate, and the run
        # stays near-stationary to the horizon
        cfg = write_cfg(
            tmp_path,
            "grid.n = 512\nsim.t_end = 20.0\nsim.record_every = 400\n"
            "experiment.kappas = 1.0\n",
        )
        out = tmp_path / "out"
        code = main(["dichotomy", "--config", str(cfg), "--out", str(out)])
        assert code == EXIT_OK
        payload = json.loads((out / "dichotomy.json").read_text())
        row = payload["rows"][0]
        assert row["verdict"] == "Indeterminate"
        assert row["outcome"] == "CompletedBounded"
        assert row["consistent"] is True
        assert abs(row["barrier_max_ratio"] - 1.0) <= 1e-3
        assert abs(row["barrier_min_ratio"] - 1.0) <= 1e-3
        body = (out / "trace_kappa_1.csv").read_text().splitlines()
        linf = [float(line.split(",")[3]) for line in body[1:]]
        assert 0.9 <= min(linf) / linf[0] and max(linf) / linf[0] <= 1.1

    def test_default_sweep_consistent(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            "grid.n = 512\nsim.t_end = 50.0\nsim.record_every = 400\n",
        )
        out = tmp_path / "out"
        code = main(["dichotomy", "--config", str(cfg), "--out", str(out)])
        assert code == EXIT_OK
        payload = json.loads((out / "dichotomy.json").read_text())
        rows = {row["kappa"]: row for row in payload["rows"]}
        assert rows[0.8]["verdict"] == "GlobalExistence"
        assert rows[0.8]["outcome"] == "CompletedBounded"
        assert rows[0.8]["barrier_max_ratio"] < 1.0
        assert rows[1.2]["verdict"] == "FiniteTimeBlowup"
        assert rows[1.2]["outcome"] == "BlowupDetected"
        assert rows[1.2]["barrier_min_ratio"] > 1.0
        assert rows[1.2]["t_detect"] is not None
        assert (out / "trace_kappa_0.8.csv").exists()
        assert (out / "trace_kappa_1.2.csv").exists()


class TestSelftest:
    def test_passes_with_default_seed(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "selftest.n = 160\n")
        assert main(["selftest", "--config", str(cfg)]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("PASS") >= 6
        assert "FAIL" not in out

    def test_corrupted_kernel_fails_named_check(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "selftest.n = 160\nselftest.corrupt_kernel = true\n")
        assert main(["selftest", "--config", str(cfg)]) == EXIT_CHECK_FAILED
        captured = capsys.readouterr()
        assert "hls_bound" in captured.err

    def test_seed_stability(self, tmp_path):
        for seed in range(10):
            cfg = write_cfg(tmp_path, f"selftest.n = 128\nseed = {seed}\n")
            assert main(["selftest", "--config", str(cfg)]) == EXIT_OK
