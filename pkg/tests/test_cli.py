"""Command-line interface: artifacts, determinism, sweeps, exit codes."""

import json
import math

import numpy as np
import pytest

from oscbic import predict_boc
from oscbic.cli import main
from oscbic.export import read_csv_rows


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def payload(path):
    """CSV body without the header comments."""
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


class TestDesignCommand:
    def test_reference_design_report(self, tmp_path):
        assert run(tmp_path, "design", "--M", "3", "--n0", "4") == 0
        report = json.loads((tmp_path / "design.json").read_text())
        data = report["data"]
        assert abs(data["rho0_over_J"] - 1.0) < 1e-12
        assert abs(data["omega_bic_over_J"] - 1.0) < 1e-12
        assert abs(data["period"] - math.pi) < 1e-12
        assert abs(data["phi_bic_sq"] - 1 / 6) < 1e-12
        assert "nm_ratio" in data and "boc" in data
        assert data["boc"]["emitter_probability"] > 0

    def test_invalid_parameters_exit_2(self, tmp_path, capsys):
        assert run(tmp_path, "design", "--M", "2", "--n0", "4") == 2
        assert "invalid parameters" in capsys.readouterr().err

    def test_header_carries_config(self, tmp_path):
        run(tmp_path, "design", "--M", "3", "--n0", "8")
        report = json.loads((tmp_path / "design.json").read_text())
        assert report["config"]["M"] == 3
        assert report["config"]["n0"] == 8
        assert report["artifact"] == "oscbic"


class TestSpectrumCommand:
    def test_schema_and_classification(self, tmp_path):
        assert run(tmp_path, "spectrum", "--M", "3", "--n0", "8", "--N", "401") == 0
        columns, rows = read_csv_rows(tmp_path / "spectrum.csv")
        assert columns == ["index", "energy", "emitter_prob", "kind"]
        assert len(rows) == 402
        kinds = [r[3] for r in rows]
        assert kinds.count("BIC") == 2
        assert kinds.count("BOC") == 2
        energies = [float(r[1]) for r in rows]
        assert energies == sorted(energies)

    def test_json_mirror(self, tmp_path):
        run(tmp_path, "spectrum", "--M", "3", "--n0", "8", "--N", "201",
            "--format", "json")
        report = json.loads((tmp_path / "spectrum.json").read_text())
        assert len(report["data"]) == 202
        assert {"index", "energy", "emitter_prob", "kind"} == set(report["data"][0])


class TestEvolveCommand:
    def test_timeseries_schema(self, tmp_path):
        assert run(tmp_path, "evolve", "--M", "3", "--n0", "4", "--initial", "p_state",
                   "--tmax", "15", "--samples", "40", "--sites", "coupling") == 0
        columns, rows = read_csv_rows(tmp_path / "timeseries.csv")
        assert columns[:3] == ["t", "prob_atom", "leakage"]
        assert len(columns) == 3 + 9  # coupling window spans (M-1)*n0 + 1 sites
        assert len(rows) == 40
        leakage = [float(r[2]) for r in rows]
        assert max(leakage) < 1e-8

    def test_rows_reproducible(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            out.mkdir()
            assert main(["evolve", "--M", "3", "--n0", "4", "--tmax", "10",
                         "--samples", "20", "--sites", "none", "--out", str(out)]) == 0
        assert payload(a / "timeseries.csv") == payload(b / "timeseries.csv")


class TestBicstateCommand:
    def test_recipe_rows(self, tmp_path):
        assert run(tmp_path, "bicstate", "--M", "3", "--n0", "4") == 0
        columns, rows = read_csv_rows(tmp_path / "pstate.csv")
        assert columns == ["site", "re", "im", "amplitude", "phase"]
        assert len(rows) == 3
        amplitudes = [float(r[3]) for r in rows]
        np.testing.assert_allclose(amplitudes, 1 / math.sqrt(3), atol=1e-12)
        phases = [abs(float(r[4])) for r in rows]
        np.testing.assert_allclose(phases, [math.pi, 0, math.pi], atol=1e-12)


class TestExperimentCommand:
    def test_plan_values(self, tmp_path):
        assert run(tmp_path, "experiment", "--M", "3", "--n0", "4",
                   "--zmax-mm", "100", "--periods", "5") == 0
        plan = json.loads((tmp_path / "plan.json").read_text())["data"]
        assert abs(plan["J_physical"] - 5 * math.pi / 100) < 1e-12
        assert abs(plan["rho0_physical"] - plan["J_physical"]) < 1e-12
        assert plan["imperfection_ratio"] == 0.0286
        assert abs(plan["jz_horizon"] - 5 * math.pi) < 1e-9


class TestSweepCommand:
    def test_rows_match_standalone_calls(self, tmp_path):
        assert run(tmp_path, "sweep", "--M", "3", "--n0", "8:40:8",
                   "--observable", "boc_prob") == 0
        _, rows = read_csv_rows(tmp_path / "sweep.csv")
        assert [int(r[0]) for r in rows] == [8, 16, 24, 32, 40]
        for n0_str, value in rows:
            expected = predict_boc(3, int(n0_str)).emitter_probability
            assert float(value) == expected

    def test_worker_count_does_not_change_rows(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out, threads in ((a, "1"), (b, "3")):
            out.mkdir()
            assert main(["sweep", "--M", "3", "--n0", "8:32:8", "--observable",
                         "bic_prob", "--threads", threads, "--out", str(out)]) == 0
        assert payload(a / "sweep.csv") == payload(b / "sweep.csv")

    def test_bad_range_exit_2(self, tmp_path):
        assert run(tmp_path, "sweep", "--M", "3", "--n0", "80:8:8",
                   "--observable", "boc_prob") == 2


class TestConfigFile:
    def test_file_supplies_defaults_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"M": 3, "n0": 8, "J": 1.0}))
        out1 = tmp_path / "o1"
        out1.mkdir()
        assert main(["design", "--M", "3", "--n0", "4", "--config", str(cfg),
                     "--out", str(out1), "--n0", "4"]) == 0
        report = json.loads((out1 / "design.json").read_text())
        assert report["config"]["n0"] == 4  # explicit flag wins
        out2 = tmp_path / "o2"
        out2.mkdir()
        assert main(["design", "--M", "3", "--config", str(cfg), "--out", str(out2)]) == 0
        report = json.loads((out2 / "design.json").read_text())
        assert report["config"]["n0"] == 8  # file value used

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"M": 3, "n0": 4, "bogus": 1}))
        with pytest.raises(SystemExit) as excinfo:
            main(["design", "--M", "3", "--n0", "4", "--config", str(cfg)])
        assert excinfo.value.code == 2
