"""CLI: exit codes, file outputs, and determinism."""

import json

import numpy as np
import pytest

from pwphase import random_pw_signal, signal_to_json
from pwphase.cli import main


@pytest.fixture()
def signal_file(tmp_path):
    f = random_pw_signal(1.0, 2, True, 0)
    path = tmp_path / "sig.json"
    path.write_text(signal_to_json(f))
    return path


class TestAmbiguityCommand:
    def test_dump_and_rerun_identical(self, tmp_path):
        out1 = tmp_path / "a1.csv"
        out2 = tmp_path / "a2.csv"
        args = [
            "ambiguity", "--window", "gaussian",
            "--x-min", "-1", "--x-max", "1", "--x-step", "0.5",
            "--omega-min", "-1", "--omega-max", "1", "--omega-step", "0.5",
        ]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        header = out1.read_text().splitlines()[0]
        assert header == "x,omega,re,im"


class TestMeasureCommand:
    def test_sampled_measurement(self, tmp_path, signal_file):
        out = tmp_path / "s.csv"
        rc = main([
            "measure", "--window", "gaussian", "--signal", str(signal_file),
            "--geometry", "sampled", "--n-samples", "16", "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n,magnitude"
        assert len(lines) == 34  # header + 33 samples

    def test_missing_signal_file_is_config_error(self, tmp_path):
        rc = main([
            "measure", "--window", "gaussian", "--signal", str(tmp_path / "nope.json"),
            "--geometry", "sampled", "--out", str(tmp_path / "s.csv"),
        ])
        assert rc == 2

    def test_missing_window_is_config_error(self, tmp_path, signal_file):
        rc = main([
            "measure", "--signal", str(signal_file),
            "--geometry", "sampled", "--out", str(tmp_path / "s.csv"),
        ])
        assert rc == 2


class TestReconstructCommand:
    def test_c_bound_violation_exits_1(self, tmp_path, capsys):
        # minimal but well-formed magnitude grid; the c bound is checked
        # before any heavy work
        grid_csv = tmp_path / "m.csv"
        rows = ["x,omega,magnitude"]
        for x in (-1.0, 0.0, 1.0):
            for om in (-1.0, 0.0, 1.0):
                rows.append(f"{x!r},{om!r},0.0")
        grid_csv.write_text("\n".join(rows) + "\n")
        rc = main([
            "reconstruct", "--window", "gaussian", "--method", "complex-two",
            "--input", str(grid_csv), "--B", "1.0", "--c", "0.6",
            "--out", str(tmp_path / "r.json"),
        ])
        assert rc == 1
        assert "CUpsampleBound" in capsys.readouterr().err

    def test_missing_c_is_config_error(self, tmp_path):
        grid_csv = tmp_path / "m.csv"
        grid_csv.write_text("x,omega,magnitude\n0.0,0.0,0.0\n")
        rc = main([
            "reconstruct", "--window", "gaussian", "--method", "complex-two",
            "--input", str(grid_csv), "--B", "1.0",
            "--out", str(tmp_path / "r.json"),
        ])
        assert rc == 2


class TestCounterexampleCommand:
    def test_real_pair_outputs(self, tmp_path):
        prefix = tmp_path / "ce"
        rc = main(["counterexample", "--kind", "real", "--out-prefix", str(prefix)])
        assert rc == 0
        report = json.loads((tmp_path / "ce_report.json").read_text())
        assert report["max_magnitude_gap"] <= 1e-10
        assert report["distance_up_to_phase"] >= 0.1

    def test_complex_pair_outputs(self, tmp_path):
        prefix = tmp_path / "ce"
        rc = main([
            "counterexample", "--kind", "complex", "--eps", "0.25",
            "--out-prefix", str(prefix),
        ])
        assert rc == 0
        report = json.loads((tmp_path / "ce_report.json").read_text())
        assert report["max_crosscorrelation_gap"] <= 1e-10
        assert report["distance_up_to_phase"] > 0.1
        assert abs(report["c"] - 1.0 / 1.75) < 1e-12

    def test_bad_eps_exits_1(self, tmp_path, capsys):
        rc = main([
            "counterexample", "--kind", "complex", "--eps", "3.0",
            "--out-prefix", str(tmp_path / "ce"),
        ])
        assert rc == 1
        assert "BadEpsilon" in capsys.readouterr().err

    def test_determinism(self, tmp_path):
        p1, p2 = tmp_path / "a", tmp_path / "b"
        for p in (p1, p2):
            assert main([
                "counterexample", "--kind", "real", "--out-prefix", str(p)
            ]) == 0
        for suffix in ("_f.json", "_g.json", "_report.json"):
            a = (tmp_path / ("a" + suffix)).read_bytes()
            b = (tmp_path / ("b" + suffix)).read_bytes()
            assert a == b


class TestVerifyCommand:
    def test_gaussian_suite_passes(self, tmp_path, signal_file):
        out = tmp_path / "v.json"
        rc = main([
            "verify", "--window", "gaussian", "--signal", str(signal_file),
            "--out", str(out),
        ])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["pass"] is True
        assert doc["ambiguity_relation_residual"] <= 1e-5
