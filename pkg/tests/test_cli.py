"""Tests for the command-line front end."""

from __future__ import annotations

import json

import pytest

from engelkit.cli import run
from engelkit.symexpr import parse


class TestExitCodes:
    def test_ok(self):
        code, report = run(["invariants", "--t", "0"])
        assert code == 0 and report.status == "ok"

    def test_input_error_on_bad_expression(self):
        code, report = run(["invariants", "--t", "x1 + "])
        assert code == 2 and report.status == "input-error"

    def test_input_error_on_bad_marking(self):
        code, report = run(["invariants", "--t", "x5"])
        assert code == 2

    def test_verification_failure_sets_exit_one(self):
        code, report = run(["kerr", "verify", "--F", "t", "--t", "x4"])
        assert code == 1 and report.status == "verification-failed"

    def test_transversality_is_input_error(self):
        code, report = run(["kerr", "section", "--H", "y1",
                            "--at", "x0=1,x1=3,x2=1,x3=1,x4=1"])
        assert code == 2


class TestInvariantsCommand:
    def test_flat_marking(self):
        code, report = run(["invariants", "--t", "0"])
        assert code == 0
        assert all(v == "0" for v in report.results["invariants"].values())
        assert report.results["branch"] == "flat"
        assert report.results["symmetry_dimension"] == 9
        assert report.results["routes_agree"]

    def test_linear_marking(self):
        code, report = run(["invariants", "--t", "x4"])
        assert code == 0
        assert report.results["invariants"]["J"] == "-1"
        assert report.results["branch"] == "J-nonzero"

    def test_branch_non_constant_reported(self):
        code, report = run(["invariants", "--t", "x3"])
        assert code == 0
        assert report.results["branch"] == "non-constant"


class TestKerrCommands:
    def test_verify_family(self):
        code, report = run(["kerr", "verify", "--F", "t - (2*y3 - y1)/y2",
                            "--t", "(x1 - 2*x3)/(-x2 + 2*x4)"])
        assert code == 0
        assert report.results["pass"]

    def test_solve(self):
        code, report = run(["kerr", "solve", "--F", "y2*t - (2*y3 - y1)",
                            "--at", "x0=1,x1=3,x2=1,x3=1,x4=1"])
        assert code == 0
        assert abs(report.results["t"] - 1.0) < 1e-12

    def test_section_csv(self, tmp_path):
        out = tmp_path / "grid.csv"
        code, report = run(["kerr", "section", "--H", "y2*y4 - (2*y3 - y1)",
                            "--at", "x0=1,x1=3,x2=1,x3=1,x4=1",
                            "--guess", "0.5", "--csv", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("x0,x1,x2,x3,x4,t")
        assert len(lines) == report.results["samples"] + 1


class TestVerificationCommands:
    def test_g2(self):
        code, report = run(["g2", "verify"])
        assert code == 0
        assert report.results["structure_equations"] == "14/14 matched"
        assert report.results["jacobi"] == "364/364 triples"

    def test_models(self):
        code, report = run(["models", "check"])
        assert code == 0
        assert report.results["systems"]["submax-minus"]["killing_signature"] == [5, 3, 0]

    def test_reduction(self):
        code, report = run(["reduction", "verify-flat"])
        assert code == 0
        assert all(report.results["equations"].values())
        assert not report.results["u3_printed_formula_matches"]

    def test_cubic(self):
        code, report = run(["cubic", "verify", "--seed", "5"])
        assert code == 0
        assert report.results["stabilizer_dimension"] == 4

    def test_fibration(self):
        code, report = run(["fibration", "check"])
        assert code == 0

    def test_tanaka_prolong(self):
        code, report = run(["tanaka", "prolong", "--g0", "gl2"])
        assert code == 0
        assert report.results["degree_dims"] == [4, 1, 0]
        assert report.results["total_dimension"] == 14

    def test_tanaka_cohomology_single(self):
        code, report = run(["tanaka", "cohomology", "--coefficients", "q",
                            "--degree", "2", "--homogeneity", "1"])
        assert code == 0
        assert report.results["dimension"] == 9

    def test_tanaka_normalization(self):
        code, report = run(["tanaka", "normalization"])
        assert code == 0
        assert report.results["image_parabolic_dim"] == 15


class TestReports:
    def test_json_round_trips_expressions(self):
        for t_text in ("x4", "(x1 - 2*x3)/(-x2 + 2*x4)", "x0*x4 + x2^2"):
            code, report = run(["invariants", "--t", t_text, "--format", "json"])
            data = json.loads(report.to_json())
            reparsed_input = parse(data["inputs"]["t"])
            assert reparsed_input == parse(t_text)
            for name, text in data["results"]["invariants"].items():
                again = parse(text)
                assert str(again) == text  # canonical printing is stable

    def test_out_file(self, tmp_path):
        out = tmp_path / "report.json"
        code, report = run(["classify", "--t", "0", "--format", "json",
                            "--out", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["results"]["branch"] == "flat"

    def test_text_rendering_has_status(self):
        code, report = run(["growth", "--t", "x4"])
        text = report.to_text()
        assert "growth: [2, 3, 5]" in text
        assert text.endswith("status: ok")

    def test_deterministic_output(self):
        _, rep1 = run(["invariants", "--t", "x0*x4 - x2^2"])
        _, rep2 = run(["invariants", "--t", "x0*x4 - x2^2"])
        assert rep1.to_json() == rep2.to_json()

    def test_pointwise_classify(self):
        code, report = run(["classify", "--t", "x3", "--at",
                            "x0=0,x1=0,x2=0,x3=2,x4=0"])
        assert code == 0
        assert report.results["path"][0] == "J != 0"
