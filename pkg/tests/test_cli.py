"""Command-line surface: output shapes, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from qwick import cli
from qwick.verify import VerifyReport


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestDiagramsCommand:
    def test_summary_for_four_points(self, capsys):
        code, out = run_cli(capsys, "diagrams", "--n", "4")
        assert code == 0
        payload = json.loads(out)
        assert payload["summary"]["total"] == 10
        assert payload["summary"]["complete"] == 3
        assert payload["summary"]["complete_noncrossing"] == 2
        assert payload["complete_crossing_polynomial"]["pretty"] == "2 + q"

    def test_summary_for_two_points(self, capsys):
        code, out = run_cli(capsys, "diagrams", "--n", "2")
        assert code == 0
        assert json.loads(out)["summary"]["total"] == 2

    def test_empty_ground(self, capsys):
        code, out = run_cli(capsys, "diagrams", "--n", "0")
        assert code == 0
        assert json.loads(out)["summary"]["total"] == 1

    def test_blocks_listing_filters_internal_pairs(self, capsys):
        code, out = run_cli(capsys, "diagrams", "--blocks", "2,2")
        assert code == 0
        payload = json.loads(out)
        assert payload["blocks"] == [2, 2]
        for record in payload["diagrams"]:
            for i, j in record["pairs"]:
                assert (i <= 2) != (j <= 2)

    def test_missing_size_is_a_usage_error(self, capsys):
        code, _ = run_cli(capsys, "diagrams")
        assert code == 2

    def test_csv_format(self, capsys):
        code, out = run_cli(capsys, "diagrams", "--n", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("pairs,singletons,c,d,tc,g,a")
        assert len(lines) == 3


class TestExpansionCommands:
    def test_wick_to_normal_two_variables(self, capsys):
        code, out = run_cli(capsys, "wick", "to-normal", "--n", "2")
        assert code == 0
        terms = json.loads(out)["terms"]
        assert terms == [
            {"cov": [], "word": [1, 2], "kind": "normal", "poly": [{"exp": 0, "num": 1, "den": 1}]},
            {"cov": [[1, 2]], "word": [], "kind": "normal", "poly": [{"exp": 0, "num": -1, "den": 1}]},
        ]

    def test_wick_to_normal_single_variable(self, capsys):
        code, out = run_cli(capsys, "wick", "to-normal", "--n", "1")
        assert code == 0
        terms = json.loads(out)["terms"]
        assert terms == [
            {"cov": [], "word": [1], "kind": "normal", "poly": [{"exp": 0, "num": 1, "den": 1}]}
        ]

    def test_wick_to_wick_two_variables(self, capsys):
        code, out = run_cli(capsys, "wick", "to-wick", "--n", "2", "--format", "pretty")
        assert code == 0
        assert out.strip() == ":x1 x2: + c(1,2)"

    def test_free_wick_product_of_three(self, capsys):
        code, out = run_cli(
            capsys, "wick", "to-normal", "--n", "3", "--free", "--format", "pretty"
        )
        assert code == 0
        assert out.strip() == "x1 x2 x3 - c(1,2) x3 - c(2,3) x1"

    def test_moments_free_flag(self, capsys):
        code, out = run_cli(capsys, "moments", "--n", "4", "--free", "--format", "pretty")
        assert code == 0
        assert out.strip() == "c(1,2) c(3,4) + c(1,4) c(2,3)"

    def test_product_reports_both_labelings(self, capsys):
        code, out = run_cli(capsys, "product", "--blocks", "2,1")
        assert code == 0
        payload = json.loads(out)
        assert payload["labels"] == [[1, 1], [1, 2], [2, 1]]
        assert len(payload["terms"]) == 3

    def test_product_expectation_flag(self, capsys):
        code, out = run_cli(
            capsys, "product", "--blocks", "2,2", "--expectation", "--format", "pretty"
        )
        assert code == 0
        assert out.strip() == "q c(1,3) c(2,4) + c(1,4) c(2,3)"

    def test_output_is_byte_stable(self, capsys):
        _, first = run_cli(capsys, "moments", "--n", "6")
        _, second = run_cli(capsys, "moments", "--n", "6")
        assert first == second

    def test_cap_flag(self, capsys):
        code, _ = run_cli(capsys, "moments", "--n", "6", "--cap", "4")
        assert code == 2

    def test_csv_terms(self, capsys):
        code, out = run_cli(capsys, "wick", "to-normal", "--n", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "cov,word,kind,poly"
        assert lines[1] == ",1 2,normal,1"
        assert lines[2] == "1-2,,normal,-1"


class TestVerifyCommand:
    def test_moment_suite_passes(self, capsys):
        code, out = run_cli(capsys, "verify", "c2.2", "--n", "6", "--q", "1/2")
        assert code == 0
        payload = json.loads(out)
        assert payload["failures"] == 0
        assert all(r["status"] == "pass" for r in payload["reports"])

    def test_blocks_suite_passes(self, capsys):
        code, out = run_cli(capsys, "verify", "t3.4", "--blocks", "2,2")
        assert code == 0
        assert json.loads(out)["failures"] == 0

    def test_gram_rejects_q_outside_interval(self, capsys):
        code, _ = run_cli(capsys, "verify", "gram", "--q", "5/4")
        assert code == 2

    def test_unknown_check_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "bogus"])
        assert exc.value.code == 2

    def test_bad_rational_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "gram", "--q", "pi"])
        assert exc.value.code == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        fake = [VerifyReport("gram", {"dim": 1}, "fail", {"positive_definite": False})]
        monkeypatch.setattr(cli, "run_check", lambda *a, **k: fake)
        code, out = run_cli(capsys, "verify", "gram")
        assert code == 1
        assert json.loads(out)["failures"] == 1

    def test_pretty_format_lists_instances(self, capsys):
        code, out = run_cli(
            capsys, "verify", "roundtrip", "--n", "3", "--format", "pretty"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("PASS roundtrip")
        assert lines[-1] == "3/3 instances passed"

    def test_verify_deterministic_given_seed(self, capsys):
        _, first = run_cli(capsys, "verify", "t2.1", "--n", "4", "--seed", "7")
        _, second = run_cli(capsys, "verify", "t2.1", "--n", "4", "--seed", "7")
        assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qwick", "moments", "--n", "2", "--format", "pretty"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "c(1,2)"
