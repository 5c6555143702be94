import csv
import io
import json
import re

import pytest

from xi_ineq.cli import main, render_json
from xi_ineq.config import config_from_mapping, parse_config_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def strip_timestamp(text: str) -> str:
    return re.sub(r'"timestamp":"[^"]*"', '"timestamp":""', text)


class TestSerialization:
    def test_seventeen_digit_floats_round_trip(self):
        values = [1.0 / 3.0, 2.0, 1e-300, 0.1 + 0.2]
        text = render_json({"v": values})
        parsed = json.loads(text)
        assert parsed["v"] == values

    def test_shapes(self):
        text = render_json({"a": [1, True, None, "x"], "b": {"c": 0.5}})
        assert json.loads(text) == {"a": [1, True, None, "x"], "b": {"c": 0.5}}


class TestConfigFile:
    def test_parse_and_apply(self):
        mapping = parse_config_text("# comment\nseries_tol = 1e-12\nquad_max_depth = 30\n")
        cfg = config_from_mapping(mapping)
        assert cfg.series_tol == 1e-12
        assert cfg.quad_max_depth == 30

    def test_bad_line_rejected(self):
        with pytest.raises(ValueError):
            parse_config_text("series_tol 1e-12")

    def test_cli_reads_config_file(self, capsys, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("quad_rel_tol = 1e-9\n")
        code, out = run_cli(capsys, "constants", "--sigma", "0.75",
                            "--method", "B_series", "--config", str(path))
        assert code == 0

    def test_env_var_fallback(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "cfg.txt"
        path.write_text("quad_rel_tol = 1e-9\n")
        monkeypatch.setenv("XI_INEQ_CONFIG", str(path))
        code, _ = run_cli(capsys, "constants", "--sigma", "0.75",
                          "--method", "B_series")
        assert code == 0

    def test_missing_config_is_usage_error(self, capsys):
        code, _ = run_cli(capsys, "constants", "--config", "/nonexistent/path")
        assert code == 3


class TestCommands:
    def test_constants_all_methods_pass(self, capsys):
        code, out = run_cli(capsys, "constants", "--sigma", "0.75", "--method", "all")
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "pass"
        assert report["outputs"]["methods_agree"] is True
        assert len(report["outputs"]["rows"]) == 3

    def test_constants_paper_truncation_series(self, capsys):
        code, out = run_cli(capsys, "constants", "--sigma", "0.75",
                            "--paper-truncation", "B")
        assert code == 0
        row = json.loads(out)["outputs"]["rows"][0]
        assert abs(row["S"] - 0.473929) <= 1e-4 * 0.473929
        assert abs(row["T"] - (-0.0218449)) <= 1e-4 * 0.0218449

    def test_verify_modulus_small_grid(self, capsys):
        code, out = run_cli(capsys, "verify-modulus", "--sigma", "0.75",
                            "--t-list", "0,10")
        assert code == 0
        report = json.loads(out)
        assert report["outputs"]["max_rel_err"] < 1e-7
        assert report["outputs"]["max_rel_err_J"] < 1e-6

    def test_scan_exit_zero(self, capsys):
        code, out = run_cli(capsys, "scan", "--sigma", "0.75", "--t-max", "2",
                            "--step", "0.5")
        assert code == 0
        assert json.loads(out)["outputs"]["summaries"][0]["violations"] == []

    def test_coeffs(self, capsys):
        code, out = run_cli(capsys, "coeffs", "--sigma", "0.75", "--kmax", "4")
        assert code == 0
        rows = json.loads(out)["outputs"]["rows"]
        assert all(r["sign_ok"] and r["bound_ok"] for r in rows)

    def test_montecarlo_seeded(self, capsys):
        code, out = run_cli(capsys, "montecarlo", "--sigma", "0.75",
                            "--t-list", "1", "--samples", "5000", "--seed", "3")
        assert code == 0
        row = json.loads(out)["outputs"]["rows"][0]
        assert row["within_4se"] and row["inequality_holds"]

    def test_reproduce_appendix_reports_known_mismatch(self, capsys):
        # the inversion-recipe S row cannot match its published value (upstream
        # inconsistency); the command must surface that as a fail, exit 1
        code, out = run_cli(capsys, "reproduce-appendix")
        assert code == 1
        rows = json.loads(out)["outputs"]["rows"]
        verdict = {(r["recipe"], r["constant"]): r["matches_1e4"] for r in rows}
        assert verdict[("B", "S")] and verdict[("B", "T")] and verdict[("C", "T")]
        assert not verdict[("C", "S")]

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 3

    def test_csv_and_json_numeric_identity(self, capsys, tmp_path):
        args = ["constants", "--sigma", "0.75", "--method", "B_series"]
        code, json_out = run_cli(capsys, *args, "--format", "json")
        assert code == 0
        code, csv_out = run_cli(capsys, *args, "--format", "csv")
        assert code == 0
        row_json = json.loads(json_out)["outputs"]["rows"][0]
        row_csv = next(csv.DictReader(io.StringIO(csv_out)))
        for key in ("S", "T"):
            assert float(row_csv[key]) == row_json[key]

    def test_byte_identical_reports_modulo_timestamp(self, capsys):
        args = ["montecarlo", "--sigma", "0.75", "--t-list", "1,5",
                "--samples", "4000", "--seed", "11"]
        _, first = run_cli(capsys, *args)
        _, second = run_cli(capsys, *args)
        assert strip_timestamp(first) == strip_timestamp(second)

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out = run_cli(capsys, "constants", "--sigma", "0.75",
                            "--method", "B_series", "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["command"] == "constants"

    def test_threads_do_not_change_results(self, capsys):
        base = ["verify-modulus", "--sigma", "0.75", "--t-list", "0,5"]
        _, one = run_cli(capsys, *base, "--threads", "1")
        _, four = run_cli(capsys, *base, "--threads", "4")
        assert strip_timestamp(one) == strip_timestamp(four)
