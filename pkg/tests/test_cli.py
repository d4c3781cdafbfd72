"""Command-line surface: formats, exit codes, determinism, env override."""

import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

from stirling.cli import run

PRINTED = ["0.91667", "0.91944", "0.91865", "0.91925", "0.91840",
           "0.92032", "0.91391", "0.94346", "0.76382", "2.1562"]


def run_capture(argv, capsys):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants_table_matches_printed_values(capsys):
    code, out, _ = run_capture(["constants", "--max-n", "10", "--format", "csv"],
                               capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    for row, printed in zip(rows, PRINTED):
        got = Fraction(row["C_N_decimal"])
        p = Fraction(printed)
        k = len(printed.split(".")[1])
        assert abs(got - p) <= Fraction(11, 10**(k + 1))
    assert rows[0]["C_N_exact"] == "11/12"


def test_bernoulli_base_case_json(capsys):
    code, out, _ = run_capture(["bernoulli", "--max", "0", "--format", "json"],
                               capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"] == [{"k": 0, "B_k": "1/1", "a_k": "1/1"}]


def test_bernoulli_csv_columns(capsys):
    code, out, _ = run_capture(["bernoulli", "--max", "4", "--format", "csv"],
                               capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["B_k"] for r in rows] == ["1/1", "-1/2", "1/6", "0/1", "-1/30"]
    assert rows[4]["a_k"] == "-1/720"


def test_michel_below_validity_exits_3(capsys):
    code, out, err = run_capture(["bounds", "--family", "michel",
                                  "--n-max", "2"], capsys)
    assert code == 3
    assert out == ""
    assert "michel" in err


def test_eval_json_fields(capsys):
    code, out, _ = run_capture(["eval", "--z", "10", "--auto"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"value_hex", "value_dec", "order_used",
                        "omitted_term_dec", "precision_bits"}
    assert doc["precision_bits"] == 256
    assert doc["value_dec"].startswith("12.80182748")
    assert doc["value_hex"].startswith("0x1.")


def test_eval_fixed_order(capsys):
    code, out, _ = run_capture(["eval", "--z", "1", "--terms", "3",
                                "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["order_used"] == "3"


def test_oracle_json_fields(capsys):
    code, out, _ = run_capture(["oracle", "--z", "0.5", "--method", "binet2"],
                               capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["method"] == "binet2"
    assert "error_bound_dec" in doc
    assert doc["value_dec"].startswith("0.572364942924700")


def test_expansions_mermin_document(capsys):
    code, out, _ = run_capture(["expansions", "--which", "mermin", "--n", "2",
                                "--k-max", "2000"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["which"] == "mermin"
    assert Fraction(doc["gap"]) <= Fraction(1, 12 * 2000)


def test_unknown_flag_is_usage_error(capsys):
    code, out, err = run_capture(["constants", "--max-n", "5", "--bogus"],
                                 capsys)
    assert code == 2


def test_missing_subcommand_is_usage_error(capsys):
    code, _, _ = run_capture([], capsys)
    assert code == 2


def test_bad_precision_exits_3(capsys):
    code, _, err = run_capture(["constants", "--max-n", "3",
                                "--precision-bits", "32"], capsys)
    assert code == 3


def test_env_var_sets_default_precision(capsys, monkeypatch):
    monkeypatch.setenv("STIRLING_PRECISION_BITS", "128")
    code, out, _ = run_capture(["eval", "--z", "2", "--auto"], capsys)
    assert code == 0
    assert json.loads(out)["precision_bits"] == 128


def test_flag_overrides_env(capsys, monkeypatch):
    monkeypatch.setenv("STIRLING_PRECISION_BITS", "128")
    code, out, _ = run_capture(["eval", "--z", "2", "--auto",
                                "--precision-bits", "192"], capsys)
    assert code == 0
    assert json.loads(out)["precision_bits"] == 192


def test_output_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, err = run_capture(["constants", "--max-n", "3",
                                  "--output", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("N,C_N_exact")


def test_bounds_small_sweep_all_hold(capsys):
    code, out, _ = run_capture(["bounds", "--family", "robbins",
                                "--n-max", "25"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 25
    assert all(r["holds"] == "true" for r in rows)
    assert all(Fraction(r["margin"]) > 0 for r in rows)


def test_bounds_impens_inconclusive_cells_exit_4(capsys):
    code, out, err = run_capture(["bounds", "--family", "impens",
                                  "--n-max", "10", "--precision-bits", "64"],
                                 capsys)
    assert code == 4
    rows = list(csv.DictReader(io.StringIO(out)))
    assert any(r["holds"] == "inconclusive" for r in rows)
    assert "inconclusive" in err


def test_report_round_trips_and_counts(capsys):
    code, out, _ = run_capture(["report", "--n-max", "10"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["fail"] == 0
    assert doc["summary"]["total"] == len(doc["checks"])


def test_report_schema_stable_across_n_max(capsys):
    _, out_small, _ = run_capture(["report", "--n-max", "10"], capsys)
    _, out_big, _ = run_capture(["report", "--n-max", "30"], capsys)
    small = json.loads(out_small)
    big = json.loads(out_big)
    assert [c["name"] for c in small["checks"]] == [c["name"] for c in big["checks"]]
    rows_small = sum(int(c["detail"].split("rows=")[1].split(" ")[0])
                     for c in small["checks"] if "rows=" in c["detail"])
    rows_big = sum(int(c["detail"].split("rows=")[1].split(" ")[0])
                   for c in big["checks"] if "rows=" in c["detail"])
    assert rows_small < rows_big


def test_report_low_precision_goes_inconclusive_not_fail(capsys):
    code, out, _ = run_capture(["report", "--n-max", "10",
                                "--precision-bits", "64"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["fail"] == 0
    assert doc["summary"]["inconclusive"] >= 1


def test_report_needs_n_max_ten(capsys):
    code, _, _ = run_capture(["report", "--n-max", "9"], capsys)
    assert code == 3


def test_console_entry_point_subprocess():
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "stirling.cli", "constants", "--max-n", "2",
         "--format", "csv"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "N,C_N_exact,C_N_decimal,abs_gap_to_half_ln_2pi"
