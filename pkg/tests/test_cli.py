"""CLI tests (in-process client mode)."""

import csv
import io
import json

import pytest

from expgof.cli import EXIT_INPUT, main
from expgof.datasets import get_dataset
from expgof.statistic import statistic_from_raw


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_test_command_dataset_text(capsys):
    code, out, _ = run_cli(
        ["test", "--data", "pyke1965", "--a", "1", "--N", "1000"], capsys
    )
    assert code == 0
    assert "statistic M(n=31, a=1)" in out
    assert "p-value" in out
    assert "decision:" in out


def test_test_command_json(capsys):
    code, out, _ = run_cli(
        ["test", "--data", "pyke1965", "--a", "1", "--N", "1000",
         "--format", "json"], capsys
    )
    assert code == 0
    body = json.loads(out)
    assert body["n"] == 31
    assert body["statistic"] == pytest.approx(
        statistic_from_raw(get_dataset("pyke1965"), 1.0)
    )


def test_test_command_csv(capsys):
    code, out, _ = run_cli(
        ["test", "--data", "barlow1975", "--a", "0.5", "--N", "1000",
         "--format", "csv"], capsys
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert rows[0]["n"] == "107"
    assert float(rows[0]["statistic"]) == pytest.approx(0.0239, rel=5e-3)


def test_test_command_file(tmp_path, capsys):
    p = tmp_path / "d.txt"
    p.write_text("1 2 3 4 5 6 7 8\n")
    code, out, _ = run_cli(
        ["test", "--data", str(p), "--a", "2", "--N", "1000"], capsys
    )
    assert code == 0
    assert "statistic M(n=8, a=2)" in out


def test_test_command_tiny_sample_statistic_only(tmp_path, capsys):
    p = tmp_path / "one.txt"
    p.write_text("5.0\n")
    code, out, _ = run_cli(["test", "--data", str(p), "--a", "1"], capsys)
    assert code == 0
    # single scaled observation: statistic is 1/(2+a) - 2/(1+a) + 1/a = 1/3
    assert "= 0.333333" in out
    assert "inference refused" in out


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1 banana 3\n")
    with pytest.raises(SystemExit) as exc:
        main(["test", "--data", str(p)])
    assert exc.value.code == EXIT_INPUT
    assert "cannot parse" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["test", "--data", "/no/such/file.txt"])
    assert exc.value.code == EXIT_INPUT


def test_bad_a_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["test", "--data", "pyke1965", "--a", "-2"])
    assert exc.value.code == 2  # argparse usage error


def test_select_a_command(capsys):
    code, out, _ = run_cli(
        ["select-a", "--data", "pyke1965", "--grid", "1,2", "--B", "100",
         "--N", "1000"], capsys
    )
    assert code == 0
    assert out.startswith("selected a = ")
    assert out.split("=")[1].strip() in ("1", "2")


def test_critical_values_command_csv(capsys):
    code, out, _ = run_cli(
        ["critical-values", "--n", "20", "--a", "1,2", "--N", "1000",
         "--format", "csv"], capsys
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["a"] for r in rows] == ["1.0", "2.0"]
    assert float(rows[0]["critical_value"]) > float(rows[1]["critical_value"])


def test_power_command(capsys):
    code, out, _ = run_cli(
        ["power", "--alt", "U", "--n", "10", "--a", "1", "--N", "1000",
         "--format", "json"], capsys
    )
    assert code == 0
    cells = json.loads(out)
    assert cells[0]["alternative"] == "U"
    assert 0.0 < cells[0]["power"] <= 1.0


def test_eigen_command(capsys):
    code, out, _ = run_cli(
        ["eigen", "--grid", "1", "--m", "500", "--format", "json"], capsys
    )
    assert code == 0
    cells = json.loads(out)
    assert cells[0]["delta1"] == pytest.approx(5.32e-3, rel=0.06)


def test_efficiency_command_csv(capsys):
    code, out, _ = run_cli(
        ["efficiency", "--family", "weibull", "--grid", "1", "--m", "400",
         "--format", "csv"], capsys
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["family"] == "Weibull"
    assert 0.0 < float(rows[0]["efficiency"]) <= 1.05


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
