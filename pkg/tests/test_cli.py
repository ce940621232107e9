import csv
import io
import json
import math
import subprocess
import sys

import pytest

from confcap import cli
from confcap.tables import format_value, parse_complex


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


# ---------------------------------------------------------------- literals


@pytest.mark.parametrize("text, value", [
    ("7+5i", 7 + 5j), ("-1 + 2i", -1 + 2j), ("3", 3), ("-i", -1j), ("i", 1j),
    ("2.5e-1-4j", 0.25 - 4j), ("-2+1i", -2 + 1j), ("1e3i", 1000j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "4+5x", "i2", "1+2i+3i", "nan", "inf+1i", "++1"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_format_value():
    assert format_value(1 / 3) == "0.333333333333333"
    assert format_value(7 - 5j) == "7-5i"
    assert format_value(-0.5 + 0j) == "-0.5+0i"
    assert format_value(3) == "3"
    assert format_value(True) == "true"
    assert format_value(None) == ""


# ---------------------------------------------------------------- qm / qmt


def test_qm(capsys):
    code, out, err = run(capsys, "qm", "--A", "7+5i", "--B", "-1+2i")
    assert (code, out, err) == (0, "1.17336589158553\n", "")


def test_qm_negative_literals(capsys):
    code, out, _ = run(capsys, "qm", "--A", "4+5i", "--B", "-2+1i")
    assert code == 0 and out == "1.02479880902234\n"
    code, out2, _ = run(capsys, "qm", "--A=4+5i", "--B=-2+1i")
    assert out2 == out


def test_qmt_symmetric_triangle(capsys):
    code, out, _ = run(capsys, "qmt", "--A", "0.5+0.5i", "--B", "i")
    assert code == 0 and float(out) == pytest.approx(1.0, abs=1e-12)


def test_qm_json(capsys):
    code, out, _ = run(capsys, "qm", "--A", "7+5i", "--B", "-1+2i", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "qm"
    assert doc["rows"][0]["A"] == "7+5i"
    assert doc["rows"][0]["modulus"] == pytest.approx(1.17336589158553, abs=1e-14)


def test_malformed_literal_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["qm", "--A", "4+5x", "--B", "1i"])
    assert exc.value.code == 2
    assert "malformed" in capsys.readouterr().err


def test_missing_argument_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["qm", "--A", "1+1i"])
    assert exc.value.code == 2


def test_degenerate_quadrilateral_reports_json(capsys):
    code, out, err = run(capsys, "qm", "--A", "2", "--B", "3")
    assert code == 1 and out == ""
    doc = json.loads(err)
    assert doc["errors"][0]["error"]


# ---------------------------------------------------------------- tables


def test_table1(capsys):
    code, out, err = run(capsys, "table1")
    table = rows(out)
    assert code == 0 and err == ""
    assert table[0] == ["A", "B", "modulus", "reference", "abs_deviation", "reciprocal_residual"]
    assert len(table) == 9
    assert table[1][:3] == ["7+5i", "-1+2i", "1.17336589158553"]
    for row in table[1:]:
        assert float(row[4]) <= 1e-9 and float(row[5]) <= 1e-10


def test_table2(capsys):
    code, out, _ = run(capsys, "table2")
    table = rows(out)
    assert code == 0 and table[0][:3] == ["m", "lambda", "capacity"]
    assert len(table) == 37
    assert all(float(r[4]) <= 1e-5 * float(r[3]) for r in table[1:])


def test_table3_without_oracle(capsys):
    code, out, _ = run(capsys, "table3", "--no-oracle")
    table = rows(out)
    assert code == 0 and "cap_x05" not in table[0]
    assert all(float(r[k]) <= 1e-9 for r in table[1:] for k in (2, 4, 6, 8))


def test_table4_row6(capsys):
    code, out, _ = run(capsys, "table4")
    table = rows(out)
    assert code == 0 and len(table) == 9
    row6 = dict(zip(table[0], table[6]))
    assert (row6["a"], row6["b"], row6["c"], row6["d"]) == ("10", "1", "0.25", "0.75")
    # the tabulated capacity and lower bound of this row are not reproduced
    assert float(row6["rel_deviation"]) > 1e-8
    assert float(row6["lower_rel_deviation"]) > 1e-2
    assert float(row6["lower_bound"]) < float(row6["capacity"])


def test_lbnew(capsys):
    code, out, _ = run(capsys, "lbnew", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 4
    assert all(r["abs_deviation"] <= 1e-9 for r in doc["rows"])


def test_csv_uses_fifteen_significant_digits(capsys):
    _, out, _ = run(capsys, "table2")
    for row in rows(out)[1:]:
        digits = row[2].replace(".", "").replace("-", "").split("e")[0].lstrip("0")
        assert len(digits) <= 15


# ---------------------------------------------------------------- sweeps


def test_sweep_edi(capsys):
    code, out, _ = run(capsys, "sweep-edi", "--family", "convex", "--count", "2", "--seed", "3",
                       "--h", "0.015625", "--levels", "1")
    table = rows(out)
    assert code == 0 and len(table) == 3
    assert table[0] == ["index", "m", "perimeter", "cap_E", "cap_E_error", "cap_D", "cap_I"]
    for row in table[1:]:
        cap_e, cap_d, cap_i = float(row[3]), float(row[5]), float(row[6])
        assert cap_i < cap_e * 1.03 and cap_e < cap_d * 1.03


@pytest.mark.parametrize("argv", [
    ["sweep-edi", "--family", "convex", "--count", "0"],
    ["sweep-edi", "--family", "square", "--count", "1"],
    ["sweep-edi", "--family", "convex", "--count", "1", "--seed", "-3"],
    ["sweep-edi", "--family", "convex", "--count", "1", "--h", "0"],
    ["sweep-edi", "--family", "convex", "--count", "1", "--levels", "4"],
    ["et-curve", "--r", "0.5", "--tmin", "nan", "--tmax", "0.1"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_et_curve_checks_range_before_solving(capsys, monkeypatch):
    from confcap import tables

    def fail(*args, **kwargs):
        raise AssertionError("solver called")

    monkeypatch.setattr(tables, "estimate_capacity", fail)
    code, out, err = run(capsys, "et-curve", "--r", "0.5", "--tmin", "0.1", "--tmax", "5")
    assert code == 1 and out == ""
    assert json.loads(err)["errors"][0]["error"] == "ConstraintError"


def test_et_curve(capsys):
    code, out, _ = run(capsys, "et-curve", "--r", "0.5", "--tmin", "0.05", "--tmax", "0.1",
                       "--steps", "2", "--h", "0.015625", "--levels", "1")
    table = rows(out)
    assert code == 0 and len(table) == 3
    assert float(table[1][0]) == 0.05 and float(table[2][0]) == 0.1


def test_polygon_in_polygon(capsys):
    code, out, _ = run(capsys, "polygon-in-polygon", "--t", "1.0", "--h", "0.2", "--levels", "1")
    table = rows(out)
    assert code == 0 and table[1][4] == "unavailable"
    assert float(table[1][3]) <= float(table[1][1]) * 1.02


# ---------------------------------------------------------------- output


def test_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CONFCAP_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "table1")
    assert code == 0 and out == ""
    assert (tmp_path / "table1.csv").read_text().startswith("A,B,modulus")
    run(capsys, "table2", "--output", "rings.csv")
    assert (tmp_path / "rings.csv").exists()
    absolute = tmp_path / "sub.json"
    (tmp_path / "x").mkdir()
    monkeypatch.setenv("CONFCAP_OUTPUT_DIR", str(tmp_path / "x"))
    run(capsys, "lbnew", "--format", "json", "--output", str(absolute))
    assert json.loads(absolute.read_text())["command"] == "lbnew"


def test_reruns_are_byte_identical(capsys):
    argv = ["sweep-edi", "--family", "nonconvex", "--count", "2", "--seed", "9",
            "--h", "0.03125", "--levels", "1"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "confcap.cli", "qm", "--A", "7+5i", "--B", "-1+2i"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "1.17336589158553\n"
