import json
import subprocess
import sys

import pytest

from toric_hodge.cli import main, parse_text
from toric_hodge.errors import IndexOutOfRange, ParseError


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_example1(data_dir):
    from toric_hodge.cli import parse_input
    data = parse_input(str(data_dir / "example1.poly"))
    assert data.n == 5 and len(data.columns) == 6
    assert data.parts == [[1, 3, 5], [2, 4, 6]]
    assert data.columns[0] == (0, 0, 0, 0, 1)


def test_parse_matrix_only():
    data = parse_text("2 3\n1 0 -1\n0 1 -1\n")
    assert data.parts is None and data.columns == [(1, 0), (0, 1), (-1, -1)]


@pytest.mark.parametrize("text, line, column", [
    ("2 3\n1 0 -1\n0 1\n", 3, 4),
    ("2 3\n1 0 -1\n0 x -1\n", 3, 3),
    ("# c\n2 3\n1 0 -1\n", 3, 7),
    ("2\n", 1, 1),
    ("2 3\n1 0 -1\n0 1 -1\nnef 2 : 1 2\n", 4, 5),
    ("2 3\n1 0 -1\n0 1 -1\nfoo 1 : 1 2 3\n", 4, 1),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_text(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        parse_text("2 3\n1 0 -1\n0 1 -1\nnef 2 : 1 2 ; 4\n")


def test_ci_example1_text(capsys, data_dir):
    code, out, _ = run(capsys, "ci", str(data_dir / "example1.poly"), "--cross-check", "--threads", "1")
    assert code == 0
    lines = out.splitlines()
    assert "h11: 8 - 7 - 0 + 0 + 0 - 0 - 0 + 0 = 1" in lines
    assert "h21: 98 - 7 - 30 + 0 + 0 - 0 - 0 + 0 = 61" in lines
    assert "cross-check: ok" in lines


def test_hyper_quintic_json(capsys, data_dir):
    code, out, _ = run(capsys, "hyper", str(data_dir / "quintic.poly"), "--json")
    assert code == 0
    report = json.loads(out)
    assert (report["h11"], report["h21"], report["n"], report["r"]) == (1, 101, 4, 1)
    assert set(report) == {"n", "r", "h11", "h21", "diamond", "e_coeffs", "h11_terms",
                           "h21_terms", "checks"}
    assert report["checks"] == {"cross_check": True, "relations": None}
    assert [0, 0, 1] in report["e_coeffs"]


def test_json_schema_and_timings(capsys, data_dir):
    code, out, _ = run(capsys, "ci", str(data_dir / "example4.poly"), "--json", "--relations",
                       "--timings", "--threads", "1")
    report = json.loads(out)
    assert code == 0 and report["checks"]["relations"] is True
    assert [t["value"] for t in report["h21_terms"]] == [83, -7, -27, 0, 10, 0, -1, 0]
    assert report["diamond"][1][1] == 2 and "timings" in report


def test_ample_flag(capsys, data_dir):
    code, out, _ = run(capsys, "ci", str(data_dir / "two_cubics.poly"), "--ample")
    assert code == 0
    assert "ample h21: 110 - 7 - 30 + 0 = 73" in out.splitlines()


def test_exit_codes(capsys, data_dir, tmp_path):
    code, _, err = run(capsys, "ci", str(data_dir / "decomposable.poly"), "--mode", "indecomposable")
    assert code == 3 and "Decomposable" in err
    code, _, _ = run(capsys, "ci", str(data_dir / "decomposable.poly"), "--relations")
    assert code == 3
    bad = tmp_path / "bad.poly"
    bad.write_text("2 3\n1 0\n")
    assert run(capsys, "hyper", str(bad))[0] == 2
    assert run(capsys, "hyper", str(tmp_path / "missing.poly"))[0] == 2
    # hypersurface mode needs a four-dimensional polytope
    assert run(capsys, "hyper", str(data_dir / "example1.poly"))[0] == 3
    # ci needs a nef line
    assert run(capsys, "ci", str(data_dir / "quintic.poly"))[0] == 3


def test_consistency_exit_code(capsys, data_dir, monkeypatch):
    import toric_hodge.cli as cli
    from toric_hodge.stringy import TermBreakdown, Term

    monkeypatch.setattr(cli, "h21_ci", lambda cp, mode: TermBreakdown([Term("x", 1, 5)]))
    code, _, err = run(capsys, "ci", str(data_dir / "example1.poly"), "--cross-check",
                       "--threads", "1")
    assert code == 4 and "E-function" in err


def test_console_script_entry(data_dir):
    out = subprocess.run([sys.executable, "-m", "toric_hodge.cli", "hyper",
                          str(data_dir / "cube4.poly")], capture_output=True, text=True)
    assert out.returncode == 0
    assert "h11: 81 - 5 - 8 + 0 = 68" in out.stdout
