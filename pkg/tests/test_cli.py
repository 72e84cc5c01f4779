import io
import json
import subprocess
import sys

import pytest

from poissoninv import cli
from poissoninv.cases import case_text, load_bundle


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def case_file(tmp_path):
    def make(n, text=None):
        p = tmp_path / f"case{n}.txt"
        p.write_text(text if text is not None else case_text(n))
        return str(p)

    return make


def test_verify_case1(case_file):
    code, out = run(["verify", case_file(1)])
    assert code == cli.EXIT_OK
    assert "jacobi: pass" in out and "unimodular: true" in out and "omega: x1^3" in out


def test_verify_zero_structure(tmp_path):
    p = tmp_path / "zero.txt"
    p.write_text("[structure]\nbracket.12 = 0\nbracket.23 = 0\nbracket.31 = 0\n")
    code, out = run(["verify", str(p)])
    assert code == cli.EXIT_OK
    assert "omega: 0" in out


def test_verify_jacobi_failure(case_file, capsys):
    text = case_text(1).replace("bracket.12 = 0", "bracket.12 = x_2^2", 1)
    code, out = run(["verify", case_file(1, text)])
    assert code == cli.EXIT_MATH
    assert "jacobi: fail" in out and "witness: (1, 2, 3)" in out


def test_parse_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("[structure]\nbracket.12 = x_1 +* x_2\n")
    code, _ = run(["verify", str(p)])
    assert code == cli.EXIT_PARSE
    assert "parse error" in capsys.readouterr().err
    code, _ = run(["verify", str(tmp_path / "missing.txt")])
    assert code == cli.EXIT_PARSE


def test_reflections_case9(case_file):
    code, out = run(["reflections", case_file(9)])
    assert code == cli.EXIT_OK
    assert out.strip().endswith("result: no reflections (triple eigenvalue)")


def test_reflections_literal_with_param(case_file):
    code, out = run(["reflections", case_file(1), "[-1, 0, 0; a, 1, 0; 3, 0, 1]", "--param", "a=2"])
    assert code == cli.EXIT_OK
    assert "m1: reflection, xi = -1, order 2" in out and "result: 1 reflection" in out


def test_reflections_matrix_file(case_file, tmp_path):
    m = tmp_path / "mats.txt"
    m.write_text("[matrix r]\nvalue = [1, 0, 0; 0, zeta(3), 0; 0, 5, 1]\n[matrix s]\nvalue = [1, 0, 0; 0, 1, 0; 0, 0, 1]\n")
    code, out = run(["reflections", case_file(2), str(m)])
    assert "r: reflection, xi = zeta(3), order 3" in out
    assert "s: not a reflection (identity)" in out


def test_molien_and_invariants(case_file):
    code, out = run(["molien", case_file(4), "--group", "s3"])
    assert code == 0 and "order: 6" in out and "molien: 1/((1-t)*(1-t^2)*(1-t^3))" in out
    code, out = run(["invariants", case_file(1), "--group", "z2"])
    assert code == 0 and "table: (0, 3*y1, 0)" in out and "substitution check: true" in out


def test_closure_cap_exit(case_file):
    code, _ = run(["molien", case_file(4), "--group", "s3", "--closure-cap", "3"])
    assert code == cli.EXIT_CAP


def test_env_commands(case_file):
    code, out = run(["env", "nf", case_file(3), "y2 y1"])
    assert out == "normal form: -2*x1*y2 - 2*x2*y1 + y1*y2\n"
    code, out = run(["env", "check", case_file(5), "--dmax", "3"])
    assert code == 0 and "normal monomial counts: 1, 6, 21, 56" in out
    code, out = run(["env", "trace", case_file(1), "[-1, 0, 0; 2, 1, 0; 3, 0, 1]", "--dmax", "3"])
    assert code == 0 and "m1 brute force agrees: true" in out
    code, out = run(["env", "hdet", case_file(1), "[-1, 0, 0; 2, 1, 0; 3, 0, 1]"])
    assert out == "m1 hdet: 1\n"
    code, out = run(["env", "invdims", case_file(8), "--dmax", "2"])
    assert code == 0 and "dims: 1, 4, 13" in out


def test_env_hdet_infinite_order(case_file):
    code, _ = run(["env", "hdet", case_file(1), "[1, 0, 0; 0, 1, 0; 1, 0, 1]"])
    assert code == cli.EXIT_MATH


def test_case_report_and_json():
    code, out = run(["case-report", "5"])
    assert code == cli.EXIT_OK and "[mismatch" not in out
    code, out = run(["case-report", "5", "--json"])
    data = json.loads(out)
    assert code == 0 and all(set(item) == {"key", "value"} for item in data)


def test_case_report_mismatch_exit(monkeypatch):
    text = case_text(8).replace("expect.order = 2\nsource.order = literature\nexpect.molien", "expect.order = 3\nsource.order = literature\nexpect.molien")
    monkeypatch.setattr(cli, "load_case", lambda k: load_bundle(text, 8))
    code, out = run(["case-report", "8", "--dmax", "2"])
    assert code == cli.EXIT_MISMATCH
    assert "[mismatch, expected 3]" in out


def test_output_is_byte_identical(case_file):
    f = case_file(4)
    assert run(["invariants", f, "--group", "g2"]) == run(["invariants", f, "--group", "g2"])
    assert run(["case-report", "2", "--dmax", "2"]) == run(["case-report", "2", "--dmax", "2"])


def test_console_script(case_file):
    proc = subprocess.run(
        [sys.executable, "-m", "poissoninv.cli", "verify", case_file(3)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "jacobi: pass" in proc.stdout
