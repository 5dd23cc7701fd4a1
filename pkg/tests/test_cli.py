import subprocess
import sys
from pathlib import Path

import pytest

from dilogint.expr.cli import main

FIX = Path(__file__).parent / "fixtures"
TARGET = ("-(1-z-z^2)^(-1)*(-1-2*z)*log(1+z)+log(z*(1-z)*(1-z-z^2))/z"
        "+(2*z^3+3*z^2)/(1+z)^2")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def structured(out: str) -> dict:
    return dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "dilog(exp(x))")
    assert code == 0 and out.strip() == "-log(1-exp(x))"


def test_derive_structured(capsys):
    code, out, _ = run(capsys, "--format", "structured", "derive", "log(x)^2")
    assert code == 0 and structured(out)["derivative"] == "2*log(x)/x"


@pytest.mark.parametrize("datum", ["two_term.datum", "two_term_inferred.datum"])
def test_check_del_accepts(capsys, datum):
    code, out, _ = run(capsys, "--var", "z", "--format", "structured", "check-del",
                       "--target", TARGET, "--datum", FIX / datum)
    kv = structured(out)
    assert code == 0 and kv["result"] == "accept"
    assert kv["constants.c.1"] == "-1" and kv["constants.c_matrix.2.2"] == "1"


def test_check_del_rejects(capsys):
    code, out, err = run(capsys, "check-del", "--target", "1", "--datum", FIX / "reject.datum")
    assert code == 1 and out.strip() == "reject" and "r_1'" in err


def test_parse_error_has_position(capsys):
    code, _, err = run(capsys, "check-del", "--target", "1", "--datum", FIX / "bad.datum")
    assert code == 2 and "1:" in err


@pytest.mark.parametrize("argv", [
    ["derive", "x^(1/2)"],
    ["derive", "log(0)"],
    ["frobnicate"],
    ["obstruct", "--h", "Y", "--bounds", "0,1"],
    ["integrate", "--datum", "/nonexistent/file"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_integrate(capsys):
    code, out, _ = run(capsys, "--var", "z", "--format", "structured", "integrate",
                       "--datum", FIX / "two_term.datum")
    assert code == 0 and structured(out)["verified"] == "true"


def test_reduce_dilog(capsys):
    code, out, _ = run(capsys, "--format", "structured", "reduce-dilog", "1/log(x)")
    kv = structured(out)
    assert code == 0 and kv["residual"] == "0" and kv["shape.xi"] == "1"


def test_invert_dilog_negative_alpha(capsys):
    code, out, _ = run(capsys, "invert-dilog", "--alpha", "-1", "--beta", "2")
    assert code == 0 and out.splitlines()[-1].startswith("d = ")


def test_verify_log_identity(capsys):
    code, out, _ = run(capsys, "verify-log-identity", "--shape", FIX / "shape_x2x.shape")
    assert code == 0
    assert out.splitlines() == ["identity (i): residual 0", "identity (ii): residual 0"]


def test_obstruct(capsys):
    code, out, _ = run(capsys, "--format", "structured", "obstruct", "--h", "1/Y")
    kv = structured(out)
    assert code == 1 and kv["result"] == "inconsistent" and kv["replays"] == "true"
    code, out, _ = run(capsys, "obstruct", "--h", "Y")
    assert code == 0 and "antiderivative" in out


def test_probe_exit_code(capsys):
    code, out, _ = run(capsys, "probe-independence", "--alphas", "0,1,2", "--bounds", "1,1")
    assert code in (0, 1)
    assert ("no relation" in out) == (code == 1)


def test_root_table_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("DILOG_ROOTS", str(FIX / "roots.txt"))
    code, out, _ = run(capsys, "--format", "structured", "reduce-dilog",
                       "(log(x)-1)^2/(log(x)^2-2*log(x))")
    assert code == 0 and structured(out)["residual"] == "0"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dilogint", "derive", "x^2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "2*x"
