import json
import subprocess
import sys

import pytest

from foxcalc.cli import run
from foxcalc.freiheit import Presentation, dumps_presentation

F3 = [("x1", "free"), ("x2", "free"), ("x3", "free")]


@pytest.fixture
def pres(tmp_path):
    def make(rels, factors=F3):
        path = tmp_path / f"p{len(list(tmp_path.iterdir()))}.json"
        path.write_text(dumps_presentation(Presentation.from_strings(factors, rels)))
        return str(path)
    return make


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_select_report(capsys, pres):
    code, cap = out_of(capsys, ["select", pres(["x1^-1 x2^-1 x1 x2"])])
    assert code == 0 and "J = {x2, x3}" in cap.out


def test_derive(capsys):
    code, cap = out_of(capsys, ["derive", "--gen", "x", "--word", "x^-1"])
    assert code == 0 and cap.out.strip() == "-1*x^-1"


def test_fundamental_check(capsys):
    code, cap = out_of(capsys, ["fundamental-check", "--word", "x y"])
    assert code == 0 and cap.out.strip() == "defect = 0"


def test_magnus_commands(capsys):
    code, cap = out_of(capsys, ["magnus", "lcs", "--word", "x^-1 y^-1 x y"])
    assert cap.out.strip() == "lcs = 2"
    code, cap = out_of(capsys, ["magnus", "expand", "--cap", "2", "--word", "x^-1"])
    assert cap.out.strip() == "1 - 1*X_x + 1*X_x*X_x"


def test_magnus_sentinel(capsys):
    code, cap = out_of(capsys, ["magnus", "lcs", "--cap", "2", "--word", "y^-1 x^-1 y x y^-1 x^-1 y^-1 x y^2"])
    assert code == 0 and cap.out.strip() == "lcs = >=3"


def test_schreier_build(capsys):
    code, cap = out_of(capsys, ["schreier", "build", "--target", "2;x=1;y=0", "--radius", "2"])
    assert code == 0 and cap.out.splitlines() == ["(0) | 1 | alpha", "(1) | x | beta"]


def test_jacobian(capsys, pres):
    code, cap = out_of(capsys, ["jacobian", pres(["x1^-1 x2^-1 x1 x2"])])
    assert cap.out.strip() == "t2 - 1, -t1 + 1, 0"


def test_verify_none_and_counterexample(capsys, pres):
    code, cap = out_of(capsys, ["verify", pres(["x1^-1 x2^-1 x1 x2"]), "--J", "2,3", "--bounds", "2,2,6,3"])
    assert code == 0 and "result = none" in cap.out
    code, cap = out_of(capsys, ["verify", pres(["x1 x2^-1"], F3[:2]), "--J", "x1,x2", "--format", "json"])
    data = json.loads(cap.out)
    assert code == 0 and data["result"]["witness"] == "x1 x2^-1" and data["result"]["replays"]


def test_verify_bound_exit_code(capsys, pres):
    code, cap = out_of(capsys, ["verify", pres(["x1^-1 x2^-1 x1 x2"]), "--J", "2,3", "--bounds", "2,2,6,3,5"])
    assert code == 3


def test_replay(capsys, tmp_path):
    code, cap = out_of(capsys, ["replay", "--matrix", "t1 - 1, 1; t1^2 - 1, t1 + 1", "--triangularize"])
    assert code == 0 and "rank = 1" in cap.out
    log = "\n".join(cap.out.split("log:\n", 1)[1].splitlines())
    p = tmp_path / "log.txt"
    p.write_text(log)
    code, cap2 = out_of(capsys, ["replay", "--matrix", "t1 - 1, 1; t1^2 - 1, t1 + 1", "--log", str(p)])
    assert cap2.out.splitlines()[0] == cap.out.splitlines()[0]


def test_exit_codes(capsys, tmp_path):
    assert run(["nonsense"]) == 64
    assert "usage" in capsys.readouterr().out
    assert run([]) == 64
    capsys.readouterr()
    assert run(["derive", "--word", "x"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run(["select", str(bad)]) == 2
    assert run(["select", str(tmp_path / "missing.json")]) == 2
    assert run(["magnus", "lcs", "--cap", "12", "--word", "x"]) == 2


def test_reports_are_deterministic(pres):
    path = pres(["x1^-1 x2^-1 x1 x2", "x3^2 x1"])
    cmd = [sys.executable, "-m", "foxcalc", "verify", path, "--J", "2,3"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == b.returncode and a.stdout == b.stdout
