from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from deltagl.cli import main
from deltagl.padic import PadicContext
from deltagl.suites import REGISTRY, SUITES, run_check


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_legendre_scalar(capsys):
    code, out = run(["legendre", "--p", "5", "--N", "10", "--q", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["Phi1"] == "-4" and int(data["Phi1_canonical"]) == 5**10 - 4


def test_legendre_matrix(capsys):
    code, out = run(["legendre", "--p", "3", "--q", "[[0, 1], [-1, 0]]", "--sign", "-"], capsys)
    assert code == 0 and json.loads(out)["Phi1"]["n"] == 2


def test_witness(capsys):
    code, out = run(["witness", "--p", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["valuation"] == 3 and data["witness"]


def test_eval_and_solve_from_stdin(capsys, monkeypatch):
    payload = {"lift": {"kind": "chern", "q": [[0, 1], [1, 0]], "sign": "+"}, "point": [[1, 2], [3, 4]]}
    code, out = run(["eval", "--p", "5", "--in", "-"], capsys, json.dumps(payload), monkeypatch)
    data = json.loads(out)
    assert code == 0 and set(data) >= {"Phi", "Delta", "ldelta", "lift"}
    payload = {"lift": {"kind": "standard"}, "seed": [[1, 0], [0, 1]], "alpha": [[0, 1], [0, 0]]}
    code, out = run(["solve", "--p", "5", "--in", "-"], capsys, json.dumps(payload), monkeypatch)
    data = json.loads(out)
    assert code == 0 and all(data["equation_forms"].values())


def test_verify_exit_codes(capsys, tmp_path):
    code, _ = run(["verify", "--suite", "padic", "--p", "3", "--samples", "5"], capsys)
    assert code == 0
    code, out = run(["verify", "--suite", "outer", "--p", "5", "--samples", "10", "--fault", "2"], capsys)
    assert code == 1
    failing = {c["check"] for c in json.loads(out)["checks"] if not c["passed"]}
    assert {"chern_h_horizontal", "chern_b_symmetric"} <= failing
    target = tmp_path / "r.json"
    code, out = run(["verify", "--suite", "jet", "--samples", "3", "--out", str(target)], capsys)
    assert code == 0 and out == "" and json.loads(target.read_text())["passed"]


def test_verify_text_format(capsys):
    code, out = run(["verify", "--suite", "padic", "--samples", "3", "--format", "text"], capsys)
    assert code == 0 and out.strip().endswith("all passed")


def test_errors_exit_2(capsys, monkeypatch):
    bad = {"lift": {"kind": "standard"}, "point": [[1, 2], [3]]}
    code, out = run(["eval", "--in", "-"], capsys, json.dumps(bad), monkeypatch)
    assert code == 2 and json.loads(out)["error"] == "DimensionMismatch"
    code, out = run(["eval", "--in", "-"], capsys, "not json", monkeypatch)
    assert code == 2 and json.loads(out)["error"] == "InvalidInput"
    code, out = run(["legendre", "--p", "4", "--q", "2"], capsys)
    assert code == 2 and json.loads(out)["error"] == "InvalidInput"
    code, out = run(["witness", "--p", "3", "--point", "3", "0", "0", "3"], capsys)
    assert code == 2 and json.loads(out)["error"] == "NotInvertible"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "deltagl.cli", "witness", "--p", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["valuation"] == 3


@pytest.mark.parametrize("p,f,n", [(3, 1, 2), (5, 2, 2), (7, 1, 3), (3, 2, 1)])
@pytest.mark.parametrize("suite", SUITES)
def test_every_check_passes_on_small_samples(suite, p, f, n):
    ctx = PadicContext(p, f, 8)
    for name, fn in REGISTRY[suite]:
        entry = run_check(suite, name, fn, ctx, n, 10, 1)
        assert entry["passed"], entry
