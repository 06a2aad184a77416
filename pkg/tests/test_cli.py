import csv
import io
import json
import subprocess
import sys

import pytest

from higherq.cli import main
from higherq.suites import SUITES, RunConfig


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_table_qbinom(capsys):
    code, out = run_cli(capsys, "table", "qbinom", "--max-index", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["k", "k'", "qbinom"]
    assert ["2", "1", "1+q"] in rows


def test_table_hl_angle(capsys):
    code, out = run_cli(capsys, "table", "hl_angle", "--p", "2", "--m", "1", "--max-index", "4", "--format", "json")
    rows = json.loads(out)
    assert {"k": 4, "k'": 2, "value": "1+q+q^2"} in rows
    assert len(rows) == 15


def test_table_smallest_range(capsys):
    # 0 <= k' <= k <= 0 still contains the pair (0, 0)
    code, out = run_cli(capsys, "table", "hl_brace", "--max-index", "0", "--format", "csv")
    assert out.splitlines() == ["k,k',hl_brace", "0,0,1"]


def test_verify_pass(capsys):
    code, out = run_cli(capsys, "verify", "--suite", "pascal_factorial", "--format", "json")
    assert code == 0
    (rep,) = json.loads(out)
    assert set(rep) == {"suite", "cases", "passed", "failures", "millis"}
    assert rep["cases"] == rep["passed"] == 45


def test_verify_homotopy(capsys):
    code, out = run_cli(capsys, "verify", "--suite", "homotopy_identity", "--p", "2", "--m", "1", "--d", "1")
    assert code == 0
    assert out.startswith("PASS homotopy_identity")


def test_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonexistent"])
    assert exc.value.code == 2


def test_bad_prime(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--p", "6"])
    assert exc.value.code == 2


def test_failing_suite_exit_status(capsys, monkeypatch):
    from higherq import suites
    from higherq.report import Report

    def broken(cfg):
        rep = Report("pascal_factorial")
        rep.check(False, {"k": 0}, "1", "2")
        return rep.finish()

    monkeypatch.setitem(suites.SUITES, "pascal_factorial", broken)
    code, out = run_cli(capsys, "verify", "--suite", "pascal_factorial", "--format", "text")
    assert code == 1
    assert out.startswith("FAIL pascal_factorial: 0/1")


def test_json_is_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["verify", "--suite", "poincare", "--suite", "stratification", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert [r["suite"] for r in json.loads(outs[0])] == ["poincare", "stratification"]


def test_unwritable_output(capsys, tmp_path):
    code = main(["table", "qbinom", "--out", str(tmp_path / "missing" / "t.csv")])
    assert code == 3


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(suites=("nope",))
    with pytest.raises(ValueError):
        RunConfig(p=9)
    assert RunConfig().ctx.pm == 2


def test_every_suite_passes_by_default():
    from higherq.suites import run
    reports = run(RunConfig())
    assert [r.suite for r in reports] == list(SUITES)
    assert all(r.ok for r in reports), [r.failures[:2] for r in reports if not r.ok]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "higherq", "table", "qbinom", "--max-index", "1"],
                         capture_output=True, text=True, check=True)
    assert "k'" in res.stdout.splitlines()[0]
