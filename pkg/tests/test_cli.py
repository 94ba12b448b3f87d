import json
import math
from pathlib import Path

import pytest

from herglotz_lab.cli import main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(tmp_path, scenario, name="s", extra=()):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(scenario))
    out = tmp_path / "out"
    code = main(["run", str(path), "--out", str(out), *extra])
    return code, out


def test_tan_classify_rows(tmp_path):
    code, out = run(tmp_path, {"function": {"kind": "catalog", "name": "tan"}, "op": "classify",
                               "grid": {"linspace": [-5, 5, 101]}}, "tan")
    assert code == 0
    rows = (out / "tan.csv").read_text().splitlines()
    pp = [float(r.split(",")[0]) for r in rows[1:] if "PP(1)" in r]
    expected = [-1.5 * math.pi, -0.5 * math.pi, 0.5 * math.pi, 1.5 * math.pi]
    assert len(pp) == 4 and all(abs(a - b) < 1e-12 for a, b in zip(pp, expected))


def test_krein_scenario(tmp_path):
    code, out = run(tmp_path, {"function": {"kind": "catalog", "name": "kreinB_M1"}, "op": "krein",
                               "alpha2": "atan(1)"}, "k")
    assert code == 0
    doc = json.loads((out / "k.json").read_text())
    assert doc["result"]["max_deviation_closed_form_M2"] < 1e-10


def test_unknown_op_exit_code(tmp_path):
    code, _ = run(tmp_path, {"function": {"kind": "catalog", "name": "tan"}, "op": "frobnicate"})
    assert code == 2


def test_invalid_json_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", str(path), "--out", str(tmp_path)]) == 2


def test_precondition_exit_code(tmp_path):
    code, _ = run(tmp_path, {"function": {"kind": "catalog", "name": "affine"}, "op": "extension",
                             "rank_one": {"alpha": 0, "beta": 1}})
    assert code == 4


def test_unknown_tolerance(tmp_path):
    code, _ = run(tmp_path, {"function": {"kind": "catalog", "name": "tan"}, "op": "eval"},
                  extra=["--tol-override", "nope=1"])
    assert code == 2


def test_tolerance_override_accepted(tmp_path):
    code, _ = run(tmp_path, {"function": {"kind": "catalog", "name": "tan"}, "op": "eval"},
                  extra=["--tol-override", "psd_tol=1e-10"])
    assert code == 0


@pytest.mark.parametrize("scenario", sorted(p.name for p in SCENARIOS.glob("*.json") if p.name != "bad_op.json"))
def test_bundled_scenarios_are_deterministic(tmp_path, scenario):
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["run", str(SCENARIOS / scenario), "--out", str(out)]) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1]
    for name, data in outs[0].items():
        assert b"\r\n" not in data


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    assert "kreinB_M1" in capsys.readouterr().out


def test_selftest_filter(capsys):
    assert main(["selftest", "--filter", "krein_example"]) == 0
    assert "PASS  krein_example" in capsys.readouterr().out


def test_selftest_unknown_filter():
    assert main(["selftest", "--filter", "no_such_check"]) == 2
