import csv
import json
import subprocess
import sys

import pytest

from stoptime.cli import run
from stoptime.model import load_model

TWO_STATE = {"kind": "Chain", "matrix": [["1/2", "1/2"], ["1/2", "1/2"]], "initial": ["1", "0"], "weights": ["1", "-1"]}


@pytest.fixture
def two_state(tmp_path):
    p = tmp_path / "two-state.json"
    p.write_text(json.dumps(TWO_STATE))
    return str(p)


def out_json(tmp_path, argv, name="out.json"):
    path = tmp_path / name
    assert run(argv + ["--out", str(path)]) == 0
    return json.loads(path.read_text())


def test_value_on_two_state_chain(tmp_path, two_state):
    res = out_json(tmp_path, ["value", "--model", two_state, "--T", "5", "--eps", "1e-6"])
    assert res["estimate"] == {"decimal": 1.0, "rational": "1"}
    assert res["method"] == "Approximation"
    assert res["lower"]["rational"] == "999999/1000000"


def test_sequence_export(tmp_path, two_state):
    csv_path = tmp_path / "u.csv"
    assert run(["value", "--model", two_state, "--T", "2", "--emit-sequence", str(csv_path),
                "--sequence-length", "6", "--out", str(tmp_path / "v.json")]) == 0
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["t", "u_exact", "u_prime"]
    assert [r[1] for r in rows[1:]] == ["1"] * 7


def test_analyze(tmp_path, two_state):
    res = out_json(tmp_path, ["analyze", "--model", two_state])
    assert res["d"] == 1 and res["transient"] == []
    assert res["classes"][0]["pi"] == ["1/2", "1/2"]
    assert res["asymptote"]["intercepts"][0]["rational"] == "1"


def test_reduce_then_decide_all_ones(tmp_path):
    src = tmp_path / "agt.json"
    src.write_text(json.dumps({"matrix": [["1/2", "1/2", "0"], ["0", "1/2", "1/2"], ["1/2", "0", "1/2"]], "z": [1, 1, 1]}))
    red = tmp_path / "exact.json"
    assert run(["reduce", "agt-to-exact", str(src), str(red)]) == 0
    meta = json.loads(red.read_text())
    res = out_json(tmp_path, ["decide", "--model", str(red), "--T", meta["T"], "--theta", meta["theta"]])
    assert res["answer"] == "No"


def test_decide_unknown_writes_residual(tmp_path):
    model = {"matrix": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, "1/2", "1/2"], [0, 0, 0, 1]],
             "initial": [1, 0, 0, 0], "weights": [0, 1, "-1/2", 0]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    resid = tmp_path / "resid.json"
    res = out_json(tmp_path, ["decide", "--model", str(path), "--T", "1", "--theta", "0",
                              "--horizon", "100", "--residual", str(resid)])
    assert res["answer"] == "Unknown" and res["residual_path"] == str(resid)
    back = json.loads(resid.read_text())
    assert len(back["matrix"]) == 8 and set(back["z"]) <= {0, 1, 2}
    load_model(str(resid))


def test_reach_to_positivity(tmp_path):
    src = tmp_path / "mr.json"
    src.write_text(json.dumps({"matrix": [[0, 1], [1, 0]], "r": "1/2"}))
    dst = tmp_path / "pos.json"
    assert run(["reduce", "mr-to-pos", str(src), str(dst)]) == 0
    d = json.loads(dst.read_text())
    assert d["target"] == [3, 5] and len(d["matrix"]) == 5


@pytest.mark.parametrize("what, kind", [("slow", "Chain"), ("memory", "Mdp"), ("components", "Mdp"), ("random", "Chain")])
def test_generated_models_round_trip(tmp_path, what, kind):
    path = tmp_path / f"{what}.json"
    assert run(["gen", what, "--out", str(path)]) == 0
    model = load_model(str(path), kind)
    again = tmp_path / "again.json"
    assert run(["gen", what, "--out", str(again)]) == 0
    assert path.read_bytes() == again.read_bytes()
    if kind == "Chain":
        assert run(["analyze", "--model", str(path), "--out", str(tmp_path / "a.json")]) == 0
    else:
        assert run(["mdp", "mec", "--model", str(path), "--out", str(tmp_path / "a.json")]) == 0
    assert model is not None


def test_mdp_subcommands(tmp_path):
    path = tmp_path / "components.json"
    assert run(["gen", "components", "--out", str(path)]) == 0
    mp = out_json(tmp_path, ["mdp", "mp", "--model", str(path)])
    assert mp["initial_value"]["rational"] == "0"
    mec = out_json(tmp_path, ["mdp", "mec", "--model", str(path)])
    assert [m["vertices"] for m in mec["mecs"]] == [["v0"], ["v1", "v2"], ["v3"]]
    etr = tmp_path / "f.smt2"
    assert run(["mdp", "etr", "--model", str(path), "--T", "2", "--horizon", "3", "--tau", "0", "--out", str(etr)]) == 0
    assert etr.read_text().startswith("(set-logic QF_NRA)")


def test_identical_runs_are_byte_identical(tmp_path):
    path = tmp_path / "memory.json"
    assert run(["gen", "memory", "--horizon", "8", "--out", str(path)]) == 0
    argv = ["mdp", "value", "--model", str(path), "--T", "2", "--eps", "0.1", "--t-cap", "4",
            "--restarts", "2", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(argv + ["--out", str(a), "--strategy-out", str(tmp_path / "sa.json")]) == 0
    assert run(argv + ["--out", str(b), "--strategy-out", str(tmp_path / "sb.json")]) == 0
    strip = lambda p: {k: v for k, v in json.loads(p.read_text()).items() if k != "strategy_path"}
    assert strip(a) == strip(b)
    assert (tmp_path / "sa.json").read_bytes() == (tmp_path / "sb.json").read_bytes()


def test_usage_errors_exit_1(two_state):
    assert run([]) == 1
    assert run(["value", "--model", two_state]) == 1
    assert run(["frobnicate"]) == 1
    assert run(["value", "--model", two_state, "--T", "1", "--eps", "0"]) == 1


def test_bad_input_exits_2(tmp_path):
    assert run(["analyze", "--model", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"matrix": [["1/2", "1/3"], ["1/2", "1/2"]], "initial": [1, 0], "weights": [0, 0]}))
    assert run(["analyze", "--model", str(bad)]) == 2
    bad.write_text("{oops")
    assert run(["analyze", "--model", str(bad)]) == 2


def test_step_cap_exits_3(tmp_path, monkeypatch):
    path = tmp_path / "slow.json"
    assert run(["gen", "slow", "--out", str(path)]) == 0
    d = json.loads(path.read_text())
    d["weights"] = ["0", "0", "0", "1", "5", "-5"]
    path.write_text(json.dumps(d))
    monkeypatch.setenv("STOPTIME_STEP_CAP", "2")
    assert run(["value", "--model", str(path), "--T", "3", "--eps", "1e-6"]) == 3


def test_module_entry_point(two_state):
    proc = subprocess.run([sys.executable, "-m", "stoptime", "value", "--model", two_state, "--T", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["estimate"]["rational"] == "1"
