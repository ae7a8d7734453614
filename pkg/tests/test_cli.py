import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gcl.cli import main
from gcl.fuzz import Instance, fuzz_instances

REF = ["--forms", "[[2,-1],[-1,1]]"]


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def checks(rep):
    return {c["name"]: c for c in rep["checks"]}


def test_dual_basis(capsys):
    code, rep = run(capsys, "dual-basis", *REF)
    assert code == 0 and rep["ok"]


def test_relation_and_well_placed(capsys):
    forms = "[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,1,1,0]]"
    code, rep = run(capsys, "relation", "--forms", forms)
    assert code == 0
    assert "-1" in json.dumps(rep)
    code, rep = run(capsys, "well-placed", "--forms", forms)
    assert code == 0 and rep["ok"]


def test_bernoulli(capsys):
    code, rep = run(capsys, "bernoulli", *REF, "--w", "1/3", "--x", '["1","2/5"]')
    assert code == 0 and rep["ok"]


def test_smoothed_bernoulli(capsys):
    code, rep = run(capsys, "smoothed-bernoulli", *REF, "--N", "2")
    c = checks(rep)
    assert code == 0
    assert c["value"]["value"] == {"value": "1/4", "b": 1, "D": 4, "good": True}


def test_trace_formula(capsys):
    code, rep = run(capsys, "trace-formula", *REF, "--N", "2")
    assert code == 0 and rep["ok"] and "1/4" in json.dumps(rep)


def test_dedekind_commands(capsys):
    code, rep = run(capsys, "dedekind", "3", "1")
    assert code == 0 and "1/18" in json.dumps(rep)
    code, rep = run(capsys, "phi-dr", "1", "0", "0", "1")
    assert code == 0
    code, rep = run(capsys, "p2n", "2", "1", "0", "2", "1")
    assert code == 0 and rep["ok"]


def test_sign_table(capsys):
    code, rep = run(capsys, "sign-table", "--forms", "[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,1,1,0]]",
                    "--x", '["2j","3j","5j","-1"]')
    assert code == 0 and rep["ok"]


def test_verify_modes(capsys):
    code, rep = run(capsys, "verify", "modular", *REF, "--samples", "2")
    assert code == 0 and rep["ok"]
    code, rep = run(capsys, "verify", "main", *REF, "--N", "2", "--samples", "2")
    assert code == 0 and rep["ok"]
    code, rep = run(capsys, "verify", "main", "--forms", "[[1,0],[0,1]]", "--N", "2")
    assert code == 0 and {c["status"] for c in rep["checks"]} == {"skipped"}
    code, rep = run(capsys, "verify", "rank-deficient",
                    "--forms", "[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,1,1,0]]")
    assert code == 0 and rep["ok"]
    code, rep = run(capsys, "verify", "rank-deficient")
    assert code == 0 and rep["ok"] and "f vanishing" in checks(rep)


def test_verify_all_subset(capsys):
    code, rep = run(capsys, "verify", "all", "--only", "8")
    assert code == 0 and list(checks(rep)) == ["criterion 8"]


def test_cocycle(capsys, tmp_path):
    mats = tmp_path / "m.json"
    mats.write_text(json.dumps([[[0, 0, 1], [1, 0, 1], [0, 1, 0]],
                                [[0, 1, -1], [0, 0, 1], [1, 0, 0]],
                                [[0, 0, 1], [1, 0, 1], [0, 1, 0]]]))
    code, rep = run(capsys, "cocycle", "--base-form", "[1,1,0]", "--matrices", str(mats),
                    "--v", '["1/3","0","1/2"]', "--w", "1/3", "--x", '["1","2/7","-3/5"]')
    assert code == 0
    mats.write_text(json.dumps([[[1, 1], [0, 1]]]))
    code, rep = run(capsys, "cocycle", "--base-form", "[0,1]", "--matrices", str(mats),
                    "--v", '["1/3","1/5"]')
    assert code == 0 and rep["ok"]


def test_usage_errors(capsys):
    assert main(["dual-basis"]) == 2
    assert main(["smoothed-bernoulli", *REF]) == 2
    assert main(["dedekind", "0", "1"]) == 2
    assert main(["phi-dr", "1", "1", "1", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_fuzz_is_deterministic(capsys, tmp_path):
    out = tmp_path / "inst.jsonl"
    code, a = run(capsys, "fuzz", "--seed", "42", "--count", "15", "--out", str(out))
    _, b = run(capsys, "fuzz", "--seed", "42", "--count", "15")
    assert code == 0 and a == b
    lines = out.read_text().splitlines()
    assert len(lines) == 15
    inst = Instance.from_json(json.loads(lines[0]))
    assert inst.seed == 42


def test_instance_file(capsys, tmp_path):
    p = tmp_path / "ref.json"
    p.write_text(json.dumps({"n": 2, "forms": [[2, -1], [-1, 1]], "v": ["0", "0"], "N": 2}))
    code, rep = run(capsys, "smoothed-bernoulli", "--instance", str(p))
    assert code == 0 and checks(rep)["value"]["value"]["b"] == 1


def test_instance_json_roundtrip():
    for profile in ("full-rank-good", "rank-deficient-well-placed",
                    "barycenter-counterexample", "cocycle-generic"):
        for inst in fuzz_instances(3, 5, profile):
            inst.w = [0.5 + 0.25j]
            inst.x = [[1j, 2 + 1j, 3][:inst.n] + [1] * max(0, inst.n - 3)]
            back = Instance.from_json(json.loads(json.dumps(inst.to_json())))
            assert back == inst
    assert Instance.from_json({"forms": [[1, 2]], "v": ["1/2", "3"]}).v == [Fraction(1, 2), 3]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gcl", "dedekind", "5", "2"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and "pass" in out.stdout
