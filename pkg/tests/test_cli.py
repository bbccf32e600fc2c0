import io
import json
import subprocess
import sys

import pytest

from anseq.cli import main
from anseq.witnesses import gen_example1, gen_swap_network


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def swap_file(tmp_path):
    p = tmp_path / "swap.json"
    p.write_text(gen_swap_network(2, 2).to_json())
    return str(p)


@pytest.fixture
def ex1_file(tmp_path):
    p = tmp_path / "ex1.json"
    p.write_text(gen_example1().h.to_json())
    return str(p)


def test_kappa(capsys, monkeypatch, swap_file):
    code, out, _ = run(capsys, monkeypatch, ["kappa", "--an", swap_file, "--order", "1,2"])
    assert code == 0
    assert json.loads(out) == {"kappa": 1, "chi": 2, "schedule": [1, 2]}


def test_kappa_from_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["kappa"], stdin=gen_swap_network(4, 2).to_json())
    assert code == 0 and json.loads(out)["kappa"] == 2


def test_kappa_min(capsys, monkeypatch, ex1_file):
    code, out, _ = run(capsys, monkeypatch, ["kappa-min", "--an", ex1_file, "--workers", "1"])
    res = json.loads(out)
    assert code == 0 and res["kappa"] == 1 and len(res["schedule"]) == 6


def test_chromatic_and_confusion(capsys, monkeypatch, swap_file):
    code, out, _ = run(capsys, monkeypatch, ["chromatic", "--an", swap_file])
    res = json.loads(out)
    assert code == 0 and res["chi"] == 2 and len(res["coloring"]) == 4
    code, out, _ = run(capsys, monkeypatch, ["confusion", "--an", swap_file])
    res = json.loads(out)
    assert res["edges"] == [[0, 1], [2, 3]]
    assert res["labels"] == ["00", "10", "01", "11"]


def test_dot_and_text(capsys, monkeypatch, swap_file):
    code, out, _ = run(capsys, monkeypatch, ["confusion", "--an", swap_file, "--format", "dot"])
    assert code == 0 and out.startswith("graph")
    code, out, _ = run(capsys, monkeypatch, ["kappa", "--an", swap_file, "--format", "text"])
    assert "kappa: 1" in out.splitlines()
    code, _, err = run(capsys, monkeypatch, ["synthesize", "--an", swap_file, "--format", "dot"])
    assert code == 2 and "no DOT output" in err


def test_synthesize_then_verify(capsys, monkeypatch, swap_file, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["synthesize", "--an", swap_file])
    cert = json.loads(out)
    assert code == 0 and cert["k"] == 1
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out, _ = run(capsys, monkeypatch, ["verify", "--cert", str(path)])
    assert code == 0 and json.loads(out) == {"valid": True, "k": 1, "m": 3, "w": [3, 1, 2]}
    cert["f"]["table"][1] = [0, 0, 0]
    path.write_text(json.dumps(cert))
    code, out, _ = run(capsys, monkeypatch, ["verify", "--cert", str(path)])
    assert code == 1 and json.loads(out)["valid"] is False
    cert["f"]["table"][1] = 0
    path.write_text(json.dumps(cert))
    code, _, err = run(capsys, monkeypatch, ["verify", "--cert", str(path)])
    assert code == 2 and "rows" in err


def test_gen(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["gen", "swap", "--n", "3"])
    assert code == 0 and json.loads(out)["n"] == 3
    code, out, _ = run(capsys, monkeypatch, ["gen", "example1", "--part", "g", "--certificate"])
    assert json.loads(out)["k"] == 1
    code, out, _ = run(capsys, monkeypatch, ["gen", "example1", "--part", "f"])
    assert json.loads(out)["n"] == 9
    code, out, _ = run(capsys, monkeypatch, ["gen", "lowerbound", "--family", "km2", "--k", "1"])
    assert json.loads(out)["n"] == 3
    code, out, _ = run(capsys, monkeypatch, ["gen", "lowerbound", "--family", "kms", "--k", "1", "--q", "4"])
    assert json.loads(out)["n"] == 3
    code, _, err = run(capsys, monkeypatch, ["gen", "lowerbound", "--family", "kms", "--k", "1"])
    assert code == 2


def test_procedural(capsys, monkeypatch, swap_file, ex1_file):
    code, out, _ = run(capsys, monkeypatch, ["procedural", "--an", swap_file, "--search"])
    res = json.loads(out)
    assert code == 0 and res["L_star"] == 3 and res["search"] == {"m": 3, "t_max": 8, "length": 3}
    code, _, err = run(capsys, monkeypatch, ["procedural", "--an", ex1_file, "--search"])
    assert code == 3 and "resource limit" in err


def test_pathwidth_bound(capsys, monkeypatch, ex1_file, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["pathwidth-bound", "--an", ex1_file])
    res = json.loads(out)
    assert code == 0 and res["pathwidth_bound"] == 1 and res["certificate_extra"] == 1
    pd = tmp_path / "pd.json"
    pd.write_text(json.dumps({"bags": [[1, 2, 3, 4, 5, 6]]}))
    code, out, _ = run(capsys, monkeypatch, ["pathwidth-bound", "--an", ex1_file, "--pd", str(pd)])
    assert json.loads(out)["certificate_extra"] == 5
    pd.write_text(json.dumps({"bags": [[1, 2, 3]]}))
    code, _, _ = run(capsys, monkeypatch, ["pathwidth-bound", "--an", ex1_file, "--pd", str(pd)])
    assert code == 2


def test_t_search(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["t-search", "--n", "2", "--q", "2", "--symmetry"])
    res = json.loads(out)
    assert code == 0 and res["complete"] and res["defined"] is False
    ckpt = str(tmp_path / "c.bin")
    code, out, _ = run(capsys, monkeypatch, ["t-search", "--n", "2", "--q", "2", "--checkpoint", ckpt, "--stop-after", "50"])
    assert json.loads(out)["complete"] is False
    code, out, _ = run(capsys, monkeypatch, ["t-search", "--n", "2", "--q", "2", "--resume", ckpt])
    assert json.loads(out)["swept"] == 256


def test_repro(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, ["repro", "t22-undefined"])
    assert code == 0 and json.loads(out)["passed"]
    assert "[PASS] 10 t22-undefined" in err
    code, _, err = run(capsys, monkeypatch, ["repro", "nope"])
    assert code == 2 and "unknown criterion" in err


def test_report_wrapper(capsys, monkeypatch, swap_file):
    code, out, _ = run(capsys, monkeypatch, ["kappa", "--an", swap_file, "--report"])
    res = json.loads(out)
    assert set(res) == {"command", "inputs_digest", "results", "wall_time", "guards"}
    assert res["command"] == "kappa" and len(res["inputs_digest"]) == 64
    assert res["results"]["kappa"] == 1


def test_input_errors(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, monkeypatch, ["kappa", "--an", str(tmp_path / "missing.json")])
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, monkeypatch, ["kappa", "--an", str(bad)])[0] == 2
    assert run(capsys, monkeypatch, ["kappa"], stdin="")[0] == 2
    ok = tmp_path / "ok.json"
    ok.write_text(gen_swap_network(2, 2).to_json())
    assert run(capsys, monkeypatch, ["kappa", "--an", str(ok), "--order", "1,1"])[0] == 2
    assert run(capsys, monkeypatch, ["kappa", "--an", str(ok), "--order", "a"])[0] == 2


def test_resource_error(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["gen", "swap", "--n", "30"])
    assert code == 3


def test_pipeline_subprocess():
    gen = subprocess.run(
        [sys.executable, "-m", "anseq", "gen", "swap", "--n", "2", "--q", "2"],
        capture_output=True, text=True, check=True,
    )
    res = subprocess.run(
        [sys.executable, "-m", "anseq", "kappa", "--order", "1,2"],
        input=gen.stdout, capture_output=True, text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["kappa"] == 1
