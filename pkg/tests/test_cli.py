import json
import re
import subprocess
import sys

import pytest

from rectcart.cli import main
from rectcart.generate import k4, octahedron
from rectcart.graph import dump_instance
from rectcart.io import read_csv


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("RECTCART_SEED", raising=False)

    def call(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return call


def write(path, text):
    with open(path, "w") as f:
        f.write(text)
    return path


def test_k4_schnyder8(run):
    write("k4.json", dump_instance(k4()))
    code, _, _ = run("build", "k4.json", "-o", "l.json", "--realizer-out", "r.json")
    assert code == 0
    data = json.load(open("l.json"))
    assert data["mode"] == "schnyder8" and set(data["rects"]["c"]) >= {"H", "B"}
    assert json.load(open("r.json"))["order"] == ["u", "v", "c", "w"]
    code, out, _ = run("verify", "l.json", "k4.json")
    assert code == 0 and json.loads(out)["ok"]


def test_two_legged_cycle_exit_2(run):
    write("k4.json", dump_instance(k4()))
    code, _, err = run("build", "k4.json", "--mode", "onelgged6", "--cycle", "v,w,c,u", "-o", "x.json")
    assert code == 2 and "two-legged" in err
    code, _, _ = run("build", "k4.json", "--mode", "onelegged6", "--cycle", "u,c,v,w", "-o", "y.json")
    assert code == 0
    code, out, _ = run("verify", "y.json", "k4.json")
    assert code == 0 and json.loads(out)["side_bound"] == 6


def test_non_triangulated_input_exit_2(run):
    g = k4()
    d = json.loads(dump_instance(g))
    d["rotation"]["u"].remove("c")
    d["rotation"]["c"].remove("u")
    write("bad.json", json.dumps(d))
    code, _, err = run("build", "bad.json", "-o", "x.json")
    assert code == 2 and "3n" in err


def test_realize_and_stats(run):
    assert run("gen", "--n", 30, "--seed", 3, "-o", "i.json")[0] == 0
    assert run("build", "i.json", "-o", "l.json")[0] == 0
    code, _, _ = run("realize", "l.json", "i.json", "--eps", 0.01, "-o", "c.json", "--stats", "s.csv")
    assert code == 0
    row = read_csv(open("s.csv").read())[0]
    assert row["n"] == "30" and float(row["error"]) < 0.01
    data = json.load(open("c.json"))
    assert data["error"] < 0.01 and set(data["pressure"]) == set(data["vertices"])
    assert run("verify", "c.json", "i.json")[0] == 0


def test_realize_eps_zero_exit_3(run):
    run("gen", "--n", 12, "--seed", 1, "-o", "i.json")
    run("build", "i.json", "-o", "l.json")
    code, _, err = run("realize", "l.json", "i.json", "--eps", 0, "--max-iters", 50, "-o", "c.json")
    assert code == 3 and "budget" in err
    data = json.load(open("c.json"))
    # the run stops early once no step lowers the energy in floating point
    assert 0 < data["iterations"] <= 50 and data["error"] > 0


def test_realize_is_byte_identical(run):
    run("gen", "--n", 20, "--seed", 2, "-o", "i.json")
    run("build", "i.json", "-o", "l.json")
    run("realize", "l.json", "i.json", "--seed", 5, "-o", "a.json")
    run("realize", "l.json", "i.json", "--seed", 5, "-o", "b.json")
    assert open("a.json", "rb").read() == open("b.json", "rb").read()


def test_seed_from_environment(run, monkeypatch):
    monkeypatch.setenv("RECTCART_SEED", "17")
    run("gen", "--n", 15, "-o", "a.json")
    run("gen", "--n", 15, "--seed", 17, "-o", "b.json")
    assert open("a.json").read() == open("b.json").read()
    monkeypatch.setenv("RECTCART_SEED", "x")
    assert run("gen", "--n", 15, "-o", "c.json")[0] == 2


def test_all_modes_round_trip(run):
    write("o.json", dump_instance(octahedron(), [1, 2, 3, 4, 5, 6]))
    for mode, bound in (("schnyder8", 8), ("hamiltonian8", 8), ("onelegged6", 6)):
        assert run("build", "o.json", "--mode", mode, "-o", f"{mode}.json")[0] == 0
        code, out, _ = run("verify", f"{mode}.json", "o.json")
        assert code == 0 and json.loads(out)["side_bound"] == bound
    run("gen", "--n", 9, "--kind", "outerplanar", "--seed", 4, "-o", "op.json")
    assert run("build", "op.json", "--mode", "outerplanar6", "-o", "op6.json")[0] == 0
    assert run("verify", "op6.json", "op.json")[0] == 0
    assert run("build", "op.json", "--augment", "-o", "aug.json")[0] == 0
    assert run("verify", "aug.json", "op.json")[0] == 0
    assert run("realize", "hamiltonian8.json", "o.json")[0] == 2


def test_verify_failure_exit_2(run):
    write("o.json", dump_instance(octahedron()))
    run("build", "o.json", "-o", "l.json")
    data = json.load(open("l.json"))
    g = octahedron()
    a, b = g.labels[0], g.labels[g.rotation[0][0]]
    data["polygons"][a], data["polygons"][b] = data["polygons"][b], data["polygons"][a]
    write("bad.json", json.dumps(data))
    code, out, _ = run("verify", "bad.json", "o.json")
    assert code == 2 and not json.loads(out)["ok"]


def test_render(run):
    write("k4.json", dump_instance(k4()))
    run("build", "k4.json", "-o", "l.json")
    assert run("render", "l.json", "-o", "k4.svg")[0] == 0
    assert len(re.findall("<path ", open("k4.svg").read())) == 4
    run("build", "k4.json", "--mode", "hamiltonian8", "-o", "h.json")
    run("render", "h.json", "--pressure", "-o", "h.svg")
    assert set(re.findall(r'fill="(#[0-9a-f]+)"', open("h.svg").read())) == {"#e1e1e1"}


def test_bench(run):
    code, out, _ = run("bench", "--n", "10,12", "--trials", 2, "--no-timing")
    rows = read_csv(out)
    assert code == 0 and len(rows) == 4 and all(r["converged"] == "True" for r in rows)
    assert run("bench", "--n", "10,12", "--trials", 2, "--no-timing")[1] == out


def test_missing_file_exit_2(run):
    code, _, err = run("verify", "nope.json", "nope.json")
    assert code == 2 and "error" in err


def test_console_script_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "rectcart.cli", "gen", "--n", "5", "--weights", "unit"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 0 and len(json.loads(r.stdout)["vertices"]) == 5
