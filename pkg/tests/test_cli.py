import json
import subprocess
import sys
from importlib import resources

import pytest

from hdatopo.cli import kind_of, run

FIX = resources.files("hdatopo.fixtures")
BROKEN = {"cubes": [{"dim": 0, "key": "a"}, {"dim": 0, "key": "b"}, {"dim": 1, "key": "e"},
                    {"dim": 1, "key": "f"}, {"dim": 2, "key": "s"}],
          "faces": [{"cube": "e", "i": 1, "k": 0, "face": "a"}, {"cube": "e", "i": 1, "k": 1, "face": "b"},
                    {"cube": "f", "i": 1, "k": 0, "face": "b"}, {"cube": "f", "i": 1, "k": 1, "face": "a"},
                    {"cube": "s", "i": 1, "k": 0, "face": "e"}, {"cube": "s", "i": 1, "k": 1, "face": "e"},
                    {"cube": "s", "i": 2, "k": 0, "face": "e"}, {"cube": "s", "i": 2, "k": 1, "face": "f"}]}


def fixture(name):
    return str(FIX.joinpath(f"{name}.json"))


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_realize_circle(capsys):
    code, out = call(capsys, "realize", fixture("circle"))
    assert code == 0
    c = json.loads(out)["certificate"]
    assert c["ok"] and c["betti"] == [1, 1]


def test_validate_broken(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(BROKEN))
    code, out = call(capsys, "validate", p)
    rep = json.loads(out)
    assert code == 1 and not rep["ok"] and rep["violations"]


def test_geom_check(capsys):
    code, out = call(capsys, "geom-check", fixture("tetra"), "--samples", 1000, "--seed", 7)
    rep = json.loads(out)
    assert code == 0 and rep["max_error"] < 1e-9 and rep["seed"] == 7
    code, out = call(capsys, "geom-check", fixture("triangle"), "--samples", 100, "--mode", "rational")
    assert code == 0 and json.loads(out)["max_error"] == 0


def test_stage_chain(tmp_path, capsys):
    """Each artifact is accepted by the next stage."""
    d = tmp_path
    assert run(["subdivide", fixture("triangle"), "--out", str(d / "P.json")]) == 0
    assert run(["validate", str(d / "P.json")]) == 0
    assert run(["hda", fixture("triangle"), "--out", str(d / "A.json")]) == 0
    assert run(["verify-model", str(d / "A.json")]) == 0
    A = json.loads((d / "A.json").read_text())
    skel = {"cubes": [c for c in A["cubes"] if c["dim"] <= 1],
            "faces": [f for f in A["faces"] if f["cube"] in {c["key"] for c in A["cubes"] if c["dim"] == 1}],
            "initial": A["initial"], "order": A["order"], "labels": A["labels"]}
    (d / "T.json").write_text(json.dumps(skel))
    (d / "R.json").write_text(json.dumps({"order": A["order"]}))
    assert run(["fill", str(d / "T.json"), "--relation", str(d / "R.json"), "--out", str(d / "F.json")]) == 0
    F = json.loads((d / "F.json").read_text())
    assert sorted(c["dim"] for c in F["cubes"]) == sorted(c["dim"] for c in A["cubes"])
    assert run(["accessible", str(d / "A.json"), "--out", str(d / "B.json")]) == 0
    assert json.loads((d / "B.json").read_text())["certificate"]["ok"]
    assert run(["to-svs", str(d / "B.json"), "--out", str(d / "S.json")]) == 0
    assert run(["validate", str(d / "S.json")]) == 0
    assert run(["statespace", str(d / "S.json"), "--out", str(d / "TS.json")]) == 0
    assert run(["statespace", str(d / "S.json"), "--fill", "--out", str(d / "M.json")]) == 0
    assert run(["homology", str(d / "M.json"), "--out", str(d / "H.json")]) == 0
    assert json.loads((d / "H.json").read_text()) == {"degrees": [{"n": 0, "betti": 1, "torsion": []}]}
    assert run(["export-dot", str(d / "B.json"), "--out", str(d / "B.dot")]) == 0
    dot = (d / "B.dot").read_text()
    assert dot.startswith("digraph") and "cluster_sq" in dot
    capsys.readouterr()


def test_homology_of_rp2(capsys):
    code, out = call(capsys, "homology", fixture("rp2"))
    assert code == 0
    assert json.loads(out)["degrees"][1]["torsion"] == [2]


def test_rejections_emit_error_json(tmp_path, capsys):
    code, out = call(capsys, "to-svs", fixture("circle"))
    err = json.loads(out)
    assert code == 1 and err["error"] == "ValueError" and not err["ok"]
    p = tmp_path / "P.json"
    run(["hda", fixture("circle"), "--out", str(p)])
    code, out = call(capsys, "to-svs", p)
    assert code == 1 and "accessible" in json.loads(out)["message"]
    p = tmp_path / "junk.json"
    p.write_text(json.dumps({"hello": 1}))
    code, out = call(capsys, "validate", p)
    assert code == 1 and json.loads(out)["error"] == "ValueError"
    code, out = call(capsys, "homology", tmp_path / "missing.json")
    assert code == 1


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        run(["nonsense"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["geom-check", fixture("tetra"), "--mode", "complex"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hdatopo", "homology", fixture("circle")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["degrees"][1]["betti"] == 1
    r = subprocess.run([sys.executable, "-m", "hdatopo"], capture_output=True, text=True)
    assert r.returncode == 2


def test_outputs_are_byte_identical(tmp_path):
    for i in (1, 2):
        assert run(["realize", fixture("tetra"), "--full", "--out", str(tmp_path / f"r{i}.json")]) == 0
        assert run(["geom-check", fixture("circle"), "--seed", "3", "--samples", "50",
                    "--out", str(tmp_path / f"g{i}.json")]) == 0
    assert (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    assert (tmp_path / "g1.json").read_bytes() == (tmp_path / "g2.json").read_bytes()


def test_kind_detection():
    assert kind_of({"n_vertices": 1, "facets": [[1]]}) == "complex"
    assert kind_of({"cubes": [], "faces": []}) == "pcs"
    assert kind_of({"cubes": [], "faces": [], "initial": "a"}) == "hda"
    assert kind_of({"graphs": [], "variables": [], "eta": {}}) == "svs"
    with pytest.raises(ValueError):
        kind_of({})
