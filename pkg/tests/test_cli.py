import io
import json
from pathlib import Path

import pytest

from superplucker.acceptance import fixture_plane
from superplucker.cli import cli_dispatch
from superplucker.exprio import coords_to_json, matrix_to_json, multivector_to_json
from superplucker.plucker_algebraic import E, Multivector
from superplucker.plucker_general import essential_coordinates
from superplucker.galgebra import one

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def test_dim():
    assert run("dim", "--shape", "1|1", "--ambient", "2|2") == (0, "2|2\n", "")
    assert run("grassmannian", "dim", "--shape", "2|0", "--ambient", "4|1")[1] == "4|2\n"
    code, out, _ = run("dim", "--shape", "1|1", "--ambient", "2|2", "--json")
    assert json.loads(out)["dimension"] == "2|2"


def test_dim_errors():
    assert run("dim", "--shape", "3|0", "--ambient", "2|2")[0] == 1
    assert run("dim", "--shape", "x", "--ambient", "2|2")[0] == 3


def test_ber_fixture():
    code, out, _ = run("ber", "--in", str(DATA / "ber_fixture.json"))
    assert (code, out) == (0, "2/3 - 1/9*t1*t2\n")
    code, out, _ = run("ber", "--in", str(DATA / "ber_fixture.json"), "--star", "--json", "--cross-check")
    assert code == 0 and json.loads(out) == {"ber_star": "3/2 + 1/4*t1*t2"}


def test_ber_failures(tmp_path):
    singular = write(tmp_path, "s.json", {"row_parities": ["e", "o"], "col_parities": ["e", "o"], "entries": [["t1*t2", "t1"], ["t2", "t1*t2"]]})
    assert run("ber", "--in", singular)[0] == 1
    odd = write(tmp_path, "o.json", {"row_parities": ["e"], "col_parities": ["e"], "entries": [["t1"]]})
    assert run("ber", "--in", odd, "--strict")[0] == 3
    assert run("ber", "--in", write(tmp_path, "b.json", "{not json"))[0] == 3
    assert run("ber", "--in", str(tmp_path / "missing.json"))[0] == 1
    assert run("ber")[0] == 3
    assert run("nonsense")[0] == 3


def test_normalize_and_change_chart():
    code, out, _ = run("grassmannian", "normalize", "--chart", "2|2", "--in", str(DATA / "plane_11_in_22.json"))
    assert code == 0 and json.loads(out) == matrix_to_json(fixture_plane())
    code, out, _ = run("grassmannian", "change-chart", "--chart", "1|1", "--in", str(DATA / "plane_11_in_22.json"))
    assert code == 0 and json.loads(out)["entries"][0][0] == "1"
    assert run("grassmannian", "normalize", "--chart", "1,2|", "--in", str(DATA / "plane_11_in_22.json"))[0] == 1
    assert run("grassmannian", "normalize", "--chart", "2,1|", "--in", str(DATA / "plane_11_in_22.json"))[0] == 3


def test_pluck_pipeline(tmp_path):
    code, out, _ = run("pluck", "coords", "--in", str(DATA / "plane_11_in_22.json"))
    assert code == 0
    coords = json.loads(out)
    assert coords == coords_to_json(essential_coordinates(fixture_plane()))
    path = write(tmp_path, "c.json", coords)
    code, out, _ = run("pluck", "invert", "--chart", "2|2", "--in", path)
    assert code == 0 and json.loads(out) == matrix_to_json(fixture_plane())
    code, out, _ = run("pluck", "check", "--family", "11", "--in", path)
    assert code == 0 and out.endswith("relations hold\n")
    coords["ustar"]["1|1^"] = "5"
    code, out, _ = run("pluck", "check", "--family", "11", "--in", write(tmp_path, "bad.json", coords), "--json")
    assert code == 2 and not json.loads(out)["holds"]
    assert run("pluck", "check", "--family", "r0", "--in", path)[0] == 1


def test_multivector_commands(tmp_path):
    code, out, _ = run("multivector", "wedge", "--in", str(DATA / "plane_2_in_4_1.json"))
    assert code == 0
    path = write(tmp_path, "t.json", json.loads(out))
    assert run("multivector", "simple", "--in", path)[0] == 0
    assert run("multivector", "check", "--in", path, "--khudaverdian")[0] == 0
    o = one(0)
    T = Multivector(2, (4, 0), 0, {(E(1), E(2)): o, (E(3), E(4)): o})
    bad = write(tmp_path, "bad.json", multivector_to_json(T))
    code, out, _ = run("multivector", "simple", "--in", bad)
    assert code == 2 and out.startswith("not simple")
    assert run("multivector", "check", "--in", bad)[0] == 2


def test_cluster_commands(tmp_path):
    dot = tmp_path / "g.dot"
    plane = str(DATA / "plane_2_in_5_1.json")
    code, out, _ = run("cluster", "build", "--case", "5_1", "--seed-plane", plane, "--cluster", "T13,T14|th1,th4", "--dot", str(dot), "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data["clusters"]) == 10 and len(data["values"]) == 15 and data["conflicts"] == []
    assert dot.read_text().startswith("graph mutations {")
    code, out, _ = run("cluster", "mutate", "--case", "5_1", "--seed-plane", plane, "--cluster", "T13,T14|th1,th4", "--step", "even:T14")
    assert code == 0
    state = json.loads(out)
    assert state["cluster"] == "(T13, T35 | th3, th5)"
    spath = write(tmp_path, "s.json", state)
    code, out, _ = run("cluster", "walk", "--case", "5_1", "--state", spath, "--walk", "odd:th1th5,even:T13", "--json")
    assert code == 0 and len(json.loads(out)) == 3
    code, out, _ = run("cluster", "walk", "--case", "5_1", "--state", spath, "--walk", "even:T14")
    assert code == 1
    assert run("cluster", "walk", "--case", "5_1", "--state", spath, "--walk", "sideways")[0] == 3
    assert run("cluster", "build", "--case", "4_1")[0] == 0


def test_outputs_are_byte_stable():
    argv = ["cluster", "build", "--case", "5_1", "--seed-plane", str(DATA / "plane_2_in_5_1.json")]
    assert run(*argv) == run(*argv)
    argv = ["pluck", "coords", "--in", str(DATA / "plane_11_in_22.json")]
    assert run(*argv) == run(*argv)


@pytest.mark.parametrize("only", ["1", "9"])
def test_selftest_subset(only):
    code, out, _ = run("selftest", "--quick", "--only", only)
    assert code == 0 and out.endswith("1/1 criteria passed\n")
    assert out.startswith(f"[PASS] {only}.")


def test_selftest_bad_selection():
    assert run("selftest", "--only", "x")[0] == 3
