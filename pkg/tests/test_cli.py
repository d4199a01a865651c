import json

import pytest

from bypass.cli import main
from bypass.graphcat import cycle_graph, empty_graph, graph_to_json, pair_graph
from bypass.thh import zoo

from conftest import loops


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tours(capsys, write):
    code, out, _ = run(capsys, "tours", write("g.json", graph_to_json(loops(3))), "--json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 2 and data["agree"] is True
    code, out, _ = run(capsys, "tours", write("e.json", graph_to_json(empty_graph(("A",)))))
    assert code == 0 and "tours: 0" in out


def test_bad_input_exits_2(capsys, write):
    code, _, err = run(capsys, "tours", write("bad.json", '{"vertices": ["A"],\n "edges": ['))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "tours", write("x.json", {"vertices": ["A"], "edges": [], "z": 1}))
    assert code == 2 and "unknown field" in err
    code, _, _ = run(capsys, "tours", "/nonexistent.json")
    assert code == 2
    code, _, _ = run(capsys, "verify", "--dim", "1")
    assert code == 2
    code, _, _ = run(capsys, "nonsense")
    assert code == 2


def test_othh(capsys, write):
    code, out, _ = run(capsys, "othh", write("l.json", graph_to_json(loops(1))), "--json")
    assert code == 0 and json.loads(out)["betti"] == [1, 1, 0] and json.loads(out)["pass"]
    code, out, _ = run(capsys, "othh", write("p.json", graph_to_json(pair_graph(("A", "B"), "A", "B"))), "--json")
    assert code == 0 and json.loads(out)["betti"] == [0, 0, 0]
    code, out, _ = run(capsys, "othh", write("e.json", graph_to_json(empty_graph(("A", "B")))), "--json")
    data = json.loads(out)
    assert code == 0 and data["betti"] == [2, 0] and data["eul_count"] == 0 and data["torsion"] == []


def test_hh(capsys, write):
    code, out, _ = run(capsys, "hh", "--builtin", "Q[x]/(x^2)", "--json")
    assert code == 0 and json.loads(out)["hh"] == [2, 1, 1]
    code, out, _ = run(capsys, "hh", write("q.json", zoo()["Q"].to_json()), "--json")
    assert json.loads(out)["hh"] == [1, 0, 0]
    code, out, _ = run(capsys, "hh", write("s.json", zoo()["S_triv(2)"].to_json()), "--json")
    assert json.loads(out)["hh"] == [1, 0, 0]
    code, _, _ = run(capsys, "hh", "--builtin", "nope")
    assert code == 2
    code, _, _ = run(capsys, "hh", write("b.json", {"objects": ["*"], "hom_dims": {"*,*": 1},
                                                   "composition": {"*,*,*": [[[2]]]},
                                                   "units": {"*": [1]}}))
    assert code == 2


def test_lambda(capsys):
    code, out, _ = run(capsys, "lambda", "1", "0")
    assert code == 0 and "|Lambda(T_1, T_0)| = 2" in out
    code, out, _ = run(capsys, "lambda", "1", "1", "--compose", "0", "--json")
    data = json.loads(out)
    assert data["count"] == 6 and len(data["compositions"]) == 12
    assert all(r["involutive"] for r in data["arrows"])


def test_verify_small_bounds_and_negative_control(capsys):
    args = ["verify", "--max-edges", "2", "--max-vertices", "2", "--dim", "2", "--bar-dim", "3"]
    code, out, _ = run(capsys, *args)
    assert code == 0 and out.strip().endswith("checks")
    assert "FAIL" not in out
    first = out
    code, again, _ = run(capsys, *args)
    assert again == first
    code, out, _ = run(capsys, *args, "--inject-corrupt-fiber", "--json")
    data = json.loads(out)
    assert code == 1 and not data["pass"]
    failing = [c for c in data["checks"] if not c["pass"]]
    assert [c["check"] for c in failing] == ["pullback of tours has unique lifts"]
    assert failing[0]["failures"][0]["lift_count"] == 0
