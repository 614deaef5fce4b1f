import json

import networkx as nx
import pytest

from k3hiso.cli import main
from k3hiso.formats import to_graph6
from k3hiso.graph import ColoredGraph
from k3hiso.oracle import (complete_bipartite, corpus_to_json, gen_3connected_planar,
                           permuted_copy, planar_corpus, tweak_nonisomorphic)


def write(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(to_graph6(g) + "\n")
    return str(path)


@pytest.fixture
def files(tmp_path):
    g = gen_3connected_planar(12, 4, flips=12)
    out = {
        "a": write(tmp_path, "a.g6", g),
        "b": write(tmp_path, "b.g6", permuted_copy(g, 3)[0]),
        "c": write(tmp_path, "c.g6", tweak_nonisomorphic(g, 4)),
        "c5": write(tmp_path, "c5.g6", ColoredGraph(5, nx.cycle_graph(5).edges())),
        "c6": write(tmp_path, "c6.g6", ColoredGraph(6, nx.cycle_graph(6).edges())),
        "k4": write(tmp_path, "k4.g6", ColoredGraph(4, nx.complete_graph(4).edges())),
        "k37": write(tmp_path, "k37.g6", complete_bipartite(3, 7)),
    }
    p4 = tmp_path / "p4.dimacs"
    p4.write_text("p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n")
    out["p4"] = str(p4)
    bad = tmp_path / "bad.g6"
    bad.write_text("A_ x\n")
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    capsys.readouterr()
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_wl(files, capsys):
    code, out = run(capsys, "--json", "wl", files["c5"])
    assert code == 0 and json.loads(out)["classes"] == [[0, 1, 2, 3, 4]]
    code, out = run(capsys, "wl", files["p4"], "--json")
    assert json.loads(out)["classes"] == [[0, 3], [1, 2]]
    assert main(["wl", files["bad"]]) == 2


def test_closure(files, capsys):
    code, out = run(capsys, "closure", files["c5"], "--x", "0,1,2,3,4", "--json")
    assert json.loads(out)["closure"] == [0, 1, 2, 3, 4]
    code, out = run(capsys, "closure", files["c5"], "--x", "0", "--t", "2", "--k", "1", "--json")
    assert json.loads(out)["closure"] == [0, 1, 2, 3, 4]
    assert main(["closure", files["c5"], "--x", "7"]) == 2


def test_decompose(files, capsys):
    code, out = run(capsys, "decompose", files["k4"], "--s", "0,1,2", "--h", "5")
    assert code == 0 and len(json.loads(out)["decomposition"]["nodes"]) == 1
    code, out = run(capsys, "decompose", files["k37"], "--s", "0,1,2", "--h", "7", "--json")
    assert code == 3 and json.loads(out)["verdict"] == "minor-evidence"
    assert main(["decompose", files["c6"], "--s", "0,1,2", "--h", "7"]) == 4


def test_iso(files, capsys):
    code, out = run(capsys, "iso", files["a"], files["b"], "--h", "7", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "iso"
    assert main(["iso", files["a"], files["c"], "--genus", "1"]) == 1
    code, out = run(capsys, "iso", files["c6"], files["c6"], "--strategy", "auto", "--json")
    assert code == 0 and json.loads(out)["strategy"] == "oracle"
    assert main(["iso", files["c6"], files["c6"], "--strategy", "fpt", "--h", "7"]) == 4
    assert main(["iso", files["a"], files["b"], "--h", "7", "--genus", "1"]) == 2
    assert main(["iso", files["a"], files["b"], "--strategy", "oracle", "--max-n", "5"]) == 4
    capsys.readouterr()


def test_iso_output_is_reproducible(files, capsys):
    _, first = run(capsys, "iso", files["a"], files["b"], "--h", "7", "--json")
    _, second = run(capsys, "iso", files["a"], files["b"], "--h", "7", "--json")
    assert first == second


def test_verify(tmp_path, capsys):
    code, out = run(capsys, "verify", "--json")
    assert code == 0 and json.loads(out)["mismatches"] == 0
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    c = planar_corpus(2, seed=2, n_range=(6, 9))
    c.pairs[0].tags["minor_evidence_ok"] = False
    # swap the second graph of a permuted pair for a non-isomorphic one
    pair = c.pairs[0]
    pair.g2 = tweak_nonisomorphic(pair.g1, 1)
    path = tmp_path / "faulty.json"
    path.write_text(corpus_to_json(c))
    assert main(["verify", str(path)]) == 0  # the oracle decides, so still consistent
    bad = tmp_path / "broken.json"
    bad.write_text("{\"pairs\": [{}]}")
    assert main(["verify", str(bad)]) == 2
    capsys.readouterr()


def test_verify_detects_injected_fault(tmp_path, capsys, monkeypatch):
    import k3hiso.fpt as fpt
    from k3hiso.fpt import IsoResult
    monkeypatch.setattr(fpt, "isomorphic_k3h_free", lambda g1, g2, h: IsoResult("non-iso", None, h))
    assert main(["verify"]) == 1
    capsys.readouterr()


def test_bad_arguments():
    assert main(["bogus"]) == 2
    assert main([]) == 2
