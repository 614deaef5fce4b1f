import json
import random

import pytest

from k3hiso.errors import FormatError
from k3hiso.formats import (apply_sidecar, parse_dimacs, parse_graph6, read_graph, sidecar_of,
                            to_dimacs, to_graph6)
from k3hiso.graph import ColoredGraph
from k3hiso.oracle import gen_3connected_planar


def test_graph6_small_cases():
    k2 = parse_graph6("A_")
    assert (k2.n, k2.m) == (2, 1)
    empty = parse_graph6("A?")
    assert (empty.n, empty.m) == (2, 0)
    with pytest.raises(FormatError):
        parse_graph6("")


def test_graph6_rejects_bad_bytes_and_lengths():
    with pytest.raises(FormatError):
        parse_graph6("A_ ")
    with pytest.raises(FormatError):
        parse_graph6("C~~")
    with pytest.raises(FormatError):
        parse_graph6("A`")  # padding bit set


def test_graph6_header_is_accepted():
    assert parse_graph6(">>graph6<<A_").m == 1


def test_graph6_round_trip():
    rnd = random.Random(1)
    for n in (0, 1, 5, 17, 63, 70):
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.3]
        g = ColoredGraph(n, edges)
        assert parse_graph6(to_graph6(g)) == g


def test_dimacs_round_trip_and_errors():
    g = gen_3connected_planar(9, 4)
    assert parse_dimacs(to_dimacs(g)).edges == g.edges
    with pytest.raises(FormatError):
        parse_dimacs("e 1 2\n")
    with pytest.raises(FormatError):
        parse_dimacs("p edge 2 1\ne 1 3\n")
    with pytest.raises(FormatError):
        parse_dimacs("p edge 3 5\ne 1 2\n")


def test_sidecar(tmp_path):
    g = ColoredGraph(3, [(0, 1), (1, 2)], [1, 2, 1], {(0, 1): 4})
    path = tmp_path / "g.g6"
    path.write_text(to_graph6(g) + "\n")
    (tmp_path / "g.g6.colors.json").write_text(json.dumps(sidecar_of(g)))
    back = read_graph(path)
    assert back == g
    with pytest.raises(FormatError):
        apply_sidecar(g.uncolored(), {"arc_colors": [[0, 2, 1]]})
    with pytest.raises(FormatError):
        apply_sidecar(g.uncolored(), {"vertex_colors": [1]})


def test_read_graph_detects_dimacs(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("c a path\np edge 3 2\ne 1 2\ne 2 3\n")
    assert read_graph(path).m == 2
