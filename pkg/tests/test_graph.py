import random

import pytest
from conftest import cycle, from_nx, path
from brute import is_3_connected_brute
import networkx as nx

from k3hiso.errors import DomainError, InstanceTooLarge
from k3hiso.graph import (ColoredGraph, clique_on, components_avoiding, contains_k3h_minor,
                          is_3_connected, is_isomorphism, open_neighborhood)
from k3hiso.oracle import complete_bipartite, complete_graph, has_k3h_minor_by_contraction


def test_constructor_rejects_loops_and_bad_endpoints():
    with pytest.raises(DomainError):
        ColoredGraph(2, [(0, 0)])
    with pytest.raises(DomainError):
        ColoredGraph(2, [(0, 2)])
    with pytest.raises(DomainError):
        ColoredGraph(2, [(0, 1)], arc_colors={(1, 0): 3, (0, 0): 1})


def test_parallel_edges_collapse():
    g = ColoredGraph(2, [(0, 1), (1, 0)])
    assert g.m == 1


def test_arc_colors_may_differ_by_direction():
    g = ColoredGraph(2, [(0, 1)], arc_colors={(0, 1): 5})
    assert g.arc(0, 1) == 5 and g.arc(1, 0) != 5


def test_components_avoiding():
    assert sorted(map(sorted, components_avoiding(path(3), {1}))) == [[0], [2]]
    assert components_avoiding(cycle(4), set()) == [frozenset(range(4))]
    assert components_avoiding(complete_graph(4), range(4)) == []


def test_open_neighborhood():
    star = ColoredGraph(4, [(0, 1), (0, 2), (0, 3)])
    assert open_neighborhood(star, {0}) == {1, 2, 3}
    assert open_neighborhood(cycle(5), {0}) == {1, 4}
    assert open_neighborhood(complete_graph(4), {0, 1}) == {2, 3}


def test_is_3_connected_examples():
    assert is_3_connected(complete_graph(4))
    assert not is_3_connected(cycle(5))
    assert is_3_connected(from_nx(nx.hypercube_graph(3)))


def test_is_3_connected_matches_cut_enumeration():
    rnd = random.Random(3)
    for _ in range(300):
        n = rnd.randint(4, 9)
        p = rnd.choice((0.4, 0.6, 0.8))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < p]
        g = ColoredGraph(n, edges)
        assert is_3_connected(g) == is_3_connected_brute(g)


def test_minor_search_examples():
    w = contains_k3h_minor(complete_bipartite(3, 3), 3)
    assert w is not None and w.verify(complete_bipartite(3, 3), 3)
    tree = ColoredGraph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert contains_k3h_minor(tree, 1) is not None  # a star with three leaves
    assert contains_k3h_minor(tree, 2) is None  # no cycle
    assert contains_k3h_minor(complete_graph(4), 3) is None
    with pytest.raises(InstanceTooLarge):
        contains_k3h_minor(ColoredGraph(30), 3)


def test_minor_search_agrees_with_contraction_search():
    rnd = random.Random(8)
    for _ in range(25):
        n = rnd.randint(5, 8)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.55]
        g = ColoredGraph(n, edges)
        for h in (2, 3):
            w = contains_k3h_minor(g, h)
            assert (w is not None) == has_k3h_minor_by_contraction(g, h)
            if w is not None:
                assert w.verify(g, h)


def test_clique_on():
    k3 = clique_on(ColoredGraph(3), {0, 1, 2})
    assert k3.m == 3
    g = cycle(5)
    assert clique_on(g, set()) == g
    assert clique_on(complete_graph(4), {0, 1, 2}).edges == complete_graph(4).edges


def test_relabel_gives_isomorphism():
    g = ColoredGraph(4, [(0, 1), (1, 2), (2, 3)], [1, 0, 0, 2], {(0, 1): 7})
    perm = (2, 0, 3, 1)
    assert is_isomorphism(g, g.relabeled(perm), perm)
    assert not is_isomorphism(g, g.relabeled(perm), (0, 1, 2, 3))


def test_induced_keeps_colors():
    g = ColoredGraph(4, [(0, 1), (1, 2), (2, 3)], [5, 6, 7, 8], {(1, 2): 3})
    sub, ids = g.induced([1, 2])
    assert sub.n == 2 and sub.m == 1
    assert [g.vertex_colors[v] for v in ids] == list(sub.vertex_colors)
    assert sub.arc(0, 1) == 3
