import random

import pytest
from brute import isomorphisms_by_permutation, naive_closure, naive_tk_partition, partition
from conftest import cycle, path

from k3hiso.errors import DomainError, PreconditionError
from k3hiso.graph import ColoredGraph
from k3hiso.oracle import complete_bipartite, complete_graph, gen_3connected_planar, permuted_copy
from k3hiso.tkwl import (bounding_coset_on_classes, build_layer_graph, closure, is_tk_bounded,
                         iso_t1_bounded, iso_tk_bounded, tk_stable)


def random_graph(rnd, n, p):
    return ColoredGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < p])


def test_tk_stable_on_p3():
    col, trace = tk_stable(path(3), 1, 1)
    assert partition(col) == {frozenset({0, 2}), frozenset({1})}
    assert not trace.is_discrete()
    col, trace = tk_stable(path(3), 2, 1)
    assert len(set(col)) == 3 and trace.is_discrete()


def test_tk_stable_pre_individualized():
    col, _ = tk_stable(cycle(4), 1, 2, seed=[0, 1, 2, 3])
    assert len(set(col)) == 4


def test_tk_rejects_other_dimensions():
    with pytest.raises(DomainError):
        tk_stable(path(3), 1, 3)


def test_closure_examples():
    assert closure(cycle(5), range(5), 2, 2) == frozenset(range(5))
    assert closure(cycle(5), {0}, 2, 1) == frozenset(range(5))
    assert closure(complete_bipartite(3, 3), set(), 2, 2) == frozenset()


def test_tk_partition_matches_naive_process():
    rnd = random.Random(21)
    for _ in range(40):
        g = random_graph(rnd, rnd.randint(1, 8), rnd.random())
        for t in (1, 2):
            for k in (1, 2):
                col, _ = tk_stable(g, t, k)
                assert partition(col) == naive_tk_partition(g, t, k)
                xs = rnd.sample(range(g.n), min(g.n, rnd.randint(0, 2)))
                assert closure(g, xs, t, k) == naive_closure(g, xs, t, k)


def test_is_tk_bounded_examples():
    assert is_tk_bounded(ColoredGraph(1), 1, 1)
    assert not is_tk_bounded(complete_bipartite(3, 3), 2, 2)
    assert is_tk_bounded(path(3), 2, 1)


def test_layer_graph_shapes():
    discrete = path(3).with_vertex_colors([0, 1, 2])
    lg = build_layer_graph(discrete, 1, 1)
    assert len(lg.layers) == 1 and all(len(c) == 1 for c in lg.classes)
    lg = build_layer_graph(cycle(5), 2, 2)
    assert is_tk_bounded(lg.graph, 2, 1)
    rnd = random.Random(3)
    for _ in range(10):
        n = rnd.randint(2, 10)
        lg = build_layer_graph(random_graph(rnd, n, 0.4), 2, 2)
        assert lg.graph.n <= n ** 2 * (n ** 3 + n ** 2)


def test_iso_t1_bounded():
    assert iso_t1_bounded(path(3), path(3), 2).size() == 2
    assert iso_t1_bounded(path(3), complete_graph(3), 2).is_empty
    with pytest.raises(PreconditionError):
        iso_t1_bounded(complete_bipartite(3, 3), complete_bipartite(3, 3), 2)


def test_iso_t1_bounded_on_permuted_bounded_graphs():
    rnd = random.Random(17)
    done = 0
    while done < 10:
        g = random_graph(rnd, rnd.randint(3, 8), 0.5)
        if not is_tk_bounded(g, 2, 1):
            continue
        h, _ = permuted_copy(g, done)
        c = iso_t1_bounded(g, h, 2)
        want = set(isomorphisms_by_permutation(g, h))
        assert set(c.elements()) == want
        done += 1


def test_bounding_coset_examples():
    g = path(4).with_vertex_colors([0, 1, 2, 3])
    p1, _, coset = bounding_coset_on_classes(g, g, 2, 2)
    assert all(len(c) == 1 for c in p1)
    assert coset.contains(tuple(range(len(p1))))
    _, _, coset = bounding_coset_on_classes(cycle(6), path(6), 2, 2)
    assert coset.is_empty
    _, _, coset = bounding_coset_on_classes(cycle(5), cycle(5), 2, 2)
    assert coset.group.has_two_power_order()


def test_iso_tk_bounded_examples():
    g = gen_3connected_planar(10, 2).with_vertex_colors([1] + [0] * 9)
    if not is_tk_bounded(g, 2, 2):
        pytest.skip("instance happens to be unbounded")
    h, perm = permuted_copy(g, 4)
    c = iso_tk_bounded(g, h, 2, 2)
    assert not c.is_empty and c.contains(perm)
    cut = ColoredGraph(g.n, set(h.edges) - {min(h.edges)}, h.vertex_colors)
    assert iso_tk_bounded(g, cut, 2, 2).is_empty if is_tk_bounded(cut, 2, 2) else True
    rigid = path(4).with_vertex_colors([0, 0, 1, 2])
    assert iso_tk_bounded(rigid, rigid, 2, 2).size() == 1
