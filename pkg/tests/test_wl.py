import random

import networkx as nx
import numpy as np
import pytest
from brute import naive_wl1, naive_wl2_diagonal, naive_wl2_pairs, partition
from conftest import cycle, from_nx, path

from k3hiso.errors import DomainError
from k3hiso.graph import ColoredGraph, disjoint_union
from k3hiso.oracle import complete_graph, gen_3connected_planar
from k3hiso.wl import (diagonal, num_classes, quotient_by_colors, refines, wl1_distinguishes,
                       wl1_stable, wl2_distinguishes, wl2_refine_once, wl2_stable)


def random_graph(rnd, n, p, colors=1):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < p]
    arcs = {(u, v): rnd.randrange(2) for u, v in edges if colors > 1}
    return ColoredGraph(n, edges, [rnd.randrange(colors) for _ in range(n)], arcs)


def test_wl1_examples():
    assert num_classes(wl1_stable(cycle(5))) == 1
    assert partition(wl1_stable(path(4))) == {frozenset({0, 3}), frozenset({1, 2})}
    col = wl1_stable(complete_graph(4), [1, 0, 0, 0])
    assert partition(col) == {frozenset({0}), frozenset({1, 2, 3})}


def test_wl2_examples():
    assert wl2_distinguishes(cycle(6), disjoint_union(cycle(3), cycle(3)))
    assert not wl1_distinguishes(cycle(6), disjoint_union(cycle(3), cycle(3)))
    assert num_classes(diagonal(wl2_stable(ColoredGraph(1)))) == 1
    assert num_classes(wl2_stable(cycle(5))) == 3


def test_wl1_matches_naive_refinement():
    rnd = random.Random(2)
    for _ in range(150):
        g = random_graph(rnd, rnd.randint(1, 12), rnd.random(), colors=rnd.choice((1, 3)))
        assert partition(wl1_stable(g)) == partition(naive_wl1(g))


def test_wl2_matches_naive_refinement():
    rnd = random.Random(4)
    for _ in range(60):
        g = random_graph(rnd, rnd.randint(1, 9), rnd.random(), colors=rnd.choice((1, 2)))
        chi = wl2_stable(g)
        ref = naive_wl2_pairs(g)
        ours = {(u, v): int(chi[u, v]) for u in range(g.n) for v in range(g.n)}
        assert partition(list(ours.values())) == partition([ref[k] for k in ours])
        assert partition(diagonal(chi)) == partition(naive_wl2_diagonal(g))


def test_wl_ids_are_invariant_under_relabeling():
    rnd = random.Random(5)
    for _ in range(40):
        g = random_graph(rnd, rnd.randint(2, 10), 0.4, colors=2)
        perm = list(range(g.n))
        rnd.shuffle(perm)
        h = g.relabeled(perm)
        c1, c2 = wl1_stable(g), wl1_stable(h)
        assert all(c1[v] == c2[perm[v]] for v in range(g.n))
        d1, d2 = wl2_stable(g), wl2_stable(h)
        assert all(d1[u, v] == d2[perm[u], perm[v]] for u in range(g.n) for v in range(g.n))


def test_wl2_fixpoint_is_idempotent():
    for seed in range(10):
        g = gen_3connected_planar(12 + seed, seed)
        chi = wl2_stable(g)
        assert refines(chi, wl2_refine_once(chi)) and refines(wl2_refine_once(chi), chi)


def test_refines():
    disc, uni = [0, 1, 2], [0, 0, 0]
    assert refines(disc, uni) and not refines(uni, disc)
    assert refines(uni, uni)
    with pytest.raises(DomainError):
        refines([0], [0, 1])


def test_quotient_by_colors():
    g = cycle(6)
    chi = wl2_stable(g)
    q, block = quotient_by_colors(g, chi, set())
    assert q == g and block == list(range(6))
    antipodal = {int(chi[0, 3])}
    q, block = quotient_by_colors(g, chi, antipodal)
    assert q.n == 3 and q.m == 3
    assert sorted(block.count(b) for b in set(block)) == [2, 2, 2]
    pete = from_nx(nx.petersen_graph())
    chi = wl2_stable(pete)
    diag = set(np.diagonal(chi).tolist())
    off = {int(c) for c in np.unique(chi)} - diag
    q, _ = quotient_by_colors(pete, chi, off)
    assert q.n == 1
    with pytest.raises(DomainError):
        quotient_by_colors(pete, chi, off | diag)
