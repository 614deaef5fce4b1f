"""The (t,k)-WL process: alternating k-WL refinement with splitting of small classes.

A graph is (t,k)-WL-bounded when this process ends in a discrete coloring.
The layered graph built by :func:`build_layer_graph` records every intermediate
coloring so that isomorphisms of the layered graphs control isomorphisms of
the inputs on the level of color classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .graph import ColoredGraph
from .hypergraph import iso_coset_colored_graph, refinement_isomorphisms
from .perm import IsoCoset, PermGroup
from .wl import classes, equivalent, rank, wl1_stable, wl2_stable


@dataclass
class TraceStep:
    kind: str  # "init", "refine" or "split"
    coloring: list[int]
    split: list[list[int]] = field(default_factory=list)


@dataclass
class TkTrace:
    t: int
    k: int
    steps: list[TraceStep]

    @property
    def final(self) -> list[int]:
        return self.steps[-1].coloring

    def is_discrete(self) -> bool:
        return len(set(self.final)) == len(self.final)


def _check_tk(t, k):
    if t < 1:
        raise DomainError("t must be at least 1")
    if k not in (1, 2):
        raise DomainError("only k = 1 and k = 2 are supported")


def _kwl_diagonal(g: ColoredGraph, k: int, coloring: Sequence[int]) -> list[int]:
    if k == 1:
        return wl1_stable(g, coloring)
    return rank(np.diagonal(wl2_stable(g, coloring)).tolist())


def _split_small(coloring: Sequence[int], t: int):
    size: dict = {}
    for c in coloring:
        size[c] = size.get(c, 0) + 1
    keyed = [(1, c, v) if size[c] <= t else (0, c, 0) for v, c in enumerate(coloring)]
    split = [cl for cl in classes(coloring) if 1 < len(cl) <= t]
    return rank(keyed), split


def tk_stable(g: ColoredGraph, t: int, k: int, seed: Sequence | None = None):
    """Run the (t,k)-WL process; returns the stable coloring and the full trace.

    The trace alternates strictly between k-WL steps and splitting steps and
    stops once a splitting step changes nothing; at that point the following
    k-WL step cannot change anything either. A k-WL step without effect does
    not stop the process, since splitting may still apply.
    """
    _check_tk(t, k)
    if seed is None:
        current = rank(g.vertex_colors)
    else:
        if len(seed) != g.n:
            raise DomainError("seed must color every vertex")
        current = rank(list(zip(g.vertex_colors, seed)))
    steps = [TraceStep("init", current)]
    while True:
        current = _kwl_diagonal(g, k, current)
        steps.append(TraceStep("refine", current))
        split_col, split = _split_small(current, t)
        steps.append(TraceStep("split", split_col, split))
        if equivalent(split_col, current):
            break
        current = split_col
    return current, TkTrace(t, k, steps)


def individualize_seed(n: int, xs) -> list[tuple[int, int]]:
    """Seed giving each vertex of ``xs`` its own color and all others a common one."""
    xs = set(xs)
    return [(1, v) if v in xs else (0, 0) for v in range(n)]


def closure(g: ColoredGraph, xs, t: int, k: int) -> frozenset:
    """Vertices ending in singleton classes after individualizing ``xs`` and running (t,k)-WL."""
    xs = set(xs)
    if any(not 0 <= v < g.n for v in xs):
        raise DomainError("closure set contains a vertex outside the graph")
    coloring, _ = tk_stable(g, t, k, individualize_seed(g.n, xs))
    size: dict = {}
    for c in coloring:
        size[c] = size.get(c, 0) + 1
    return frozenset(v for v, c in enumerate(coloring) if size[c] == 1)


def is_tk_bounded(g: ColoredGraph, t: int, k: int, seed: Sequence | None = None) -> bool:
    coloring, _ = tk_stable(g, t, k, seed)
    return len(set(coloring)) == g.n


# --- layered graph ----------------------------------------------------------

COL, AUX = 0, 1
PARENT_ARC = (0, 0)


@dataclass
class LayerGraph:
    """Layered graph of all intermediate colorings plus the final-layer class map.

    ``final_vertices[i]`` is the vertex of ``graph`` standing for the color class
    ``classes[i]`` of the (t,k)-stable coloring of the input.
    """

    graph: ColoredGraph
    final_vertices: list[int]
    classes: list[list[int]]
    layers: list[tuple[int, int]]


class _LayerBuilder:
    def __init__(self, g: ColoredGraph, t: int, k: int):
        self.g, self.t, self.k = g, t, k
        self.n = g.n
        self.colors = []
        self.edges = {}
        self.layers = []

    def _add_vertex(self, color) -> int:
        self.colors.append(color)
        return len(self.colors) - 1

    def _add_edge(self, u, v, color):
        self.edges[(u, v) if u < v else (v, u)] = color

    # colorings on k-tuples are flat integer arrays of length n**k
    def _initial(self) -> np.ndarray:
        if self.k == 1:
            return np.asarray(wl1_stable(self.g), dtype=np.int64)
        return wl2_stable(self.g).reshape(-1)

    def _diag_index(self) -> np.ndarray:
        n = self.n
        return np.arange(n) * (n + 1) if self.k == 2 else np.arange(n)

    def _refine_with_multisets(self, chi: np.ndarray):
        """One refinement round; returns the new coloring and each tuple's multiset."""
        n = self.n
        if self.k == 1:
            g = self.g
            arcs = g.arc_colors
            ms = []
            for v in range(n):
                ms.append(tuple(sorted((int(chi[w]), arcs[(v, w)], arcs[(w, v)]) for w in g.adj[v])))
        else:
            mat = chi.reshape(n, n)
            ms = []
            for u in range(n):
                row = mat[u]
                for v in range(n):
                    col = mat[:, v]
                    ms.append(tuple(sorted(zip(col.tolist(), row.tolist()))))
        keys = list(zip(chi.tolist(), ms))
        new = np.asarray(rank(keys), dtype=np.int64)
        return new, ms

    def _split(self, chi: np.ndarray) -> np.ndarray:
        diag = self._diag_index()
        dcol = chi[diag].tolist()
        size: dict = {}
        for c in dcol:
            size[c] = size.get(c, 0) + 1
        keys = [(0, int(c), 0) for c in chi.tolist()]
        for v, idx in enumerate(diag.tolist()):
            if size[dcol[v]] <= self.t:
                keys[idx] = (1, int(chi[idx]), v)
        return np.asarray(rank(keys), dtype=np.int64)

    def _add_col_layer(self, j, r, chi, first=False):
        ids = {}
        for c in sorted(set(chi.tolist())):
            label = (j, r, COL, c) if first else (j, r, COL, -1)
            ids[c] = self._add_vertex(label)
        self.layers.append((j, r))
        return ids

    def build(self) -> LayerGraph:
        chi = self._initial()
        layer = self._add_col_layer(1, 1, chi, first=True)
        j = 1
        while True:
            # splitting layer
            split = self._split(chi)
            if equivalent(split, chi):
                break
            j += 1
            new_layer = self._add_col_layer(j, 1, split)
            parent = {}
            for c_new, c_old in zip(split.tolist(), chi.tolist()):
                parent[c_new] = c_old
            for c_new, vid in new_layer.items():
                self._add_edge(vid, layer[parent[c_new]], PARENT_ARC)
            chi, layer = split, new_layer
            # refinement layers
            j += 1
            r = 0
            prev_chi, prev_layer = chi, layer
            while True:
                new, ms = self._refine_with_multisets(prev_chi)
                if equivalent(new, prev_chi):
                    break
                r += 1
                cur_layer = self._add_col_layer(j, r, new)
                self._link_refinement(j, r, prev_chi, prev_layer, new, cur_layer, ms)
                prev_chi, prev_layer = new, cur_layer
            if r == 0:
                j -= 1
                break
            chi, layer = prev_chi, prev_layer
        return self._finish(chi, layer)

    def _link_refinement(self, j, r, prev_chi, prev_layer, new, cur_layer, ms):
        rep = {}
        for idx, c in enumerate(new.tolist()):
            rep.setdefault(c, idx)
        aux = {}
        for c, idx in sorted(rep.items()):
            vid = cur_layer[c]
            self._add_edge(vid, prev_layer[int(prev_chi[idx])], PARENT_ARC)
            counts: dict = {}
            for tup in ms[idx]:
                counts[tup] = counts.get(tup, 0) + 1
            for tup, mult in sorted(counts.items()):
                a = aux.get(tup)
                if a is None:
                    a = aux[tup] = self._add_vertex((j, r, AUX, -1))
                    self._link_aux(a, tup, prev_layer)
                self._add_edge(vid, a, (2, mult))

    def _link_aux(self, a, tup, prev_layer):
        if self.k == 1:
            c, out_arc, in_arc = tup
            self._add_edge(a, prev_layer[c], (1, 1, out_arc, in_arc))
            return
        first, second = tup
        if first == second:
            self._add_edge(a, prev_layer[first], (1, 3))
        else:
            self._add_edge(a, prev_layer[first], (1, 1))
            self._add_edge(a, prev_layer[second], (1, 2))

    def _finish(self, chi, layer) -> LayerGraph:
        diag = self._diag_index()
        dcol = [int(chi[i]) for i in diag.tolist()]
        groups: dict = {}
        for v, c in enumerate(dcol):
            groups.setdefault(c, []).append(v)
        pairs = sorted((layer[c], vs) for c, vs in groups.items())
        arcs = {}
        for (u, v), c in self.edges.items():
            arcs[(u, v)] = c
            arcs[(v, u)] = c
        h = ColoredGraph(len(self.colors), self.edges.keys(), self.colors, arcs)
        return LayerGraph(h, [p[0] for p in pairs], [p[1] for p in pairs], list(self.layers))


def build_layer_graph(g: ColoredGraph, t: int, k: int) -> LayerGraph:
    """Layered graph whose isomorphisms induce the class bijections of the (t,k)-stable colorings."""
    _check_tk(t, k)
    return _LayerBuilder(g, t, k).build()


def iso_t1_bounded(g1: ColoredGraph, g2: ColoredGraph, t: int) -> IsoCoset:
    """Exact isomorphism coset of two (t,1)-WL-bounded graphs.

    The search individualizes a vertex of the smallest non-singleton color
    class, refines, and recurses; on bounded inputs those classes have at most
    ``t`` vertices, so every branching step has at most ``t`` children.
    """
    if g1.n != g2.n or g1.m != g2.m:
        return IsoCoset.empty()
    for g in (g1, g2):
        if not is_tk_bounded(g, t, 1):
            raise PreconditionError(f"graph is not ({t},1)-WL-bounded")
    return refinement_isomorphisms(g1, g2)


def bounding_coset_on_classes(g1: ColoredGraph, g2: ColoredGraph, t: int, k: int):
    """Coset on the classes of the (t,k)-stable colorings containing every induced class map.

    Returns ``(P1, P2, coset)`` where ``coset`` acts on indices into ``P1`` and
    maps them to indices into ``P2``. Every isomorphism ``g1 -> g2`` induces a
    class bijection that lies in ``coset``; an empty coset certifies that the
    graphs are not isomorphic.
    """
    _check_tk(t, k)
    lg1 = build_layer_graph(g1, t, k)
    lg2 = build_layer_graph(g2, t, k)
    p1, p2 = lg1.classes, lg2.classes
    if len(p1) != len(p2) or lg1.graph.n != lg2.graph.n or lg1.layers != lg2.layers:
        return p1, p2, IsoCoset.empty()
    full = iso_t1_bounded(lg1.graph, lg2.graph, t)
    if full.is_empty:
        return p1, p2, IsoCoset.empty()
    pos2 = {x: i for i, x in enumerate(lg2.final_vertices)}
    # class ids are canonical per graph only; when the inputs are isomorphic every
    # layer isomorphism keeps the final classes, so anything else means non-isomorphic
    if any(full.representative[x] not in pos2 for x in lg1.final_vertices):
        return p1, p2, IsoCoset.empty()
    group, index = full.group.restrict_to_invariant(lg1.final_vertices)
    theta = tuple(pos2[full.representative[x]] for x in index)
    return p1, p2, IsoCoset(group, theta)


def lift_singleton_coset(coset: IsoCoset, p1, p2, n: int):
    """Translate a coset on singleton classes into a group and bijection on vertices."""
    v1 = [cl[0] for cl in p1]
    v2 = [cl[0] for cl in p2]
    gens = []
    for g in coset.group.strong_gens:
        img = [0] * n
        for i, x in enumerate(g):
            img[v1[i]] = v1[x]
        gens.append(tuple(img))
    theta = [0] * n
    for i, x in enumerate(coset.representative):
        theta[v1[i]] = v2[x]
    return PermGroup.from_generators(n, gens), tuple(theta)


def iso_tk_bounded(g1: ColoredGraph, g2: ColoredGraph, t: int, k: int) -> IsoCoset:
    """Exact isomorphism coset of two (t,k)-WL-bounded graphs."""
    for g in (g1, g2):
        if not is_tk_bounded(g, t, k):
            raise PreconditionError(f"graph is not ({t},{k})-WL-bounded")
    if g1.n != g2.n:
        return IsoCoset.empty()
    p1, p2, coset = bounding_coset_on_classes(g1, g2, t, k)
    if coset.is_empty:
        return coset
    group, theta = lift_singleton_coset(coset, p1, p2, g1.n)
    return iso_coset_colored_graph(g1, g2, group, theta)
