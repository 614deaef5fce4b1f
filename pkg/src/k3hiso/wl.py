"""Color refinement (1-WL) and the 2-dimensional Weisfeiler-Leman algorithm.

All colorings returned here use canonical ids: in every round the class
signatures are sorted and numbered ``0..k-1`` in that order. Signatures never
mention vertex ids, so isomorphic inputs receive identical ids.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError
from .graph import ColoredGraph, components_avoiding, disjoint_union

NO_ARC = -1


def rank(values: Sequence) -> list[int]:
    """Replace each value by the index of its class in the sorted list of distinct values."""
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def _initial_vertex_colors(g: ColoredGraph, seed: Sequence | None) -> list[int]:
    if seed is None:
        return rank(g.vertex_colors)
    if len(seed) != g.n:
        raise DomainError("seed must assign a color to every vertex")
    return rank(list(zip(g.vertex_colors, seed)))


def arc_ranks(g: ColoredGraph) -> dict[tuple[int, int], int]:
    arcs = g.arc_colors
    ids = rank(list(arcs.values()))
    return dict(zip(arcs.keys(), ids))


def _neighbor_table(g: ColoredGraph):
    arcs = arc_ranks(g)
    return [[(w, arcs[(v, w)], arcs[(w, v)]) for w in g.adj[v]] for v in range(g.n)]


def wl1_stable(g: ColoredGraph, seed: Sequence | None = None, *, table=None) -> list[int]:
    """Coarsest equitable coloring refining ``seed`` and the vertex colors of ``g``.

    Neighbor multisets include the colors of both arcs of each incident edge.
    ``table`` lets callers reuse a precomputed neighbor table across many runs.
    """
    colors = _initial_vertex_colors(g, seed)
    if table is None:
        table = _neighbor_table(g)
    count = len(set(colors))
    while count < g.n:
        sigs = [(colors[v], tuple(sorted((a, b, colors[w]) for w, a, b in table[v])))
                for v in range(g.n)]
        new = rank(sigs)
        new_count = len(set(new))
        colors = new
        if new_count == count:
            break
        count = new_count
    return colors


def neighbor_table(g: ColoredGraph):
    """Precomputed adjacency with ranked arc colors, accepted by :func:`wl1_stable`."""
    return _neighbor_table(g)


def _initial_pair_colors(g: ColoredGraph, seed: Sequence | None) -> np.ndarray:
    n = g.n
    vc = np.asarray(_initial_vertex_colors(g, seed), dtype=np.int64)
    arcs = arc_ranks(g)
    fwd = np.full((n, n), NO_ARC, dtype=np.int64)
    adj = np.zeros((n, n), dtype=np.int64)
    for (u, v), c in arcs.items():
        fwd[u, v] = c
        adj[u, v] = 1
    eye = np.eye(n, dtype=np.int64)
    cols = np.stack([eye, adj, np.broadcast_to(vc[:, None], (n, n)),
                     np.broadcast_to(vc[None, :], (n, n)), fwd, fwd.T], axis=-1)
    _, inv = np.unique(cols.reshape(n * n, -1), axis=0, return_inverse=True)
    return inv.reshape(n, n).astype(np.int64)


_ROW_WEIGHTS = np.random.default_rng(20240117).integers(1, 2 ** 62, size=4096, dtype=np.int64) | 1


def _row_classes(rows: np.ndarray) -> np.ndarray:
    """Canonical class ids of equal rows.

    Rows are bucketed by a fixed content hash, and every bucket is checked for
    genuine equality; a collision falls back to exact lexicographic grouping.
    """
    width = rows.shape[1]
    weights = _ROW_WEIGHTS[:width] if width <= len(_ROW_WEIGHTS) else None
    if weights is not None:
        with np.errstate(over="ignore"):
            keys = (rows * weights[None, :]).sum(axis=1)
        _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
        if (rows == rows[first[inv]]).all():
            return inv.astype(np.int64)
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def wl2_refine_once(chi: np.ndarray) -> np.ndarray:
    """One 2-WL round: chi(u,v) <- (chi(u,v), {{(chi(w,v), chi(u,w)) : w}}), canonical ids."""
    n = chi.shape[0]
    if n == 0:
        return chi.copy()
    k = int(chi.max()) + 1
    # codes[u, v, w] encodes (chi(w, v), chi(u, w))
    codes = chi.T[None, :, :] * k + chi[:, None, :]
    codes.sort(axis=2)
    rows = np.concatenate([chi.reshape(n * n, 1), codes.reshape(n * n, n)], axis=1)
    return _row_classes(rows).reshape(n, n)


def wl2_stable(g: ColoredGraph, seed: Sequence | None = None) -> np.ndarray:
    """2-stable pair coloring of ``g`` as an ``n x n`` integer array of canonical ids."""
    chi = _initial_pair_colors(g, seed)
    if g.n == 0:
        return chi
    count = int(chi.max()) + 1
    while True:
        chi = wl2_refine_once(chi)
        new_count = int(chi.max()) + 1
        if new_count == count:
            return chi
        count = new_count


def diagonal(chi: np.ndarray) -> list[int]:
    """Vertex coloring read off the diagonal of a pair coloring, re-ranked to ``0..k-1``."""
    return rank(np.diagonal(chi).tolist())


def classes(coloring: Sequence[int]) -> list[list[int]]:
    """Color classes ordered by color id."""
    out: dict = {}
    for v, c in enumerate(coloring):
        out.setdefault(c, []).append(v)
    return [out[c] for c in sorted(out)]


def partition_key(coloring: Sequence) -> frozenset:
    return frozenset(frozenset(cl) for cl in classes(coloring))


def num_classes(coloring) -> int:
    return len(set(np.asarray(coloring).ravel().tolist()))


def histogram(coloring: Sequence[int]) -> tuple:
    out: dict = {}
    for c in coloring:
        out[c] = out.get(c, 0) + 1
    return tuple(sorted(out.items()))


def refines(c1, c2) -> bool:
    """True iff equal colors under ``c1`` imply equal colors under ``c2``."""
    a = np.asarray(c1).ravel().tolist()
    b = np.asarray(c2).ravel().tolist()
    if len(a) != len(b):
        raise DomainError("colorings are defined on different domains")
    seen: dict = {}
    for x, y in zip(a, b):
        if seen.setdefault(x, y) != y:
            return False
    return True


def equivalent(c1, c2) -> bool:
    return refines(c1, c2) and refines(c2, c1)


def quotient_by_colors(g: ColoredGraph, chi: np.ndarray, color_set) -> tuple[ColoredGraph, list[int]]:
    """Contract the connected components of ``G[C]`` for a set ``C`` of off-diagonal pair colors.

    Returns the contracted graph and the vertex -> block map; blocks are numbered
    by their smallest vertex.
    """
    color_set = set(int(c) for c in color_set)
    diag = set(np.diagonal(chi).tolist())
    if color_set & diag:
        raise DomainError("color set contains a diagonal color")
    n = g.n
    touched = [(u, v) for u in range(n) for v in range(n)
               if u != v and int(chi[u, v]) in color_set]
    helper = ColoredGraph(n, touched)
    comps = components_avoiding(helper, ())
    comps.sort(key=min)
    block = [0] * n
    for i, comp in enumerate(comps):
        for v in comp:
            block[v] = i
    edges = {(block[u], block[v]) for u, v in g.edges if block[u] != block[v]}
    return ColoredGraph(len(comps), edges), block


def quotient_pair_coloring(chi: np.ndarray, block: Sequence[int]) -> np.ndarray:
    """Color of a block pair = multiset of the pair colors between the two blocks."""
    nb = max(block) + 1 if len(block) else 0
    bags: dict = {}
    n = chi.shape[0]
    for u in range(n):
        for v in range(n):
            bags.setdefault((block[u], block[v]), []).append(int(chi[u, v]))
    keys = [[tuple(sorted(bags[(a, b)])) for b in range(nb)] for a in range(nb)]
    flat = rank([x for row in keys for x in row])
    return np.asarray(flat, dtype=np.int64).reshape(nb, nb)


def wl1_distinguishes(g1: ColoredGraph, g2: ColoredGraph) -> bool:
    """Run color refinement on the disjoint union and compare the two color histograms."""
    col = wl1_stable(disjoint_union(g1, g2))
    return sorted(col[:g1.n]) != sorted(col[g1.n:])


def wl2_distinguishes(g1: ColoredGraph, g2: ColoredGraph) -> bool:
    """2-WL on the disjoint union; compares the diagonal color multisets of the two parts."""
    if g1.n != g2.n:
        return True
    diag = np.diagonal(wl2_stable(disjoint_union(g1, g2))).tolist()
    return sorted(diag[:g1.n]) != sorted(diag[g1.n:])
