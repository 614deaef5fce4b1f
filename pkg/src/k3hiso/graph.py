"""Vertex- and arc-colored simple graphs plus the structural helpers built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, InstanceTooLarge

DEFAULT_ARC_COLOR = 0


class ColoredGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    Every vertex carries a color and every arc (ordered edge) carries a color;
    the two arcs of one edge may differ. Colors must be hashable and mutually
    comparable within one graph (ints, or tuples of ints). Instances are
    treated as immutable.
    """

    __slots__ = ("n", "edges", "vertex_colors", "_arc_colors", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 vertex_colors: Sequence | None = None,
                 arc_colors: Mapping[tuple[int, int], object] | None = None):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = frozenset(norm)
        if vertex_colors is None:
            vertex_colors = (0,) * n
        vertex_colors = tuple(vertex_colors)
        if len(vertex_colors) != n:
            raise DomainError("vertex_colors must have one entry per vertex")
        self.vertex_colors = vertex_colors
        adj = [set() for _ in range(n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = tuple(frozenset(a) for a in adj)
        arcs = {}
        if arc_colors:
            for (u, v), c in arc_colors.items():
                if not (0 <= u < n and v in self.adj[u]):
                    raise DomainError(f"arc color given for non-edge ({u}, {v})")
                if c != DEFAULT_ARC_COLOR:
                    arcs[(u, v)] = c
        self._arc_colors = arcs
        self._hash = None

    # basic queries
    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def arc(self, u: int, v: int):
        """Color of the arc ``(u, v)``; only meaningful for edges."""
        return self._arc_colors.get((u, v), DEFAULT_ARC_COLOR)

    @property
    def arc_colors(self) -> dict:
        """Full arc coloring, including default-colored arcs."""
        out = {}
        for u, v in self.edges:
            out[(u, v)] = self.arc(u, v)
            out[(v, u)] = self.arc(v, u)
        return out

    def has_nondefault_arcs(self) -> bool:
        return bool(self._arc_colors)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    # derived graphs
    def with_vertex_colors(self, colors: Sequence) -> "ColoredGraph":
        return ColoredGraph(self.n, self.edges, colors, self._arc_colors)

    def uncolored(self) -> "ColoredGraph":
        return ColoredGraph(self.n, self.edges)

    def relabeled(self, perm: Sequence[int]) -> "ColoredGraph":
        """Image of the graph under ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise DomainError("relabeling must be a permutation of the vertex set")
        colors = [None] * self.n
        for v in range(self.n):
            colors[perm[v]] = self.vertex_colors[v]
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        arcs = {(perm[u], perm[v]): c for (u, v), c in self._arc_colors.items()}
        return ColoredGraph(self.n, edges, colors, arcs)

    def induced(self, vertices: Iterable[int]) -> tuple["ColoredGraph", list[int]]:
        """Induced subgraph on ``vertices``, relabeled to ``0..k-1`` in ascending order.

        Returns the subgraph and the list mapping local ids back to ids of ``self``.
        """
        ids = sorted(set(vertices))
        local = {v: i for i, v in enumerate(ids)}
        edges = []
        arcs = {}
        for v in ids:
            for w in self.adj[v]:
                if w in local:
                    if v < w:
                        edges.append((local[v], local[w]))
                    c = self._arc_colors.get((v, w))
                    if c is not None:
                        arcs[(local[v], local[w])] = c
        colors = [self.vertex_colors[v] for v in ids]
        return ColoredGraph(len(ids), edges, colors, arcs), ids

    def with_edges(self, extra: Iterable[tuple[int, int]], color) -> "ColoredGraph":
        """Add the given edges (both arcs colored ``color``); existing edges are kept as is."""
        edges = set(self.edges)
        arcs = dict(self._arc_colors)
        for u, v in extra:
            key = (u, v) if u < v else (v, u)
            if key in edges:
                continue
            edges.add(key)
            arcs[(u, v)] = color
            arcs[(v, u)] = color
        return ColoredGraph(self.n, edges, self.vertex_colors, arcs)

    # identity
    def _key(self):
        return (self.n, self.vertex_colors, tuple(sorted(self.edges)),
                tuple(sorted(self._arc_colors.items())))

    def __eq__(self, other):
        return isinstance(other, ColoredGraph) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, m={self.m})"


def is_isomorphism(g1: ColoredGraph, g2: ColoredGraph, phi: Sequence[int]) -> bool:
    """Check that ``v -> phi[v]`` maps ``g1`` onto ``g2`` preserving all colors."""
    n = g1.n
    if g2.n != n or len(phi) != n or sorted(phi) != list(range(n)):
        return False
    if g1.m != g2.m:
        return False
    for v in range(n):
        if g1.vertex_colors[v] != g2.vertex_colors[phi[v]]:
            return False
    for u, v in g1.edges:
        a, b = phi[u], phi[v]
        if not g2.has_edge(a, b):
            return False
        if g1.arc(u, v) != g2.arc(a, b) or g1.arc(v, u) != g2.arc(b, a):
            return False
    return True


def _checked(g: ColoredGraph, vertices: Iterable[int]) -> set:
    out = set(vertices)
    for v in out:
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} is outside 0..{g.n - 1}")
    return out


def components_avoiding(g: ColoredGraph, removed: Iterable[int]) -> list[frozenset]:
    """Connected components of ``g - removed``, ordered by their smallest vertex."""
    removed = _checked(g, removed)
    seen = set(removed)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def open_neighborhood(g: ColoredGraph, zs: Iterable[int]) -> frozenset:
    """Vertices outside ``zs`` with a neighbor inside ``zs``."""
    zs = _checked(g, zs)
    out = set()
    for z in zs:
        out |= g.adj[z]
    return frozenset(out - zs)


def is_connected(g: ColoredGraph, removed: Iterable[int] = ()) -> bool:
    removed = set(removed)
    if len(removed) >= g.n:
        return True
    return len(components_avoiding(g, removed)) <= 1


def _biconnected_without(g: ColoredGraph, skip: int) -> bool:
    """Whether ``g - skip`` is connected and has no cut vertex (iterative lowpoint search)."""
    alive = [v for v in range(g.n) if v != skip]
    root = alive[0]
    order = {root: 0}
    low = {root: 0}
    root_children = 0
    stack = [(root, None, iter(g.adj[root]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == skip or w == parent:
                continue
            if w in order:
                low[v] = min(low[v], order[w])
                continue
            order[w] = low[w] = len(order)
            if v == root:
                root_children += 1
            stack.append((w, v, iter(g.adj[w])))
            advanced = True
            break
        if advanced:
            continue
        stack.pop()
        if parent is not None:
            low[parent] = min(low[parent], low[v])
            if parent != root and low[v] >= order[parent]:
                return False
    return len(order) == len(alive) and root_children <= 1


def is_3_connected(g: ColoredGraph) -> bool:
    """At least four vertices and no separator of at most two vertices."""
    if g.n < 4 or any(g.degree(v) < 3 for v in range(g.n)):
        return False
    return all(_biconnected_without(g, v) for v in range(g.n))


def clique_on(g: ColoredGraph, vertices: Iterable[int]) -> ColoredGraph:
    """Make ``vertices`` a clique; added edges get a color below every existing arc color."""
    vertices = sorted(_checked(g, vertices))
    existing = [g.arc(u, v) for u, v in g.edges] + [g.arc(v, u) for u, v in g.edges]
    ints = [c for c in existing if isinstance(c, int)]
    if len(ints) != len(existing):
        raise DomainError("clique_on needs integer arc colors")
    reserved = min(ints, default=DEFAULT_ARC_COLOR) - 1
    return g.with_edges(combinations(vertices, 2), reserved)


# --- K_{3,h} minors --------------------------------------------------------

@dataclass(frozen=True)
class MinorWitness:
    """A K_{3,h} minor model: three disjoint connected branch sets and h vertices
    outside them, each adjacent to all three branch sets."""

    left: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    right: tuple[int, ...]

    def verify(self, g: ColoredGraph, h: int) -> bool:
        sets = [set(b) for b in self.left]
        used = set().union(*sets)
        if any(not b for b in sets) or len(used) != sum(len(b) for b in sets):
            return False
        if len(set(self.right)) < h or used & set(self.right):
            return False
        for b in sets:
            if not is_connected(*g.induced(b)[:1]):
                return False
        return all(any(w in b for w in g.adj[r]) for r in self.right for b in sets)

    def to_dict(self):
        return {"left": [list(b) for b in self.left], "right": list(self.right)}


MINOR_SEARCH_LIMIT = 20


def contains_k3h_minor(g: ColoredGraph, h: int, limit: int = MINOR_SEARCH_LIMIT):
    """Exhaustive K_{3,h} minor search. Returns a :class:`MinorWitness` or ``None``.

    Right-hand branch sets can always be shrunk to single vertices, so the search
    picks ``h`` right vertices and then looks for three disjoint connected sets
    that each touch all of them.
    """
    if h < 1:
        raise DomainError("h must be positive")
    if g.n > limit:
        raise InstanceTooLarge(f"minor search is capped at {limit} vertices, got {g.n}")
    if g.n < h + 3 or g.m < 3 * h:
        return None
    adj = [set(a) for a in g.adj]
    rich = [v for v in range(g.n) if len(adj[v]) >= 3]
    for right in combinations(rich, h):
        rset = set(right)
        targets = []
        ok = True
        for r in right:
            t = frozenset(adj[r] - rset)
            if len(t) < 3:
                ok = False
                break
            targets.append(t)
        if not ok:
            continue
        avail = frozenset(range(g.n)) - rset
        found = _branch_sets(adj, avail, targets, 3)
        if found is not None:
            left = tuple(tuple(sorted(b)) for b in sorted(found, key=min))
            return MinorWitness(left, tuple(right))
    return None


def _branch_sets(adj, avail, targets, k):
    """Find ``k`` disjoint connected subsets of ``avail`` each meeting every target."""
    if k == 0:
        return []
    if any(len(t & avail) < k for t in targets):
        return None
    t0 = min(targets, key=lambda t: (len(t & avail), sorted(t)))
    seeds = sorted(t0 & avail)
    for i, s in enumerate(seeds):
        excluded = set(seeds[:i])
        for b in _hitting_connected_sets(adj, avail, targets, k, s, excluded):
            rest = _branch_sets(adj, avail - b, targets, k - 1)
            if rest is not None:
                return [b] + rest
    return None


def _hitting_connected_sets(adj, avail, targets, k, seed, excluded):
    """Connected sets containing ``seed`` that meet every target, minimal under growth."""

    def hits(b):
        return all(t & b for t in targets)

    def feasible(b):
        rest = avail - b
        return all(len(t & rest) >= k - 1 for t in targets)

    def rec(b, cand, banned):
        if not feasible(b):
            return
        if hits(b):
            yield frozenset(b)
            return
        cand = list(cand)
        for i, v in enumerate(cand):
            nb = b | {v}
            nbanned = banned | set(cand[:i])
            ext = [w for w in cand[i + 1:]]
            seen = set(ext) | nb | nbanned
            for w in sorted(adj[v]):
                if w in avail and w not in seen:
                    ext.append(w)
                    seen.add(w)
            yield from rec(nb, ext, nbanned)

    start = {seed}
    cand = sorted(w for w in adj[seed] if w in avail and w not in excluded)
    yield from rec(start, cand, set(excluded))


def disjoint_union(g1: ColoredGraph, g2: ColoredGraph) -> ColoredGraph:
    """``g1`` on ``0..n1-1`` followed by ``g2`` shifted by ``n1``."""
    off = g1.n
    edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges]
    arcs = {a: g1.arc(*a) for a in g1.arc_colors}
    arcs.update({(u + off, v + off): g2.arc(u, v) for u, v in g2.arc_colors})
    return ColoredGraph(off + g2.n, edges, g1.vertex_colors + g2.vertex_colors, arcs)
