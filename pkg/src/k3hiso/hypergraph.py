"""Isomorphisms of hypergraphs and colored graphs restricted to a coset ``Gamma theta``.

Two search engines live here.

* :func:`iso_coset_hypergraph` / :func:`iso_coset_colored_graph` walk the
  base-image tree of a given group ``Gamma`` and return exactly
  ``{phi in Gamma theta : phi is an isomorphism}``.
* :func:`refinement_isomorphisms` is an individualization-refinement search
  returning the full isomorphism coset of two colored graphs; it is the
  special case where ``Gamma`` is the symmetric group on each color class.

Both build the automorphism part level by level: once an automorphism is found
for a branch, points in its orbit are skipped, so the returned group is the
complete stabilizer inside ``Gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import DomainError
from .graph import ColoredGraph, is_isomorphism
from .perm import IsoCoset, Perm, PermGroup, as_perm, compose, identity, support
from .wl import histogram, neighbor_table, wl1_stable

REFINE_THRESHOLD = 5000


@dataclass(frozen=True)
class Hypergraph:
    """Vertices ``0..n-1`` and a set of colored hyperedges ``(frozenset, color)``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def build(cls, n: int, edges: Iterable, colors: Sequence | None = None) -> "Hypergraph":
        edges = [frozenset(int(x) for x in e) for e in edges]
        colors = [0] * len(edges) if colors is None else list(colors)
        if len(colors) != len(edges):
            raise DomainError("one color per hyperedge expected")
        out = set()
        for e, c in zip(edges, colors):
            if any(not 0 <= x < n for x in e):
                raise DomainError("hyperedge point outside the vertex range")
            out.add((e, c))
        return cls(n, frozenset(out))

    def image(self, phi: Sequence[int]) -> frozenset:
        return frozenset((frozenset(phi[x] for x in e), c) for e, c in self.edges)


def is_hypergraph_isomorphism(h1: Hypergraph, h2: Hypergraph, phi: Sequence[int]) -> bool:
    return h1.n == h2.n and len(h1.edges) == len(h2.edges) and h1.image(phi) == h2.edges


# --- structures seen by the search --------------------------------------------

class _GraphView:
    def __init__(self, g: ColoredGraph):
        self.g = g
        self.n = g.n
        self._table = None
        self.degree = [g.degree(v) for v in range(g.n)]

    def check(self, other: "_GraphView", phi, new, mask) -> bool:
        g1, g2 = self.g, other.g
        for x in new:
            y = phi[x]
            if g1.vertex_colors[x] != g2.vertex_colors[y] or self.degree[x] != other.degree[y]:
                return False
        for x in new:
            y = phi[x]
            for z in range(self.n):
                if not mask[z] or z == x:
                    continue
                w = phi[z]
                e1 = g1.has_edge(x, z)
                if e1 != g2.has_edge(y, w):
                    return False
                if e1 and (g1.arc(x, z) != g2.arc(y, w) or g1.arc(z, x) != g2.arc(w, y)):
                    return False
        return True

    def refine(self, labels: dict) -> list[int]:
        if self._table is None:
            self._table = neighbor_table(self.g)
        seed = [labels.get(v, -1) for v in range(self.n)]
        return wl1_stable(self.g, seed, table=self._table)

    def is_iso(self, other: "_GraphView", phi) -> bool:
        return is_isomorphism(self.g, other.g, phi)


class _HyperView:
    def __init__(self, h: Hypergraph):
        self.h = h
        self.n = h.n
        self.edge_list = sorted(h.edges, key=lambda ec: (sorted(ec[0]), repr(ec[1])))
        self.incident = [[] for _ in range(h.n)]
        for i, (e, _) in enumerate(self.edge_list):
            for x in e:
                self.incident[x].append(i)
        self.degree = [len(a) for a in self.incident]
        self._incidence = None

    def check(self, other: "_HyperView", phi, new, mask) -> bool:
        for x in new:
            if self.degree[x] != other.degree[phi[x]]:
                return False
        inv = {}
        for x in range(self.n):
            if mask[x]:
                inv[phi[x]] = x
        done = set()
        for x in new:
            for i in self.incident[x]:
                if i in done:
                    continue
                done.add(i)
                e, c = self.edge_list[i]
                if all(mask[z] for z in e):
                    if (frozenset(phi[z] for z in e), c) not in other.h.edges:
                        return False
            for i in other.incident[phi[x]]:
                e, c = other.edge_list[i]
                if all(z in inv for z in e):
                    if (frozenset(inv[z] for z in e), c) not in self.h.edges:
                        return False
        return True

    def refine(self, labels: dict) -> list[int]:
        if self._incidence is None:
            m = len(self.edge_list)
            edges = [(x, self.n + i) for i, (e, _) in enumerate(self.edge_list) for x in e]
            colors = [(0, 0)] * self.n + [(1, repr(c)) for _, c in self.edge_list]
            self._incidence = ColoredGraph(self.n + m, edges, colors)
            self._table = neighbor_table(self._incidence)
        seed = [labels.get(v, -1) for v in range(self.n)] + [-1] * len(self.edge_list)
        return wl1_stable(self._incidence, seed, table=self._table)[:self.n]

    def is_iso(self, other: "_HyperView", phi) -> bool:
        return is_hypergraph_isomorphism(self.h, other.h, phi)


# --- base-image search over a BSGS --------------------------------------------

class _CosetSearch:
    def __init__(self, s1, s2, group: PermGroup, theta: Perm, refine: bool):
        self.s1, self.s2 = s1, s2
        self.theta = theta
        d = group.degree
        moved = group.moved_points()
        order = sorted(moved, key=lambda x: (-s1.degree[x], x))
        self.group = PermGroup.from_generators(d, group.strong_gens, base=order) if moved else group
        self.base = self.group.base
        self.trans = self.group.transversals
        k = len(self.base)
        # determined[i]: points fixed by the i-th stabilizer in the chain
        self.fixed_after = []
        for i in range(k + 1):
            gens = [g for g in self.group.strong_gens if all(g[b] == b for b in self.base[:i])]
            moved_i = set()
            for g in gens:
                moved_i.update(support(g))
            self.fixed_after.append(frozenset(range(d)) - moved_i)
        self.refine = refine
        self.ident = identity(d)
        self.nodes = 0

    def _labels(self, phi, mask):
        lab1, lab2 = {}, {}
        for x in range(len(mask)):
            if mask[x]:
                lab1[x] = x
                lab2[phi[x]] = x
        return lab1, lab2

    def _mask(self, level):
        return [x in self.fixed_after[level] for x in range(len(self.ident))]

    def find_iso(self):
        """First element of ``Gamma theta`` that is an isomorphism, or ``None``."""
        mask = self._mask(0)
        phi = self.theta
        new = [x for x in range(len(mask)) if mask[x]]
        if not self.s1.check(self.s2, phi, new, mask):
            return None
        return self._dfs(0, self.ident, self.theta, self.s2, mask, None)

    def find_aut(self, level, beta):
        """An automorphism in the level stabilizer sending ``base[level]`` to ``beta``."""
        return self._dfs(level, self.ident, self.ident, self.s1, self._mask(level), beta)

    def _dfs(self, level, p, theta, target, mask, first):
        self.nodes += 1
        k = len(self.base)
        if level == k:
            phi = compose(p, theta)
            return phi if self.s1.is_iso(target, phi) else None
        cand = sorted(self.trans[level]) if first is None else [first]
        colors = None
        if self.refine:
            phi = compose(p, theta)
            lab1, lab2 = self._labels(phi, mask)
            c1 = self.s1.refine(lab1)
            c2 = target.refine(lab2)
            if histogram(c1) != histogram(c2):
                return None
            colors = (c1, c2)
        new_fixed = self.fixed_after[level + 1] - self.fixed_after[level]
        for beta in cand:
            u = self.trans[level][beta]
            q = compose(u, p)
            phi = compose(q, theta)
            if colors is not None and any(colors[0][x] != colors[1][phi[x]] for x in new_fixed):
                continue
            nmask = list(mask)
            for x in new_fixed:
                nmask[x] = True
            if not self.s1.check(target, phi, sorted(new_fixed), nmask):
                continue
            found = self._dfs(level + 1, q, theta, target, nmask, None)
            if found is not None:
                return found
        return None

    def run(self) -> IsoCoset:
        rep = self.find_iso()
        if rep is None:
            return IsoCoset.empty()
        gens_by_level: list[list[Perm]] = [[] for _ in self.base]
        for i in reversed(range(len(self.base))):
            b = self.base[i]
            known = [g for lvl in gens_by_level[i:] for g in lvl]
            reach = _orbit(b, known)
            failed: set = set()
            for beta in sorted(self.trans[i]):
                if beta in reach or beta in failed:
                    continue
                g = self.find_aut(i, beta)
                if g is None:
                    failed |= _orbit(beta, known)
                else:
                    gens_by_level[i].append(g)
                    known.append(g)
                    reach = _orbit(b, known)
        gens = [g for lvl in gens_by_level for g in lvl]
        return IsoCoset(PermGroup.from_generators(self.group.degree, gens), rep)


def _orbit(point: int, gens: list[Perm]) -> set:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _check_domains(n1, n2, group, theta):
    if n1 != n2:
        raise DomainError("structures have different vertex counts")
    if group.degree != n1:
        raise DomainError("group degree differs from the vertex count")
    return as_perm(theta, n1)


def iso_coset_hypergraph(h1: Hypergraph, h2: Hypergraph, group: PermGroup,
                         theta: Sequence[int], refine: bool | None = None) -> IsoCoset:
    """All hypergraph isomorphisms ``h1 -> h2`` inside the coset ``group * theta``."""
    theta = _check_domains(h1.n, h2.n, group, theta)
    if len(h1.edges) != len(h2.edges):
        return IsoCoset.empty()
    if refine is None:
        refine = group.order() > REFINE_THRESHOLD
    return _CosetSearch(_HyperView(h1), _HyperView(h2), group, theta, refine).run()


def iso_coset_colored_graph(g1: ColoredGraph, g2: ColoredGraph, group: PermGroup,
                            theta: Sequence[int], refine: bool | None = None) -> IsoCoset:
    """All color-preserving isomorphisms ``g1 -> g2`` inside the coset ``group * theta``."""
    theta = _check_domains(g1.n, g2.n, group, theta)
    if g1.m != g2.m or sorted(g1.vertex_colors) != sorted(g2.vertex_colors):
        return IsoCoset.empty()
    if refine is None:
        refine = group.order() > REFINE_THRESHOLD
    return _CosetSearch(_GraphView(g1), _GraphView(g2), group, theta, refine).run()


# --- individualization-refinement ---------------------------------------------

Refiner = Callable[[ColoredGraph, Sequence | None], list]


def _wl1_refiner(g: ColoredGraph):
    table = neighbor_table(g)

    def refine(seed):
        return wl1_stable(g, seed, table=table)

    return refine


def _individualize(coloring, v):
    seed = [(c, 0) for c in coloring]
    seed[v] = (coloring[v], 1)
    return seed


def _target_cell(coloring):
    cells: dict = {}
    for v, c in enumerate(coloring):
        cells.setdefault(c, []).append(v)
    best = None
    for c, vs in cells.items():
        if len(vs) > 1 and (best is None or (len(vs), c) < best[0]):
            best = ((len(vs), c), vs)
    return None if best is None else sorted(best[1])


class _IRSearch:
    def __init__(self, g1, g2, refine1, refine2):
        self.g1, self.g2 = g1, g2
        self.refine = {id(g1): refine1, id(g2): refine2}
        self.path = []
        self.invariants = []
        self.nodes = 0

    def _refine(self, g, seed):
        return self.refine[id(g)](seed)

    def first_path(self):
        col = self._refine(self.g1, None)
        while True:
            self.invariants.append(histogram(col))
            cell = _target_cell(col)
            self.path.append((col, cell))
            if cell is None:
                break
            col = self._refine(self.g1, _individualize(col, cell[0]))
        self.leaf = col

    def leaf_map(self, other_leaf):
        where = {c: v for v, c in enumerate(other_leaf)}
        return tuple(where[c] for c in self.leaf)

    def find(self, g, col, depth, check):
        self.nodes += 1
        if depth >= len(self.invariants) or histogram(col) != self.invariants[depth]:
            return None
        cell = _target_cell(col)
        if cell is None:
            phi = self.leaf_map(col)
            return phi if check(phi) else None
        for w in cell:
            found = self.find(g, self._refine(g, _individualize(col, w)), depth + 1, check)
            if found is not None:
                return found
        return None

    def run(self) -> IsoCoset:
        g1, g2 = self.g1, self.g2
        self.first_path()
        rep = self.find(g2, self._refine(g2, None), 0, lambda phi: is_isomorphism(g1, g2, phi))
        if rep is None:
            return IsoCoset.empty()
        gens_by_level: list[list[Perm]] = [[] for _ in self.path]
        is_aut = lambda phi: is_isomorphism(g1, g1, phi)
        for i in reversed(range(len(self.path) - 1)):
            col, cell = self.path[i]
            v = cell[0]
            known = [g for lvl in gens_by_level[i:] for g in lvl]
            reach = _orbit(v, known)
            failed: set = set()
            for w in cell[1:]:
                if w in reach or w in failed:
                    continue
                g = self.find(g1, self._refine(g1, _individualize(col, w)), i + 1, is_aut)
                known = [x for lvl in gens_by_level[i:] for x in lvl]
                if g is None:
                    failed |= _orbit(w, known)
                else:
                    gens_by_level[i].append(g)
                    known.append(g)
                    reach = _orbit(v, known)
        gens = [g for lvl in gens_by_level for g in lvl]
        return IsoCoset(PermGroup.from_generators(g1.n, gens), rep)


def refinement_isomorphisms(g1: ColoredGraph, g2: ColoredGraph, refiner=None) -> IsoCoset:
    """Exact isomorphism coset of two colored graphs by individualization-refinement.

    ``refiner(g)`` must return a function ``seed -> canonical coloring`` whose
    colors are isomorphism-invariant; the default is color refinement.
    """
    if g1.n != g2.n or g1.m != g2.m or sorted(g1.vertex_colors) != sorted(g2.vertex_colors):
        return IsoCoset.empty()
    make = refiner or _wl1_refiner
    r1 = make(g1)
    r2 = r1 if g2 is g1 else make(g2)
    return _IRSearch(g1, g2, r1, r2).run()
