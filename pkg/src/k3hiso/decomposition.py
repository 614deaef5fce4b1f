"""Isomorphism-invariant rooted tree decompositions with bounded adhesion.

Given a 3-connected graph and a set ``S`` of 3 to ``h`` vertices, :func:`decompose`
builds a rooted tree decomposition whose bags are (2,2)-closures of small
anchor sets and whose adhesion sets have fewer than ``h`` vertices. Failing a
bound that every K_{3,h}-minor-free input satisfies raises :class:`MinorEvidence`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .errors import DecompositionError, DomainError, MinorEvidence, PreconditionError
from .graph import ColoredGraph, components_avoiding, is_3_connected, open_neighborhood
from .tkwl import closure
from .wl import neighbor_table, wl1_stable


@dataclass
class Decomposition:
    """Rooted tree decomposition; node 0 is the root.

    ``lam[v]`` is the sorted tuple of depths of the nodes whose bag holds ``v``.
    """

    n: int
    parent: list[int | None]
    bags: list[frozenset]
    gammas: list[frozenset]
    lam: list[tuple] = field(default_factory=list)
    rebuilt: bool = False

    root = 0

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        out = [[] for _ in self.parent]
        for t, p in enumerate(self.parent):
            if p is not None:
                out[p].append(t)
        return out

    def depths(self) -> list[int]:
        kids = self.children()
        depth = [0] * self.size
        queue = deque([self.root])
        while queue:
            t = queue.popleft()
            for c in kids[t]:
                depth[c] = depth[t] + 1
                queue.append(c)
        return depth

    def adhesion(self, t: int) -> frozenset:
        p = self.parent[t]
        return frozenset() if p is None else self.bags[t] & self.bags[p]

    def adhesion_width(self) -> int:
        return max((len(self.adhesion(t)) for t in range(self.size)), default=0)

    def to_dict(self) -> dict:
        nodes = [{"id": t, "parent": self.parent[t], "bag": sorted(self.bags[t]),
                  "gamma": sorted(self.gammas[t])} for t in range(self.size)]
        return {"root": self.root, "nodes": nodes,
                "lambda": {str(v): list(d) for v, d in enumerate(self.lam)}}

    @classmethod
    def from_dict(cls, data: dict, n: int) -> "Decomposition":
        nodes = sorted(data["nodes"], key=lambda x: x["id"])
        lam = [tuple(data.get("lambda", {}).get(str(v), ())) for v in range(n)]
        return cls(n, [x["parent"] for x in nodes], [frozenset(x["bag"]) for x in nodes],
                   [frozenset(x["gamma"]) for x in nodes], lam)


def canonical_shape(d: Decomposition, perm=None):
    """Nested tuple describing the tree with its bags and anchors, independent of node ids.

    With ``perm`` the vertex ids are first mapped through it, so that
    ``canonical_shape(d, pi) == canonical_shape(d2)`` checks equivariance.
    """
    f = (lambda v: v) if perm is None else perm.__getitem__
    kids = d.children()

    def key(t):
        return (tuple(sorted(map(f, d.bags[t]))), tuple(sorted(map(f, d.gammas[t]))),
                tuple(sorted(key(c) for c in kids[t])))

    return key(d.root)


# --- anchor sets ---------------------------------------------------------------

def _triple_seed(n, s, triple):
    seed = [1 if v in s else 0 for v in range(n)]
    for i, v in enumerate(triple):
        seed[v] = 2 + i
    return seed


def _pick(g, s, triple, h, table):
    chi = wl1_stable(g, _triple_seed(g.n, s, triple), table=table)
    used = {chi[v] for v in s}
    size: dict = {}
    for c in chi:
        size[c] = size.get(c, 0) + 1
    ok = [c for c in size if c not in used and size[c] <= h - 1]
    if not ok:
        raise MinorEvidence("small-class", h, s,
                            f"no color class outside S of size below {h} after fixing {tuple(triple)}")
    best = min(ok)
    return frozenset(v for v, c in enumerate(chi) if c == best)


def small_class_pick(g: ColoredGraph, s, v1: int, v2: int, v3: int, h: int) -> frozenset:
    """Smallest-colored class of size at most ``h-1`` outside ``S`` after individualizing the triple."""
    s = frozenset(s)
    triple = (v1, v2, v3)
    if len(set(triple)) != 3 or not set(triple) <= s:
        raise DomainError("v1, v2, v3 must be distinct vertices of S")
    return _pick(g, s, triple, h, neighbor_table(g))


def gamma_root(g: ColoredGraph, s, h: int) -> frozenset:
    """``S`` together with the picked class of every ordered triple of distinct vertices of ``S``."""
    s = frozenset(s)
    if not 3 <= len(s) <= h:
        raise DomainError(f"need 3 <= |S| <= h, got |S|={len(s)}, h={h}")
    table = neighbor_table(g)
    out = set(s)
    for triple in permutations(sorted(s), 3):
        out |= _pick(g, s, triple, h, table)
    return frozenset(out)


# --- construction --------------------------------------------------------------

class _Builder:
    """Recursive construction; every child graph is cut from the input graph itself.

    A child instance is ``g[S_i | Z_i]`` with ``S_i`` turned into a clique whose
    new edges carry one reserved arc color, so each subtree depends only on its
    own vertex set and adhesion set.
    """

    def __init__(self, g: ColoredGraph, h: int):
        self.g = g
        self.h = h
        arcs = [c for c in g.arc_colors.values()]
        if not all(isinstance(c, int) for c in arcs):
            raise DomainError("decomposition needs integer arc colors")
        self.reserved = min(arcs, default=0) - 1
        self.parent: list = []
        self.bags: list = []
        self.gammas: list = []

    def _node(self, parent, bag, gamma) -> int:
        self.parent.append(parent)
        self.bags.append(frozenset(bag))
        self.gammas.append(frozenset(gamma))
        return len(self.parent) - 1

    def _instance(self, vertices, s, top):
        if top:
            return self.g, list(range(self.g.n))
        sub, ids = self.g.induced(vertices)
        pos = {v: i for i, v in enumerate(ids)}
        local = sorted(pos[v] for v in s)
        return sub.with_edges(combinations(local, 2), self.reserved), ids

    def build(self, vertices: frozenset, s: frozenset, parent, top=False):
        h = self.h
        g, ids = self._instance(vertices, s, top)
        pos = {v: i for i, v in enumerate(ids)}
        s_local = frozenset(pos[v] for v in s)
        gamma = gamma_root(g, s_local, h)
        beta = closure(g, gamma, 2, 2)
        t = self._node(parent, (ids[v] for v in beta), (ids[v] for v in gamma))
        for z in components_avoiding(g, beta):
            si = open_neighborhood(g, z)
            child_s = frozenset(ids[v] for v in si)
            if len(si) >= h:
                raise MinorEvidence("separator", h, child_s,
                                    f"component of size {len(z)} has {len(si)} neighbors in its parent bag")
            if len(si) < 3:
                raise DecompositionError("separator of size below 3; input is not 3-connected")
            child_v = frozenset(ids[v] for v in si | z)
            if not (len(child_v) < len(vertices) or len(child_s) > len(s)):
                raise MinorEvidence("progress", h, child_s,
                                    "recursion neither shrank the graph nor grew S")
            self.build(child_v, child_s, t)
        return t

    def regroup(self):
        """Give every node children with pairwise distinct adhesion sets, or all equal to its bag."""
        kids: dict = {}
        for t, p in enumerate(self.parent):
            if p is not None:
                kids.setdefault(p, []).append(t)
        for t in sorted(kids):
            groups: dict = {}
            for c in kids[t]:
                groups.setdefault(self.bags[c] & self.bags[t], []).append(c)
            if len(groups) == 1 and next(iter(groups)) == self.bags[t]:
                continue
            for adh, members in groups.items():
                if len(members) < 2:
                    continue
                s = self._node(t, adh, adh)
                for c in members:
                    self.parent[c] = s

    def finish(self, n) -> Decomposition:
        d = Decomposition(n, list(self.parent), list(self.bags), list(self.gammas))
        depth = d.depths()
        lam = [set() for _ in range(n)]
        for t, bag in enumerate(d.bags):
            for v in bag:
                lam[v].add(depth[t])
        d.lam = [tuple(sorted(x)) for x in lam]
        return d


def _build(g: ColoredGraph, s: frozenset, h: int) -> Decomposition:
    b = _Builder(g, h)
    b.build(frozenset(range(g.n)), s, None, top=True)
    b.regroup()
    return b.finish(g.n)


def lambda_colored(g: ColoredGraph, d: Decomposition) -> ColoredGraph:
    """``g`` with every vertex color paired with its depth set."""
    return g.with_vertex_colors([(c, d.lam[v]) for v, c in enumerate(g.vertex_colors)])


def _closure_failures(g: ColoredGraph, d: Decomposition) -> list[int]:
    gl = lambda_colored(g, d)
    return [t for t in range(d.size) if not d.bags[t] <= closure(gl, d.gammas[t], 2, 2)]


def decompose(g: ColoredGraph, s, h: int, *, check_connectivity: bool = True,
              check_closure: bool = True) -> Decomposition:
    """Rooted tree decomposition of ``g`` anchored at ``S`` with adhesion below ``h``.

    When ``check_closure`` is set, every bag is checked to lie in the (2,2)-closure
    of its anchor set in ``g`` colored by the final depth sets. On failure the
    construction is repeated once on the depth-colored graph.
    """
    s = frozenset(s)
    if h < 3:
        raise DomainError("h must be at least 3")
    if not 3 <= len(s) <= h:
        raise DomainError(f"need 3 <= |S| <= h, got |S|={len(s)}, h={h}")
    if any(not 0 <= v < g.n for v in s):
        raise DomainError("S contains a vertex outside the graph")
    if check_connectivity and not is_3_connected(g):
        raise PreconditionError("graph is not 3-connected")
    d = _build(g, s, h)
    if check_closure and _closure_failures(g, d):
        d = _build(lambda_colored(g, d), s, h)
        d.rebuilt = True
        bad = _closure_failures(g, d)
        if bad:
            raise DecompositionError(f"bags not covered by the closure of their anchors at nodes {bad}")
    return d


# --- validation ------------------------------------------------------------------

@dataclass
class ItemResult:
    ok: bool
    node: int | None = None
    detail: str = ""


@dataclass
class VerificationReport:
    items: dict[str, ItemResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.items.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.items.items() if not r.ok]

    def to_dict(self) -> dict:
        return {k: {"ok": r.ok, "node": r.node, "detail": r.detail} for k, r in self.items.items()}


def _tree_ok(d: Decomposition) -> ItemResult:
    if d.size == 0 or d.parent[0] is not None:
        return ItemResult(False, 0, "node 0 must be the root")
    for t in range(1, d.size):
        seen = set()
        x = t
        while x is not None:
            if x in seen or not 0 <= x < d.size:
                return ItemResult(False, t, "parent pointers do not form a tree")
            seen.add(x)
            x = d.parent[x]
        if 0 not in seen:
            return ItemResult(False, t, "node not below the root")
    return ItemResult(True)


def verify_decomposition(g: ColoredGraph, d: Decomposition, s, h: int, *,
                         check_closure: bool = True) -> VerificationReport:
    """Check the tree-decomposition axioms and the bounds on size, adhesion, anchors and closures."""
    s = frozenset(s)
    items: dict = {"tree": _tree_ok(d)}
    if not items["tree"].ok:
        return VerificationReport(items)
    kids = d.children()

    # T.1: every vertex and every edge of g lies in some bag
    res = ItemResult(True)
    covered = set().union(*d.bags)
    missing = set(range(g.n)) - covered
    if missing:
        res = ItemResult(False, None, f"vertex {min(missing)} in no bag")
    else:
        for u, v in g.sorted_edges():
            if not any(u in b and v in b for b in d.bags):
                res = ItemResult(False, None, f"edge {u}-{v} in no bag")
                break
    items["T.1"] = res

    # T.2: nodes holding a vertex form a subtree
    res = ItemResult(True)
    for v in range(g.n):
        holding = [t for t in range(d.size) if v in d.bags[t]]
        tops = [t for t in holding if d.parent[t] is None or v not in d.bags[d.parent[t]]]
        if len(tops) > 1:
            res = ItemResult(False, tops[1], f"nodes holding vertex {v} are disconnected")
            break
    items["T.2"] = res

    items["I"] = ItemResult(d.size <= 2 * g.n, None, f"{d.size} nodes for {g.n} vertices")

    res = ItemResult(True)
    for t in range(d.size):
        if len(d.adhesion(t)) > h - 1:
            res = ItemResult(False, t, f"adhesion {len(d.adhesion(t))} exceeds {h - 1}")
            break
    items["II"] = res

    res = ItemResult(True)
    for t in range(d.size):
        adh = [d.bags[c] & d.bags[t] for c in kids[t]]
        if all(a == d.bags[t] for a in adh) or len(set(adh)) == len(adh):
            continue
        res = ItemResult(False, t, "children share an adhesion set that is not the whole bag")
        break
    items["III"] = res

    items["IV"] = ItemResult(s < d.gammas[0], 0, "" if s < d.gammas[0] else "S is not a proper subset of the root anchors")

    res = ItemResult(True)
    for t in range(d.size):
        if len(d.gammas[t]) > h ** 4:
            res = ItemResult(False, t, f"anchor set of size {len(d.gammas[t])}")
            break
    items["V"] = res

    res = ItemResult(True)
    for t in range(1, d.size):
        if not (d.adhesion(t) <= d.gammas[t] <= d.bags[t]):
            res = ItemResult(False, t, "anchor set does not sit between adhesion set and bag")
            break
    items["VI"] = res

    if check_closure:
        bad = _closure_failures(g, d)
        items["VII"] = ItemResult(not bad, bad[0] if bad else None,
                                  "bag outside the closure of its anchors" if bad else "")
    return VerificationReport(items)


def verify_separator_bound(g: ColoredGraph, xs, h: int) -> bool:
    """True iff every component of ``g`` minus the (2,2)-closure of ``xs`` has fewer than ``h`` neighbors."""
    d = closure(g, xs, 2, 2)
    return all(len(open_neighborhood(g, z)) < h for z in components_avoiding(g, d))
