"""Slow reference routines the tests compare against.

Everything here is written from definitions only and shares no code with the
package beyond ColoredGraph itself.
"""

from itertools import permutations

from k3hiso.graph import ColoredGraph


def partition(coloring):
    out = {}
    for i, c in enumerate(coloring):
        out.setdefault(c, set()).add(i)
    return frozenset(frozenset(x) for x in out.values())


def _relabel(keys):
    table = {k: i for i, k in enumerate(sorted(set(keys), key=repr))}
    return [table[k] for k in keys]


def naive_wl1(g: ColoredGraph, seed=None):
    col = _relabel([(repr(g.vertex_colors[v]), repr(seed[v]) if seed else "") for v in range(g.n)])
    while True:
        sig = [(col[v], tuple(sorted((col[w], repr(g.arc(v, w)), repr(g.arc(w, v)))
                                     for w in g.adj[v]))) for v in range(g.n)]
        new = _relabel(sig)
        if len(set(new)) == len(set(col)):
            return new
        col = new


def naive_wl2_pairs(g: ColoredGraph, seed=None):
    n = g.n

    def atom(u, v):
        base = (u == v, g.has_edge(u, v), repr(g.vertex_colors[u]), repr(g.vertex_colors[v]),
                repr(g.arc(u, v)) if g.has_edge(u, v) else "",
                repr(g.arc(v, u)) if g.has_edge(u, v) else "")
        if seed is not None:
            base += (repr(seed[u]), repr(seed[v]))
        return base

    pairs = [(u, v) for u in range(n) for v in range(n)]
    col = dict(zip(pairs, _relabel([atom(u, v) for u, v in pairs])))
    while True:
        sig = [(col[(u, v)], tuple(sorted((col[(w, v)], col[(u, w)]) for w in range(n))))
               for u, v in pairs]
        new = dict(zip(pairs, _relabel(sig)))
        if len(set(new.values())) == len(set(col.values())):
            return col
        col = new


def naive_wl2_diagonal(g, seed=None):
    col = naive_wl2_pairs(g, seed)
    return [col[(v, v)] for v in range(g.n)]


def naive_tk_partition(g: ColoredGraph, t: int, k: int, seed=None):
    """Alternate k-WL and splitting of classes of size at most t until nothing changes."""
    cur = list(seed) if seed is not None else [0] * g.n
    refine = naive_wl1 if k == 1 else naive_wl2_diagonal
    while True:
        cur = refine(g, cur)
        sizes = {}
        for c in cur:
            sizes[c] = sizes.get(c, 0) + 1
        split = [(c, v if sizes[c] <= t else -1) for v, c in enumerate(cur)]
        split = _relabel(split)
        if len(set(split)) == len(set(cur)):
            return partition(cur)
        cur = split


def naive_closure(g, xs, t, k):
    seed = [(1, v) if v in set(xs) else (0, 0) for v in range(g.n)]
    return frozenset(next(iter(c)) for c in naive_tk_partition(g, t, k, seed) if len(c) == 1)


def isomorphisms_by_permutation(g1: ColoredGraph, g2: ColoredGraph):
    """Every bijection that is an isomorphism; only for very small graphs."""
    if g1.n != g2.n:
        return []
    out = []
    for phi in permutations(range(g1.n)):
        if any(g1.vertex_colors[v] != g2.vertex_colors[phi[v]] for v in range(g1.n)):
            continue
        ok = len(g1.edges) == len(g2.edges)
        for u, v in g1.edges:
            if not ok:
                break
            if not g2.has_edge(phi[u], phi[v]) or g1.arc(u, v) != g2.arc(phi[u], phi[v]) \
                    or g1.arc(v, u) != g2.arc(phi[v], phi[u]):
                ok = False
        if ok:
            out.append(phi)
    return out


def compose(p, q):
    return tuple(q[x] for x in p)


def group_closure(degree, gens):
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def brute_orbits(degree, elements):
    out = []
    done = set()
    for p in range(degree):
        if p in done:
            continue
        orb = {g[p] for g in elements}
        done |= orb
        out.append(sorted(orb))
    return sorted(out)


def is_3_connected_brute(g: ColoredGraph) -> bool:
    from itertools import combinations
    if g.n < 4:
        return False
    for k in range(3):
        for cut in combinations(range(g.n), k):
            rest = [v for v in range(g.n) if v not in cut]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                v = stack.pop()
                for w in g.adj[v]:
                    if w not in seen and w not in cut:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(rest):
                return False
    return True
