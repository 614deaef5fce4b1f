"""Ground truth and instances: brute-force isomorphism, generators, corpora.

The isomorphism oracle here deliberately shares no code with the refinement
and search routines of the main pipeline.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator

from .errors import GeneratorError, MinorEvidence
from .graph import ColoredGraph, is_3_connected, is_isomorphism


# --- brute-force isomorphism -----------------------------------------------------

def _joint_refine(g1, g2, c1, c2):
    """Refine two colorings together so that equal ids mean the same refined color."""
    arcs1, arcs2 = g1.arc_colors, g2.arc_colors
    while True:
        s1 = [(c1[v], tuple(sorted((repr(arcs1[(v, w)]), repr(arcs1[(w, v)]), c1[w]) for w in g1.adj[v])))
              for v in range(g1.n)]
        s2 = [(c2[v], tuple(sorted((repr(arcs2[(v, w)]), repr(arcs2[(w, v)]), c2[w]) for w in g2.adj[v])))
              for v in range(g2.n)]
        ids = {s: i for i, s in enumerate(sorted(set(s1) | set(s2)))}
        n1 = [ids[s] for s in s1]
        n2 = [ids[s] for s in s2]
        if len(set(n1) | set(n2)) == len(set(c1) | set(c2)):
            return n1, n2
        c1, c2 = n1, n2


def _initial(g1, g2):
    keys = sorted({repr(c) for c in g1.vertex_colors} | {repr(c) for c in g2.vertex_colors})
    ids = {k: i for i, k in enumerate(keys)}
    return ([ids[repr(c)] for c in g1.vertex_colors], [ids[repr(c)] for c in g2.vertex_colors])


def _hist(c):
    out: dict = {}
    for x in c:
        out[x] = out.get(x, 0) + 1
    return out


def _search(g1, g2, c1, c2) -> Iterator[tuple]:
    c1, c2 = _joint_refine(g1, g2, c1, c2)
    if _hist(c1) != _hist(c2):
        return
    cells: dict = {}
    for v, c in enumerate(c1):
        cells.setdefault(c, []).append(v)
    open_cells = [cells[c] for c in sorted(cells) if len(cells[c]) > 1]
    if not open_cells:
        where = {c: w for w, c in enumerate(c2)}
        phi = tuple(where[c] for c in c1)
        if is_isomorphism(g1, g2, phi):
            yield phi
        return
    cell = min(open_cells, key=len)
    v = cell[0]
    fresh = max(max(c1), max(c2)) + 1
    for w in range(g2.n):
        if c2[w] != c1[v]:
            continue
        d1 = list(c1)
        d2 = list(c2)
        d1[v] = fresh
        d2[w] = fresh
        yield from _search(g1, g2, d1, d2)


def all_isomorphisms(g1: ColoredGraph, g2: ColoredGraph) -> Iterator[tuple]:
    """Every color-preserving isomorphism, by exhaustive individualization and backtracking."""
    if g1.n != g2.n or g1.m != g2.m:
        return iter(())
    if g1.n == 0:
        return iter([()])
    c1, c2 = _initial(g1, g2)
    return _search(g1, g2, c1, c2)


def brute_force_iso(g1: ColoredGraph, g2: ColoredGraph) -> tuple | None:
    """One isomorphism ``g1 -> g2`` or ``None``; exhaustive and therefore exact."""
    return next(all_isomorphisms(g1, g2), None)


# --- independent minor test ----------------------------------------------------

def has_k3h_minor_by_contraction(g: ColoredGraph, h: int) -> bool:
    """K_{3,h} minor test by exploring all vertex deletions and edge contractions (small n only)."""
    start = frozenset(g.edges)
    seen = set()
    stack = [(g.n, start)]

    def has_subgraph(n, edges):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        for a, b, c in combinations(range(n), 3):
            if len(adj[a] & adj[b] & adj[c]) >= h:
                return True
        return False

    def relabel(n, edges, drop):
        ids = {}
        for v in range(n):
            if v != drop:
                ids[v] = len(ids)
        return n - 1, frozenset(tuple(sorted((ids[u], ids[v]))) for u, v in edges)

    while stack:
        n, edges = stack.pop()
        if (n, edges) in seen or n < 3 + h:
            continue
        seen.add((n, edges))
        if has_subgraph(n, edges):
            return True
        for x in range(n):
            stack.append(relabel(n, {e for e in edges if x not in e}, x))
        for u, v in edges:
            merged = set()
            for a, b in edges:
                if {a, b} == {u, v}:
                    continue
                a = u if a == v else a
                b = u if b == v else b
                if a != b:
                    merged.add((min(a, b), max(a, b)))
            stack.append(relabel(n, merged, v))
    return False


# --- generators ---------------------------------------------------------------------

def complete_graph(n: int) -> ColoredGraph:
    return ColoredGraph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> ColoredGraph:
    return ColoredGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def torus_grid(rows: int, cols: int, diagonals: bool = False) -> ColoredGraph:
    """Cartesian product of two cycles; with ``diagonals`` each square gets one diagonal."""
    def vid(i, j):
        return (i % rows) * cols + (j % cols)
    edges = set()
    for i in range(rows):
        for j in range(cols):
            for u, v in ((vid(i, j), vid(i + 1, j)), (vid(i, j), vid(i, j + 1))):
                edges.add((min(u, v), max(u, v)))
            if diagonals:
                u, v = vid(i, j), vid(i + 1, j + 1)
                edges.add((min(u, v), max(u, v)))
    return ColoredGraph(rows * cols, edges)


def toroidal_library() -> dict[str, ColoredGraph]:
    """Fixed list of 3-connected graphs embeddable on the torus."""
    return {
        "K5": complete_graph(5),
        "K33": complete_bipartite(3, 3),
        "C3xC3": torus_grid(3, 3),
        "K7": complete_graph(7),
        "C3xC4": torus_grid(3, 4),
        "C4xC4": torus_grid(4, 4),
        "C4xC5": torus_grid(4, 5),
        "T3x4": torus_grid(3, 4, diagonals=True),
        "T4x4": torus_grid(4, 4, diagonals=True),
    }


class _Triangulation:
    def __init__(self):
        self.n = 4
        self.edges = {(a, b) for a, b in combinations(range(4), 2)}
        self.faces = {frozenset(f) for f in combinations(range(4), 3)}

    def insert(self, rng):
        face = rng.choice(sorted(self.faces, key=sorted))
        v = self.n
        self.n += 1
        a, b, c = sorted(face)
        self.faces.remove(face)
        self.faces |= {frozenset((a, b, v)), frozenset((a, c, v)), frozenset((b, c, v))}
        self.edges |= {(a, v), (b, v), (c, v)}

    def flip(self, rng) -> bool:
        a, b = rng.choice(sorted(self.edges))
        sides = [f for f in self.faces if a in f and b in f]
        (c,) = sides[0] - {a, b}
        (d,) = sides[1] - {a, b}
        key = (min(c, d), max(c, d))
        deg = {}
        for u, w in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[w] = deg.get(w, 0) + 1
        if key in self.edges or deg[a] <= 3 or deg[b] <= 3:
            return False
        self.edges.remove((a, b))
        self.edges.add(key)
        self.faces -= set(sides)
        self.faces |= {frozenset((a, c, d)), frozenset((b, c, d))}
        return True


def gen_3connected_planar(n: int, seed: int, flips: int = 0) -> ColoredGraph:
    """Random planar triangulation: vertex insertion into faces starting from K_4, then edge flips."""
    if n < 4:
        raise ValueError("triangulations need at least 4 vertices")
    rng = random.Random(seed)
    tri = _Triangulation()
    while tri.n < n:
        tri.insert(rng)
    done = tries = 0
    while done < flips and tries < 20 * flips + 20:
        tries += 1
        done += tri.flip(rng)
    return ColoredGraph(n, tri.edges)


def permuted_copy(g: ColoredGraph, seed: int | None) -> tuple[ColoredGraph, tuple]:
    """Random relabeling of ``g`` and the permutation used (identity when ``seed`` is None)."""
    perm = list(range(g.n))
    if seed is not None:
        random.Random(seed).shuffle(perm)
    perm = tuple(perm)
    return g.relabeled(perm), perm


def _flip_candidates(g: ColoredGraph):
    """Edges of a triangulation with exactly two common neighbors, paired with the flipped edge."""
    out = []
    for a, b in g.sorted_edges():
        common = sorted(g.adj[a] & g.adj[b])
        if len(common) != 2:
            continue
        c, d = common
        if g.has_edge(c, d) or g.degree(a) <= 3 or g.degree(b) <= 3:
            continue
        out.append(((a, b), (c, d)))
    return out


def _degree_sequence(g):
    return sorted(g.degree(v) for v in range(g.n))


def tweak_nonisomorphic(g: ColoredGraph, seed: int, retries: int = 50) -> ColoredGraph:
    """Flip one edge of a triangulation so that the result is confirmed non-isomorphic to ``g``.

    Flips preserving the degree sequence are tried first, so cheap invariants
    usually cannot tell the two graphs apart. When no flip works, a single edge
    whose removal keeps the graph 3-connected is deleted.
    """
    rng = random.Random(seed)
    cands = _flip_candidates(g)
    rng.shuffle(cands)
    base = _degree_sequence(g)
    tried = 0
    for prefer in (True, False):
        for old, new in cands:
            if tried >= retries:
                break
            edges = (set(g.edges) - {old}) | {new}
            out = ColoredGraph(g.n, edges, g.vertex_colors)
            if (_degree_sequence(out) == base) != prefer:
                continue
            tried += 1
            if is_3_connected(out) and brute_force_iso(g, out) is None:
                return out
    # stacked triangulations may have no flippable edge; drop one instead
    edges = g.sorted_edges()
    rng.shuffle(edges)
    for e in edges[:max(0, retries - tried)]:
        tried += 1
        out = ColoredGraph(g.n, set(g.edges) - {e}, g.vertex_colors)
        if is_3_connected(out):
            return out
    raise GeneratorError(f"no non-isomorphic 3-connected flip found after {tried} tries")


def edge_deleted_pair(g: ColoredGraph, seed: int) -> tuple[ColoredGraph, ColoredGraph] | None:
    """Two single-edge deletions of ``g`` that stay 3-connected and are not isomorphic."""
    rng = random.Random(seed)
    options = []
    for e in g.sorted_edges():
        sub = ColoredGraph(g.n, set(g.edges) - {e}, g.vertex_colors)
        if is_3_connected(sub):
            options.append(sub)
    rng.shuffle(options)
    for a, b in combinations(options, 2):
        if brute_force_iso(a, b) is None:
            return a, b
    return None


def _outer_triangle(n, seed, flips):
    """A triangulation on ``n`` vertices whose face ``{0, 1, 2}`` is never subdivided.

    Returns the edge set and the face list.
    """
    rng = random.Random(seed)
    tri = _Triangulation()
    keep = frozenset((0, 1, 2))
    while tri.n < n:
        face = rng.choice(sorted(tri.faces - {keep}, key=sorted))
        v = tri.n
        tri.n += 1
        a, b, c = sorted(face)
        tri.faces.remove(face)
        tri.faces |= {frozenset((a, b, v)), frozenset((a, c, v)), frozenset((b, c, v))}
        tri.edges |= {(a, v), (b, v), (c, v)}
    for _ in range(flips):
        a, b = rng.choice(sorted(tri.edges))
        if {a, b} <= keep:
            continue
        tri.flip(rng)
    return set(tri.edges), sorted(tri.faces, key=sorted)


def _fan_piece(spec, rng):
    """Edges of a piece described by ``spec``; vertices 0, 1, 2 form its outer triangle."""
    size, fans = (spec, ()) if isinstance(spec, int) else spec
    if size == 3:
        edges, faces = {(0, 1), (0, 2), (1, 2)}, [frozenset((0, 1, 2))]
    else:
        edges, faces = _outer_triangle(size, rng.randrange(2 ** 31), size)
    n = size
    inner = [f for f in faces if f != frozenset((0, 1, 2))] or faces
    hosts = rng.sample(inner, min(len(fans), len(inner)))
    for (copies, blob), face in zip(fans, hosts):
        blob_n, blob_edges = _fan_piece(blob, rng)
        x, y, z = sorted(face)
        for _ in range(copies):
            edges |= {(n + a, n + b) for a, b in blob_edges}
            edges |= {(x, n), (y, n + 1), (z, n + 2)}
            n += blob_n
    return n, edges


def fan_graph(spec, seed: int) -> ColoredGraph:
    """Triangulation with fans of identical blobs glued onto some of its faces.

    ``spec`` is a size or ``(size, [(copies, blob_spec), ...])``: a triangulated
    piece on ``size`` vertices, and for each entry ``copies`` identical blobs
    whose outer corners are joined by a matching to the corners of one face.
    Blobs may carry fans of their own. A fan of ``k`` copies yields a K_{3,k+1}
    minor, and the graph is 3-connected.
    """
    n, edges = _fan_piece(spec, random.Random(seed))
    return ColoredGraph(n, edges)


def hub_fan(blob_sizes, seed: int) -> ColoredGraph:
    """Three hub vertices with one triangulated blob per entry of ``blob_sizes``.

    Each blob's outer corners are joined to the hubs by disjoint edges; ``k``
    blobs give a K_{3,k} minor. Blob size 3 means a bare triangle.
    """
    rng = random.Random(seed)
    edges = set()
    offset = 3
    for size in blob_sizes:
        m, local = _fan_piece(size, rng)
        edges |= {(offset + a, offset + b) for a, b in local}
        corners = [offset, offset + 1, offset + 2]
        rng.shuffle(corners)
        edges |= {(hub, c) for hub, c in zip((0, 1, 2), corners)}
        offset += m
    return ColoredGraph(offset, edges)


def k3h_attachment(n: int, h: int, seed: int) -> ColoredGraph:
    """Planar triangulation with ``h`` extra vertices all joined to the same three vertices.

    The result is 3-connected and contains K_{3,h} as a subgraph.
    """
    base = gen_3connected_planar(n, seed, flips=n)
    rng = random.Random(seed + 1)
    hubs = rng.sample(range(n), 3)
    edges = set(base.edges)
    for i in range(h):
        v = n + i
        edges |= {(hub, v) for hub in hubs}
    return ColoredGraph(n + h, edges)


# --- corpora ----------------------------------------------------------------------------

@dataclass
class CorpusPair:
    g1: ColoredGraph
    g2: ColoredGraph
    expected: bool | None
    tags: dict = field(default_factory=dict)


@dataclass
class Corpus:
    pairs: list[CorpusPair]

    def __len__(self):
        return len(self.pairs)


def _planar_pair(n, seed, kind, flips):
    g = gen_3connected_planar(n, seed, flips=flips)
    tags = {"generator": "planar", "n": n, "seed": seed, "kind": kind, "flips": flips}
    if kind == "permuted":
        g2, _ = permuted_copy(g, seed + 7919)
        return CorpusPair(g, g2, True, tags)
    g2, _ = permuted_copy(tweak_nonisomorphic(g, seed), seed + 7919)
    return CorpusPair(g, g2, False, tags)


def planar_corpus(count: int, seed: int = 0, n_range=(4, 40), h: int = 7) -> Corpus:
    """Alternating permuted copies and confirmed non-isomorphic flips of random triangulations."""
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        n = rng.randint(*n_range)
        s = rng.randrange(2 ** 31)
        flips = rng.choice((0, n, 3 * n))
        kind = "permuted" if len(pairs) % 2 == 0 or n < 6 else "tweak"
        try:
            pair = _planar_pair(n, s, kind, flips)
        except GeneratorError:
            continue
        pair.tags["h"] = h
        pairs.append(pair)
    return Corpus(pairs)


def toroidal_corpus(seed: int = 0, h: int = 7) -> Corpus:
    """Permuted copies of the toroidal library plus non-isomorphic edge-deleted variants."""
    pairs = []
    for i, (name, g) in enumerate(toroidal_library().items()):
        tags = {"generator": "toroidal", "name": name, "seed": seed + i, "h": h}
        g2, _ = permuted_copy(g, seed + i)
        pairs.append(CorpusPair(g, g2, True, dict(tags, kind="permuted")))
        variants = edge_deleted_pair(g, seed + i)
        if variants is not None:
            a, b = variants
            b2, _ = permuted_copy(b, seed + i + 1)
            pairs.append(CorpusPair(a, b2, False, dict(tags, kind="edge-deleted")))
            a2, _ = permuted_copy(a, seed + i + 2)
            pairs.append(CorpusPair(a, a2, True, dict(tags, kind="edge-deleted-permuted")))
    return Corpus(pairs)


def adversarial_corpus(h: int = 7, seed: int = 0) -> Corpus:
    """Inputs containing K_{3,h}: the complete bipartite graphs and triangulations with attachments."""
    pairs = []
    for extra in (0, 1, 2):
        g = complete_bipartite(3, h + extra)
        g2, _ = permuted_copy(g, seed + extra)
        pairs.append(CorpusPair(g, g2, True, {"generator": "K3h", "h": h, "extra": extra,
                                              "minor_evidence_ok": True}))
    for i, n in enumerate((4, 6, 8, 10, 12, 14, 16, 18)):
        g = k3h_attachment(n, h, seed + i)
        g2, _ = permuted_copy(g, seed + 100 + i)
        tags = {"generator": "attachment", "n": n, "h": h, "seed": seed + i,
                "minor_evidence_ok": True}
        pairs.append(CorpusPair(g, g2, True, dict(tags, kind="permuted")))
        other = k3h_attachment(n, h, seed + 1000 + i)
        pairs.append(CorpusPair(g, other, None, dict(tags, kind="independent")))
    return Corpus(pairs)


# --- corpus manifests -----------------------------------------------------------------

def corpus_to_json(corpus: Corpus) -> str:
    from .formats import sidecar_of, to_graph6
    rows = []
    for p in corpus.pairs:
        rows.append({"g1": to_graph6(p.g1), "g2": to_graph6(p.g2), "expected": p.expected,
                     "colors1": sidecar_of(p.g1), "colors2": sidecar_of(p.g2), "tags": p.tags})
    return json.dumps({"pairs": rows}, sort_keys=True, indent=1)


def load_corpus(path: str | Path) -> Corpus:
    from .formats import apply_sidecar, parse_graph6
    data = json.loads(Path(path).read_text())
    pairs = []
    for row in data["pairs"]:
        g1 = parse_graph6(row["g1"])
        g2 = parse_graph6(row["g2"])
        if "colors1" in row:
            g1 = apply_sidecar(g1, row["colors1"])
        if "colors2" in row:
            g2 = apply_sidecar(g2, row["colors2"])
        pairs.append(CorpusPair(g1, g2, row.get("expected"), row.get("tags", {})))
    return Corpus(pairs)


# --- running a corpus ---------------------------------------------------------------------

@dataclass
class PairReport:
    index: int
    oracle: bool
    verdict: str  # "iso", "non-iso" or "minor-evidence"
    agrees: bool
    witness_ok: bool | None
    seconds: float
    tags: dict


@dataclass
class CorpusReport:
    rows: list[PairReport]

    @property
    def mismatches(self) -> list[PairReport]:
        return [r for r in self.rows if not r.agrees]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for r in self.rows:
            row = {"index": r.index, "oracle": r.oracle, "verdict": r.verdict,
                   "agrees": r.agrees, "witness_ok": r.witness_ok, "tags": r.tags}
            if timings:
                row["seconds"] = round(r.seconds, 4)
            rows.append(row)
        return {"pairs": len(self.rows), "mismatches": len(self.mismatches), "rows": rows}

    def table(self) -> str:
        lines = [f"{'#':>4}  {'oracle':>7}  {'verdict':>14}  ok"]
        for r in self.rows:
            lines.append(f"{r.index:>4}  {str(r.oracle):>7}  {r.verdict:>14}  {'yes' if r.agrees else 'NO'}")
        lines.append(f"{len(self.rows)} pairs, {len(self.mismatches)} mismatches")
        return "\n".join(lines)


def run_corpus(corpus: Corpus, engine: str = "fpt", h: int = 7,
               allow_minor_evidence: bool = False) -> CorpusReport:
    """Compare an engine against the brute-force oracle on every pair.

    A minor-evidence outcome counts as agreement only when ``allow_minor_evidence``
    is set or the pair carries the tag ``minor_evidence_ok``.
    """
    from .fpt import isomorphic_k3h_free

    rows = []
    for i, p in enumerate(corpus.pairs):
        truth = brute_force_iso(p.g1, p.g2) is not None
        start = time.perf_counter()
        witness_ok = None
        if engine == "oracle":
            phi = brute_force_iso(p.g1, p.g2)
            verdict = "iso" if phi is not None else "non-iso"
            if phi is not None:
                witness_ok = is_isomorphism(p.g1, p.g2, phi)
        else:
            try:
                res = isomorphic_k3h_free(p.g1, p.g2, p.tags.get("h", h))
                verdict = "iso" if res.isomorphic else "non-iso"
                if res.isomorphic:
                    witness_ok = is_isomorphism(p.g1, p.g2, res.witness)
            except MinorEvidence:
                verdict = "minor-evidence"
        seconds = time.perf_counter() - start
        if verdict == "minor-evidence":
            agrees = allow_minor_evidence or bool(p.tags.get("minor_evidence_ok"))
        else:
            agrees = (verdict == "iso") == truth and witness_ok is not False
        rows.append(PairReport(i, truth, verdict, agrees, witness_ok, seconds, p.tags))
    return CorpusReport(rows)
