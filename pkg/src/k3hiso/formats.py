"""Readers and writers for graph6, DIMACS edge files and the color sidecar."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FormatError
from .graph import ColoredGraph

_HEADER = ">>graph6<<"


def parse_graph6(text: str | bytes) -> ColoredGraph:
    """Decode one graph6 line into an uncolored graph."""
    if isinstance(text, str):
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise FormatError("graph6 text must be ASCII", exc.start) from None
    else:
        data = bytes(text)
    data = data.rstrip(b"\r\n")
    base = 0
    if data.startswith(_HEADER.encode()):
        base = len(_HEADER)
        data = data[base:]
    if not data:
        raise FormatError("empty graph6 string", base)
    for i, b in enumerate(data):
        if not 63 <= b <= 126:
            raise FormatError(f"byte {b!r} outside 63..126", base + i)

    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise FormatError("truncated 36-bit size field", base + len(data))
        n, pos = _bits_to_int(data[2:8]), 8
    else:
        if len(data) < 4:
            raise FormatError("truncated 18-bit size field", base + len(data))
        n, pos = _bits_to_int(data[1:4]), 4

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise FormatError(f"expected {need} edge bytes for n={n}, got {len(body)}",
                          base + pos + min(len(body), need))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    if need:
        pad = need * 6 - nbits
        if (body[-1] - 63) & ((1 << pad) - 1):
            raise FormatError("nonzero padding bits", base + pos + need - 1)
    return ColoredGraph(n, edges)


def _bits_to_int(chunk: bytes) -> int:
    out = 0
    for b in chunk:
        out = (out << 6) | (b - 63)
    return out


def _int_to_bits(value: int, groups: int) -> bytes:
    return bytes(63 + ((value >> (6 * (groups - 1 - i))) & 63) for i in range(groups))


def to_graph6(g: ColoredGraph) -> str:
    """Encode the underlying uncolored graph as graph6 (no header, no newline)."""
    n = g.n
    if n <= 62:
        head = bytes([63 + n])
    elif n <= 258047:
        head = b"~" + _int_to_bits(n, 3)
    else:
        head = b"~~" + _int_to_bits(n, 6)
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = bytes(63 + int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6))
    return (head + body).decode("ascii")


def parse_dimacs(text: str) -> ColoredGraph:
    """Read a DIMACS edge file: ``p edge n m`` followed by 1-indexed ``e u v`` lines."""
    n = None
    edges = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise FormatError("bad problem line", lineno)
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError("non-integer size in problem line", lineno) from None
        elif parts[0] == "e":
            if n is None:
                raise FormatError("edge before problem line", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except (ValueError, IndexError):
                raise FormatError("bad edge line", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise FormatError(f"edge {u} {v} out of range or a loop", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise FormatError(f"unknown line type {parts[0]!r}", lineno)
    if n is None:
        raise FormatError("missing problem line", 0)
    g = ColoredGraph(n, edges)
    if declared is not None and declared not in (g.m, len(edges)):
        raise FormatError(f"problem line declares {declared} edges, found {g.m}", 0)
    return g


def to_dimacs(g: ColoredGraph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def apply_sidecar(g: ColoredGraph, sidecar: dict) -> ColoredGraph:
    """Attach colors from a sidecar mapping ``{"vertex_colors": [...], "arc_colors": [[u, v, c], ...]}``."""
    colors = sidecar.get("vertex_colors")
    if colors is not None:
        if len(colors) != g.n or not all(isinstance(c, int) for c in colors):
            raise FormatError("vertex_colors must list one integer per vertex")
    arcs = {}
    for entry in sidecar.get("arc_colors", []):
        if len(entry) != 3 or not all(isinstance(x, int) for x in entry):
            raise FormatError(f"bad arc color entry {entry!r}")
        u, v, c = entry
        if not (0 <= u < g.n and 0 <= v < g.n and g.has_edge(u, v)):
            raise FormatError(f"arc color for non-edge ({u}, {v})")
        arcs[(u, v)] = c
    return ColoredGraph(g.n, g.edges, colors, arcs)


def sidecar_of(g: ColoredGraph) -> dict:
    arcs = [[u, v, c] for (u, v), c in sorted(g.arc_colors.items()) if c != 0]
    return {"vertex_colors": list(g.vertex_colors), "arc_colors": arcs}


def read_graph(path: str | Path, sidecar: str | Path | None = None) -> ColoredGraph:
    """Load a graph file, choosing DIMACS or graph6 by content.

    A sidecar named ``<path>.colors.json`` is picked up automatically when present.
    """
    path = Path(path)
    raw = path.read_bytes()
    lines = [ln for ln in raw.splitlines() if ln.strip()]
    # graph6 lines never contain whitespace, DIMACS lines always do
    if lines and len(lines[0].split()) > 1:
        g = parse_dimacs(raw.decode("ascii", errors="replace"))
    else:
        if len(lines) != 1:
            raise FormatError("graph6 file must hold exactly one graph", 0)
        g = parse_graph6(lines[0].strip())
    if sidecar is None:
        auto = path.with_name(path.name + ".colors.json")
        if auto.exists():
            sidecar = auto
    if sidecar is not None:
        try:
            data = json.loads(Path(sidecar).read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"sidecar is not valid JSON: {exc.msg}", exc.pos) from None
        g = apply_sidecar(g, data)
    return g
