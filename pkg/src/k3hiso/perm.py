"""Permutation groups via a deterministic Schreier-Sims algorithm.

Permutations are tuples ``p`` acting on ``0..d-1`` by ``x -> p[x]``. Products
read left to right: ``compose(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, PreconditionError

Perm = tuple


def identity(d: int) -> Perm:
    return tuple(range(d))


def is_permutation(p: Sequence[int], d: int | None = None) -> bool:
    if d is not None and len(p) != d:
        return False
    return sorted(p) == list(range(len(p)))


def as_perm(p: Sequence[int], d: int | None = None) -> Perm:
    p = tuple(int(x) for x in p)
    if not is_permutation(p, d):
        raise DomainError(f"not a permutation of 0..{(d or len(p)) - 1}: {p!r}")
    return p


def compose(p: Perm, q: Perm) -> Perm:
    """The product ``pq``: first ``p``, then ``q``."""
    return tuple(map(q.__getitem__, p))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def from_cycles(d: int, *cycles: Sequence[int]) -> Perm:
    """Build a permutation from disjoint cycles, e.g. ``from_cycles(4, (0, 1), (2, 3))``."""
    out = list(range(d))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            out[x] = cyc[(i + 1) % len(cyc)]
    return as_perm(out, d)


def support(p: Perm) -> list[int]:
    return [i for i, x in enumerate(p) if i != x]


class PermGroup:
    """A permutation group stored as a base and strong generating set.

    ``transversals[i]`` maps each point of the i-th basic orbit to an element of
    the i-th stabilizer that carries ``base[i]`` to that point.
    """

    def __init__(self, degree: int, base: list[int], strong_gens: list[Perm],
                 transversals: list[dict[int, Perm]], generators: list[Perm]):
        self.degree = degree
        self.base = base
        self.strong_gens = strong_gens
        self.transversals = transversals
        self.generators = generators
        self._order = None

    # construction
    @classmethod
    def from_generators(cls, degree: int, gens: Iterable[Sequence[int]],
                        base: Sequence[int] = ()) -> "PermGroup":
        """Schreier-Sims closure of ``gens``; ``base`` optionally fixes a base prefix."""
        ident = identity(degree)
        clean = []
        for g in gens:
            g = as_perm(g, degree)
            if g != ident and g not in clean:
                clean.append(g)
        base = list(dict.fromkeys(int(b) for b in base))
        for b in base:
            if not 0 <= b < degree:
                raise DomainError(f"base point {b} outside the domain")
        strong = list(clean)
        for g in strong:
            if all(g[b] == b for b in base):
                base.append(support(g)[0])
        levels = _Levels(degree, base, strong)
        levels.schreier_sims()
        return cls(degree, levels.base, levels.strong, levels.transversals, clean)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls.from_generators(degree, [])

    @classmethod
    def symmetric(cls, degree: int, points: Sequence[int] | None = None) -> "PermGroup":
        """Full symmetric group on ``points`` (default: the whole domain)."""
        points = sorted(range(degree) if points is None else points)
        gens = []
        if len(points) >= 2:
            gens.append(_transposition(degree, points[0], points[1]))
        if len(points) >= 3:
            gens.append(from_cycles(degree, points))
        return cls.from_generators(degree, gens, base=points[:-1])

    @classmethod
    def young(cls, degree: int, blocks: Iterable[Sequence[int]]) -> "PermGroup":
        """Direct product of the symmetric groups on the given disjoint blocks."""
        gens = []
        base = []
        for blk in blocks:
            blk = sorted(blk)
            if len(blk) >= 2:
                gens.append(_transposition(degree, blk[0], blk[1]))
                base.extend(blk[:-1])
            if len(blk) >= 3:
                gens.append(from_cycles(degree, blk))
        return cls.from_generators(degree, gens, base=base)

    # queries
    def order(self) -> int:
        if self._order is None:
            out = 1
            for t in self.transversals:
                out *= len(t)
            self._order = out
        return self._order

    def is_trivial(self) -> bool:
        return not self.strong_gens

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        """Strip ``g`` through the stabilizer chain from level ``start``.

        Returns the residue and the level at which stripping stopped.
        """
        for i in range(start, len(self.base)):
            beta = g[self.base[i]]
            u = self.transversals[i].get(beta)
            if u is None:
                return g, i
            g = compose(g, inverse(u))
        return g, len(self.base)

    def contains(self, g: Sequence[int]) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            raise DomainError("permutation has the wrong degree")
        if not is_permutation(g):
            return False
        residue, level = self.sift(g)
        return level == len(self.base) and residue == identity(self.degree)

    __contains__ = contains

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.strong_gens:
            for x, y in enumerate(g):
                a, b = find(x), find(y)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        out: dict = {}
        for x in range(self.degree):
            out.setdefault(find(x), []).append(x)
        return sorted(out.values(), key=lambda o: o[0])

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        stack = [point]
        while stack:
            x = stack.pop()
            for g in self.strong_gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(seen)

    def moved_points(self) -> list[int]:
        moved = set()
        for g in self.strong_gens:
            moved.update(support(g))
        return sorted(moved)

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        """Subgroup fixing every point of ``points``, via a base change putting them first."""
        points = sorted(set(points))
        if not points:
            return self
        rebased = PermGroup.from_generators(self.degree, self.strong_gens, base=points)
        k = len(points)
        fixing = [g for g in rebased.strong_gens if all(g[b] == b for b in points)]
        return PermGroup.from_generators(self.degree, fixing, base=rebased.base[k:])

    def restrict_to_invariant(self, points: Iterable[int]) -> tuple["PermGroup", list[int]]:
        """Induced action on an invariant set, re-indexed to ``0..|A|-1``.

        Returns the group and the list ``index`` with ``index[i]`` the original point.
        """
        index = sorted(set(points))
        pos = {x: i for i, x in enumerate(index)}
        gens = []
        for g in self.strong_gens:
            try:
                gens.append(tuple(pos[g[x]] for x in index))
            except KeyError:
                raise PreconditionError("point set is not invariant under the group") from None
        return PermGroup.from_generators(len(index), gens), index

    def has_two_power_order(self) -> bool:
        o = self.order()
        return o & (o - 1) == 0

    def elements(self) -> Iterator[Perm]:
        """Every element, each exactly once (only sensible for small groups)."""
        levels = [list(t.values()) for t in self.transversals]

        def rec(i, acc):
            if i < 0:
                yield acc
                return
            for u in levels[i]:
                yield from rec(i - 1, compose(acc, u))

        yield from rec(len(levels) - 1, identity(self.degree))

    def random_element(self, rng: random.Random) -> Perm:
        g = identity(self.degree)
        for t in reversed(self.transversals):
            g = compose(g, t[rng.choice(sorted(t))])
        return g

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def _transposition(d: int, a: int, b: int) -> Perm:
    out = list(range(d))
    out[a], out[b] = b, a
    return tuple(out)


class _Levels:
    """Mutable state of the Schreier-Sims construction."""

    def __init__(self, degree, base, strong):
        self.degree = degree
        self.ident = identity(degree)
        self.base = list(base)
        self.strong = list(strong)
        self.transversals = [None] * len(self.base)
        for i in range(len(self.base)):
            self._rebuild(i)

    def _gens_at(self, i):
        fixed = self.base[:i]
        return [g for g in self.strong if all(g[b] == b for b in fixed)]

    def _rebuild(self, i):
        b = self.base[i]
        gens = self._gens_at(i)
        trans = {b: self.ident}
        queue = [b]
        for x in queue:
            ux = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = compose(ux, g)
                    queue.append(y)
        self.transversals[i] = trans

    def _sift(self, g, start):
        for i in range(start, len(self.base)):
            u = self.transversals[i].get(g[self.base[i]])
            if u is None:
                return g, i
            g = compose(g, inverse(u))
        return g, len(self.base)

    def schreier_sims(self):
        i = len(self.base) - 1
        while i >= 0:
            restart = None
            gens = self._gens_at(i)
            trans = self.transversals[i]
            for beta in sorted(trans):
                u = trans[beta]
                for s in gens:
                    us = compose(u, s)
                    h = compose(us, inverse(trans[us[self.base[i]]]))
                    if h == self.ident:
                        continue
                    residue, j = self._sift(h, i + 1)
                    if residue == self.ident:
                        continue
                    self.strong.append(residue)
                    if j == len(self.base):
                        self.base.append(support(residue)[0])
                        self.transversals.append(None)
                    for level in range(i + 1, j + 1):
                        self._rebuild(level)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1


@dataclass(frozen=True)
class IsoCoset:
    """A set of bijections ``{g * rep : g in group}`` (first ``g``, then ``rep``), or empty."""

    group: PermGroup | None
    representative: Perm | None

    @classmethod
    def empty(cls) -> "IsoCoset":
        return cls(None, None)

    @property
    def is_empty(self) -> bool:
        return self.group is None

    def size(self) -> int:
        return 0 if self.is_empty else self.group.order()

    def contains(self, phi: Sequence[int]) -> bool:
        if self.is_empty:
            return False
        phi = tuple(phi)
        if len(phi) != self.group.degree:
            return False
        return self.group.contains(compose(phi, inverse(self.representative)))

    __contains__ = contains

    def elements(self) -> Iterator[Perm]:
        if self.is_empty:
            return
        for g in self.group.elements():
            yield compose(g, self.representative)

    def sample(self, count: int, rng: random.Random) -> list[Perm]:
        if self.is_empty:
            return []
        out = [self.representative]
        for _ in range(max(0, count - 1)):
            out.append(compose(self.group.random_element(rng), self.representative))
        return out
