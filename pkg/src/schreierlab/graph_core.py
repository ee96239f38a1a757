"""Labeled Schreier graphs, rooted balls, canonical ball patterns and the
ball-agreement ultrametric.

Every generator acts on the vertex set as a deterministic partial map, so a
breadth-first traversal from the root that visits generators in index order
numbers the vertices of a ball canonically. Two rooted colored graphs have
isomorphic r-balls exactly when these traversals produce the same encoding.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import IncomparableError

__all__ = [
    "GeneratorSet",
    "SchreierGraph",
    "Coloring",
    "Rooted",
    "BallPattern",
    "validate",
    "ball",
    "bfs_distances",
    "canonical_pattern",
    "rooted_isomorphic",
    "distance",
    "forget_colors",
    "colors_of",
]


@dataclass(frozen=True)
class GeneratorSet:
    """Generator symbols ``0..count-1`` with an involutive inverse pairing.

    ``inv[i]`` is the symbol of the inverse of generator ``i``. A symbol paired
    with itself is an involution.
    """

    inv: tuple

    def __post_init__(self):
        inv = tuple(int(j) for j in self.inv)
        object.__setattr__(self, "inv", inv)
        if not inv:
            raise ValueError("a generator set needs at least one symbol")
        n = len(inv)
        for i, j in enumerate(inv):
            if not 0 <= j < n or inv[j] != i:
                raise ValueError(f"inverse pairing is not an involution at symbol {i}")

    @property
    def count(self) -> int:
        return len(self.inv)

    @classmethod
    def paired(cls, k: int) -> "GeneratorSet":
        """``k`` free generators and their inverses as symbols ``(2j, 2j+1)``."""
        inv = []
        for j in range(k):
            inv += [2 * j + 1, 2 * j]
        return cls(tuple(inv))

    @classmethod
    def from_pairs(cls, pairs) -> "GeneratorSet":
        pairs = [tuple(p) for p in pairs]
        inv = [None] * len(pairs)
        for i, j in pairs:
            if not 0 <= i < len(pairs) or inv[i] is not None:
                raise ValueError(f"bad generator pair {(i, j)}")
            inv[i] = j
        return cls(tuple(inv))

    def pairs(self):
        return [[i, j] for i, j in enumerate(self.inv)]

    def forward_symbols(self):
        """One representative per inverse pair (the smaller index)."""
        return [i for i, j in enumerate(self.inv) if i <= j]


@dataclass(frozen=True)
class SchreierGraph:
    """Finite labeled graph; ``act[i][u]`` is the image of vertex ``u`` under
    generator ``i`` or ``None`` when the edge is absent (truncation)."""

    gens: GeneratorSet
    n_vertices: int
    act: tuple
    complete: bool = True

    def __post_init__(self):
        object.__setattr__(self, "act", tuple(tuple(m) for m in self.act))

    @classmethod
    def from_maps(cls, gens: GeneratorSet, n: int, maps: dict) -> "SchreierGraph":
        """Build from one map per inverse pair; partner maps are derived.

        ``maps`` sends a generator symbol to a sequence of targets (``None``
        for absent). For an involutive symbol the given map must itself be an
        involution; that is checked by :func:`validate`, not here.
        """
        act = [None] * gens.count
        for i, m in maps.items():
            m = list(m)
            if len(m) != n:
                raise ValueError(f"map for generator {i} has length {len(m)}, expected {n}")
            act[i] = m
            j = gens.inv[i]
            if j != i:
                back = [None] * n
                for u, v in enumerate(m):
                    if v is not None:
                        back[v] = u
                act[j] = back
        missing = [i for i, m in enumerate(act) if m is None]
        if missing:
            raise ValueError(f"no map given for generators {missing}")
        complete = all(v is not None for m in act for v in m)
        return cls(gens, n, tuple(tuple(m) for m in act), complete)

    @cached_property
    def neighbors(self) -> tuple:
        """Sorted neighbor tuples of the underlying undirected simple graph (loops dropped)."""
        nb = [set() for _ in range(self.n_vertices)]
        for m in self.act:
            for u, v in enumerate(m):
                if v is not None and v != u:
                    nb[u].add(v)
                    nb[v].add(u)
        return tuple(tuple(sorted(s)) for s in nb)

    def max_degree(self) -> int:
        return max((len(s) for s in self.neighbors), default=0)

    def edge_count(self) -> int:
        """Number of directed labeled edges, counting each inverse pair once."""
        total = 0
        for i in self.gens.forward_symbols():
            m = self.act[i]
            if self.gens.inv[i] == i:
                total += sum(1 for u, v in enumerate(m) if v is not None and v >= u)
            else:
                total += sum(1 for v in m if v is not None)
        return total


@dataclass(frozen=True)
class Coloring:
    alphabet_size: int
    colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        bad = [c for c in self.colors if not 0 <= c < self.alphabet_size]
        if bad:
            raise ValueError(f"colors {sorted(set(bad))} outside alphabet of size {self.alphabet_size}")


@dataclass(frozen=True)
class Rooted:
    """A Schreier graph with a distinguished root and an optional coloring.

    An uncolored graph behaves everywhere as the monochrome coloring.
    """

    graph: SchreierGraph
    root: int = 0
    coloring: Optional[Coloring] = None

    def __post_init__(self):
        if not 0 <= self.root < self.graph.n_vertices:
            raise ValueError(f"root {self.root} outside vertex range {self.graph.n_vertices}")
        if self.coloring is not None and len(self.coloring.colors) != self.graph.n_vertices:
            raise ValueError(
                f"coloring has {len(self.coloring.colors)} entries for {self.graph.n_vertices} vertices"
            )

    def at(self, root: int) -> "Rooted":
        return Rooted(self.graph, root, self.coloring)

    def with_coloring(self, coloring: Optional[Coloring]) -> "Rooted":
        return Rooted(self.graph, self.root, coloring)


@dataclass(frozen=True)
class BallPattern:
    """Canonical encoding of a rooted colored labeled r-ball.

    ``encoding`` is a sequence of LEB128 varints: vertex count, generator
    count, the colors in canonical order, then for each vertex and generator
    the canonical index of the target plus one (zero marks an absent edge).
    """

    radius: int
    encoding: bytes = field(repr=False)

    def __repr__(self):
        return f"BallPattern(radius={self.radius}, encoding={self.encoding.hex()[:32]}...)"


def colors_of(x: Rooted) -> tuple:
    if x.coloring is None:
        return (0,) * x.graph.n_vertices
    return x.coloring.colors


def validate(graph) -> list:
    """Return the list of invariant violations of a Schreier graph (empty if valid)."""
    if isinstance(graph, Rooted):
        graph = graph.graph
    out = []
    n = graph.n_vertices
    if n < 0:
        return [f"negative vertex count {n}"]
    if len(graph.act) != graph.gens.count:
        return [f"{len(graph.act)} maps for {graph.gens.count} generators"]
    for i, m in enumerate(graph.act):
        if len(m) != n:
            out.append(f"map length {len(m)} != {n} for generator {i}")
    if out:
        return out
    for i, m in enumerate(graph.act):
        j = graph.gens.inv[i]
        back = graph.act[j]
        for u, v in enumerate(m):
            if v is None:
                continue
            if not isinstance(v, int) or not 0 <= v < n:
                out.append(f"target out of range at ({i},{u})")
            elif back[v] != u:
                out.append(f"inverse inconsistency at ({i},{u})")
        # the converse direction is the same check run from generator j
    if graph.complete:
        for i, m in enumerate(graph.act):
            for u, v in enumerate(m):
                if v is None:
                    out.append(f"incompleteness at ({i},{u})")
    return out


def bfs_distances(graph: SchreierGraph, source: int, limit: Optional[int] = None) -> dict:
    """Undirected shortest-path distances from ``source`` (up to ``limit``), in BFS order."""
    dist = {source: 0}
    queue = deque([source])
    nb = graph.neighbors
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for v in nb[u]:
            if v not in dist:
                dist[v] = d + 1
                queue.append(v)
    return dist


def _canonical_order(x: Rooted, r: int):
    """Canonical BFS numbering of the r-ball: returns (order, index)."""
    act = x.graph.act
    order = [x.root]
    index = {x.root: 0}
    depth = [0]
    head = 0
    while head < len(order):
        u = order[head]
        d = depth[head]
        head += 1
        if d >= r:
            continue
        for m in act:
            v = m[u]
            if v is not None and v not in index:
                index[v] = len(order)
                order.append(v)
                depth.append(d + 1)
    return order, index


def ball(x: Rooted, r: int) -> Rooted:
    """The radius-r ball around the root as a new rooted graph.

    Vertices are renumbered canonically (root becomes 0); edges leaving the ball
    are dropped and the coloring is restricted. The 0-ball has no edges at all,
    not even loops at the root.
    """
    order, index = _canonical_order(x, r)
    g = x.graph
    act = []
    for m in g.act:
        row = []
        for u in order:
            v = m[u]
            # a 0-ball is the bare root, loops included
            row.append(index.get(v) if v is not None and r > 0 else None)
        act.append(tuple(row))
    complete = all(v is not None for m in act for v in m)
    sub = SchreierGraph(g.gens, len(order), tuple(act), complete)
    col = None
    if x.coloring is not None:
        col = Coloring(x.coloring.alphabet_size, tuple(x.coloring.colors[u] for u in order))
    return Rooted(sub, 0, col)


def _varint(out: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def canonical_pattern(x: Rooted, r: int) -> BallPattern:
    order, index = _canonical_order(x, r)
    colors = colors_of(x)
    act = x.graph.act
    buf = bytearray()
    _varint(buf, len(order))
    _varint(buf, len(act))
    for u in order:
        _varint(buf, colors[u])
    for u in order:
        for m in act:
            v = m[u]
            k = index.get(v) if v is not None and r > 0 else None
            _varint(buf, 0 if k is None else k + 1)
    return BallPattern(r, bytes(buf))


def _check_comparable(x: Rooted, y: Rooted) -> None:
    if x.graph.gens != y.graph.gens:
        raise IncomparableError("rooted graphs use different generator sets")
    if (
        x.coloring is not None
        and y.coloring is not None
        and x.coloring.alphabet_size != y.coloring.alphabet_size
    ):
        raise IncomparableError("colorings use different alphabets")


def rooted_isomorphic(x: Rooted, y: Rooted, r: int) -> bool:
    _check_comparable(x, y)
    return canonical_pattern(x, r) == canonical_pattern(y, r)


def distance(x: Rooted, y: Rooted, r_max: int) -> Fraction:
    """Ball-agreement distance ``2**-r`` capped at resolution ``r_max``.

    Returns 2 when the root colors differ and 0 when the balls still agree at
    ``r_max``.
    """
    _check_comparable(x, y)
    if canonical_pattern(x, 0) != canonical_pattern(y, 0):
        return Fraction(2)
    # isomorphic r-balls have isomorphic (r-1)-balls, so scan upward
    for r in range(1, r_max + 1):
        if canonical_pattern(x, r) != canonical_pattern(y, r):
            return Fraction(1, 2 ** (r - 1))
    return Fraction(0)


def forget_colors(x: Rooted) -> Rooted:
    return Rooted(x.graph, x.root, None)
