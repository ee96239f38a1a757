"""Nonrepetitive vertex colorings.

A path is a sequence of distinct vertices, consecutive ones adjacent in the
underlying undirected simple graph. A path ``x_1 .. x_2n`` is repetitive when
``c(x_i) == c(x_{n+i})`` for every ``i``. A coloring is L-nonrepetitive when no
repetitive path of half-length at most ``L`` exists.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath

from .errors import BudgetExceeded, ResampleCapExceeded
from .graph_core import Coloring, Rooted, SchreierGraph, bfs_distances

__all__ = [
    "PathWitness",
    "LllParameters",
    "is_repetitive_path",
    "witness_problems",
    "find_repetitive_path",
    "is_nonrepetitive",
    "lll_parameters",
    "lll_log_slack",
    "lll_threshold",
    "paper_constant",
    "ColoringRun",
    "moser_tardos_run",
    "moser_tardos_color",
    "adaptive_color",
    "exhaustive_min_alphabet",
]

DEFAULT_BUDGET = 10_000_000
DEFAULT_R_CUT = 64


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def half_length(self) -> int:
        return len(self.vertices) // 2

    def halves(self, colors):
        h = self.half_length
        return (
            tuple(colors[v] for v in self.vertices[:h]),
            tuple(colors[v] for v in self.vertices[h:]),
        )


def _graph_and_colors(x, c):
    graph = x.graph if isinstance(x, Rooted) else x
    if c is None and isinstance(x, Rooted):
        c = x.coloring
    if c is None:
        colors = (0,) * graph.n_vertices
    elif isinstance(c, Coloring):
        colors = c.colors
    else:
        colors = tuple(c)
    if len(colors) != graph.n_vertices:
        raise ValueError(f"coloring has {len(colors)} entries for {graph.n_vertices} vertices")
    return graph, colors


def is_repetitive_path(c, p) -> bool:
    """True iff the first and second color halves along ``p`` coincide."""
    colors = c.colors if isinstance(c, Coloring) else c
    verts = p.vertices if isinstance(p, PathWitness) else tuple(p)
    h = len(verts) // 2
    return all(colors[verts[i]] == colors[verts[h + i]] for i in range(h))


def witness_problems(graph: SchreierGraph, p) -> list:
    """Violations of the PathWitness invariants on ``graph`` (empty if valid)."""
    verts = p.vertices if isinstance(p, PathWitness) else tuple(p)
    out = []
    if len(verts) < 2 or len(verts) % 2:
        out.append(f"length {len(verts)} is not even and >= 2")
    if len(set(verts)) != len(verts):
        out.append("vertices repeat")
    nb = graph.neighbors
    for a, b in zip(verts, verts[1:]):
        if b not in nb[a]:
            out.append(f"{a} and {b} are not adjacent")
    return out


class _Counter:
    __slots__ = ("count", "limit")

    def __init__(self, limit):
        self.count = 0
        self.limit = limit


def _search(nb, colors, half_lengths, starts, counter, allowed=None, anchor=None):
    """Shortest-first DFS for a repetitive path starting at one of ``starts``.

    Positions past the first half are pruned to the color of their partner in
    the first half, so only candidate squares are ever expanded. With
    ``anchor=(v, dist)`` only paths through ``v`` are considered, where
    ``dist`` maps vertices to their distance from ``v``.
    """
    if anchor is not None:
        a, adist = anchor
    for h in half_lengths:
        target = 2 * h
        for s in starts:
            if allowed is not None and not allowed[s]:
                continue
            if anchor is not None and adist.get(s, target) > target - 1:
                continue
            path = [s]
            on = {s}
            stack = [iter(nb[s])]
            counter.count += 1
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    on.discard(path.pop())
                    continue
                if nxt in on or (allowed is not None and not allowed[nxt]):
                    continue
                j = len(path)
                if j >= h and colors[nxt] != colors[path[j - h]]:
                    continue
                if anchor is not None and a not in on and adist.get(nxt, target) > target - j - 1:
                    continue
                counter.count += 1
                if counter.limit is not None and counter.count > counter.limit:
                    raise BudgetExceeded(counter.count, h)
                path.append(nxt)
                if len(path) == target:
                    return PathWitness(tuple(path))
                on.add(nxt)
                stack.append(iter(nb[nxt]))
    return None


def find_repetitive_path(x, c=None, L: int = 1, budget: Optional[int] = DEFAULT_BUDGET) -> Optional[PathWitness]:
    """Shortest repetitive path of half-length at most ``L``, or ``None``.

    Among witnesses of minimal half-length, the one with the smallest start
    vertex and then lexicographically smallest continuation is returned.
    Raises :class:`BudgetExceeded` after ``budget`` node expansions.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    graph, colors = _graph_and_colors(x, c)
    counter = _Counter(budget)
    return _search(graph.neighbors, colors, range(1, L + 1), range(graph.n_vertices), counter)


def is_nonrepetitive(x, c=None, L: int = 1, budget: Optional[int] = DEFAULT_BUDGET) -> bool:
    return find_repetitive_path(x, c, L, budget) is None


# --- Local Lemma constants -------------------------------------------------

@dataclass(frozen=True)
class LllParameters:
    """Inputs of the Local Lemma check for repetitive-path events.

    ``a_family(i)`` gives the weight of events of half-length ``i`` and
    ``delta(i, j)`` bounds how many half-length-``j`` events one
    half-length-``i`` event depends on.
    """

    d: int
    a_family: Callable
    delta: Callable
    r_cut: int = DEFAULT_R_CUT

    def __post_init__(self):
        if self.d < 1 or self.r_cut < 1:
            raise ValueError("d and r_cut must be positive")
        for i in range(1, self.r_cut + 1):
            a = self.a_family(i)
            if not 0 < a < 1:
                raise ValueError(f"a_{i} = {a} is not in (0, 1)")


def lll_parameters(d: int, r_cut: int = DEFAULT_R_CUT, a_family=None) -> LllParameters:
    """Default parameters: ``a_i = (2 d^2)^-i`` and ``Delta_ij = 4 i j d^(2j)``."""
    if a_family is None:
        base = 2 * d * d

        def a_family(i):
            return float(base) ** -i

    def delta(i, j):
        return 4 * i * j * d ** (2 * j)

    return LllParameters(d, a_family, delta, r_cut)


def _log_requirements(params: LllParameters):
    """Per half-length i: the smallest ln C allowed by the i-th inequality."""
    r = params.r_cut
    log1m = [math.log1p(-params.a_family(j)) for j in range(1, r + 1)]
    out = []
    for i in range(1, r + 1):
        rhs = math.log(params.a_family(i)) + math.fsum(
            float(params.delta(i, j)) * log1m[j - 1] for j in range(1, r + 1)
        )
        # C^-i <= exp(rhs)  <=>  ln C >= -rhs / i
        out.append(-rhs / i)
    return out


def lll_log_slack(C: int, params: LllParameters) -> float:
    """min over i of ``i ln C + ln a_i + sum_j Delta_ij ln(1 - a_j)``; C passes iff this is >= 0."""
    return min(i * (math.log(C) - need) for i, need in enumerate(_log_requirements(params), 1))


def lll_threshold(d: int, r_cut: int = DEFAULT_R_CUT, a_family=None) -> int:
    """Smallest integer ``C >= 2`` satisfying every Local Lemma inequality up to ``r_cut``."""
    params = lll_parameters(d, r_cut, a_family)
    need = max(_log_requirements(params))
    if need > 700:
        raise OverflowError(f"threshold exp({need:.4g}) is beyond float range")
    C = max(2, math.ceil(math.exp(need)))
    # exp/ceil may be off by one near an integer; settle on the exact boundary
    while C > 2 and lll_log_slack(C - 1, params) >= 0:
        C -= 1
    while lll_log_slack(C, params) < 0:
        C += 1
    return C


def paper_constant(d: int) -> int:
    """``ceil(2 d^2 e^16)``, evaluated at 60 significant digits."""
    if d < 1:
        raise ValueError("d must be positive")
    with mpmath.workdps(60):
        return int(mpmath.ceil(2 * d * d * mpmath.exp(16)))


# --- Moser-Tardos resampling --------------------------------------------------

@dataclass(frozen=True)
class ColoringRun:
    coloring: Coloring
    resamples: int
    alphabet_size: int
    attempts: tuple = ()


def moser_tardos_run(x, C: int, L: int, seed, max_resamples: int = 1_000_000) -> ColoringRun:
    """Resample repetitive paths until the coloring is L-nonrepetitive.

    Start from a uniform random coloring. Keep a set of dirty vertices, all
    dirty at first. Take the lowest dirty vertex and search for a repetitive
    path through it, shortest first. If one turns up, every vertex on it gets
    a fresh uniform color and becomes dirty again; otherwise the vertex is
    clean. Every repetitive path always
    contains a dirty vertex, so an empty dirty set certifies the result.
    """
    if C < 1 or L < 1:
        raise ValueError("C and L must be at least 1")
    graph = x.graph if isinstance(x, Rooted) else x
    n = graph.n_vertices
    nb = graph.neighbors
    rng = random.Random(seed)
    colors = [rng.randrange(C) for _ in range(n)]
    if C == 1:
        witness = _search(nb, colors, (1,), range(n), _Counter(None))
        if witness is not None:
            raise ResampleCapExceeded(0, C, witness.vertices)
        return ColoringRun(Coloring(C, tuple(colors)), 0, C)

    reach = 2 * L - 1
    dirty = list(range(n))
    in_dirty = [True] * n
    resamples = 0
    counter = _Counter(None)
    while dirty:
        v = heapq.heappop(dirty)
        in_dirty[v] = False
        near = bfs_distances(graph, v, reach)
        witness = _search(nb, colors, range(1, L + 1), sorted(near), counter, anchor=(v, near))
        if witness is None:
            continue
        if resamples >= max_resamples:
            raise ResampleCapExceeded(resamples, C, witness.vertices)
        resamples += 1
        for u in witness.vertices:
            colors[u] = rng.randrange(C)
            if not in_dirty[u]:
                in_dirty[u] = True
                heapq.heappush(dirty, u)
        if not in_dirty[v]:
            in_dirty[v] = True
            heapq.heappush(dirty, v)
    return ColoringRun(Coloring(C, tuple(colors)), resamples, C)


def moser_tardos_color(x, C: int, L: int, seed, max_resamples: int = 1_000_000) -> Coloring:
    return moser_tardos_run(x, C, L, seed, max_resamples).coloring


def adaptive_color(x, L: int, seed, start: int = 4, max_resamples: int = 1_000_000,
                   attempt_resamples: Optional[int] = None, max_alphabet: int = 1 << 16) -> ColoringRun:
    """Run the engine at alphabet ``start`` and double it after each capped failure.

    Each attempt may spend ``attempt_resamples`` resamples (default
    ``max(1000, 5 |V|)``); ``max_resamples`` bounds the total across attempts.
    """
    graph = x.graph if isinstance(x, Rooted) else x
    if attempt_resamples is None:
        attempt_resamples = max(1000, 5 * graph.n_vertices)
    C = start
    spent = 0
    attempts = []
    while True:
        cap = min(attempt_resamples, max_resamples - spent)
        try:
            run = moser_tardos_run(graph, C, L, seed, cap)
        except ResampleCapExceeded as exc:
            spent += exc.resamples
            attempts.append((C, exc.resamples))
            if C * 2 > max_alphabet or spent >= max_resamples:
                raise ResampleCapExceeded(spent, C, exc.last_witness) from None
            C *= 2
            continue
        attempts.append((C, run.resamples))
        return ColoringRun(run.coloring, spent + run.resamples, C, tuple(attempts))


# --- exhaustive oracle --------------------------------------------------------

def exhaustive_min_alphabet(x, L: Optional[int] = None, cap: int = 12) -> int:
    """Exact minimum alphabet size admitting an L-nonrepetitive coloring.

    Colorings are enumerated by depth-first extension in vertex order; a
    prefix is abandoned as soon as its colored vertices already carry a
    repetitive path. Colorings are enumerated up to renaming of colors (new
    colors appear in increasing order), which loses nothing because
    repetitiveness is invariant under renaming. ``L=None`` means no cutoff.
    """
    graph = x.graph if isinstance(x, Rooted) else x
    n = graph.n_vertices
    if n > cap:
        raise ValueError(f"{n} vertices exceeds the exhaustive-search cap of {cap}")
    if L is None:
        L = max(1, n // 2)
    nb = graph.neighbors
    half_lengths = range(1, L + 1)

    def extend(colors, assigned, v, C, used):
        if v == n:
            return True
        for col in range(min(C, used + 1)):
            colors[v] = col
            assigned[v] = True
            ok = _search(nb, colors, half_lengths, range(v + 1), _Counter(None), allowed=assigned) is None
            if ok and extend(colors, assigned, v + 1, C, max(used, col + 1)):
                return True
            assigned[v] = False
        return False

    for C in range(1, n + 1):
        if extend([0] * n, [False] * n, 0, C, 0):
            return C
    return max(n, 1)
