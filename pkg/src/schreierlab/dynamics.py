"""Root-change action of words, finite-scale stabilizers, colored-labeled
automorphisms and the extraction of a repetitive path from a nontrivial one."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Union

from .coloring import PathWitness, is_repetitive_path, witness_problems
from .errors import BoundaryError, ValidationError
from .graph_core import Rooted, SchreierGraph, bfs_distances, colors_of

__all__ = [
    "BOUNDARY",
    "Automorphism",
    "apply_word",
    "fixes_root",
    "stabilizer_words",
    "reduce_word",
    "reduced_words",
    "colored_automorphisms",
    "is_z_proper",
    "displacements",
    "extract_repetition",
]


class Outcome(enum.Enum):
    BOUNDARY = "boundary"

    def __repr__(self):
        return "BOUNDARY"


#: Returned when a word leaves a truncated graph; not an error.
BOUNDARY = Outcome.BOUNDARY


@dataclass(frozen=True)
class Automorphism:
    image: tuple

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))

    @property
    def is_identity(self) -> bool:
        return all(v == u for u, v in enumerate(self.image))

    def __call__(self, u):
        return self.image[u]


def _rooted(x) -> Rooted:
    return x if isinstance(x, Rooted) else Rooted(x, 0)


def _check_word(graph: SchreierGraph, w) -> tuple:
    w = tuple(w)
    for a in w:
        if not 0 <= a < graph.gens.count:
            raise ValueError(f"letter {a} is not a generator symbol")
    return w


def apply_word(x: Rooted, w) -> Union[Rooted, Outcome]:
    """Move the root along ``w`` one letter at a time, first letter first."""
    w = _check_word(x.graph, w)
    v = x.root
    act = x.graph.act
    for a in w:
        v = act[a][v]
        if v is None:
            return BOUNDARY
    return x.at(v)


def fixes_root(x: Rooted, w) -> Union[bool, Outcome]:
    y = apply_word(x, w)
    if y is BOUNDARY:
        return BOUNDARY
    return y.root == x.root


def stabilizer_words(x: Rooted, max_len: int) -> list:
    """Every word of length at most ``max_len`` that returns the root to itself.

    Words are listed by length, then lexicographically. Raises
    :class:`BoundaryError` if some word leaves a truncated graph.
    """
    act = x.graph.act
    count = x.graph.gens.count
    level = [((), x.root)]
    found = [()]
    for _ in range(max_len):
        nxt = []
        for word, v in level:
            for a in range(count):
                u = act[a][v]
                if u is None:
                    raise BoundaryError(f"word {word + (a,)} leaves the graph")
                nxt.append((word + (a,), u))
        found.extend(w for w, u in nxt if u == x.root)
        level = nxt
    return found


def reduce_word(w, inv) -> tuple:
    """Free reduction: cancel adjacent ``a, inv[a]`` pairs."""
    out = []
    for a in w:
        if out and inv[out[-1]] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def reduced_words(gens, r: int) -> list:
    """All freely reduced words of length at most ``r``, by length then lexicographically."""
    inv = gens.inv
    level = [()]
    out = [()]
    for _ in range(r):
        level = [w + (a,) for w in level for a in range(gens.count) if not w or inv[w[-1]] != a]
        out.extend(level)
    return out


def _require_complete_connected(graph: SchreierGraph) -> None:
    if not graph.complete or any(v is None for m in graph.act for v in m):
        raise ValidationError("automorphisms need a complete graph")
    if graph.n_vertices and len(bfs_distances(graph, 0)) != graph.n_vertices:
        raise ValidationError("automorphisms need a connected graph")


def colored_automorphisms(x) -> list:
    """All colored-labeled automorphisms, identity first.

    A labeled automorphism is determined by the image of vertex 0: commuting
    with the generator maps forces the image of every other vertex. Each of
    the ``n`` candidates is propagated and kept iff it is a consistent,
    color-preserving bijection.
    """
    x = _rooted(x)
    graph = x.graph
    _require_complete_connected(graph)
    n = graph.n_vertices
    act = graph.act
    colors = colors_of(x)
    out = []
    for cand in range(n):
        if colors[cand] != colors[0]:
            continue
        image = [None] * n
        image[0] = cand
        queue = deque([0])
        ok = True
        while queue and ok:
            u = queue.popleft()
            iu = image[u]
            for m in act:
                v, iv = m[u], m[iu]
                if image[v] is None:
                    if colors[v] != colors[iv]:
                        ok = False
                        break
                    image[v] = iv
                    queue.append(v)
                elif image[v] != iv:
                    ok = False
                    break
        if ok and len(set(image)) == n:
            out.append(Automorphism(tuple(image)))
    out.sort(key=lambda a: (not a.is_identity, a.image))
    return out


def is_z_proper(x) -> bool:
    """No nontrivial colored-labeled automorphism exists."""
    return len(colored_automorphisms(x)) == 1


def _automorphism_problems(x: Rooted, theta: Automorphism) -> list:
    graph = x.graph
    n = graph.n_vertices
    img = theta.image
    if len(img) != n or sorted(img) != list(range(n)):
        return ["image is not a permutation of the vertices"]
    colors = colors_of(x)
    out = []
    for i, m in enumerate(graph.act):
        for u, v in enumerate(m):
            if v is not None and m[img[u]] != img[v]:
                out.append(f"does not commute with generator {i} at {u}")
    out += [f"changes the color of {u}" for u in range(n) if colors[img[u]] != colors[u]]
    return out


def displacements(x, theta: Automorphism) -> list:
    """``dist(b, theta(b))`` for every vertex ``b`` (undirected distance)."""
    graph = _rooted(x).graph
    return [bfs_distances(graph, b)[theta.image[b]] for b in range(graph.n_vertices)]


def _geodesic(graph: SchreierGraph, a: int, b: int):
    """BFS geodesic from a to b with lowest-generator-index tie-break; returns (vertices, letters)."""
    parent = {a: None}
    queue = deque([a])
    while queue and b not in parent:
        u = queue.popleft()
        for k, m in enumerate(graph.act):
            v = m[u]
            if v is not None and v not in parent:
                parent[v] = (u, k)
                queue.append(v)
    verts, letters = [b], []
    while parent[verts[-1]] is not None:
        u, k = parent[verts[-1]]
        letters.append(k)
        verts.append(u)
    return verts[::-1], letters[::-1]


def extract_repetition(x, theta: Automorphism) -> PathWitness:
    """Repetitive path of half-length equal to the minimal displacement of ``theta``.

    Take the lowest vertex ``a`` of minimal displacement ``n``, a geodesic
    ``a = a_1, ..., a_{n+1} = theta(a)`` with letters ``k_1..k_n``, and
    continue with ``a_{n+1+i} = k_i(a_{n+i})`` for ``i < n``. Then
    ``a_{n+i} = theta(a_i)``, so the two halves carry the same colors, and
    minimality of the displacement keeps the walk self-avoiding.
    """
    x = _rooted(x)
    problems = _automorphism_problems(x, theta)
    if problems:
        raise ValidationError("not a colored-labeled automorphism", problems)
    if theta.is_identity:
        raise ValidationError("the identity automorphism has no repetition to extract")
    disp = displacements(x, theta)
    n = min(disp)
    a = disp.index(n)
    walk, letters = _geodesic(x.graph, a, theta.image[a])
    act = x.graph.act
    for k in letters[:-1]:
        walk.append(act[k][walk[-1]])
    witness = PathWitness(tuple(walk))
    bad = witness_problems(x.graph, witness)
    if bad or not is_repetitive_path(colors_of(x), witness):
        raise AssertionError(f"extracted walk {walk} is not a repetitive path: {bad}")
    return witness
