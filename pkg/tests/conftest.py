"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the package's own traversal code: they
recompute adjacency, balls and paths from the raw generator maps.
"""

import random
from itertools import permutations

import numpy as np
import pytest

from schreierlab.builders import LINE_GENS, cycle_graph, path_graph, random_schreier
from schreierlab.graph_core import Coloring, GeneratorSet, Rooted, SchreierGraph


def raw_adjacency(graph):
    nb = [set() for _ in range(graph.n_vertices)]
    for m in graph.act:
        for u, v in enumerate(m):
            if v is not None and v != u:
                nb[u].add(v)
                nb[v].add(u)
    return nb


def raw_ball(graph, root, r):
    dist = {root: 0}
    frontier = [root]
    nb = raw_adjacency(graph)
    for d in range(1, r + 1):
        nxt = []
        for u in frontier:
            for v in nb[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return set(dist)


def brute_rooted_isomorphic(x, y, r):
    """Try every root-preserving bijection between the two r-balls."""
    bx, by = raw_ball(x.graph, x.root, r), raw_ball(y.graph, y.root, r)
    if len(bx) != len(by):
        return False
    cx = x.coloring.colors if x.coloring else [0] * x.graph.n_vertices
    cy = y.coloring.colors if y.coloring else [0] * y.graph.n_vertices
    if cx[x.root] != cy[y.root]:
        return False
    if r == 0:
        return True  # the 0-ball is the bare colored root
    rest_x = sorted(bx - {x.root})
    rest_y = sorted(by - {y.root})
    for perm in permutations(rest_y):
        phi = dict(zip(rest_x, perm))
        phi[x.root] = y.root
        ok = all(cx[u] == cy[phi[u]] for u in bx)
        if ok:
            for mx, my in zip(x.graph.act, y.graph.act):
                for u in bx:
                    tx = mx[u] if mx[u] in bx else None
                    ty = my[phi[u]] if my[phi[u]] in by else None
                    if (tx is None) != (ty is None) or (tx is not None and phi[tx] != ty):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            return True
    return False


def all_even_paths(graph, max_half=None):
    """Every simple path with an even number of vertices, grouped by half-length."""
    nb = raw_adjacency(graph)
    n = graph.n_vertices
    max_half = max_half or n // 2
    by_half = {}

    def grow(path):
        if len(path) % 2 == 0:
            by_half.setdefault(len(path) // 2, []).append(tuple(path))
        if len(path) == 2 * max_half:
            return
        for v in nb[path[-1]]:
            if v not in path:
                path.append(v)
                grow(path)
                path.pop()

    for s in range(n):
        grow([s])
    return {h: np.array(ps, dtype=np.int64) for h, ps in by_half.items()}


def naive_has_repetitive(paths_by_half, colors, L):
    c = np.asarray(colors)
    for h, arr in paths_by_half.items():
        if h > L:
            continue
        cc = c[arr]
        if np.any(np.all(cc[:, :h] == cc[:, h:], axis=1)):
            return True
    return False


def c4_with_chords(chords):
    """C4 plus extra involutive generators realizing the listed chords."""
    n = 4
    inv = [1, 0]
    maps = {0: [(i + 1) % n for i in range(n)]}
    for a, b in chords:
        sym = len(inv)
        inv.append(sym)
        m = list(range(n))
        m[a], m[b] = b, a
        maps[sym] = m
    return Rooted(SchreierGraph.from_maps(GeneratorSet(tuple(inv)), n, maps), 0)


def small_graph_corpus():
    """Connected graphs with at most 8 vertices."""
    out = []
    for n in range(1, 9):
        out.append(("path", n, path_graph(n)))
    for n in range(3, 9):
        out.append(("cycle", n, cycle_graph(n)))
    out.append(("c4+chord", 4, c4_with_chords([(0, 2)])))
    out.append(("c4+2chords", 4, c4_with_chords([(0, 2), (1, 3)])))
    for n in range(2, 9):
        for seed in range(4):
            g = random_schreier(n, 2, seed)
            if len(raw_ball(g, 0, n)) == n:
                out.append(("random", n, Rooted(g, 0)))
    return out


def random_coloring(rng, n, k):
    return Coloring(k, tuple(rng.randrange(k) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(20261016)


def torus(a, b):
    """Cayley graph of Z_a x Z_b with generators (1,0), (0,1) and their inverses."""
    n = a * b
    gens = GeneratorSet.paired(2)
    right = [((i + 1) % a) * b + j for i in range(a) for j in range(b)]
    up = [i * b + (j + 1) % b for i in range(a) for j in range(b)]
    return Rooted(SchreierGraph.from_maps(gens, n, {0: right, 2: up}), 0)


def permutation_cayley(perms):
    """Cayley graph of the group generated by ``perms`` (left multiplication)."""
    from schreierlab.builders import GroupFamily, cayley_ball

    return cayley_ball(GroupFamily.permutation_group(perms), 10 ** 6)


def symmetric_corpus(rng, count):
    """Complete connected colored graphs, many with nontrivial colored automorphisms."""
    out = []
    shapes = [cycle_graph(n) for n in range(3, 13)] + [torus(a, b) for a in (2, 3, 4) for b in (2, 3, 4)]
    shapes.append(permutation_cayley([(1, 0, 2), (1, 2, 0), (2, 0, 1)]))
    shapes.append(permutation_cayley([(1, 0, 2, 3), (1, 2, 3, 0), (3, 0, 1, 2)]))
    while len(out) < count:
        kind = rng.random()
        if kind < 0.6:
            x = rng.choice(shapes)
            n = x.graph.n_vertices
            k = rng.randint(1, 3)
            period = rng.choice([d for d in range(1, n + 1) if n % d == 0])
            base = [rng.randrange(k) for _ in range(period)]
            colors = tuple(base[v % period] for v in range(n))
        else:
            n = rng.randint(2, 12)
            g = random_schreier(n, rng.randint(1, 2), rng.randrange(10 ** 6))
            if len(raw_ball(g, 0, n)) != n:
                continue
            x = Rooted(g, 0)
            k = rng.randint(1, 3)
            colors = tuple(rng.randrange(k) for _ in range(n))
        out.append(x.with_coloring(Coloring(max(colors) + 1, colors)))
    return out


def word_permutation(perms, w):
    """The point map of a word: letters applied left to right."""
    m = len(perms[0])
    f = list(range(m))
    for a in w:
        f = [perms[a][p] for p in f]
    return tuple(f)


def group_closure(perms):
    m = len(perms[0])
    ident = tuple(range(m))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = tuple(p[g[i]] for i in range(m))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def all_words(count, max_len):
    from itertools import product

    return [w for l in range(max_len + 1) for w in product(range(count), repeat=l)]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose the call-phase result to fixtures (used by the acceptance verdict lines)
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
