import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_rooted_isomorphic, raw_ball
from schreierlab.builders import LINE_GENS, cycle_graph, path_graph, random_schreier
from schreierlab.errors import IncomparableError
from schreierlab.graph_core import (
    Coloring,
    GeneratorSet,
    Rooted,
    SchreierGraph,
    ball,
    canonical_pattern,
    distance,
    forget_colors,
    rooted_isomorphic,
    validate,
)


def test_generator_set_rejects_non_involution():
    with pytest.raises(ValueError):
        GeneratorSet((1, 2, 0))
    assert GeneratorSet((0,)).count == 1  # self-paired symbol is an involution


def test_validate_four_cycle_clean():
    g = SchreierGraph(LINE_GENS, 4, ((1, 2, 3, 0), (3, 0, 1, 2)), True)
    assert validate(g) == []


def test_validate_inverse_inconsistency():
    g = SchreierGraph(LINE_GENS, 4, ((1, None, None, None), (None, None, None, None)), False)
    assert validate(g) == ["inverse inconsistency at (0,0)"]


def test_validate_incomplete_flag():
    g = SchreierGraph(LINE_GENS, 2, ((1, None), (None, 0)), True)
    problems = validate(g)
    assert problems and all(p.startswith("incompleteness at") for p in problems)


def test_ball_of_c8_radius_two_is_segment():
    b = ball(cycle_graph(8), 2)
    assert b.graph.n_vertices == 5
    assert b.root == 0
    assert not b.graph.complete
    assert canonical_pattern(b, 2) == canonical_pattern(path_graph(5, 2), 2)


def test_ball_radius_zero_is_root_only():
    x = cycle_graph(6).with_coloring(Coloring(3, (2, 0, 1, 0, 1, 0)))
    b = ball(x, 0)
    assert b.graph.n_vertices == 1
    assert b.coloring.colors == (2,)
    assert b.graph.act == ((None,), (None,))


def test_ball_wraps_around_c6():
    b = ball(cycle_graph(6).at(4), 3)
    assert b.graph.n_vertices == 6
    assert b.graph.complete


def test_patterns_rotate_on_cycle():
    assert canonical_pattern(cycle_graph(8), 2) == canonical_pattern(cycle_graph(8).at(5), 2)


def test_cycle_against_segment_radius_three_and_four():
    c8 = cycle_graph(8)
    seg = path_graph(9, 4)
    assert canonical_pattern(c8, 3) == canonical_pattern(seg, 3)
    assert canonical_pattern(c8, 4) != canonical_pattern(seg, 4)


def test_rooted_isomorphic_examples():
    x = cycle_graph(5).with_coloring(Coloring(2, (0, 1, 0, 1, 1)))
    assert all(rooted_isomorphic(x, x, r) for r in range(6))
    y = x.at(1)
    assert not rooted_isomorphic(x, y, 0)
    assert rooted_isomorphic(cycle_graph(10), cycle_graph(12), 4)
    assert not rooted_isomorphic(cycle_graph(10), cycle_graph(12), 5)


def test_incomparable_generator_sets():
    g = random_schreier(4, 2, 0)
    with pytest.raises(IncomparableError):
        rooted_isomorphic(cycle_graph(4), Rooted(g, 0), 1)


def test_distance_examples():
    x = cycle_graph(6).with_coloring(Coloring(2, (0, 1, 1, 0, 1, 1)))
    assert distance(x, x, 7) == 0
    assert distance(x, x.at(1), 7) == 2
    assert distance(cycle_graph(8), path_graph(21, 10), 10) == Fraction(1, 8)


def test_distance_equal_root_color_but_different_one_ball():
    # 0-balls agree, 1-balls differ: distance 2**0 = 1
    assert distance(cycle_graph(1), cycle_graph(5), 3) == 1


def test_forget_colors():
    x = cycle_graph(4).with_coloring(Coloring(3, (0, 1, 2, 0)))
    y = forget_colors(x)
    assert y.coloring is None and y.graph == x.graph
    assert forget_colors(y) == y
    mono = x.with_coloring(Coloring(1, (0,) * 4))
    for r in range(3):
        assert canonical_pattern(y, r) == canonical_pattern(mono, r)


# --- property tests ---------------------------------------------------------

@st.composite
def colored_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, 2))
    seed = draw(st.integers(0, 10 ** 6))
    g = random_schreier(n, k, seed)
    # randomly truncate: drop a few edges symmetrically
    drops = draw(st.lists(st.tuples(st.integers(0, 2 * k - 1), st.integers(0, n - 1)), max_size=3))
    act = [list(m) for m in g.act]
    for i, u in drops:
        v = act[i][u]
        if v is not None:
            act[i][u] = None
            act[g.gens.inv[i]][v] = None
    g = SchreierGraph(g.gens, n, tuple(tuple(m) for m in act), not drops)
    if drops:
        g = SchreierGraph(g.gens, n, g.act, all(v is not None for m in g.act for v in m))
    alpha = draw(st.integers(1, 3))
    colors = draw(st.lists(st.integers(0, alpha - 1), min_size=n, max_size=n))
    root = draw(st.integers(0, n - 1))
    return Rooted(g, root, Coloring(alpha, tuple(colors)))


@settings(max_examples=300, deadline=None)
@given(colored_graphs(), colored_graphs(), st.integers(0, 4))
def test_canonical_pattern_matches_brute_force(x, y, r):
    if x.graph.gens != y.graph.gens:
        return
    if x.coloring.alphabet_size != y.coloring.alphabet_size:
        y = y.with_coloring(Coloring(3, y.coloring.colors))
        x = x.with_coloring(Coloring(3, x.coloring.colors))
    assert rooted_isomorphic(x, y, r) == brute_rooted_isomorphic(x, y, r)


@settings(max_examples=200, deadline=None)
@given(colored_graphs(), st.integers(0, 4), st.randoms(use_true_random=False))
def test_pattern_invariant_under_renumbering(x, r, rnd):
    n = x.graph.n_vertices
    perm = list(range(n))
    rnd.shuffle(perm)  # old vertex u becomes perm[u]
    act = []
    for m in x.graph.act:
        row = [None] * n
        for u, v in enumerate(m):
            row[perm[u]] = None if v is None else perm[v]
        act.append(tuple(row))
    colors = [0] * n
    for u, c in enumerate(x.coloring.colors):
        colors[perm[u]] = c
    y = Rooted(SchreierGraph(x.graph.gens, n, tuple(act), x.graph.complete), perm[x.root],
               Coloring(x.coloring.alphabet_size, tuple(colors)))
    assert canonical_pattern(x, r) == canonical_pattern(y, r)


@settings(max_examples=200, deadline=None)
@given(colored_graphs(), st.integers(0, 4))
def test_ball_commutes_with_pattern(x, r):
    b = ball(x, r)
    assert validate(b.graph) == []
    assert b.graph.n_vertices == len(raw_ball(x.graph, x.root, r))
    assert canonical_pattern(b, r) == canonical_pattern(x, r)


@settings(max_examples=200, deadline=None)
@given(colored_graphs(6), colored_graphs(6), colored_graphs(6), st.integers(0, 5))
def test_ultrametric_laws(x, y, z, r_max):
    if not (x.graph.gens == y.graph.gens == z.graph.gens):
        return
    cs = [Coloring(3, g.coloring.colors) for g in (x, y, z)]
    x, y, z = (g.with_coloring(c) for g, c in zip((x, y, z), cs))
    dxy, dyz, dxz = distance(x, y, r_max), distance(y, z, r_max), distance(x, z, r_max)
    assert dxz <= max(dxy, dyz)
    assert dxy == distance(y, x, r_max)
    assert distance(x, x, r_max) == 0
