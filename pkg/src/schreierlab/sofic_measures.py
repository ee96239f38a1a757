"""Local statistics of finite Schreier graphs: (Gamma, r)-vertex fractions,
empirical distributions of colored r-ball types, cylinder-set frequencies and
finite windows of the induced subshift points.

All frequencies are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import base64
import csv
import hashlib
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .coloring import DEFAULT_BUDGET, _Counter, _search
from .dynamics import BOUNDARY, apply_word, reduce_word, reduced_words
from .errors import BoundaryError, BudgetExceeded, IncomparableError, ValidationError
from .graph_core import BallPattern, Rooted, SchreierGraph, ball, canonical_pattern, colors_of, forget_colors

__all__ = [
    "BallDistribution",
    "WindowPattern",
    "InvarianceDefect",
    "gamma_r_vertex_fraction",
    "is_sofic_stage",
    "empirical_measure",
    "tv_distance",
    "invariance_defect",
    "clopen_U_fraction",
    "clopen_V_fraction",
    "subshift_window",
    "translate_window",
    "distribution_to_document",
    "distribution_from_document",
    "dumps_distribution",
    "loads_distribution",
    "distribution_csv",
]


@dataclass(frozen=True)
class BallDistribution:
    radius: int
    weights: dict

    def __post_init__(self):
        if any(w < 0 for w in self.weights.values()):
            raise ValidationError("negative weight in ball distribution")
        if self.weights and sum(self.weights.values()) != 1:
            raise ValidationError("ball distribution weights do not sum to 1")

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def sorted_items(self):
        return sorted(self.weights.items(), key=lambda kv: kv[0].encoding)


@dataclass(frozen=True)
class WindowPattern:
    """Colors seen along every reduced word of length at most ``radius``."""

    radius: int
    assignment: dict


class InvarianceDefect(NamedTuple):
    defect: Fraction
    deficiency: Fraction


def _rooted(x) -> Rooted:
    return x if isinstance(x, Rooted) else Rooted(x, 0)


def _patterns(x: Rooted, r: int) -> list:
    return [canonical_pattern(x.at(p), r) for p in range(x.graph.n_vertices)]


def gamma_r_vertex_fraction(G, ref: Rooted, r: int) -> Fraction:
    """Fraction of vertices whose uncolored r-ball matches the reference ball.

    ``ref`` must be a ball of radius at least ``r`` (for example from
    :func:`~schreierlab.builders.cayley_ball`).
    """
    x = forget_colors(_rooted(G))
    if x.graph.gens != ref.graph.gens:
        raise IncomparableError("stage and reference use different generator sets")
    target = canonical_pattern(forget_colors(ref), r)
    hits = sum(1 for p in _patterns(x, r) if p == target)
    return Fraction(hits, x.graph.n_vertices)


def is_sofic_stage(G, ref: Rooted, r: int, eps) -> bool:
    return gamma_r_vertex_fraction(G, ref, r) >= 1 - Fraction(eps)


def empirical_measure(G, r: int) -> BallDistribution:
    x = _rooted(G)
    n = x.graph.n_vertices
    counts = {}
    for p in _patterns(x, r):
        counts[p] = counts.get(p, 0) + 1
    return BallDistribution(r, {p: Fraction(k, n) for p, k in counts.items()})


def tv_distance(mu: BallDistribution, nu: BallDistribution) -> Fraction:
    if mu.radius != nu.radius:
        raise ValueError(f"radius mismatch: {mu.radius} vs {nu.radius}")
    keys = set(mu.weights) | set(nu.weights)
    zero = Fraction(0)
    return sum((abs(mu.weights.get(k, zero) - nu.weights.get(k, zero)) for k in keys), zero) / 2


def invariance_defect(G, r: int, i: int) -> InvarianceDefect:
    """Compare the empirical measure with its pushforward along generator ``i``.

    Roots where generator ``i`` is undefined are reported as ``deficiency``
    (their mass over ``|V|``); ``defect`` is the total-variation distance
    between the measure restricted to the remaining roots and the image of
    that restriction. Both are exactly zero on complete graphs.
    """
    x = _rooted(G)
    n = x.graph.n_vertices
    m = x.graph.act[i]
    pats = _patterns(x, r)
    before, after = {}, {}
    missing = 0
    for p in range(n):
        q = m[p]
        if q is None:
            missing += 1
            continue
        before[pats[p]] = before.get(pats[p], 0) + 1
        after[pats[q]] = after.get(pats[q], 0) + 1
    diff = sum(abs(before.get(k, 0) - after.get(k, 0)) for k in set(before) | set(after))
    return InvarianceDefect(Fraction(diff, 2 * n), Fraction(missing, n))


def clopen_U_fraction(G, ref: Rooted, r: int) -> Fraction:
    """Mass of roots whose uncolored r-ball differs from the reference ball."""
    return 1 - gamma_r_vertex_fraction(G, ref, r)


def clopen_V_fraction(G, r: int, budget: Optional[int] = DEFAULT_BUDGET) -> Fraction:
    """Mass of roots whose r-ball contains a repetitive path of half-length at most ``r``.

    Each root's ball is searched separately with its own ``budget``; roots that
    exhaust it are collected and reported together in a
    :class:`BudgetExceeded`.
    """
    x = _rooted(G)
    n = x.graph.n_vertices
    if r == 0:
        return Fraction(0)
    hits = 0
    unresolved = []
    spent = 0
    for p in range(n):
        b = ball(x.at(p), r)
        try:
            counter = _Counter(budget)
            w = _search(b.graph.neighbors, colors_of(b), range(1, r + 1), range(b.graph.n_vertices), counter)
        except BudgetExceeded as exc:
            unresolved.append(p)
            spent += exc.expansions
            continue
        spent += counter.count
        if w is not None:
            hits += 1
    if unresolved:
        raise BudgetExceeded(spent, r, unresolved)
    return Fraction(hits, n)


def subshift_window(x: Rooted, r: int) -> WindowPattern:
    """Colors at the endpoints of every reduced word of length at most ``r`` from the root.

    The word ``w`` is read with :func:`~schreierlab.dynamics.apply_word`, so
    ``window(apply_word(x, w))[u] == window(x)[reduce(w + u)]``.
    """
    colors = colors_of(x)
    out = {}
    for w in reduced_words(x.graph.gens, r):
        y = apply_word(x, w)
        if y is BOUNDARY:
            raise BoundaryError(f"word {w} leaves the graph")
        out[w] = colors[y.root]
    return WindowPattern(r, out)


def translate_window(window: WindowPattern, gens, w, r: int) -> WindowPattern:
    """The window seen after moving the root by ``w``, cut to radius ``r``.

    Needs ``window.radius >= r + len(w)``.
    """
    w = tuple(w)
    if window.radius < r + len(w):
        raise ValueError("window too small for this translate")
    return WindowPattern(r, {u: window.assignment[reduce_word(w + u, gens.inv)] for u in reduced_words(gens, r)})


# --- serialization --------------------------------------------------------

def distribution_to_document(mu: BallDistribution) -> dict:
    return {
        "radius": mu.radius,
        "entries": [
            {
                "pattern": base64.b64encode(p.encoding).decode("ascii"),
                "num": w.numerator,
                "den": w.denominator,
            }
            for p, w in mu.sorted_items()
        ],
    }


def distribution_from_document(doc) -> BallDistribution:
    try:
        r = doc["radius"]
        weights = {}
        for e in doc["entries"]:
            p = BallPattern(r, base64.b64decode(e["pattern"], validate=True))
            weights[p] = weights.get(p, Fraction(0)) + Fraction(e["num"], e["den"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed distribution document: {exc}") from None
    return BallDistribution(r, weights)


def dumps_distribution(mu: BallDistribution) -> str:
    return json.dumps(distribution_to_document(mu), sort_keys=True, separators=(",", ":")) + "\n"


def loads_distribution(text: str) -> BallDistribution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed distribution document: {exc}") from None
    return distribution_from_document(doc)


def distribution_csv(mu: BallDistribution) -> str:
    """``pattern_hash,frequency`` rows; the hash is the first 16 hex digits of SHA-256."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pattern_hash", "frequency"])
    for p, w in mu.sorted_items():
        writer.writerow([hashlib.sha256(p.encoding).hexdigest()[:16], str(w)])
    return buf.getvalue()
