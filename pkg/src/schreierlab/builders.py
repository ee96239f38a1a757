"""Constructors for test families of Schreier graphs and the JSON graph format."""

from __future__ import annotations

import json
import random
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import UnsupportedFamily, ValidationError
from .graph_core import Coloring, GeneratorSet, Rooted, SchreierGraph, validate

__all__ = [
    "GroupFamily",
    "cycle_graph",
    "path_graph",
    "cayley_ball",
    "schreier_from_permutations",
    "infer_inverse_pairing",
    "parse_cycles",
    "random_schreier",
    "orbit_points",
    "graph_to_document",
    "graph_from_document",
    "dumps_graph",
    "loads_graph",
    "read_graph",
    "write_graph",
]

# symbol 0 is t, symbol 1 is t^-1
LINE_GENS = GeneratorSet((1, 0))


@dataclass(frozen=True)
class GroupFamily:
    """A group with its standard symmetric generators.

    ``tag`` is one of ``cyclic``, ``integers``, ``integer_lattice``, ``free``,
    ``permutation_group``. ``params`` holds ``n``, ``d``, ``k`` or
    ``perms`` (with optional ``inv``) respectively.
    """

    tag: str
    params: tuple = ()

    @classmethod
    def cyclic(cls, n):
        return cls("cyclic", (("n", n),))

    @classmethod
    def integers(cls):
        return cls("integers")

    @classmethod
    def integer_lattice(cls, d):
        return cls("integer_lattice", (("d", d),))

    @classmethod
    def free(cls, k):
        return cls("free", (("k", k),))

    @classmethod
    def permutation_group(cls, perms, inv=None):
        perms = tuple(tuple(p) for p in perms)
        inv = tuple(inv) if inv is not None else infer_inverse_pairing(perms)
        return cls("permutation_group", (("perms", perms), ("inv", inv)))

    def param(self, name):
        return dict(self.params)[name]

    def __post_init__(self):
        for key, value in self.params:
            if key in ("n", "d", "k") and (not isinstance(value, int) or value < 1):
                raise ValueError(f"{self.tag}: parameter {key} must be a positive integer")

    def generators(self) -> GeneratorSet:
        if self.tag in ("cyclic", "integers"):
            return LINE_GENS
        if self.tag == "integer_lattice":
            return GeneratorSet.paired(self.param("d"))
        if self.tag == "free":
            return GeneratorSet.paired(self.param("k"))
        if self.tag == "permutation_group":
            return GeneratorSet(self.param("inv"))
        raise UnsupportedFamily(f"unknown family {self.tag!r}")


def cycle_graph(n: int) -> Rooted:
    """The n-cycle with t: i -> i+1 mod n, rooted at 0."""
    if n < 1:
        raise ValueError("cycle_graph needs n >= 1")
    g = SchreierGraph.from_maps(LINE_GENS, n, {0: [(i + 1) % n for i in range(n)]})
    return Rooted(g, 0)


def path_graph(n: int, root: int = 0) -> Rooted:
    """The n-vertex segment with t: i -> i+1, absent at the right end."""
    if n < 1:
        raise ValueError("path_graph needs n >= 1")
    g = SchreierGraph.from_maps(LINE_GENS, n, {0: [i + 1 if i + 1 < n else None for i in range(n)]})
    return Rooted(g, root)


def _ball_from_elements(gens, identity, step, r, sort_key=None):
    """BFS ball of radius r in a Cayley graph given by ``step(elem, i)``."""
    dist = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        u = queue.popleft()
        if dist[u] >= r:
            continue
        for i in range(gens.count):
            v = step(u, i)
            if v not in dist:
                dist[v] = dist[u] + 1
                order.append(v)
                queue.append(v)
    if sort_key is not None:
        order.sort(key=sort_key)
    index = {e: k for k, e in enumerate(order)}
    act = [tuple(index.get(step(u, i)) for u in order) for i in range(gens.count)]
    complete = all(v is not None for m in act for v in m)
    g = SchreierGraph(gens, len(order), tuple(act), complete)
    return Rooted(g, index[identity])


def _free_step(inv):
    def step(word, i):
        # left multiplication by generator i, freely reduced
        if word and word[0] == inv[i]:
            return word[1:]
        return (i,) + word

    return step


def _compose(p, q):
    """Apply q first, then p."""
    return tuple(p[x] for x in q)


def cayley_ball(family: GroupFamily, r: int) -> Rooted:
    """Radius-r ball of the Cayley graph of ``family`` rooted at the identity.

    Free-group vertices are reduced words in length-then-lexicographic order.
    """
    gens = family.generators()
    if family.tag == "integers":
        return _ball_from_elements(gens, 0, lambda a, i: a + (1 if i == 0 else -1), r, sort_key=lambda a: (abs(a), a))
    if family.tag == "cyclic":
        n = family.param("n")
        return _ball_from_elements(gens, 0, lambda a, i: (a + (1 if i == 0 else -1)) % n, r)
    if family.tag == "integer_lattice":
        d = family.param("d")

        def step(p, i):
            q = list(p)
            q[i // 2] += 1 if i % 2 == 0 else -1
            return tuple(q)

        return _ball_from_elements(gens, (0,) * d, step, r, sort_key=lambda p: (sum(map(abs, p)), p))
    if family.tag == "free":
        return _ball_from_elements(gens, (), _free_step(gens.inv), r, sort_key=lambda w: (len(w), w))
    if family.tag == "permutation_group":
        perms = family.param("perms")
        m = len(perms[0])
        return _ball_from_elements(gens, tuple(range(m)), lambda g, i: _compose(perms[i], g), r)
    raise UnsupportedFamily(f"cayley_ball does not support family {family.tag!r}")


def infer_inverse_pairing(perms) -> tuple:
    """Pair each permutation with an inverse found in the list (itself if involutive)."""
    perms = [tuple(p) for p in perms]
    inv = [None] * len(perms)
    for i, p in enumerate(perms):
        if inv[i] is not None:
            continue
        pinv = [0] * len(p)
        for a, b in enumerate(p):
            pinv[b] = a
        pinv = tuple(pinv)
        if pinv == p:
            inv[i] = i
            continue
        for j in range(len(perms)):
            if j != i and inv[j] is None and perms[j] == pinv:
                inv[i], inv[j] = j, i
                break
        else:
            raise ValidationError(f"generator {i} has no inverse in the generator list")
    return tuple(inv)


def schreier_from_permutations(perms, base: int, inv=None) -> Rooted:
    """Schreier graph of the stabilizer of ``base``: vertices are the orbit of ``base``.

    Vertices are numbered in BFS order from ``base`` (root 0); vertex ``k`` is
    the point ``orbit_points(perms, base)[k]``.
    """
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        raise ValidationError("at least one generator permutation is required")
    m = len(perms[0])
    for i, p in enumerate(perms):
        if len(p) != m or sorted(p) != list(range(m)):
            raise ValidationError(f"generator {i} is not a permutation of {m} points")
    inv = tuple(inv) if inv is not None else infer_inverse_pairing(perms)
    try:
        gens = GeneratorSet(inv)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    for i, j in enumerate(inv):
        if any(perms[j][perms[i][x]] != x for x in range(m)):
            raise ValidationError(f"generator {j} is not the inverse of generator {i}")
    if not 0 <= base < m:
        raise ValidationError(f"base point {base} outside 0..{m - 1}")
    points = orbit_points(perms, base)
    index = {p: k for k, p in enumerate(points)}
    act = tuple(tuple(index[perms[i][p]] for p in points) for i in range(len(perms)))
    return Rooted(SchreierGraph(gens, len(points), act, True), 0)


def orbit_points(perms, base: int) -> list:
    """Orbit of ``base`` in BFS order (generator index order)."""
    seen = {base}
    order = [base]
    queue = deque([base])
    while queue:
        p = queue.popleft()
        for g in perms:
            q = g[p]
            if q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
    return order


def parse_cycles(text: str, degree=None, one_based: bool = True) -> list:
    """Parse ``"(12),(123),(132)"`` into image tuples on ``0..degree-1``.

    Digits without separators are single points; use spaces or commas inside a
    cycle for multi-digit points, e.g. ``"(1 10 3)"``.
    """

    cycles_per_gen = []
    for chunk in re.findall(r"((?:\([^()]*\))+)", text):
        gen = []
        for body in re.findall(r"\(([^()]*)\)", chunk):
            body = body.strip()
            if not body:
                continue
            if re.search(r"[\s,]", body):
                pts = [int(t) for t in re.split(r"[\s,]+", body) if t]
            else:
                pts = [int(ch) for ch in body]
            gen.append([p - 1 if one_based else p for p in pts])
        cycles_per_gen.append(gen)
    if not cycles_per_gen:
        raise ValidationError(f"no permutations found in {text!r}")
    top = max((p for gen in cycles_per_gen for cyc in gen for p in cyc), default=0) + 1
    degree = max(degree or 0, top)
    perms = []
    for gen in cycles_per_gen:
        img = list(range(degree))
        seen = set()
        for cyc in gen:
            if len(set(cyc)) != len(cyc) or seen & set(cyc) or min(cyc, default=0) < 0:
                raise ValidationError(f"malformed cycle {cyc} in {text!r}")
            seen |= set(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        perms.append(tuple(img))
    return perms


def random_schreier(n: int, k: int, seed, involutions: int = 0) -> SchreierGraph:
    """Complete Schreier graph of ``k`` seeded uniform random permutations.

    ``involutions`` extra self-inverse generators are appended, each a uniform
    random fixed-point-free involution (``n`` must then be even). One
    permutation plus one involution gives the random cubic model.
    """
    if n < 1 or k < 0 or k + involutions < 1:
        raise ValueError("random_schreier needs n >= 1 and at least one generator")
    rng = random.Random(seed)
    inv = list(GeneratorSet.paired(k).inv) if k else []
    maps = {}
    for j in range(k):
        perm = list(range(n))
        rng.shuffle(perm)
        maps[2 * j] = perm
    if involutions:
        if n % 2:
            raise ValueError("fixed-point-free involutions need an even vertex count")
        for j in range(involutions):
            sym = len(inv)
            inv.append(sym)
            pts = list(range(n))
            rng.shuffle(pts)
            m = [0] * n
            for a, b in zip(pts[::2], pts[1::2]):
                m[a], m[b] = b, a
            maps[sym] = m
    return SchreierGraph.from_maps(GeneratorSet(tuple(inv)), n, maps)


# --- JSON graph documents -------------------------------------------------

def graph_to_document(x) -> dict:
    if isinstance(x, SchreierGraph):
        x = Rooted(x, 0) if x.n_vertices else None
        if x is None:
            raise ValidationError("cannot serialize an empty graph without a root")
    g = x.graph
    doc = {
        "generator_pairs": g.gens.pairs(),
        "n": g.n_vertices,
        "maps": [list(m) for m in g.act],
        "root": x.root,
        "complete": g.complete,
    }
    if x.coloring is not None:
        doc["colors"] = list(x.coloring.colors)
        doc["alphabet_size"] = x.coloring.alphabet_size
    return doc


def _require(cond, msg):
    if not cond:
        raise ValidationError(f"malformed graph document: {msg}")


def graph_from_document(doc) -> Rooted:
    _require(isinstance(doc, dict), "top level must be an object")
    for key in ("generator_pairs", "n", "maps", "complete"):
        _require(key in doc, f"missing key {key!r}")
    n = doc["n"]
    _require(isinstance(n, int) and n >= 1, "n must be a positive integer")
    try:
        gens = GeneratorSet.from_pairs(doc["generator_pairs"])
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"malformed graph document: {exc}") from None
    maps = doc["maps"]
    _require(isinstance(maps, list) and len(maps) == gens.count, "one map per generator required")
    for m in maps:
        _require(isinstance(m, list) and len(m) == n, "each map must have length n")
        _require(all(v is None or (isinstance(v, int) and not isinstance(v, bool)) for v in m),
                 "map entries must be integers or null")
    _require(isinstance(doc["complete"], bool), "complete must be a boolean")
    g = SchreierGraph(gens, n, tuple(tuple(m) for m in maps), doc["complete"])
    problems = validate(g)
    if problems:
        raise ValidationError("graph violates invariants", problems)
    root = doc.get("root", 0)
    _require(isinstance(root, int) and 0 <= root < n, "root out of range")
    coloring = None
    if "colors" in doc or "alphabet_size" in doc:
        colors = doc.get("colors")
        size = doc.get("alphabet_size")
        _require(isinstance(colors, list) and len(colors) == n, "colors must be an array of length n")
        _require(isinstance(size, int) and size >= 1, "alphabet_size must be a positive integer")
        _require(all(isinstance(c, int) and 0 <= c < size for c in colors), "color outside alphabet")
        coloring = Coloring(size, tuple(colors))
    return Rooted(g, root, coloring)


def dumps_graph(x) -> str:
    return json.dumps(graph_to_document(x), sort_keys=True, separators=(",", ":")) + "\n"


def loads_graph(text: str) -> Rooted:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed graph document: {exc}") from None
    return graph_from_document(doc)


def read_graph(path) -> Rooted:
    return loads_graph(Path(path).read_text(encoding="utf-8"))


def write_graph(x, path) -> None:
    Path(path).write_text(dumps_graph(x), encoding="utf-8")
