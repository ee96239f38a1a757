"""Command-line front end.

Every command prints one JSON report on standard output; files are written
only through ``--out`` (and ``--csv`` for ``measure``). Exit codes: 0 success,
1 negative verdict (repetitive, not rigid, not a sofic stage), 2 validation
error, 3 budget or resample cap exhausted, 4 word left a truncated graph.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .builders import (
    GroupFamily,
    cayley_ball,
    cycle_graph,
    dumps_graph,
    parse_cycles,
    path_graph,
    random_schreier,
    read_graph,
    schreier_from_permutations,
)
from .coloring import (
    DEFAULT_BUDGET,
    adaptive_color,
    find_repetitive_path,
    moser_tardos_run,
)
from .dynamics import colored_automorphisms, displacements, extract_repetition
from .errors import (
    BoundaryError,
    BudgetExceeded,
    ResampleCapExceeded,
    UnsupportedFamily,
    ValidationError,
)
from .graph_core import Rooted
from .sofic_measures import (
    clopen_U_fraction,
    clopen_V_fraction,
    distribution_csv,
    distribution_to_document,
    dumps_distribution,
    empirical_measure,
    gamma_r_vertex_fraction,
    tv_distance,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_BOUNDARY = 0, 1, 2, 3, 4


class CommandFailed(Exception):
    def __init__(self, code, payload):
        super().__init__(payload)
        self.code = code
        self.payload = payload


def _frac(q: Fraction) -> str:
    return str(Fraction(q))


def _digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path, inputs):
    inputs[str(path)] = _digest(path)
    return read_graph(path)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _graph_summary(x: Rooted) -> dict:
    g = x.graph
    return {
        "n": g.n_vertices,
        "edges": g.edge_count(),
        "generators": g.gens.count,
        "complete": g.complete,
        "root": x.root,
    }


def parse_family(spec: str) -> GroupFamily:
    """``integers``, ``cyclic:N``, ``lattice:D`` or ``free:K``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "integers" and not arg:
            return GroupFamily.integers()
        if name == "cyclic":
            return GroupFamily.cyclic(int(arg))
        if name in ("lattice", "integer_lattice"):
            return GroupFamily.integer_lattice(int(arg))
        if name == "free":
            return GroupFamily.free(int(arg))
    except ValueError:
        pass
    raise UnsupportedFamily(f"bad family spec {spec!r}")


# --- commands ---------------------------------------------------------------

def cmd_build(args, inputs):
    fam = args.family
    seed = None
    if fam == "cycle":
        x = cycle_graph(args.size)
    elif fam == "path":
        x = path_graph(args.size, args.root)
    elif fam == "integers-ball":
        x = cayley_ball(GroupFamily.integers(), args.radius)
    elif fam == "lattice-ball":
        x = cayley_ball(GroupFamily.integer_lattice(args.dim), args.radius)
    elif fam == "free-ball":
        x = cayley_ball(GroupFamily.free(args.rank), args.radius)
    elif fam == "perm":
        if not args.gens:
            raise ValidationError("perm needs --gens")
        perms = parse_cycles(args.gens, args.degree)
        x = schreier_from_permutations(perms, args.base - 1)
    elif fam == "random":
        seed = args.seed
        x = Rooted(random_schreier(args.size, args.rank, seed, args.involutions), 0)
    else:  # argparse restricts choices
        raise UnsupportedFamily(fam)
    if args.out:
        _write(args.out, dumps_graph(x))
    result = _graph_summary(x)
    result["family"] = fam
    if seed is not None:
        result["seed"] = seed
    return True, result


def cmd_color(args, inputs):
    x = _load(args.graph, inputs)
    try:
        if args.adaptive:
            run = adaptive_color(x.graph, args.L, args.seed, start=args.alphabet,
                                 max_resamples=args.max_resamples)
        else:
            run = moser_tardos_run(x.graph, args.alphabet, args.L, args.seed, args.max_resamples)
    except ResampleCapExceeded as exc:
        raise CommandFailed(EXIT_BUDGET, {
            "colored": False,
            "resamples": exc.resamples,
            "alphabet_size": exc.alphabet_size,
            "last_witness": list(exc.last_witness),
        }) from None
    colored = x.with_coloring(run.coloring)
    if args.out:
        _write(args.out, dumps_graph(colored))
    return True, {
        "colored": True,
        "alphabet_size": run.alphabet_size,
        "resamples": run.resamples,
        "attempts": [list(a) for a in run.attempts] or [[run.alphabet_size, run.resamples]],
        "L": args.L,
        "colors": list(run.coloring.colors),
    }


def cmd_check(args, inputs):
    x = _load(args.graph, inputs)
    w = find_repetitive_path(x, None, args.L, args.budget)
    result = {"nonrepetitive": w is None, "L": args.L, "witness": None}
    if w is not None:
        result["witness"] = list(w.vertices)
    return w is None, result


def cmd_rigidity(args, inputs):
    x = _load(args.graph, inputs)
    auts = colored_automorphisms(x)
    result = {"rigid": len(auts) == 1, "automorphism_count": len(auts)}
    if len(auts) > 1:
        theta = auts[1]
        w = extract_repetition(x, theta)
        result["automorphism"] = list(theta.image)
        result["displacement"] = min(displacements(x, theta))
        result["witness"] = list(w.vertices)
    return len(auts) == 1, result


def cmd_sofic_stats(args, inputs):
    x = _load(args.graph, inputs)
    ref = cayley_ball(parse_family(args.ref), args.radius)
    frac = gamma_r_vertex_fraction(x, ref, args.radius)
    ok = frac >= 1 - Fraction(args.eps)
    result = {
        "radius": args.radius,
        "eps": args.eps,
        "gamma_r_fraction": _frac(frac),
        "U_fraction": _frac(clopen_U_fraction(x, ref, args.radius)),
        "is_sofic_stage": ok,
    }
    if x.coloring is not None:
        result["V_fraction"] = _frac(clopen_V_fraction(x, args.radius, args.budget))
    return ok, result


def cmd_measure(args, inputs):
    x = _load(args.graph, inputs)
    mu = empirical_measure(x, args.radius)
    if args.out:
        _write(args.out, dumps_distribution(mu))
    if args.csv:
        _write(args.csv, distribution_csv(mu))
    doc = distribution_to_document(mu)
    doc["patterns"] = len(mu.weights)
    doc["total"] = _frac(mu.total())
    return True, doc


def cmd_converge(args, inputs):
    measures = [empirical_measure(_load(p, inputs), args.radius) for p in args.graphs]
    pairwise = []
    for i in range(len(measures)):
        for j in range(i + 1, len(measures)):
            pairwise.append([i, j, _frac(tv_distance(measures[i], measures[j]))])
    consecutive = [_frac(tv_distance(a, b)) for a, b in zip(measures, measures[1:])]
    return True, {"radius": args.radius, "pairwise": pairwise, "consecutive": consecutive}


COMMANDS = {
    "build": cmd_build,
    "color": cmd_color,
    "check": cmd_check,
    "rigidity": cmd_rigidity,
    "sofic-stats": cmd_sofic_stats,
    "measure": cmd_measure,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit)")
    common.add_argument("--out", help="write the command's primary artifact here")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node-expansion cap for path searches")
    common.add_argument("--json", action="store_true", default=True, help="JSON report (the only format)")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")

    parser = argparse.ArgumentParser(prog="schreierlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a graph file")
    p.add_argument("family", choices=["cycle", "path", "integers-ball", "lattice-ball", "free-ball", "perm", "random"])
    p.add_argument("size", nargs="?", type=int, default=None, help="vertex count for cycle/path/random")
    p.add_argument("--n", dest="n", type=int)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--involutions", type=int, default=0)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--gens", help='permutations in cycle notation on 1..m, e.g. "(12),(123),(132)"')
    p.add_argument("--degree", type=int, help="number of points for --gens (default: largest point)")
    p.add_argument("--base", type=int, default=1, help="base point (1-based)")

    p = sub.add_parser("color", parents=[common], help="nonrepetitive coloring by resampling")
    p.add_argument("graph")
    p.add_argument("--alphabet", "-C", type=int, default=4)
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--max-resamples", type=int, default=1_000_000)
    p.add_argument("--adaptive", action="store_true", help="double the alphabet after each capped attempt")

    p = sub.add_parser("check", parents=[common], help="search for a repetitive path")
    p.add_argument("graph")
    p.add_argument("--L", type=int, default=4)

    p = sub.add_parser("rigidity", parents=[common], help="colored automorphisms and extracted repetition")
    p.add_argument("graph")

    p = sub.add_parser("sofic-stats", parents=[common], help="(Gamma,r)-vertex and cylinder fractions")
    p.add_argument("graph")
    p.add_argument("--ref", required=True, help="integers | cyclic:N | lattice:D | free:K")
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--eps", type=Fraction, default=Fraction(0))

    p = sub.add_parser("measure", parents=[common], help="empirical r-ball distribution")
    p.add_argument("graph")
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--csv", help="also write a pattern-hash,frequency CSV")

    p = sub.add_parser("converge", parents=[common], help="TV distances between stage distributions")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--radius", type=int, default=1)
    return parser


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "build":
        if args.size is None:
            args.size = args.n
        if args.family in ("cycle", "path", "random") and args.size is None:
            parser.error(f"build {args.family} needs a vertex count")
    if not 0 <= args.seed < 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")

    inputs = {}
    report = {"command": argv, "version": __version__, "seed": args.seed, "inputs": inputs}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        ok, result = COMMANDS[args.command](args, inputs)
        report["ok"] = ok
        report["result"] = result
        code = EXIT_OK if ok else EXIT_NEGATIVE
    except CommandFailed as exc:
        report["ok"] = False
        report["result"] = exc.payload
        code = exc.code
    except (ValidationError, UnsupportedFamily, ValueError, OSError) as exc:
        report["ok"] = False
        report["error"] = {"kind": "validation", "message": str(exc)}
        code = EXIT_VALIDATION
    except BudgetExceeded as exc:
        report["ok"] = False
        report["error"] = {"kind": "budget", "message": str(exc), "half_length": exc.half_length,
                           "unresolved": exc.unresolved}
        code = EXIT_BUDGET
    except BoundaryError as exc:
        report["ok"] = False
        report["error"] = {"kind": "boundary", "message": str(exc)}
        code = EXIT_BOUNDARY
    if args.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
