"""Command line entry point: ``octa <command> ...``.

Exit codes: 0 success, 2 bad input, 3 a checked invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import CollarError, SimplifyingAssumptionViolated
from .graph import NotASubgraph, build_subgraph
from .lattice import (
    ApexNotAboveSurface,
    HeightError,
    HeightFunction,
    LatticePoint,
    ParityError,
    ScanBoundExceeded,
)
from .laurent import DivisionNotExact, to_text
from .matching import SizeLimitExceeded, enumerate_matchings, matching_from_labels, matching_monomial
from .recurrence import EvalContext, NonIntegerStep, PointBelowSurface, count_value, eval_f, gale_robinson_sequence
from .render import matching_record, render_graph, render_poly
from .sampler import NonIntegerX, NoLocalMinimum, draw, plan
from .suites import FAMILY_NAMES, SUITES, family_height

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3

INPUT_ERRORS = (
    ParityError,
    HeightError,
    ApexNotAboveSurface,
    PointBelowSurface,
    ScanBoundExceeded,
    SizeLimitExceeded,
    SimplifyingAssumptionViolated,
    CollarError,
    NotASubgraph,
    json.JSONDecodeError,
    OSError,
    KeyError,
    ValueError,
)
INVARIANT_ERRORS = (
    AssertionError,  # every "identity failed" error in the package derives from it
    DivisionNotExact,
    NonIntegerStep,
    NonIntegerX,
    NoLocalMinimum,
)


class InputError(ValueError):
    pass


def load_height(args) -> HeightFunction:
    if getattr(args, "height", None):
        with open(args.height) as fh:
            return HeightFunction.from_json(json.load(fh))
    return family_height(getattr(args, "family", None) or "aztec")


def get_apex(args, h: HeightFunction, strict: bool = True) -> LatticePoint:
    if args.apex is None:
        raise InputError("--apex N I J is required")
    apex = LatticePoint(*args.apex).check()
    if strict and apex.n <= h(apex.i, apex.j):
        raise ApexNotAboveSurface(f"apex {tuple(apex)} is not above the surface (h={h(apex.i, apex.j)})")
    return apex


def emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    h = load_height(args)
    apex = get_apex(args, h, strict=False)
    ctx = EvalContext(h)
    emit(args, render_poly(eval_f(ctx, apex), args.format))
    return EXIT_OK


def cmd_count(args) -> int:
    h = load_height(args)
    apex = get_apex(args, h, strict=False)
    if args.method == "enumerate":
        n = sum(1 for _ in enumerate_matchings(build_subgraph(h, apex)))
    else:
        n = count_value(h, apex)
    emit(args, json.dumps({"apex": list(apex), "count": n}) + "\n" if args.format == "json" else f"{n}\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    h = load_height(args)
    apex = get_apex(args, h)
    G = build_subgraph(h, apex)
    records = []
    for k, M in enumerate(enumerate_matchings(G)):
        if args.count is not None and k >= args.count:
            break
        rec = matching_record(G, M)
        rec["monomial"] = to_text(matching_monomial(G, M))
        records.append(rec)
    if args.format == "json":
        emit(args, json.dumps(records, indent=1) + "\n")
    else:
        emit(args, "".join(f"{r['monomial']}\t{' '.join(r['labels'])}\n" for r in records))
    return EXIT_OK


def cmd_graph(args) -> int:
    h = load_height(args)
    apex = get_apex(args, h)
    emit(args, render_graph(build_subgraph(h, apex), args.format))
    return EXIT_OK


def cmd_sample(args) -> int:
    import random

    h = load_height(args)
    apex = get_apex(args, h)
    G = build_subgraph(h, apex)
    state = plan(h, apex)
    rng = random.Random(args.seed)
    draws = [matching_from_labels(G, draw(state, rng)) for _ in range(args.count or 1)]
    if args.format in ("svg", "dot"):
        emit(args, render_graph(G, args.format, draws[0]))
    elif args.format == "json":
        emit(args, json.dumps({"apex": list(apex), "seed": args.seed, "steps": state.steps, "samples": [matching_record(G, M) for M in draws]}, indent=1) + "\n")
    else:
        emit(args, "".join(" ".join(matching_record(G, M)["labels"]) + "\n" for M in draws))
    return EXIT_OK


def cmd_somos(args) -> int:
    seq = gale_robinson_sequence(args.k, args.a, args.b, args.r, args.s, args.n)
    emit(args, json.dumps(seq) + "\n" if args.format == "json" else " ".join(map(str, seq)) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    fn = SUITES[args.suite]
    kw = {"family": args.family or "all", "max_cone": args.max_cone, "perturbations": args.perturbations, "seed": args.seed or 0}
    report = fn(**kw)
    lines = [report.line()] + [f"  {f}" for f in report.failures[:20]]
    if args.format == "json":
        emit(args, json.dumps({"suite": report.name, "ok": report.ok, "instances": report.instances, "skipped": report.skipped, "failures": report.failures}) + "\n")
    else:
        emit(args, "\n".join(lines) + "\n")
    if report.failures:
        return EXIT_INVARIANT
    return EXIT_OK if report.instances else EXIT_INPUT


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--height", metavar="FILE", help="height function JSON")
    common.add_argument("--family", help="built-in height when --height is absent (default aztec)")
    common.add_argument("--apex", nargs=3, type=int, metavar=("N", "I", "J"))
    common.add_argument("--output", metavar="FILE")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--count", type=int, default=None)

    p = argparse.ArgumentParser(prog="octa", description="Evaluate the octahedron recurrence and count, list, draw or sample the graph matchings behind each value.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="Laurent polynomial at the apex")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("count", parents=[common], help="number of perfect matchings")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--method", choices=["recurrence", "enumerate"], default="recurrence")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("enumerate", parents=[common], help="list perfect matchings with their monomials")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("graph", parents=[common], help="draw or dump the graph G(apex)")
    s.add_argument("--format", choices=["text", "json", "svg", "dot"], default="text")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("sample", parents=[common], help="uniformly random perfect matchings")
    s.add_argument("--format", choices=["text", "json", "svg", "dot"], default="text")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("somos", parents=[common], help="Gale-Robinson integer sequence")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_somos)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--max-cone", type=int, default=10)
    s.add_argument("--perturbations", type=int, default=0)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.family and args.family not in ("all",) + FAMILY_NAMES:
        print(f"error: unknown family {args.family!r}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except INVARIANT_ERRORS as exc:
        print(f"invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
