"""Command-line entry point.

Exit status: 0 on success, 2 for domain errors (including a pathway that
fails verification), 3 when a search budget ran out (the interval result is
still written), 64 for malformed arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import biassim, chains, infotheory
from .core import (
    IndexResult,
    JoinStep,
    Pathway,
    SearchBudget,
    assembly_index,
    lower_bound_by_map,
    naive_upper_bound,
    split_branched_index,
    verify_pathway,
)
from .errors import AssemblyError, BudgetExceeded, DomainError, TooLarge
from .graphs import DEFAULT_VERTEX_CAP, GraphSpace, graph_bounds
from .grid2d import GridSpace, grid_lower_bounds
from .strings import StringSpace

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# output helpers ------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _budget(args) -> SearchBudget:
    if args.max_nodes <= 0 or args.max_seconds <= 0:
        raise UsageError("budget values must be positive")
    return SearchBudget(args.max_nodes, args.max_seconds)


def _read_arg(value: str, literal: bool) -> str:
    """A path to an existing file is read (one trailing newline dropped); anything else is literal."""
    if not literal and value != "-" and Path(value).is_file():
        text = Path(value).read_text(encoding="utf-8")
    elif value == "-" and not literal:
        text = sys.stdin.read()
    else:
        return value
    return text[:-1] if text.endswith("\n") else text


def _index_doc(space, x, args, extra: dict | None = None) -> tuple[dict, int]:
    if args.bounds_only:
        lower = lower_bound_by_map(space, x)
        result = IndexResult(lower, naive_upper_bound(space, x), None, False)
        if lower == result.upper:
            result = IndexResult(lower, lower, None, True)
    elif args.split_branched:
        value, witness = split_branched_index(space, x)
        lower = lower_bound_by_map(space, x)
        result = IndexResult(lower, value, witness, lower == value)
    else:
        result = assembly_index(space, x, _budget(args), args.threads)
    doc = result.to_json(space, space.check_target(x))
    if extra:
        doc.update(extra)
    code = EXIT_OK if result.exact or args.bounds_only or args.split_branched else EXIT_BUDGET
    return doc, code


# subcommands ---------------------------------------------------------------


def cmd_string(args) -> int:
    text = _read_arg(args.text, args.literal)
    space = StringSpace()
    doc, code = _index_doc(space, text, args)
    _emit(_dump(doc), args.out)
    return code


def _chain_steps(terms) -> list[dict]:
    steps = []
    for i in range(1, len(terms)):
        t = terms[i]
        prior = terms[:i]
        big = max(a for a in prior if t - a in prior)
        steps.append({"left": str(t - big), "right": str(big), "result": str(t)})
    return steps


def cmd_chain(args) -> int:
    if args.table:
        table = chains.min_chain_lengths_upto(args.table)
        _emit(table.counts_csv() if args.counts else table.to_csv(), args.out)
        if args.plot:
            from .plotting import plot_chain_lengths

            plot_chain_lengths(table, args.plot)
        return EXIT_OK
    if args.n is None:
        raise UsageError("chain: give n or --table LIMIT")
    start = time.monotonic()
    length, chain = chains.min_chain_length(args.n)
    doc = {
        "space": "integer",
        "target": str(args.n),
        "index": length,
        "lower": length,
        "upper": length,
        "exact": True,
        "witness": _chain_steps(chain.terms),
        "nodes_expanded": 0,
        "elapsed_ms": int(round((time.monotonic() - start) * 1000)),
        "chain": list(chain.terms),
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.replace(" ", "").strip("[]").split(","))
    except ValueError:
        raise UsageError(f"vchain: not an integer vector: {text!r}") from None


def cmd_vchain(args) -> int:
    v = _vector(args.vector)
    start = time.monotonic()
    r = chains.min_vector_chain_length(v, args.exact_threshold, args.max_nodes)
    k = len(v)
    terms = r.witness.terms
    steps = []
    for i in range(k, len(terms)):
        t = terms[i]
        for s in terms[:i]:
            d = tuple(p - q for p, q in zip(t, s))
            if d in terms[:i] and d <= s:
                steps.append({"left": ",".join(map(str, d)), "right": ",".join(map(str, s)), "result": ",".join(map(str, t))})
                break
    doc = {
        "space": "vector",
        "target": ",".join(map(str, v)),
        "index": r.length,
        "lower": r.lower,
        "upper": r.upper,
        "exact": r.exact,
        "witness": steps,
        "nodes_expanded": r.nodes_expanded,
        "elapsed_ms": int(round((time.monotonic() - start) * 1000)),
        "scalar_bound": chains.vector_to_scalar_bound(v),
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK if r.exact else EXIT_BUDGET


def cmd_grid(args) -> int:
    text = _read_arg(args.file, args.literal)
    space = GridSpace(rotation_equivalence=args.rotation)
    x = space.check_target(text)
    doc, code = _index_doc(space, x, args, {"rotation_equivalence": args.rotation, "map_bound": grid_lower_bounds(x)})
    _emit(_dump(doc), args.out)
    if args.plot:
        from .grid2d import parse_grid
        from .plotting import plot_assemblage

        steps = [JoinStep(parse_grid(s["left"]), parse_grid(s["right"]), parse_grid(s["result"])) for s in doc["witness"]]
        plot_assemblage(x, args.plot, steps)
    return code


def cmd_graph(args) -> int:
    text = _read_arg(args.file, args.literal)
    space = GraphSpace(connected=not args.disconnected)
    x = space.check_target(text)
    if x.n > args.vertex_cap and not args.bounds_only:
        lower, upper = graph_bounds(x)
        result = IndexResult(lower, upper, None, lower == upper)
        doc = result.to_json(space, x)
        doc["connected"] = not args.disconnected
        _emit(_dump(doc), args.out)
        raise TooLarge(f"{x.n} vertices exceeds the cap of {args.vertex_cap}; bounds only")
    doc, code = _index_doc(space, x, args, {"connected": not args.disconnected})
    _emit(_dump(doc), args.out)
    return code


def cmd_info(args) -> int:
    comp = infotheory.parse_composition(args.composition)
    groups = infotheory.enumerate_by_index(StringSpace(), comp, args.part_cap, _budget(args), args.threads)
    reports = infotheory.information_table(groups)
    if args.pa is not None:
        r = infotheory.information_from_groups(groups, args.pa)
        doc = {"composition": args.composition, "pa": r.pa, "n_total": r.n_total, "n_at_pa": r.n_at_pa, "bits": round(r.bits, 12)}
        _emit(_dump(doc), args.out)
    else:
        _emit(infotheory.information_csv(reports), args.out)
    if args.plot:
        from .plotting import plot_information

        plot_information(reports, args.plot, f"composition {args.composition}")
    return EXIT_OK


def _floats(text: str) -> list[float]:
    try:
        return [float(h) for h in text.split(",") if h.strip()]
    except ValueError:
        raise UsageError(f"--h: not a list of numbers: {text!r}") from None


def cmd_biassim(args) -> int:
    hs = _floats(args.h)
    if not hs:
        raise UsageError("--h: give at least one value")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = biassim.sweep(hs, args.depth, args.trials, args.seed, limit=args.limit)
    _emit(biassim.sweep_csv(rows), args.out)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(rows, args.plot)
    return EXIT_OK


def _space_for(doc: dict, rotation: bool):
    name = doc.get("space")
    if name == "string":
        return StringSpace()
    if name == "grid":
        return GridSpace(rotation_equivalence=rotation or bool(doc.get("rotation_equivalence")))
    if name == "graph":
        return GraphSpace(connected=doc.get("connected", True))
    if name == "integer":
        return chains.IntegerSpace()
    if name == "vector":
        return chains.VectorSpace(len(str(doc["target"]).split(",")))
    raise DomainError(f"unknown space {name!r}")


def cmd_verify(args) -> int:
    try:
        doc = json.loads(Path(args.witness).read_text(encoding="utf-8"))
        space = _space_for(doc, args.rotation)
        target = space.parse(str(doc["target"]))
        steps = tuple(
            JoinStep(space.parse(str(s["left"])), space.parse(str(s["right"])), space.parse(str(s["result"])))
            for s in doc["witness"]
        )
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise DomainError(f"cannot read witness: {exc}") from None
    verdict = verify_pathway(space, Pathway(steps, target))
    length_ok = doc.get("upper") is None or doc["upper"] == len(steps)
    ok = verdict.ok and length_ok
    reason = verdict.reason or ("" if length_ok else f"witness has {len(steps)} steps but upper is {doc['upper']}")
    _emit(_dump({"space": space.name, "target": space.format(target), "valid": ok, "steps": len(steps), "reason": reason}), args.out)
    if not ok:
        print(f"invalid pathway: {reason}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="assemblage", description="Assembly indices, bounds and related measures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")

    search = _Parser(add_help=False)
    search.add_argument("--max-nodes", type=int, default=SearchBudget.max_nodes)
    search.add_argument("--max-seconds", type=float, default=SearchBudget.max_seconds)
    search.add_argument("--threads", type=int, default=None, help="worker processes (default: $ASSEMBLAGE_THREADS or 1)")

    index = _Parser(add_help=False)
    mode = index.add_mutually_exclusive_group()
    mode.add_argument("--split-branched", action="store_true", help="report the split-branched upper bound only")
    mode.add_argument("--bounds-only", action="store_true", help="report map lower bound and naive upper bound")
    index.add_argument("--literal", action="store_true", help="treat the argument as data even if a file of that name exists")

    s = sub.add_parser("string", parents=[common, search, index], help="string assembly index")
    s.add_argument("text", help="literal text, a file path, or - for stdin")
    s.set_defaults(func=cmd_string)

    c = sub.add_parser("chain", parents=[common], help="minimal addition chain")
    c.add_argument("n", type=int, nargs="?")
    c.add_argument("--table", type=int, metavar="LIMIT", help="CSV of lengths for 1..LIMIT")
    c.add_argument("--counts", action="store_true", help="with --table, emit the per-length census")
    c.add_argument("--plot", help="with --table, also draw the lengths and census")
    c.set_defaults(func=cmd_chain)

    v = sub.add_parser("vchain", parents=[common], help="minimal vectorial addition chain")
    v.add_argument("vector", help="comma-separated components, e.g. 8,8,10")
    v.add_argument("--exact-threshold", type=int, default=chains.DEFAULT_VECTOR_THRESHOLD)
    v.add_argument("--max-nodes", type=int, default=2_000_000)
    v.set_defaults(func=cmd_vchain)

    g = sub.add_parser("grid", parents=[common, search, index], help="2D pixel assemblage index")
    g.add_argument("file", help="grid text file ('.' = empty), or rows separated by '/'")
    g.add_argument("--rotation", action="store_true", help="identify the four rotations of a shape")
    g.add_argument("--plot", help="draw the pathway to this image file")
    g.set_defaults(func=cmd_grid)

    gr = sub.add_parser("graph", parents=[common, search, index], help="connected graph index")
    gr.add_argument("file", help="edge-list file ('u v' lines, 'c <vertex> <color>' lines)")
    gr.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    gr.add_argument("--disconnected", action="store_true", help="allow joins without a crossing edge")
    gr.set_defaults(func=cmd_graph)

    i = sub.add_parser("info", parents=[common, search], help="pathway information for a string composition")
    i.add_argument("--composition", required=True, help='e.g. "6A6B"')
    i.add_argument("--pa", type=int, help="index x; without it, a CSV over every x")
    i.add_argument("--part-cap", type=int, default=infotheory.DEFAULT_PART_CAP)
    i.add_argument("--plot", help="bar chart of bits against index")
    i.set_defaults(func=cmd_info)

    b = sub.add_parser("biassim", parents=[common], help="biased decision-tree sweep")
    b.add_argument("--h", required=True, help="bias level(s), comma-separated")
    b.add_argument("--depth", type=int, required=True)
    b.add_argument("--trials", type=int, default=200)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--limit", type=int, default=chains.DEFAULT_TABLE_LIMIT, help="chain census limit")
    b.add_argument("--plot", help="median and quartiles against h")
    b.set_defaults(func=cmd_biassim)

    w = sub.add_parser("verify", parents=[common], help="check a witness pathway in a result JSON")
    w.add_argument("witness")
    w.add_argument("--rotation", action="store_true")
    w.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, AssemblyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
