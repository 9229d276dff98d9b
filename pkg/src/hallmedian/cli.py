"""Command-line interface.

Exit codes: 0 success / satisfied / verified, 1 violated or verification
failed (a witness document is printed on stdout), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .builder import build_partition_tree, build_tree
from .checker import MAX_BRUTE_SETS, check_bruteforce, check_partition_condition, check_poly
from .core import load_newick, load_set_system, serialize_newick
from .errors import ConditionViolated, HallMedianError
from .genbench import GenSpec, bench_checkers, generate, write_bench_csv
from .median import verify_injective, verify_partition

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2


class _Usage(Exception):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, indent=2)


def _emit(doc, text: str, as_json: bool):
    print(_dump(doc) if as_json else text)


def _load_instance(path, need_triples: bool):
    C = load_set_system(path)
    if need_triples and not C.is_triple_system:
        raise _Usage("instance contains sets that are not triples; use --partition")
    return C


def _cmd_check(args) -> int:
    C = _load_instance(args.input, not args.partition)
    modes = ["poly", "brute"] if args.mode == "both" else [args.mode]
    outcomes = {}
    for mode in modes:
        if args.partition:
            outcomes[mode] = check_partition_condition(C, mode, max_sets=args.max_sets)
        elif mode == "poly":
            outcomes[mode] = check_poly(C)
        else:
            outcomes[mode] = check_bruteforce(C, max_sets=args.max_sets)
    statuses = {o.status for o in outcomes.values()}
    if len(statuses) > 1:
        print(_dump({"error": "checker disagreement",
                     "outcomes": {m: o.to_document() for m, o in outcomes.items()}}))
        return EXIT_ERROR
    outcome = outcomes[modes[0]]
    doc = outcome.to_document()
    if args.mode == "both":
        doc["modes"] = modes
    _emit(doc, outcome.describe(), args.json or not outcome.satisfied)
    return EXIT_OK if outcome.satisfied else EXIT_VIOLATED


def _cmd_build(args) -> int:
    C = _load_instance(args.input, not args.partition)
    trace = []
    try:
        if args.partition:
            tree = build_partition_tree(C, trace)
        else:
            tree = build_tree(C, trace)
    except ConditionViolated as exc:
        print(_dump(exc.outcome.to_document()))
        return EXIT_VIOLATED
    report = verify_partition(tree, C) if args.partition else verify_injective(tree, C)
    if not report.passed or not tree.is_binary():
        print(_dump({"error": "internal verification failed", "report": report.to_document()}))
        return EXIT_ERROR
    newick = serialize_newick(tree)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(newick + "\n")
    else:
        print(newick)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(_dump([step.to_document() for step in trace]) + "\n")
    if args.report or args.partition:
        doc = report.to_document()
        doc["newick"] = newick
        print(_dump(doc), file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    tree = load_newick(args.tree)
    C = _load_instance(args.input, not args.partition)
    if not tree.is_binary():
        raise _Usage("tree is not a binary phylogenetic tree")
    report = verify_partition(tree, C) if args.partition else verify_injective(tree, C)
    print(_dump(report.to_document()))
    return EXIT_OK if report.passed else EXIT_VIOLATED


def _cmd_gen(args) -> int:
    spec = GenSpec(args.leaves, args.sets, args.seed, args.violating, args.partition)
    try:
        spec.validate()
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    C, tree = generate(spec)
    text = _dump(C.to_document()) + "\n" if args.format == "json" else C.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.emit_tree:
        if args.violating:
            raise _Usage("--emit-tree is only available for satisfying instances")
        with open(args.emit_tree, "w", encoding="utf-8") as fh:
            fh.write(serialize_newick(tree) + "\n")
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _Usage(f"expected a comma-separated list of integers, got {text!r}") from None


def _parse_grid(text: str) -> list[tuple[int, int]]:
    cells = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            if ":" in tok:
                n, m = tok.split(":")
                cells.append((int(n), int(m)))
            else:
                cells.append((int(tok), int(tok) - 2))
        except ValueError:
            raise _Usage(f"bad grid cell {tok!r}; use N or N:M") from None
    for n, m in cells:
        if n < 3 or not 0 <= m <= n - 2:
            raise _Usage(f"grid cell {n}:{m} needs n >= 3 and 0 <= m <= n - 2")
    return cells


def _cmd_bench(args) -> int:
    cells = _parse_grid(args.grid)
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    if any(m not in ("poly", "brute") for m in modes):
        raise _Usage("modes must be drawn from poly,brute")
    if "brute" in modes and any(m > args.max_sets for _, m in cells):
        raise _Usage(f"brute mode is limited to {args.max_sets} sets")
    rows = bench_checkers(cells, _int_list(args.seeds), modes, repeats=args.repeats, max_brute_sets=args.max_sets)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_bench_csv(rows, fh)
    else:
        write_bench_csv(rows, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hallmedian",
                                     description="Strengthened Hall condition checks and median-tree construction")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="decide the condition for an instance file")
    p.add_argument("input")
    p.add_argument("--mode", choices=["poly", "brute", "both"], default="poly")
    p.add_argument("--partition", action="store_true", help="check the general (partition) condition")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-sets", type=int, default=MAX_BRUTE_SETS, help="brute-force size guard")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("build", help="construct a realizing binary tree")
    p.add_argument("input")
    p.add_argument("--out", help="write the Newick tree here instead of stdout")
    p.add_argument("--partition", action="store_true")
    p.add_argument("--trace", help="write the reduction steps as JSON")
    p.add_argument("--report", action="store_true", help="also print the verification report")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("verify", help="verify a tree against an instance")
    p.add_argument("--tree", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--partition", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--sets", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--violating", action="store_true")
    p.add_argument("--partition", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.add_argument("--emit-tree", help="write the planted tree (satisfying instances only)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="time the checkers and write CSV")
    p.add_argument("--grid", required=True, help="comma-separated N or N:M cells")
    p.add_argument("--seeds", default="0")
    p.add_argument("--modes", default="poly")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--max-sets", type=int, default=MAX_BRUTE_SETS)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (_Usage, HallMedianError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
