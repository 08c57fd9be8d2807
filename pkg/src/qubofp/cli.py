"""Command-line entry point: ``qubofp {solve,decide,reduce,repair,bench}``.

Exit codes: 0 success, 1 internal/inconsistency, 2 parse or usage error,
3 subclass violation, 4 oracle capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bench, io_formats
from .core import InconsistencyError, QuboError, QuboInstance, SubclassViolation, evaluate
from .io_formats import ParseError
from .oracle import OracleCapacityError, OracleHandle
from .reductions import (
    reduce_clique_to_squbo,
    reduce_ilp_to_qubo,
    reduce_knapsack_to_ilp,
    normalize_rational,
    interpret_ilp_result,
    repair_to_clique,
)
from .solvers import SolveReport, decide_dqubo, solve_lqubo, solve_qubo, solve_uqubo

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_SUBCLASS, EXIT_CAPACITY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}")


def _size_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"invalid size range {text!r}")
    return range(a, b + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qubofp", description="Oracle-driven QUBO solving and reductions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def io_args(p: argparse.ArgumentParser, formats: tuple[str, ...], default: str) -> None:
        p.add_argument("--input", required=True, type=Path)
        p.add_argument("--output", type=Path, help="default: standard output")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("solve", help="minimize a QUBO, reducing other formats first")
    io_args(p, tuple(io_formats.PARSERS), "qubo")
    p.add_argument("--mode", choices=("auto", "general", "lqubo", "uqubo"), default="auto")
    p.add_argument("--lower-bound", type=int, dest="ell", help="LQUBO bound ell < 0")
    p.add_argument("--upper-bound", type=int, dest="u", help="UQUBO bound u > 0")
    p.add_argument("--extract-argmin", action="store_true")

    p = sub.add_parser("decide", help="is the minimum exactly --value?")
    io_args(p, ("qubo",), "qubo")
    p.add_argument("--value", type=int, required=True)

    p = sub.add_parser("reduce", help="write the reduced instance and a mapping sidecar")
    io_args(p, ("ilp", "graph", "knapsack", "rqubo"), "ilp")

    p = sub.add_parser("repair", help="turn an optimal clique-QUBO assignment into a clique")
    io_args(p, ("graph",), "graph")
    p.add_argument("--assignment", required=True, type=Path)

    p = sub.add_parser("bench", help="query-count benchmark as CSV")
    p.add_argument("--family", choices=bench.FAMILIES, required=True)
    p.add_argument("--sizes", type=_size_range, required=True, help="A..B inclusive")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path)
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(1, 1, f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _solve_qubo(qubo: QuboInstance, args: argparse.Namespace) -> SolveReport:
    mode = args.mode
    if mode == "auto":
        mode = "uqubo" if args.u is not None else "lqubo" if args.ell is not None else "general"
    handle = OracleHandle(qubo)
    if mode == "uqubo":
        if args.u is None:
            raise SubclassViolation("--mode uqubo needs --upper-bound")
        return solve_uqubo(qubo, args.u, handle, with_argmin=args.extract_argmin)
    if mode == "lqubo":
        if args.ell is None:
            raise SubclassViolation("--mode lqubo needs --lower-bound")
        return solve_lqubo(qubo, args.ell, handle, with_argmin=args.extract_argmin)
    return solve_qubo(qubo, handle, with_argmin=args.extract_argmin)


def cmd_solve(args: argparse.Namespace) -> int:
    if args.ell is not None and args.ell >= 0:
        raise SubclassViolation("--lower-bound must be negative")
    if args.u is not None and args.u <= 0:
        raise SubclassViolation("--upper-bound must be positive")
    text = _read(args.input)
    extra: dict = {}
    fmt = args.format
    if fmt == "qubo":
        report = _solve_qubo(io_formats.parse_qubo(text), args)
    elif fmt == "graph":
        graph = io_formats.parse_graph(text)
        squbo = reduce_clique_to_squbo(graph)
        report = _solve_qubo(squbo, args)
        extra["reduction"] = "graph->qubo"
        extra["max_clique"] = -report.min_value
        if report.argmin is not None:
            clique = repair_to_clique(squbo, report.argmin)
            extra["clique"] = [v for v, bit in enumerate(clique, start=1) if bit]
    elif fmt in ("ilp", "knapsack"):
        if fmt == "knapsack":
            ilp = reduce_knapsack_to_ilp(io_formats.parse_knapsack(text))
            extra["reduction"] = "knapsack->ilp->qubo"
        else:
            ilp = io_formats.parse_ilp(text)
            extra["reduction"] = "ilp->qubo"
        mapping = reduce_ilp_to_qubo(ilp)
        raw = _solve_qubo(mapping.qubo, args)
        optimum = interpret_ilp_result(mapping, raw)
        # report the penalty objective including its constant term
        report = SolveReport(
            n=raw.n,
            min_value=raw.min_value + mapping.constant,
            queries=raw.queries,
            search_interval=raw.search_interval,
            argmin=raw.argmin,
            offset_applied=raw.offset_applied + mapping.constant,
        )
        extra["ilp_optimum"] = optimum
        if fmt == "knapsack":
            extra["knapsack_optimum"] = optimum
        if raw.argmin is not None:
            extra["ilp_solution"] = list(mapping.split(raw.argmin)[0])
    elif fmt == "rqubo":
        qubo, scale = normalize_rational(io_formats.parse_rqubo(text))
        report = _solve_qubo(qubo, args)
        extra["reduction"] = "rqubo->qubo"
        extra["scale"] = scale
        extra["rational_min"] = str(Fraction(report.min_value, scale))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(fmt)
    _emit(io_formats.write_report(report, extra), args.output)
    return EXIT_OK


def cmd_decide(args: argparse.Namespace) -> int:
    qubo = io_formats.parse_qubo(_read(args.input))
    answer = decide_dqubo(qubo, args.value, OracleHandle(qubo))
    _emit("true\n" if answer else "false\n", args.output)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    text = _read(args.input)
    fmt = args.format
    if fmt == "ilp":
        mapping = reduce_ilp_to_qubo(io_formats.parse_ilp(text))
        body, sidecar = io_formats.write_qubo(mapping.qubo), io_formats.write_ilp_mapping(mapping)
    elif fmt == "graph":
        squbo = reduce_clique_to_squbo(io_formats.parse_graph(text))
        body = io_formats.write_qubo(squbo)
        sidecar = json.dumps({"reduction": "graph", "n_qubo": squbo.n, "negate_output": True}, separators=(",", ":")) + "\n"
    elif fmt == "knapsack":
        ilp = reduce_knapsack_to_ilp(io_formats.parse_knapsack(text))
        body = io_formats.write_ilp(ilp)
        sidecar = json.dumps({"reduction": "knapsack", "bound": str(ilp.b[0])}, separators=(",", ":")) + "\n"
    else:
        qubo, scale = normalize_rational(io_formats.parse_rqubo(text))
        body = io_formats.write_qubo(qubo)
        sidecar = json.dumps({"reduction": "rqubo", "scale": str(scale)}, separators=(",", ":")) + "\n"
    _emit(body, args.output)
    if args.output is None:
        sys.stderr.write(sidecar)
    else:
        args.output.with_name(args.output.name + ".map.json").write_text(sidecar, encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_repair(args: argparse.Namespace) -> int:
    graph = io_formats.parse_graph(_read(args.input))
    bits = io_formats.parse_assignment(_read(args.assignment))
    if len(bits) != graph.n_vertices:
        raise ParseError(1, 1, f"assignment has {len(bits)} bits for {graph.n_vertices} vertices")
    squbo = reduce_clique_to_squbo(graph)
    if not decide_dqubo(squbo, evaluate(squbo, bits), OracleHandle(squbo)):
        raise InconsistencyError("assignment is not optimal for the clique QUBO")
    z = repair_to_clique(squbo, bits)
    _emit(" ".join(str(v) for v, bit in enumerate(z, start=1) if bit) + "\n", args.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise SystemExit("qubofp bench: error: --trials must be non-negative")
    bench.check_capacity(args.family, args.sizes)
    _emit(bench.to_csv(args.family, args.sizes, args.trials, args.seed), args.output)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "decide": cmd_decide,
    "reduce": cmd_reduce,
    "repair": cmd_repair,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return EXIT_OK
        if isinstance(exc.code, str):
            sys.stderr.write(exc.code + "\n")
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except SubclassViolation as exc:
        sys.stderr.write(f"subclass violation: {exc}\n")
        return EXIT_SUBCLASS
    except OracleCapacityError as exc:
        sys.stderr.write(f"oracle capacity: {exc}\n")
        return EXIT_CAPACITY
    except SystemExit as exc:
        sys.stderr.write(f"{exc.code}\n")
        return EXIT_PARSE
    except QuboError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
