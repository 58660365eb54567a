"""Command-line front end.

Commands::

    bbenet reduce     <file>  write the reduced network and a name mapping
    bbenet check      <file>  test whether a partition is a backward equivalence
    bbenet attractors <file>  enumerate attractors (optionally reduce first)
    bbenet stg        <file>  export the state graph as DOT
    bbenet verify     <file>  run the preservation checks
    bbenet info       <file>  sizes and input-variable census

Exit codes: 0 ok, 1 usage error, 2 parse error, 3 cap exceeded,
4 partition is not an equivalence, 5 verification failure.

All primary output is byte deterministic; the only run-dependent field
is the trailing ``time_ms``, dropped with ``--no-timing``.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bbe import check_bbe, format_trace, maximal_bbe
from .errors import BbenetError, CapExceededError, NotABbeError, ParseError
from .network import (
    detect_inputs,
    format_state,
    initial_partition,
    parse_bnet,
    parse_partition_file,
    serialize_bnet,
    unpack_state,
)
from .reduction import format_mapping, lift, reduce_network
from .stg import (
    DEFAULT_CAP,
    attractors,
    build_stg,
    export_dot,
    format_attractors,
    restrict_constant,
    verify_attractor_preservation,
    verify_isomorphism,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_NOT_BBE = 4
EXIT_VERIFY = 5


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here reserves 2
    # for input parse errors, so remap usage problems to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_with_message(message))

    def exit_with_message(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _add_common(cmd, strategy=True, cap=False, timing=False):
    cmd.add_argument("input", help="network file in the 'name, expression' format")
    if strategy:
        cmd.add_argument(
            "--strategy",
            nargs="+",
            default=["maximal"],
            metavar="NAME",
            help="maximal | inputs | partition <file>",
        )
        cmd.add_argument(
            "--rest",
            choices=["singletons", "block"],
            default="singletons",
            help="placement of variables missing from a partition file",
        )
    if cap:
        cmd.add_argument(
            "--cap",
            type=int,
            default=DEFAULT_CAP,
            help=f"explicit state-space limit in variables (default {DEFAULT_CAP})",
        )
    if timing:
        cmd.add_argument(
            "--no-timing",
            action="store_true",
            help="omit the wall-clock field from the report",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bbenet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    reduce_cmd = sub.add_parser("reduce", help="write the reduced network")
    _add_common(reduce_cmd, timing=True)
    reduce_cmd.add_argument("--output", help="reduced network path (default: <input>_reduced.bnet)")
    reduce_cmd.add_argument("--trace", help="write the refinement trace to this file")
    reduce_cmd.set_defaults(func=cmd_reduce)

    check_cmd = sub.add_parser("check", help="test a partition")
    _add_common(check_cmd)
    check_cmd.set_defaults(func=cmd_check)

    att_cmd = sub.add_parser("attractors", help="enumerate attractors")
    _add_common(att_cmd, cap=True, timing=True)
    att_cmd.add_argument(
        "--reduce-first",
        action="store_true",
        help="reduce under the chosen strategy, then analyze the reduced network",
    )
    att_cmd.set_defaults(func=cmd_attractors)

    stg_cmd = sub.add_parser("stg", help="export the state graph as DOT")
    _add_common(stg_cmd, strategy=False, cap=True)
    stg_cmd.add_argument("--dot", help="output path (default: stdout)")
    stg_cmd.add_argument("--highlight", help="partition file; fills constant states")
    stg_cmd.add_argument(
        "--restrict",
        action="store_true",
        help="emit only the subgraph of states constant on the highlight partition",
    )
    stg_cmd.add_argument(
        "--rest",
        choices=["singletons", "block"],
        default="singletons",
        help="placement of variables missing from the highlight file",
    )
    stg_cmd.set_defaults(func=cmd_stg)

    verify_cmd = sub.add_parser("verify", help="run the preservation checks")
    _add_common(verify_cmd, cap=True)
    verify_cmd.set_defaults(func=cmd_verify)

    info_cmd = sub.add_parser("info", help="sizes and input census")
    _add_common(info_cmd, strategy=False)
    info_cmd.set_defaults(func=cmd_info)
    return parser


def _load_network(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_bnet(text)


def _resolve_strategy(args, bn):
    """Return (label, initial partition) from the --strategy flags."""
    spec = args.strategy
    if spec == ["maximal"]:
        return "maximal", initial_partition(bn, "maximal")
    if spec == ["inputs"]:
        return "inputs", initial_partition(bn, "inputs")
    if len(spec) == 2 and spec[0] == "partition":
        try:
            text = Path(spec[1]).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {spec[1]}: {exc.strerror}") from None
        return "partition", parse_partition_file(text, bn, rest=args.rest)
    raise _Usage(f"bad --strategy {' '.join(spec)!r}; "
                 "expected 'maximal', 'inputs', or 'partition <file>'")


class _Usage(Exception):
    pass


def cmd_reduce(args) -> int:
    bn = _load_network(args.input)
    label, initial = _resolve_strategy(args, bn)
    started = time.perf_counter()
    partition, trace = maximal_bbe(bn, initial, want_trace=args.trace is not None)
    result = reduce_network(bn, partition)
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    out_path = Path(args.output) if args.output else _default_output(args.input)
    out_path.write_text(serialize_bnet(result.reduced), encoding="utf-8")
    map_path = out_path.with_name(out_path.name + ".map")
    map_path.write_text(format_mapping(result), encoding="utf-8")
    if args.trace:
        Path(args.trace).write_text(format_trace(trace), encoding="utf-8")

    report = (
        f"N={bn.n} reduced={result.reduced.n} "
        f"ratio={result.reduced.n / bn.n:.3f} strategy={label}"
    )
    if not args.no_timing:
        report += f" time_ms={elapsed_ms:.0f}"
    print(report)
    return EXIT_OK


def _default_output(input_path: str) -> Path:
    path = Path(input_path)
    stem = path.stem if path.suffix else path.name
    return path.with_name(f"{stem}_reduced.bnet")


def cmd_check(args) -> int:
    bn = _load_network(args.input)
    _, partition = _resolve_strategy(args, bn)
    outcome = check_bbe(bn, partition)
    if outcome.is_bbe:
        print("BBE")
        return EXIT_OK
    print(f"not a BBE: witness={format_state(outcome.witness)}")
    return EXIT_NOT_BBE


def cmd_attractors(args) -> int:
    bn = _load_network(args.input)
    started = time.perf_counter()
    if args.reduce_first:
        _, initial = _resolve_strategy(args, bn)
        partition, _ = maximal_bbe(bn, initial)
        result = reduce_network(bn, partition)
        target = result.reduced
    else:
        result = None
        target = bn
    if target.n > args.cap:
        print(
            f"{target.n} variables exceed the cap of {args.cap}; "
            "pass --reduce-first or raise --cap",
            file=sys.stderr,
        )
        return EXIT_CAP
    found = attractors(target, cap=args.cap)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(f"attractors={len(found)}")
    for attractor in found:
        print(format_attractors([attractor], target.n), end="")
        if result is not None:
            cycle = [
                format_state(lift(result, unpack_state(s, target.n)))
                for s in attractor.states
            ]
            cycle.append(cycle[0])
            print(f"  lifted: {' -> '.join(cycle)}")
    if not args.no_timing:
        print(f"time_ms={elapsed_ms:.0f}")
    return EXIT_OK


def cmd_stg(args) -> int:
    bn = _load_network(args.input)
    graph = build_stg(bn, cap=args.cap)
    highlight = None
    if args.highlight:
        try:
            text = Path(args.highlight).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {args.highlight}: {exc.strerror}") from None
        highlight = parse_partition_file(text, bn, rest=args.rest)
    if args.restrict:
        if highlight is None:
            raise _Usage("--restrict needs --highlight <partitionfile>")
        dot = export_dot(restrict_constant(graph, highlight), highlight)
    else:
        dot = export_dot(graph, highlight)
    if args.dot:
        Path(args.dot).write_text(dot, encoding="utf-8")
    else:
        print(dot, end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    bn = _load_network(args.input)
    _, initial = _resolve_strategy(args, bn)
    partition, _ = maximal_bbe(bn, initial)
    iso = verify_isomorphism(bn, partition, cap=args.cap)
    att = verify_attractor_preservation(bn, partition, cap=args.cap)
    print(f"isomorphism: {'PASS' if iso.ok else 'FAIL'}")
    print(f"attractor-preservation: {'PASS' if att.ok else 'FAIL'}")
    for problem in iso.problems + att.problems:
        print(f"  {problem}", file=sys.stderr)
    return EXIT_OK if iso.ok and att.ok else EXIT_VERIFY


def cmd_info(args) -> int:
    bn = _load_network(args.input)
    kinds = detect_inputs(bn)
    inputs = sum(1 for kind in kinds.values() if kind.is_input)
    print(f"n={bn.n}")
    print(f"inputs={inputs}")
    for i, name in enumerate(bn.variables):
        print(f"{i} {name} {kinds[name].value}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"bbenet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"bbenet: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"bbenet: {exc}; pass --reduce-first or raise --cap", file=sys.stderr)
        return EXIT_CAP
    except NotABbeError as exc:
        print(f"bbenet: {exc}", file=sys.stderr)
        return EXIT_NOT_BBE
    except BbenetError as exc:
        print(f"bbenet: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
