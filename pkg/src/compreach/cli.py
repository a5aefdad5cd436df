"""Command line interface: ``compreach check|gen|decompose|oracle``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .decompose import DEFAULT_LEAF_BUDGET, decompose
from .dot import write_dot
from .generators import BUFFER_SHAPES, FAMILIES, generate
from .io import (
    FormatError,
    decomposition_to_json,
    dumps,
    expr_depth,
    marked_to_json,
    read_decomposition,
    read_net,
    write_decomposition,
    write_net,
)
from .net import MarkedNet, NetError
from .oracle import reach_marked
from .wiring import WidthGuardError, WiringError, check_reachability

DEFAULT_MAX_WIDTH = 16
EXIT_REACHABLE, EXIT_UNREACHABLE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _verdict(reachable: bool) -> int:
    print("REACHABLE" if reachable else "UNREACHABLE")
    return EXIT_REACHABLE if reachable else EXIT_UNREACHABLE


def cmd_check(args) -> int:
    if args.net is None and args.decomposition is None:
        raise CliError("check needs --net or --decomposition")
    report = None
    t0 = time.perf_counter()
    if args.decomposition is not None:
        expr, assign = read_decomposition(args.decomposition)
    else:
        m = read_net(args.net)
        if m.net.left or m.net.right:
            raise CliError(f"{args.net}: check needs a closed net (0->0), got {m.net.left}->{m.net.right}")
        result = decompose(m.net, m.targets, m.initial, leaf_budget=args.leaf_budget)
        expr, assign, report = result.expr, result.assign, result.report
    decompose_seconds = time.perf_counter() - t0

    keep = [] if args.emit_dot else None
    outcome = check_reachability(expr, assign, use_memo=not args.no_memo, max_width=args.max_width, keep=keep)

    if args.stats:
        doc = {
            "verdict": "REACHABLE" if outcome.reachable else "UNREACHABLE",
            "decompose_seconds": round(decompose_seconds, 6),
            "evaluate": outcome.stats.to_dict(),
            "decomposition": [s.to_dict() for s in report] if report is not None else None,
        }
        Path(args.stats).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    if keep is not None:
        out = Path(args.emit_dot)
        out.mkdir(parents=True, exist_ok=True)
        for stat, dfa in keep:
            if stat.hit:
                continue
            label = stat.name or stat.op
            write_dot(out / f"node{stat.index:04d}_{label}.dot", dfa, f"{label} {stat.widths}", args.emit_sink)
        write_dot(out / "result.dot", outcome.dfa, "result", args.emit_sink)
    return _verdict(outcome.reachable)


def cmd_gen(args) -> int:
    if args.shape is not None and args.family != "buffer" and args.shape != "flat":
        raise CliError(f"--shape {args.shape} applies to buffer only")
    made = generate(args.family, args.n, args.shape)
    if isinstance(made, MarkedNet):
        if args.output:
            write_net(args.output, made)
        else:
            sys.stdout.write(dumps(marked_to_json(made)))
    else:
        expr, assign = made
        if args.output:
            write_decomposition(args.output, expr, assign)
        else:
            sys.stdout.write(dumps(decomposition_to_json(expr, assign), expr_depth(expr)))
    return 0


def cmd_decompose(args) -> int:
    m = read_net(args.net)
    if m.net.left or m.net.right:
        raise CliError(f"{args.net}: decompose needs a closed net (0->0)")
    result = decompose(m.net, m.targets, m.initial, leaf_budget=args.leaf_budget)
    write_decomposition(args.output, result.expr, result.assign)
    if args.explain:
        print(result.explain() or "(single leaf, no cuts)")
    return 0


def cmd_oracle(args) -> int:
    m = read_net(args.net)
    r = reach_marked(m)
    code = _verdict(r.reachable)
    print(f"explored {r.explored} markings")
    if r.reachable:
        print(f"shortest length {r.shortest_length}")
        print("witness " + " ".join(next(iter(s)) for s in r.witness))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compreach",
        description="Compositional reachability checking for 1-bounded Petri nets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether the target marking is reachable")
    p.add_argument("--net", help="net file (JSON)")
    p.add_argument("--decomposition", help="use this decomposition file instead of decomposing --net")
    p.add_argument("--leaf-budget", type=int, default=DEFAULT_LEAF_BUDGET,
                   help="stop splitting components with at most this many places (default %(default)s)")
    p.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH,
                   help="refuse nodes whose boundary has more than this many ports in total (default %(default)s)")
    p.add_argument("--stats", metavar="FILE", help="write evaluation statistics as JSON")
    p.add_argument("--emit-dot", metavar="DIR", help="write the minimal DFA of every evaluated node")
    p.add_argument("--emit-sink", action="store_true", help="draw the sink state in DOT output")
    p.add_argument("--no-memo", action="store_true", help="disable memoisation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a benchmark net or decomposition")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("-n", type=int, required=True, help="size parameter")
    p.add_argument("--shape", choices=BUFFER_SHAPES,
                   help="buffer decomposition shape; 'flat' also gives the plain tree/philosopher net")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="write an automatic decomposition of a net")
    p.add_argument("--net", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--leaf-budget", type=int, default=DEFAULT_LEAF_BUDGET)
    p.add_argument("--explain", action="store_true", help="print the cut taken at every step")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("oracle", help="explicit-state reachability check")
    p.add_argument("--net", required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    try:
        return args.func(args)
    except (CliError, NetError, WiringError, WidthGuardError, FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
