"""Command-line front door: verify, bmc, and dump-cts subcommands.

Exit codes: 0 safe (or safe up to the bound), 1 unsafe, 2 unknown,
64 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bmc import bmc
from .constraints import format_conjunction
from .dot import emit_dot
from .engine import BudgetExceeded, Engine, EngineConfig
from .frontend import ParseError, dump_cts, parse_cts, parse_mini
from .program import TransitionSystem, lower

EXIT_SAFE = 0
EXIT_UNSAFE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64


def _load(path: str, kind: str | None) -> TransitionSystem:
    p = Path(path)
    if kind is None:
        if p.suffix == ".c":
            kind = "mini"
        elif p.suffix == ".cts":
            kind = "cts"
        else:
            raise SystemExit2(f"cannot infer input kind from {p.suffix!r}; "
                              "pass --kind mini|cts")
    text = p.read_text()
    if kind == "mini":
        return lower(parse_mini(text))
    return parse_cts(text)


class SystemExit2(Exception):
    pass


def _stats_line(stats, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(stats.as_dict())
    return "stats: " + " ".join(f"{k}={v}" for k, v in stats.as_dict().items())


def _cmd_verify(args) -> int:
    ts = _load(args.input, args.kind)
    cfg = EngineConfig(max_nodes=args.max_nodes, max_depth=args.max_depth,
                       timeout_s=args.timeout,
                       record_tree=args.dot is not None,
                       snapshot_on_restart=args.dot_per_restart,
                       check_invariants=args.check)
    eng = Engine(ts, cfg)
    verdict = eng.run()
    if args.dot is not None:
        Path(args.dot).write_text(emit_dot(eng, per_restart=args.dot_per_restart))
    if verdict.kind == "SAFE":
        print("SAFE")
        names = eng.render_invariants(verdict.invariants)
        for point in sorted(names, key=lambda p: (p.tag is None, p.tag)):
            print(f"invariant @{point}: {names[point]}")
        print(_stats_line(eng.stats, args.stats))
        return EXIT_SAFE
    if verdict.kind == "UNSAFE":
        print("UNSAFE")
        points = [str(ts.initial)] + [str(r.to_pt) for r in verdict.trace]
        print("trace: " + " -> ".join(points))
        if verdict.witness is not None:
            goal_vars = _final_instances(eng, verdict)
            vals = " ".join(f"{n}={verdict.witness.value(v)}"
                            for n, v in goal_vars)
            print(f"witness: {vals}")
        print(_stats_line(eng.stats, args.stats))
        return EXIT_UNSAFE
    print(f"UNKNOWN({verdict.reason})")
    print(_stats_line(eng.stats, args.stats))
    return EXIT_UNKNOWN


def _final_instances(eng: Engine, verdict) -> list[tuple[str, int]]:
    """Program-variable instances at the end of the counterexample trace."""
    from .engine import replay_trace

    replay = replay_trace(eng.ts, verdict.trace)
    if replay is None:
        return []
    goal, _ = replay
    return list(zip(eng.ts.vars, goal.primaries))


def _cmd_bmc(args) -> int:
    ts = _load(args.input, args.kind)
    try:
        verdict = bmc(ts, args.bound, max_nodes=args.max_nodes)
    except BudgetExceeded as b:
        print(f"UNKNOWN({b.reason})")
        return EXIT_UNKNOWN
    if verdict.kind == "SAFE_UP_TO":
        print(f"SAFE_UP_TO({verdict.bound})")
        print(f"stats: nodes={verdict.nodes}")
        return EXIT_SAFE
    print("UNSAFE")
    points = [str(ts.initial)] + [str(r.to_pt) for r in verdict.trace]
    print("trace: " + " -> ".join(points))
    print(f"stats: nodes={verdict.nodes}")
    return EXIT_UNSAFE


def _cmd_dump_cts(args) -> int:
    ts = _load(args.input, args.kind)
    sys.stdout.write(dump_cts(ts))
    return EXIT_SAFE


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="sevloop",
        description="Prove safety of small integer programs by interpolation-"
                    "guided symbolic execution with lazy loop unrolling.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="program file (.c mini language, .cts rules)")
        p.add_argument("--kind", choices=["mini", "cts"], default=None,
                       help="input format (default: by extension)")
        p.add_argument("--max-nodes", type=int, default=1_000_000)

    pv = sub.add_parser("verify", help="run the symbolic execution engine")
    common(pv)
    pv.add_argument("--max-depth", type=int, default=10_000)
    pv.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    pv.add_argument("--dot", default=None, metavar="PATH",
                    help="write the explored tree as Graphviz text")
    pv.add_argument("--dot-per-restart", action="store_true",
                    help="emit one digraph per traversal (before/after restarts)")
    pv.add_argument("--stats", choices=["human", "json"], default="human")
    pv.add_argument("--check", action="store_true",
                    help="enable internal soundness assertions")
    pv.set_defaults(fn=_cmd_verify)

    pb = sub.add_parser("bmc", help="bounded path enumeration oracle")
    common(pb)
    pb.add_argument("--bound", type=int, default=10)
    pb.set_defaults(fn=_cmd_bmc)

    pd = sub.add_parser("dump-cts", help="lower a mini program and print rules")
    common(pd)
    pd.set_defaults(fn=_cmd_dump_cts)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, SystemExit2) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
