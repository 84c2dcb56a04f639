"""Command-line front end.

Exit codes: 0 success, 1 domain error (bad game file, failed precondition),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, constructions, dynamics, instances
from .errors import CGRRError, ImprovementViolation
from .game import Game, is_nash

TOPOLOGIES = tuple(constructions.CONSTRUCTORS)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(obj, out: str | None):
    text = json.dumps(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _profile_arg(game: Game, args) -> tuple:
    if args.trace:
        return game.check_profile(dynamics.Trace.load(args.trace).terminal)
    if args.profile is None:
        raise CGRRError("need --profile or --trace")
    return game.check_profile(args.profile)


def cmd_simulate(args) -> int:
    game = Game.load(args.game)
    sched = dynamics.Scheduler.parse(args.scheduler, seed=args.seed, sequence=args.sequence)
    initial = args.initial if args.initial is not None else [0] * game.num_users
    rule = {"best": "best_response", "first": "first_improving"}[args.move_rule]
    trace = dynamics.run(game, initial, sched, args.max_steps, rule)
    if args.out:
        trace.save(args.out)
        _emit({"events": len(trace), "outcome": trace.outcome,
               "terminal": list(trace.terminal)}, None)
    else:
        sys.stdout.write(trace.to_jsonl())
    return 0


def cmd_check_ne(args) -> int:
    game = Game.load(args.game)
    prof = _profile_arg(game, args)
    v = is_nash(game, prof)
    w = None if v.witness is None else dict(v.witness._asdict())
    _emit({"profile": list(prof), "is_nash": v.is_nash, "witness": w}, args.out)
    return 0


def cmd_enumerate_ne(args) -> int:
    game = Game.load(args.game)
    report = analysis.AnalysisReport(
        nash_profiles=analysis.enumerate_nash(game, args.cap, args.workers))
    _emit(report.to_dict(), args.out)
    return 0


def cmd_fip_check(args) -> int:
    game = Game.load(args.game)
    report = analysis.AnalysisReport(fip=analysis.fip_check(game, args.cap))
    report.potential_checks = analysis.applicable_potential_checks(game, args.cap, args.seed)
    _emit(report.to_dict(), args.out)
    return 0


def cmd_construct(args) -> int:
    if args.game:
        game = Game.load(args.game)
    else:
        game = instances.topology_instance(args.topology, args.seed, args.n, args.resources)
    if args.emit_game:
        game.save(args.emit_game)
    prof = constructions.construct(game, args.topology)
    v = is_nash(game, prof)
    out = {"topology": args.topology, "profile": list(prof),
           "verification": {"is_nash": v.is_nash}}
    if game.num_resources ** game.num_users <= args.cap:
        out["verification"]["in_enumeration"] = prof in analysis.enumerate_nash(game, args.cap)
    _emit(out, args.out)
    return 0


def cmd_counterexample(args) -> int:
    bundle = constructions.build_counterexample()
    trace = constructions.replay_counterexample(bundle)
    if args.emit_game:
        bundle.game.save(args.emit_game)
    if args.out:
        trace.save(args.out)
        summary = bundle.to_dict()
        summary["replay"] = {"events": len(trace), "outcome": trace.outcome,
                             "terminal_equals_initial": trace.terminal == trace.initial}
        _emit(summary, None)
    else:
        sys.stdout.write(trace.to_jsonl())
    return 0


def cmd_validate(args) -> int:
    game = Game.load(args.game)
    _emit({"valid": True, "num_users": game.num_users, "num_resources": game.num_resources,
           "num_edges": len(game.graph.edges), "mode": game.payoffs.mode}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cgrr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, need_game=True):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--game", required=need_game, help="game JSON file")
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--cap", type=int, default=analysis.DEFAULT_CAP,
                       help="largest profile space to enumerate")
        p.add_argument("--seed", type=int)
        return p

    p = add("simulate", cmd_simulate)
    p.add_argument("--scheduler", default="round-robin",
                   choices=["round-robin", "random", "sequence"])
    p.add_argument("--move-rule", default="best", choices=["best", "first"])
    p.add_argument("--max-steps", type=int, default=10 ** 6)
    p.add_argument("--initial", type=_int_list, help="starting profile, e.g. 0,1,0")
    p.add_argument("--sequence", type=_int_list, help="user order for --scheduler sequence")

    p = add("check-ne", cmd_check_ne)
    p.add_argument("--profile", type=_int_list)
    p.add_argument("--trace", help="use the terminal profile of a trace file")

    p = add("enumerate-ne", cmd_enumerate_ne)
    p.add_argument("--workers", type=int, default=1)

    add("fip-check", cmd_fip_check)

    p = add("construct", cmd_construct, need_game=False)
    p.add_argument("--topology", required=True, choices=TOPOLOGIES)
    p.add_argument("--emit-game", help="write the game used to this path")
    p.add_argument("--n", type=int, help="users in a generated instance")
    p.add_argument("--resources", type=int, help="resources in a generated instance")

    p = add("counterexample", cmd_counterexample, need_game=False)
    p.add_argument("--emit-game", help="write the gadget game to this path")

    add("validate", cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        if args.scheduler == "random" and args.seed is None:
            parser.error("--scheduler random requires --seed")
        if args.scheduler == "sequence" and args.sequence is None:
            parser.error("--scheduler sequence requires --sequence")
    if args.command == "construct" and args.game is None and args.seed is None:
        parser.error("construct without --game generates a random instance and requires --seed")
    try:
        return args.func(args)
    except (CGRRError, ValueError, IndexError, KeyError, OSError) as exc:
        msg = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ImprovementViolation):
            msg["violation"] = exc.as_dict()
        sys.stderr.write(json.dumps(msg) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
