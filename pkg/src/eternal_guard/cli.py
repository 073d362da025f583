"""Command-line surface: solve, oracle, verify, simulate, gen, export.

Exit codes: 0 ok, 1 parse error, 2 domain error (not a cactus, bad strategy,
schema mismatch), 3 resource cap exceeded, 4 failed defense.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .generator import random_cactus
from .multigraph import GraphError, format_graph, is_cactus, parse_graph
from .oracle import CapExceeded, GameMode, exact_number
from .reducer import lower_bound_certificate, solve_number, trace_exemptions
from .strategy import Strategy, StrategyError, check_proper, natural_key, respond
from . import synthesis

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_GAME = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_graph(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e}")
    try:
        return parse_graph(text)
    except GraphError as e:
        raise CliError(EXIT_PARSE, f"bad graph file {path}: {e}")


def _read_strategy(path: str) -> Strategy:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e}")
    try:
        return Strategy.from_json(text)
    except (StrategyError, KeyError, ValueError) as e:
        raise CliError(EXIT_DOMAIN, f"bad strategy file {path}: {e}")


def _check_same_graph(g, st: Strategy):
    want = {tuple(sorted(uv)) for uv in g.edges.values()}
    got = {tuple(sorted(uv)) for uv in st.graph.edges.values()}
    if g.vertices != st.graph.vertices or want != got:
        raise CliError(EXIT_DOMAIN, "strategy is for a different graph")


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    if not is_cactus(g):
        raise CliError(EXIT_DOMAIN, "input graph is not a cactus")
    number, trace = solve_number(g)
    if args.certificate:
        st = synthesis.synthesize(trace, g)
        with open(args.certificate, "w") as fh:
            fh.write(st.to_json() + "\n")
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump(trace.as_doc(), fh, sort_keys=True, indent=1)
            fh.write("\n")
    if args.lower_bounds:
        entries = lower_bound_certificate(trace, g)
        doc = [
            {"step": e.step_kind, "surgeries": list(e.surgeries), "ink": e.ink_value}
            for e in entries
        ]
        with open(args.lower_bounds, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
            fh.write("\n")
    print(number)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    mode = GameMode.EDN if args.mode == "edn" else GameMode.EGC
    try:
        print(exact_number(g, mode, args.max_configs))
    except CapExceeded as e:
        raise CliError(EXIT_RESOURCE, str(e))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    st = _read_strategy(args.strategy)
    _check_same_graph(g, st)
    report: dict = {"valid": True, "violations": [], "defending": None, "proper": None}
    bad = st.validate()
    if bad:
        report["valid"] = False
        report["violations"] = bad
    report["defending"] = st.is_defending() if not bad else False
    ok = report["valid"] and report["defending"]
    if args.proper:
        exempt = frozenset()
        if args.trace:
            with open(args.trace) as fh:
                doc = json.load(fh)
            exempt = frozenset(
                int(e)
                for step in doc.get("steps", [])
                for e in step.get("params", {}).get("exempt_edges", [])
            )
        entries = check_proper(st, exempt)
        report["proper"] = {
            "edges": [
                {"edge": eid, "reason": reason, "ok": okk} for eid, reason, okk in entries
            ],
            "ok": all(t[2] for t in entries),
        }
        ok = ok and report["proper"]["ok"]
    print(json.dumps(report, sort_keys=True, indent=1))
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_simulate(args) -> int:
    g = _read_graph(args.graph)
    st = _read_strategy(args.strategy)
    _check_same_graph(g, st)
    if args.attacks:
        attacks = args.attacks.split(",")
    else:
        rng = random.Random(args.seed)
        verts = g.sorted_vertices()
        attacks = [rng.choice(verts) for _ in range(args.random)]
    current = args.start or sorted(st.states, key=natural_key)[0]
    if current not in st.states:
        raise CliError(EXIT_DOMAIN, f"unknown start state {current}")
    transcript = []
    for attacked in attacks:
        try:
            nxt, moves = respond(st, current, attacked)
        except StrategyError as e:
            print(json.dumps({"transcript": transcript, "failure": str(e)}, sort_keys=True))
            return EXIT_GAME
        transcript.append(
            {
                "state": current,
                "attack": attacked,
                "moves": sorted(list(m) for m in moves),
                "next": nxt,
            }
        )
        current = nxt
    print(json.dumps({"transcript": transcript, "failure": None}, sort_keys=True, indent=1))
    return EXIT_OK


def cmd_gen(args) -> int:
    g = random_cactus(args.vertices, seed=args.seed, leaf_bias=args.leaf_bias)
    sys.stdout.write(format_graph(g))
    return EXIT_OK


def cmd_export(args) -> int:
    g = _read_graph(args.graph)
    st = _read_strategy(args.strategy)
    _check_same_graph(g, st)
    if st.validate() or not st.is_defending():
        raise CliError(EXIT_DOMAIN, "refusing to export an unverified strategy")
    doc = json.loads(st.to_json())
    initial = sorted(st.states, key=natural_key)[0]
    bundle = {
        "version": "arena/1",
        "graph": doc["graph"],
        "states": doc["states"],
        "strategy_edges": doc["strategy_edges"],
        "transitions": doc["transitions"],
        "initial": initial,
    }
    out = json.dumps(bundle, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eternal-guard",
        description="m-eternal domination on cactus graphs: solver, oracle, certificates",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute the guard number of a cactus")
    p.add_argument("graph")
    p.add_argument("--certificate", help="write the strategy certificate JSON here")
    p.add_argument("--trace", help="write the reduction trace JSON here")
    p.add_argument("--lower-bounds", help="write the lower-bound certificate JSON here")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("oracle", help="exact game value by configuration fixpoint")
    p.add_argument("graph")
    p.add_argument("--mode", choices=["edn", "egc"], default="edn")
    p.add_argument("--max-configs", type=int, default=None)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", help="check a strategy certificate")
    p.add_argument("graph")
    p.add_argument("strategy")
    p.add_argument("--proper", action="store_true", help="also check cycle-edge properties")
    p.add_argument("--trace", help="reduction trace JSON supplying property exemptions")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simulate", help="play an attack sequence against a strategy")
    p.add_argument("graph")
    p.add_argument("strategy")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--attacks", help="comma-separated vertices")
    group.add_argument("--random", type=int, help="number of random attacks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", help="initial state id (default: smallest)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("gen", help="generate a random cactus edge list")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--leaf-bias", type=float, default=0.5)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("export", help="bundle a verified strategy for the arena UI")
    p.add_argument("graph")
    p.add_argument("strategy")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=cmd_export)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except GraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
