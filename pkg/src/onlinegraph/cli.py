"""Command-line front end.

Every subcommand prints one JSON object (or a short text block with
``--human``)::

    {"subcommand": ..., "input": ..., "value": ..., "witness": ..., "stats": {"nodes", "memo_hits", "ms"}}

``witness`` is present only when there is one to show.  Exit status is 0 on
success, 1 for unreadable or malformed input, 2 when a size limit or the node
budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis, game, setsystem
from .errors import BudgetExceededError, OnlineGraphError, SizeLimitError
from .graph_core import Graph, add_isolated, encode_graph6, family, load_graph
from .policies import POLICY_NAMES, make_policy

EXIT_INPUT = 1
EXIT_LIMIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with status 1 like every other input error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _graph_options(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("graph input (one of --graph / --family)")
    src.add_argument("--graph", metavar="FILE", help="graph file")
    src.add_argument("--format", choices=["graph6", "edges"], help="file format (default: by extension, else graph6)")
    src.add_argument("--family", help="empty, path, complete, star, complete-bipartite, agi, forest-gadget")
    src.add_argument("--n", type=int, help="family size parameter")
    src.add_argument("--k", type=int, default=0, help="forest-gadget isolated padding")
    src.add_argument("--isolated", type=int, default=0, metavar="J", help="append J isolated vertices to the input")


def _common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--node-budget", type=int, metavar="N",
                   help="maximum expanded game states (default 10^8, env ONLINEGRAPH_NODE_BUDGET)")
    p.add_argument("--human", action="store_true", help="text output instead of JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="onlinegraph", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    problems = ["is", "vc", "ds"]
    algs = list(POLICY_NAMES)

    p = sub.add_parser("solve", help="online independence / vertex cover / domination number")
    _graph_options(p)
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--conservative", action="store_true", help="restrict the adversary to conservative play (is only)")
    p.add_argument("--witness", action="store_true", help="emit the optimal strategy table")
    p.add_argument("--cache", metavar="PATH", help="JSON-lines result cache")
    _common_options(p)

    p = sub.add_parser("worst", help="worst ordering for a fixed algorithm")
    _graph_options(p)
    p.add_argument("--alg", choices=algs, required=True)
    p.add_argument("--problem", choices=problems + ["forest"], required=True)
    _common_options(p)

    p = sub.add_parser("replay", help="run an algorithm on one ordering")
    _graph_options(p)
    p.add_argument("--alg", choices=algs, required=True)
    p.add_argument("--problem", choices=problems + ["forest"], required=True)
    p.add_argument("--order", required=True, help="comma-separated host vertices")
    _common_options(p)

    p = sub.add_parser("freckle", help="Freckle certificate")
    _graph_options(p)
    p.add_argument("--full", action="store_true", help="solve the core even when half the vertices are isolated")
    _common_options(p)

    p = sub.add_parser("compare", help="compare two algorithms")
    _graph_options(p)
    p.add_argument("--alg-a", choices=algs, required=True)
    p.add_argument("--alg-b", choices=algs, required=True)
    p.add_argument("--problem", choices=problems + ["forest"], required=True)
    p.add_argument("--bijective", action="store_true", help="per-ordering and average comparison")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --bijective")
    _common_options(p)

    p = sub.add_parser("reduce", help="build a hardness-reduction instance")
    _graph_options(p)
    p.add_argument("--kind", choices=["mmis-to-ois", "is-to-ods"], required=True)
    p.add_argument("--bound", type=int, required=True, metavar="L")
    p.add_argument("--verify", action="store_true", help="also evaluate both sides of the equivalence")
    _common_options(p)

    p = sub.add_parser("mos", help="Maximum Online Set instances")
    p.add_argument("action", choices=["solve", "greedy", "stats"])
    p.add_argument("--instance", metavar="FILE", required=True, help="set-system JSON")
    p.add_argument("--conservative", action="store_true", help="conservative adversary (solve only)")
    _common_options(p)

    p = sub.add_parser("report", help="consolidated per-graph report")
    _graph_options(p)
    _common_options(p)

    p = sub.add_parser("matching", help="online matching number (edge arrival)")
    _graph_options(p)
    p.add_argument("--greedy", action="store_true", help="worst case of the greedy matching algorithm instead")
    _common_options(p)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def load_input(args) -> tuple[Graph, dict]:
    if (args.graph is None) == (args.family is None):
        raise UsageError("give exactly one of --graph FILE or --family NAME --n K")
    if args.graph is not None:
        fmt = args.format or ("edges" if Path(args.graph).suffix in (".edges", ".txt") else "graph6")
        g = load_graph(_read(args.graph), fmt)
        desc = {"graph": args.graph, "format": fmt}
    else:
        if args.n is None:
            raise UsageError("--family needs --n")
        g = family(args.family, args.n, args.k)
        desc = {"family": args.family.replace("_", "-"), "n": args.n, "k": args.k}
    if args.isolated:
        g = add_isolated(g, args.isolated)
        desc["isolated"] = args.isolated
    desc["graph6"] = encode_graph6(g)
    return g, desc


def _js(v):
    return game.score_to_json(v)


def _run(args) -> tuple[dict, dict | None]:
    budget = args.node_budget
    cmd = args.subcommand
    out: dict = {"subcommand": cmd}
    stats = None

    if cmd == "mos":
        ss = setsystem.load_setsystem(_read(args.instance))
        out["input"] = {"instance": args.instance, **ss.to_json()}
        if args.action == "solve":
            res = setsystem.mso_value(ss, conservative=args.conservative, budget=budget)
            out["value"], stats = _js(res.value), res.stats
        elif args.action == "greedy":
            res = setsystem.gmos_worst(ss)
            out["value"], out["witness"], stats = res.value, res.witness, res.stats
        else:
            st = setsystem.setsystem_stats(ss)
            out["value"] = {"isolated_count": st.isolated_count, "s_size": st.s_size,
                            "core_s_size": st.core_s_size, "core": st.core.to_json()}
            out["witness"] = sorted(st.s_witness)
        return out, stats

    g, out["input"] = load_input(args)
    if cmd == "solve":
        if args.conservative:
            if args.problem != "is":
                raise UsageError("--conservative applies to --problem is only")
            res = game.solve_conservative_is(g, budget=budget)
        else:
            res = game.solve_value(g, args.problem, budget=budget, witness=args.witness, cache=args.cache)
        out["value"], stats = _js(res.value), res.stats
        if args.witness and res.witness is not None:
            out["witness"] = res.witness
    elif cmd == "worst":
        res = game.policy_worst_case(g, args.problem, make_policy(args.alg), budget=budget)
        out["value"], out["witness"], stats = _js(res.value), res.witness, res.stats
    elif cmd == "replay":
        try:
            order = [int(x) for x in args.order.split(",") if x.strip()]
        except ValueError:
            raise UsageError("--order must be comma-separated integers") from None
        trace, value = game.replay(g, order, make_policy(args.alg), args.problem)
        out["value"] = _js(value)
        out["witness"] = {"order": order, "accepted": [order[i] for i in trace.accepted_vertices()]}
    elif cmd == "freckle":
        out["value"] = analysis.freckle_check(g, full=args.full, budget=budget).to_json()
    elif cmd == "compare":
        if args.bijective:
            rep = analysis.bijective_compare(g, args.alg_a, args.alg_b, args.problem, jobs=args.jobs)
            out["value"] = rep.to_json()
        else:
            a = game.policy_worst_case(g, args.problem, make_policy(args.alg_a), budget=budget)
            b = game.policy_worst_case(g, args.problem, make_policy(args.alg_b), budget=budget)
            out["value"] = {"a": _js(a.value), "b": _js(b.value)}
            out["witness"] = {"a": a.witness, "b": b.witness}
            stats = {k: a.stats[k] + b.stats[k] for k in ("nodes", "memo_hits")}
    elif cmd == "reduce":
        make = analysis.reduce_mmis_to_online_is if args.kind == "mmis-to-ois" else analysis.reduce_is_to_online_ds
        red = make(g, args.bound)
        out["value"] = red.to_json()
        if args.verify:
            check = analysis.check_mmis_reduction if args.kind == "mmis-to-ois" else analysis.check_ds_reduction
            source, target = check(g, args.bound)
            out["value"]["verified"] = {"source": source, "target": target, "equivalent": source == target}
    elif cmd == "report":
        out["value"] = analysis.theorem_report(g, budget=budget)
    elif cmd == "matching":
        fn = game.greedy_matching_worst if args.greedy else game.online_matching_number
        res = fn(g, budget=budget)
        out["value"], stats = _js(res.value), res.stats
        if res.witness is not None:
            out["witness"] = res.witness
    return out, stats


def _human(out: dict) -> str:
    lines = [f"{out['subcommand']}: {json.dumps(out['input'], sort_keys=True)}"]
    value = out["value"]
    if isinstance(value, dict):
        lines += [f"  {k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(value.items())]
    else:
        lines.append(f"value: {value}")
    if "witness" in out:
        lines.append(f"witness: {json.dumps(out['witness'], sort_keys=True)}")
    s = out["stats"]
    lines.append(f"nodes: {s['nodes']}  memo hits: {s['memo_hits']}  time: {s['ms']} ms")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        out, stats = _run(args)
    except (SizeLimitError, BudgetExceededError) as exc:
        print(f"onlinegraph: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, OnlineGraphError, ValueError) as exc:
        print(f"onlinegraph: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stats = dict(stats or {"nodes": 0, "memo_hits": 0})
    stats["ms"] = round((time.perf_counter() - t0) * 1000, 3)
    out["stats"] = {"nodes": stats["nodes"], "memo_hits": stats["memo_hits"], "ms": stats["ms"]}
    if args.human:
        print(_human(out))
    else:
        print(json.dumps(out, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
