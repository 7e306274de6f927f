"""Theorem-level analyses built on the solvers.

Freckle recognition, per-ordering comparison of two policies, the two
hardness reductions, and a consolidated per-graph report.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeLimitError
from .game import INFEASIBLE, Problem, policy_worst_case, public_score, score, solve_value
from .graph_core import Graph, add_isolated, encode_graph6, split_isolated
from .policies import OracleKind, Policy, make_policy, offline_oracle
from .state import RevealedState

BIJECTIVE_LIMIT = 10


@dataclass(frozen=True)
class FreckleCertificate:
    k: int
    s_size: int
    io_core: int | None  # None when the half-isolated shortcut decided
    is_freckle: bool

    def to_json(self) -> dict:
        return {"k": self.k, "s_size": self.s_size, "io_core": self.io_core, "is_freckle": self.is_freckle}


def freckle_check(g: Graph, *, full: bool = False, budget: int | None = None) -> FreckleCertificate:
    """Decide ``k + s(G') >= I^O(G')`` for the isolated count ``k`` and core ``G'``.

    A graph whose vertices are at least half isolated always qualifies, so
    the core is only solved when that fails (or when ``full`` asks for it).
    """
    k, core = split_isolated(g)
    s = offline_oracle(core, OracleKind.MIN_MAXIMAL_IS, limit=g.vertex_limit).size
    if 2 * k >= g.n and not full:
        return FreckleCertificate(k, s, None, True)
    io = solve_value(core, Problem.IS, budget=budget, limit=g.vertex_limit).value
    return FreckleCertificate(k, s, io, k + s >= io)


# -- bijective / average comparison -------------------------------------------


@dataclass(frozen=True)
class BijectiveReport:
    orderings_total: int
    dominance: bool
    strict_witness: tuple[int, ...] | None
    violation_witness: tuple[int, ...] | None
    mean_a: Fraction | None  # None when some ordering scores Infeasible
    mean_b: Fraction | None

    def to_json(self) -> dict:
        def frac(x):
            return None if x is None else {"num": x.numerator, "den": x.denominator}

        return {
            "orderings_total": self.orderings_total,
            "dominance": self.dominance,
            "strict_witness": None if self.strict_witness is None else list(self.strict_witness),
            "violation_witness": None if self.violation_witness is None else list(self.violation_witness),
            "mean_a": frac(self.mean_a),
            "mean_b": frac(self.mean_b),
        }


def _step(g: Graph, p: Policy, st: RevealedState, prefix, v) -> RevealedState:
    nbrs = 0
    for j, u in enumerate(prefix):
        if g.rows[v] >> u & 1:
            nbrs |= 1 << j
    return st.extend(nbrs, p.decide(st, nbrs))


def _tally(g: Graph, a: Policy, b: Policy, problem: Problem, first: int | None = None) -> dict:
    """Walk every ordering (optionally those starting with ``first``) sharing prefixes."""
    better = (lambda x, y: x > y) if problem.maximize else (lambda x, y: x < y)
    acc = {"count": 0, "sum_a": 0, "sum_b": 0, "infeasible": False, "strict": None, "violation": None}
    n = g.n

    def rec(prefix, sa, sb, left):
        if not left:
            va = score(problem, sa.adj, sa.accepted)
            vb = score(problem, sb.adj, sb.accepted)
            acc["count"] += 1
            if math.isinf(va) or math.isinf(vb):
                acc["infeasible"] = True
            else:
                acc["sum_a"] += va
                acc["sum_b"] += vb
            if acc["strict"] is None and better(va, vb):
                acc["strict"] = tuple(prefix)
            if acc["violation"] is None and better(vb, va):
                acc["violation"] = tuple(prefix)
            return
        for v in sorted(left):
            rec(prefix + [v], _step(g, a, sa, prefix, v), _step(g, b, sb, prefix, v), left - {v})

    if n == 0:
        rec([], RevealedState(), RevealedState(), frozenset())
    elif first is None:
        rec([], RevealedState(), RevealedState(), frozenset(range(n)))
    else:
        st_a = _step(g, a, RevealedState(), [], first)
        st_b = _step(g, b, RevealedState(), [], first)
        rec([first], st_a, st_b, frozenset(range(n)) - {first})
    return acc


def _tally_job(args):
    g, a_name, b_name, problem, first = args
    return _tally(g, make_policy(a_name), make_policy(b_name), problem, first)


def bijective_compare(g: Graph, a: Policy | str, b: Policy | str, problem="is", *,
                      jobs: int = 1) -> BijectiveReport:
    """Compare ``a`` and ``b`` ordering by ordering (identity bijection) and on average.

    ``dominance`` means ``a`` is at least as good as ``b`` on every ordering
    (``>=`` for maximisation, ``<=`` for minimisation).  ``jobs > 1`` splits
    the orderings by first vertex across processes; policies are then rebuilt
    from their names, so they must be registry policies.
    """
    problem = Problem.parse(problem)
    a, b = make_policy(a), make_policy(b)
    if g.n > BIJECTIVE_LIMIT:
        raise SizeLimitError(f"{g.n} vertices exceeds the limit of {BIJECTIVE_LIMIT} for ordering enumeration")
    if jobs > 1 and g.n > 1:
        tasks = [(g, a.name, b.name, problem, v) for v in range(g.n)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_tally_job, tasks))
    else:
        parts = [_tally(g, a, b, problem)]
    total = sum(p["count"] for p in parts)
    strict = next((p["strict"] for p in parts if p["strict"] is not None), None)
    violation = next((p["violation"] for p in parts if p["violation"] is not None), None)
    infeasible = any(p["infeasible"] for p in parts)
    mean_a = None if infeasible else Fraction(sum(p["sum_a"] for p in parts), total)
    mean_b = None if infeasible else Fraction(sum(p["sum_b"] for p in parts), total)
    return BijectiveReport(total, violation is None, strict, violation, mean_a, mean_b)


# -- reductions ----------------------------------------------------------------


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    bound: int

    def to_json(self) -> dict:
        return {"graph6": encode_graph6(self.graph), "bound": self.bound}


def reduce_mmis_to_online_is(g: Graph, bound: int) -> ReductionOutput:
    """Minimum maximal independent set ``<= L`` becomes ``I^O <= L + |V|`` on ``g`` plus ``|V|`` isolated vertices."""
    if 2 * g.n > g.vertex_limit:
        raise SizeLimitError(f"reduction needs {2 * g.n} vertices, over the limit of {g.vertex_limit}")
    return ReductionOutput(add_isolated(g, g.n), bound + g.n)


def reduce_is_to_online_ds(g: Graph, bound: int) -> ReductionOutput:
    """Independence number ``>= L`` becomes ``D^O >= L + 1`` on ``g`` plus one isolated vertex."""
    if g.n + 1 > g.vertex_limit:
        raise SizeLimitError(f"reduction needs {g.n + 1} vertices, over the limit of {g.vertex_limit}")
    return ReductionOutput(add_isolated(g, 1), bound + 1)


def check_mmis_reduction(g: Graph, bound: int) -> tuple[bool, bool]:
    """Both sides of the iff: ``(s(g) <= L, I^O(g~) <= L~)``."""
    out = reduce_mmis_to_online_is(g, bound)
    s = offline_oracle(g, OracleKind.MIN_MAXIMAL_IS, limit=g.vertex_limit).size
    return s <= bound, solve_value(out.graph, Problem.IS, limit=out.graph.vertex_limit).value <= out.bound


def check_ds_reduction(g: Graph, bound: int) -> tuple[bool, bool]:
    """Both sides of the iff: ``(alpha(g) >= L, D^O(g~) >= L~)``."""
    out = reduce_is_to_online_ds(g, bound)
    alpha = offline_oracle(g, OracleKind.MAX_IS, limit=g.vertex_limit).size
    return alpha >= bound, solve_value(out.graph, Problem.DS, limit=out.graph.vertex_limit).value >= out.bound


# -- reports -------------------------------------------------------------------

REPORT_POLICIES = (
    ("gis", Problem.IS),
    ("is-star", Problem.IS),
    ("almost-gis", Problem.IS),
    ("gvc", Problem.VC),
    ("is-star-bar", Problem.VC),
    ("gds", Problem.DS),
    ("gf", Problem.FOREST),
    ("forest-deg", Problem.FOREST),
)


def _js(v):
    return "infeasible" if v is INFEASIBLE else v


def _complements(is_value, vc_value, n: int) -> bool:
    """A policy and its complement: infeasible together, otherwise summing to ``n``."""
    if is_value == "infeasible" or vc_value == "infeasible":
        return is_value == vc_value
    return is_value + vc_value == n


def theorem_report(g: Graph, *, budget: int | None = None) -> dict:
    """Online numbers, policy worst cases and the optimality checks they imply on ``g``."""
    lim = g.vertex_limit
    io = solve_value(g, Problem.IS, budget=budget, limit=lim).value
    vo = solve_value(g, Problem.VC, budget=budget, limit=lim).value
    do = solve_value(g, Problem.DS, budget=budget, limit=lim).value
    worst = {}
    for name, problem in REPORT_POLICIES:
        res = policy_worst_case(g, problem, make_policy(name), budget=budget, limit=lim)
        worst[name] = {"problem": problem.value, "value": _js(res.value), "witness": res.witness}
    cert = freckle_check(g, full=True, budget=budget)
    k, _ = split_isolated(g)
    gis, gvc, gds = worst["gis"]["value"], worst["gvc"]["value"], worst["gds"]["value"]
    checks = {
        "obs2": io + vo == g.n,
        "obs1": _complements(worst["is-star"]["value"], worst["is-star-bar"]["value"], g.n),
        "gis_formula": gis == cert.k + cert.s_size,
        "gis_optimal": (gis == io) if cert.is_freckle else None,
        "gvc_optimal": (gvc == vo) if cert.is_freckle else None,
        "gds_optimal": (gds == do) if k > 0 else None,
    }
    return {
        "graph": {"n": g.n, "m": g.m, "graph6": encode_graph6(g)},
        "I^O": _js(io),
        "V^O": _js(vo),
        "D^O": _js(do),
        "worst": worst,
        "freckle": cert.to_json(),
        "checks": checks,
    }


def isolated_monotonicity_probe(graphs) -> list[dict]:
    """Record ``I^O(g)`` against ``I^O(g + one isolated vertex)``; asserts nothing.

    Whether the second can ever be smaller is an open question; rows with
    ``"decreased": True`` would be counterexamples to monotonicity.
    """
    rows = []
    for g in graphs:
        before = solve_value(g, Problem.IS, limit=g.vertex_limit).value
        after = solve_value(add_isolated(g, 1), Problem.IS, limit=g.vertex_limit).value
        rows.append({"graph6": encode_graph6(g), "before": public_score(before),
                     "after": public_score(after), "decreased": after < before})
    return rows
