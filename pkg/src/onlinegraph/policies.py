"""Deterministic online algorithms as decision policies, plus offline oracles.

A policy decides on the newly revealed vertex from the revealed history and
the bitmask of its edges to earlier arrivals.  It never sees host-graph
labels.  ``digest`` summarises whatever the policy's future decisions
depend on beyond the isomorphism class of the marked revealed graph; worst
case search memoizes on (canonical state, digest).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .errors import SizeLimitError
from .graph_core import VERTEX_LIMIT, Graph
from .state import RevealedState

Decide = Callable[[RevealedState, int], bool]
Digest = Callable[[RevealedState], bytes]


def _no_digest(state: RevealedState) -> bytes:
    return b""


@dataclass(frozen=True)
class Policy:
    name: str
    decide: Decide
    digest: Digest = _no_digest

    def __call__(self, state: RevealedState, nbrs: int) -> bool:
        return self.decide(state, nbrs)


def _gis(state, nbrs):
    return not nbrs & state.accepted


def _gvc(state, nbrs):
    return bool(nbrs & state.rejected)


def _is_star(state, nbrs):
    k = state.n
    if k == 0:
        return False
    if k == 1 and nbrs:
        return False
    return nbrs.bit_count() <= 1


def _is_star_digest(state):
    k = state.n
    second_adjacent = k >= 2 and bool(state.adj[1] & 1)
    return bytes([min(k, 2), second_adjacent])


def _almost_gis(state, nbrs):
    return not nbrs & state.accepted and nbrs.bit_count() < 2


def _gf(state, nbrs):
    # accepting keeps the accepted set acyclic iff no two accepted
    # neighbours share a component of the accepted forest
    acc = state.accepted
    hit = nbrs & acc
    while hit:
        low = hit & -hit
        comp = low
        frontier = low
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            new = state.adj[f.bit_length() - 1] & acc & ~comp
            comp |= new
            frontier |= new
        if (comp & hit).bit_count() > 1:
            return False
        hit &= ~comp
    return True


def _forest_degree(state, nbrs):
    if nbrs.bit_count() > 2:
        return False
    m = nbrs
    while m:
        low = m & -m
        if state.adj[low.bit_length() - 1].bit_count() < 2:
            return False
        m ^= low
    return True


GIS = Policy("gis", _gis)
GVC = Policy("gvc", _gvc)
GDS = Policy("gds", _gis)
IS_STAR = Policy("is-star", _is_star, _is_star_digest)
ALMOST_GIS = Policy("almost-gis", _almost_gis)
GF = Policy("gf", _gf)
FOREST_DEGREE = Policy("forest-deg", _forest_degree)


def complement(inner: Policy) -> Policy:
    """Run ``inner`` on the flipped history and accept exactly what it rejects."""

    def decide(state, nbrs):
        return not inner.decide(state.flipped(), nbrs)

    def digest(state):
        return inner.digest(state.flipped())

    name = inner.name[:-4] if inner.name.endswith("-bar") else inner.name + "-bar"
    return Policy(name, decide, digest)


_REGISTRY = {
    "gis": GIS,
    "gvc": GVC,
    "gds": GDS,
    "is-star": IS_STAR,
    "almost-gis": ALMOST_GIS,
    "gf": GF,
    "forest-deg": FOREST_DEGREE,
    "forest-degree": FOREST_DEGREE,
}

POLICY_NAMES = ("gis", "gvc", "gds", "is-star", "is-star-bar", "almost-gis", "gf", "forest-deg")


def make_policy(name: str | Policy) -> Policy:
    """Look up a policy by CLI name (``-`` or ``_``); ``complement`` via a ``-bar`` suffix."""
    if isinstance(name, Policy):
        return name
    key = name.lower().replace("_", "-")
    if key.startswith("complement(") and key.endswith(")"):
        return complement(make_policy(key[len("complement("):-1]))
    if key.endswith("-bar"):
        return complement(make_policy(key[:-4]))
    try:
        return _REGISTRY[key]
    except KeyError:
        raise ValueError(f"unknown policy {name!r}; choose from {', '.join(POLICY_NAMES)}") from None


def run_policy(p: Policy, g: Graph, ordering) -> RevealedState:
    """Present ``g``'s vertices in ``ordering`` and record ``p``'s decisions."""
    pos = {}
    st = RevealedState()
    for i, v in enumerate(ordering):
        nbrs = 0
        for u, j in pos.items():
            if g.rows[v] >> u & 1:
                nbrs |= 1 << j
        st = st.extend(nbrs, p.decide(st, nbrs))
        pos[v] = i
    return st


# -- offline oracles ---------------------------------------------------------


class OracleKind(str, enum.Enum):
    MAX_IS = "max_is"
    MIN_MAXIMAL_IS = "min_maximal_is"
    MIN_VC = "min_vc"
    MIN_DS = "min_ds"


@dataclass(frozen=True)
class OracleResult:
    size: int
    witness: frozenset[int]


def is_independent(rows, s: int) -> bool:
    m = s
    while m:
        low = m & -m
        if rows[low.bit_length() - 1] & s:
            return False
        m ^= low
    return True


def is_vertex_cover(rows, s: int) -> bool:
    out = ((1 << len(rows)) - 1) & ~s
    return is_independent(rows, out)


def dominated(rows, s: int) -> int:
    d = s
    m = s
    while m:
        low = m & -m
        d |= rows[low.bit_length() - 1]
        m ^= low
    return d


def is_dominating(rows, s: int) -> bool:
    return dominated(rows, s) == (1 << len(rows)) - 1


def is_maximal_independent(rows, s: int) -> bool:
    return is_independent(rows, s) and is_dominating(rows, s)


def is_acyclic(rows, s: int) -> bool:
    """True iff the subgraph induced by ``s`` is a forest."""
    edges = sum((rows[v] & s).bit_count() for v in _members(s)) // 2
    comps = 0
    left = s
    while left:
        low = left & -left
        comp = low
        frontier = low
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            new = rows[f.bit_length() - 1] & s & ~comp
            comp |= new
            frontier |= new
        comps += 1
        left &= ~comp
    return edges == s.bit_count() - comps


def _members(s):
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


def offline_oracle(g: Graph, kind: OracleKind | str, limit: int | None = None) -> OracleResult:
    """Exact optimum by subset search, smallest cardinality first (largest for max_is)."""
    kind = OracleKind(kind)
    lim = VERTEX_LIMIT if limit is None else limit
    if g.n > lim:
        raise SizeLimitError(f"{g.n} vertices exceeds the limit of {lim}")
    rows = g.rows
    if kind is OracleKind.MAX_IS:
        return _max_independent(rows)
    test = {
        OracleKind.MIN_MAXIMAL_IS: is_maximal_independent,
        OracleKind.MIN_VC: is_vertex_cover,
        OracleKind.MIN_DS: is_dominating,
    }[kind]
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            s = sum(1 << v for v in combo)
            if test(rows, s):
                return OracleResult(size, frozenset(combo))
    raise AssertionError("unreachable: the full vertex set is always feasible")


def _max_independent(rows) -> OracleResult:
    """Branch and bound on the lowest undecided vertex: take it or drop it."""
    best = [0, 0]

    def grow(cand: int, chosen: int, size: int):
        if size + cand.bit_count() <= best[0]:
            return
        if not cand:
            best[0], best[1] = size, chosen
            return
        low = cand & -cand
        v = low.bit_length() - 1
        grow(cand & ~low & ~rows[v], chosen | low, size + 1)
        if rows[v] & cand:
            grow(cand & ~low, chosen, size)

    grow((1 << len(rows)) - 1, 0, 0)
    if not rows:
        return OracleResult(0, frozenset())
    return OracleResult(best[0], frozenset(_members(best[1])))
