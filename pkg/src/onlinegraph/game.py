"""The adversary-versus-algorithm game in the vertex-arrival model.

The adversary presents vertices so that the revealed graph stays an induced
subgraph of the host; the algorithm accepts or rejects each one.  After all
``n`` vertices the accepted set is scored.  ``solve_value`` lets the
algorithm play optimally (online independence, vertex cover and domination
numbers); ``policy_worst_case`` fixes the algorithm to a policy and lets
only the adversary optimise.

Positions are memoized on the canonical form of the marked revealed graph.
For ``solve_value`` that is exact because the rest of the game depends on
the revealed graph only up to isomorphism.  For a fixed policy the memo key
also carries the policy's state digest.
"""

from __future__ import annotations

import enum
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .canon import (
    Mark,
    canonical_state,
    extend_rows,
    graph_key,
    key_bytes,
    move_generator,
)
from .errors import BudgetExceededError, SizeLimitError
from .graph_core import VERTEX_LIMIT, Graph, line_graph
from .policies import (
    GIS,
    Policy,
    dominated,
    is_acyclic,
    is_independent,
    is_vertex_cover,
)
from .state import RevealedState

DEFAULT_NODE_BUDGET = 10**8


def default_budget() -> int:
    return int(os.environ.get("ONLINEGRAPH_NODE_BUDGET", DEFAULT_NODE_BUDGET))


class Problem(str, enum.Enum):
    IS = "is"
    VC = "vc"
    DS = "ds"
    FOREST = "forest"

    @classmethod
    def parse(cls, p) -> "Problem":
        return p if isinstance(p, cls) else cls(str(p).lower())

    @property
    def maximize(self) -> bool:
        return self in (Problem.IS, Problem.FOREST)


class _Infeasible:
    """Score of an infeasible final solution (+inf when minimising, -inf when maximising)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infeasible"

    def __reduce__(self):
        return (_Infeasible, ())


INFEASIBLE = _Infeasible()


def public_score(v):
    return INFEASIBLE if isinstance(v, float) and math.isinf(v) else int(v)


def internal_score(v, problem: Problem):
    if v is INFEASIBLE:
        return -math.inf if problem.maximize else math.inf
    return v


def score(problem: Problem, rows, accepted: int):
    """Internal score: a count, or -inf/+inf for an infeasible maximisation/minimisation."""
    count = accepted.bit_count()
    if problem is Problem.IS:
        return count if is_independent(rows, accepted) else -math.inf
    if problem is Problem.VC:
        return count if is_vertex_cover(rows, accepted) else math.inf
    if problem is Problem.DS:
        return count if dominated(rows, accepted) == (1 << len(rows)) - 1 else math.inf
    return count if is_acyclic(rows, accepted) else -math.inf


def _accepted_mask(marks) -> int:
    m = 0
    for i, mk in enumerate(marks):
        if mk == Mark.ACCEPTED:
            m |= 1 << i
    return m


@dataclass
class GameResult:
    value: object
    witness: object = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"value": score_to_json(self.value)}
        if self.witness is not None:
            out["witness"] = self.witness
        out["stats"] = self.stats
        return out


def score_to_json(v):
    return "infeasible" if v is INFEASIBLE else v


def _check_size(host: Graph, limit: int | None):
    lim = VERTEX_LIMIT if limit is None else limit
    if host.n > lim:
        raise SizeLimitError(f"{host.n} vertices exceeds the limit of {lim}")


class ResultCache:
    """Append-only JSON-lines cache of solved positions.

    One record per position: ``{"key", "host", "problem", "value"}`` where
    ``key`` is the hex canonical key of the marked revealed graph and
    ``host`` the hex canonical key of the host graph it was solved against.
    """

    def __init__(self, path):
        self.path = Path(path)

    def load(self, host_hex: str, problem: Problem) -> dict[str, object]:
        out = {}
        if not self.path.exists():
            return out
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec.get("host") == host_hex and rec.get("problem") == problem.value:
                    v = rec["value"]
                    out[rec["key"]] = internal_score(INFEASIBLE if v == "infeasible" else v, problem)
        return out

    def append(self, host_hex: str, problem: Problem, entries: dict[str, object]) -> int:
        if not entries:
            return 0
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            for key in sorted(entries):
                v = score_to_json(public_score(entries[key]))
                fh.write(json.dumps({"key": key, "host": host_hex, "problem": problem.value, "value": v},
                                    sort_keys=True) + "\n")
        return len(entries)


class _ValueSearch:
    """Minimax over adversary moves and algorithm decisions."""

    def __init__(self, host: Graph, problem: Problem, budget: int, memo=True,
                 cache: ResultCache | None = None):
        self.host = host
        self.n = host.n
        self.problem = problem
        self.maximize = problem.maximize
        self.budget = budget
        self.use_memo = memo
        self.gen = move_generator(host)
        self.memo: dict = {}
        self.nodes = 0
        self.hits = 0
        self.cache = cache
        self._cached: dict[str, object] = {}
        if cache is not None:
            self.host_hex = graph_key(host).hex()
            self._cached = cache.load(self.host_hex, problem)

    # one adversary move: children reachable by allowed decisions
    def _children(self, adj, marks, nbrs):
        acc = _accepted_mask(marks)
        decisions = (Mark.REJECTED, Mark.ACCEPTED)
        if self.problem is Problem.IS and nbrs & acc:
            decisions = (Mark.REJECTED,)
        elif self.problem is Problem.VC and nbrs & ~acc:
            decisions = (Mark.ACCEPTED,)
        rows = extend_rows(adj, nbrs)
        out = []
        for d in decisions:
            _, cert, cols = canonical_state(rows, marks + (int(d),))
            out.append((d, (cert, cols)))
        return out

    def _alg_value(self, children):
        best = None
        for _, child in children:
            v = self.value(child)
            if best is None or (v > best if self.maximize else v < best):
                best = v
        return best

    def value(self, state):
        if self.use_memo:
            v = self.memo.get(state)
            if v is not None:
                self.hits += 1
                return v
            if self._cached:
                hexkey = key_bytes(*state).hex()
                if hexkey in self._cached:
                    self.hits += 1
                    v = self.memo[state] = self._cached[hexkey]
                    return v
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.budget)
        adj, marks = state
        if len(adj) == self.n:
            v = score(self.problem, adj, _accepted_mask(marks))
        else:
            v = None
            seen = set()
            for nbrs in self.gen.legal(adj):
                children = self._children(adj, marks, nbrs)
                sig = tuple(c for _, c in children)
                if sig in seen:
                    continue
                seen.add(sig)
                mv = self._alg_value(children)
                if v is None or (mv < v if self.maximize else mv > v):
                    v = mv
        if self.use_memo:
            self.memo[state] = v
        return v

    def flush_cache(self) -> int:
        if self.cache is None:
            return 0
        fresh = {}
        for state, v in self.memo.items():
            hexkey = key_bytes(*state).hex()
            if hexkey not in self._cached:
                fresh[hexkey] = v
        return self.cache.append(self.host_hex, self.problem, fresh)

    def strategy_table(self) -> dict[str, str]:
        """Optimal decision for every undecided position reachable under optimal play."""
        table = {}

        def visit(state):
            adj, marks = state
            if len(adj) == self.n:
                return
            for nbrs in self.gen.legal(adj):
                rows = extend_rows(adj, nbrs)
                _, cert, cols = canonical_state(rows, marks + (int(Mark.PENDING),))
                pk = key_bytes(cert, cols).hex()
                if pk in table:
                    continue
                children = self._children(adj, marks, nbrs)
                target = self._alg_value(children)
                options = sorted((key_bytes(*c), d, c) for d, c in children if self.value(c) == target)
                _, d, child = options[0]
                table[pk] = "accept" if d == Mark.ACCEPTED else "reject"
                visit(child)

        visit(((), ()))
        return table


def _stats(search, t0) -> dict:
    return {"nodes": search.nodes, "memo_hits": search.hits, "ms": round((time.perf_counter() - t0) * 1000, 3)}


def solve_value(host: Graph, problem="is", *, budget: int | None = None, memo: bool = True,
                witness: bool = False, cache: ResultCache | str | Path | None = None,
                limit: int | None = None) -> GameResult:
    """Online independence / vertex cover / domination number of ``host``.

    With ``witness=True`` the result carries a strategy table mapping the hex
    key of each undecided position (decision pending on the newest vertex)
    to ``"accept"`` or ``"reject"``; ``table_policy`` turns it into a Policy.
    """
    problem = Problem.parse(problem)
    if problem is Problem.FOREST:
        raise ValueError("solve_value covers is, vc and ds")
    _check_size(host, limit)
    if cache is not None and not isinstance(cache, ResultCache):
        cache = ResultCache(cache)
    t0 = time.perf_counter()
    search = _ValueSearch(host, problem, budget or default_budget(), memo=memo, cache=cache)
    v = search.value(((), ()))
    table = search.strategy_table() if witness else None
    search.flush_cache()
    return GameResult(public_score(v), table, _stats(search, t0))


class _ConservativeSearch:
    """Independent-set game against a conservative adversary.

    A request is pointless when the presented host vertex has an accepted
    neighbour.  Whether other requests remain depends on which host vertices
    were revealed, which the adversary has not committed to, so the search
    carries every embedding of the revealed graph under which all requests
    so far were conservative.  A move extends one of them by a host vertex
    that is not pointless, or by any vertex once all unrevealed ones are.
    Positions are memoized on the canonical marked graph together with that
    embedding set written in the canonical labelling.
    """

    def __init__(self, host: Graph, budget: int, memo=True):
        self.host = host
        self.n = host.n
        self.budget = budget
        self.use_memo = memo
        self.memo: dict = {}
        self.nodes = 0
        self.hits = 0

    def moves(self, hist: RevealedState, embeddings) -> dict[int, list]:
        rows = self.host.rows
        groups: dict[int, list] = {}
        for emb in embeddings:
            image = 0
            acc_img = 0
            for i, v in enumerate(emb):
                image |= 1 << v
                if hist.accepted >> i & 1:
                    acc_img |= 1 << v
            free = [w for w in range(self.n) if not image >> w & 1]
            pointless = {w for w in free if rows[w] & acc_img}
            allow_all = len(pointless) == len(free)
            for w in free:
                if w in pointless and not allow_all:
                    continue
                nbrs = 0
                for i, v in enumerate(emb):
                    if rows[w] >> v & 1:
                        nbrs |= 1 << i
                groups.setdefault(nbrs, []).append(emb + (w,))
        return groups

    def key(self, hist: RevealedState, embeddings):
        order, cert, cols = canonical_state(hist.adj, tuple(int(m) for m in hist.marks))
        relabeled = frozenset(tuple(e[v] for v in order) for e in embeddings)
        return (cert, cols, relabeled)

    def value(self, hist: RevealedState, embeddings):
        key = self.key(hist, embeddings) if self.use_memo else None
        if self.use_memo:
            v = self.memo.get(key)
            if v is not None:
                self.hits += 1
                return v
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.budget)
        if hist.n == self.n:
            v = score(Problem.IS, hist.adj, hist.accepted)
        else:
            v = None
            for nbrs, embs in sorted(self.moves(hist, embeddings).items()):
                best = None
                for accept in ((False,) if nbrs & hist.accepted else (False, True)):
                    cv = self.value(hist.extend(nbrs, accept), embs)
                    if best is None or cv > best:
                        best = cv
                if v is None or best < v:
                    v = best
        if self.use_memo:
            self.memo[key] = v
        return v


def solve_conservative_is(host: Graph, *, budget: int | None = None, memo: bool = True,
                          limit: int | None = None) -> GameResult:
    """Independent-set game value when the adversary must be conservative:
    no pointless request (a vertex with an accepted neighbour) while another
    request is still available."""
    _check_size(host, limit)
    t0 = time.perf_counter()
    search = _ConservativeSearch(host, budget or default_budget(), memo=memo)
    v = search.value(RevealedState(), [()])
    return GameResult(public_score(v), None, _stats(search, t0))


def table_policy(table: dict[str, str], name: str = "strategy-table") -> Policy:
    """Policy that looks up its decision in a strategy table from ``solve_value``."""

    def decide(state: RevealedState, nbrs: int) -> bool:
        rows = extend_rows(state.adj, nbrs)
        _, cert, cols = canonical_state(rows, tuple(int(m) for m in state.marks) + (int(Mark.PENDING),))
        return table[key_bytes(cert, cols).hex()] == "accept"

    return Policy(name, decide)


class _PolicySearch:
    """Adversary-only search against a fixed policy."""

    def __init__(self, host: Graph, problem: Problem, policy: Policy, budget: int, memo=True):
        self.host = host
        self.n = host.n
        self.problem = problem
        self.maximize = problem.maximize
        self.policy = policy
        self.budget = budget
        self.use_memo = memo
        self.gen = move_generator(host)
        self.memo: dict = {}
        self.choice: dict = {}
        self.nodes = 0
        self.hits = 0

    def key(self, hist: RevealedState):
        _, cert, cols = canonical_state(hist.adj, tuple(int(m) for m in hist.marks))
        return key_bytes(cert, cols) + b"|" + self.policy.digest(hist)

    def children(self, hist: RevealedState) -> dict:
        out = {}
        for nbrs in self.gen.legal(hist.adj):
            child = hist.extend(nbrs, self.policy.decide(hist, nbrs))
            ck = self.key(child)
            if ck not in out:
                out[ck] = child
        return out

    def value(self, hist: RevealedState, key: bytes):
        if self.use_memo:
            v = self.memo.get(key)
            if v is not None:
                self.hits += 1
                return v
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.budget)
        if hist.n == self.n:
            v = score(self.problem, hist.adj, hist.accepted)
        else:
            v = None
            best_key = None
            for ck, child in sorted(self.children(hist).items()):
                cv = self.value(child, ck)
                if v is None or (cv < v if self.maximize else cv > v):
                    v, best_key = cv, ck
            self.choice[key] = best_key
        if self.use_memo:
            self.memo[key] = v
        return v

    def witness_ordering(self) -> list[int]:
        hist = RevealedState()
        key = self.key(hist)
        while hist.n < self.n:
            nxt = self.choice[key]
            hist = self.children(hist)[nxt]
            key = nxt
        return self.gen.embedding(hist.adj)


def policy_worst_case(host: Graph, problem, p: Policy, *, budget: int | None = None,
                      memo: bool = True, limit: int | None = None) -> GameResult:
    """Worst ordering for ``p``: min over orderings for is/forest, max for vc/ds.

    The witness is an explicit ordering of host vertices that achieves the value.
    """
    problem = Problem.parse(problem)
    _check_size(host, limit)
    t0 = time.perf_counter()
    search = _PolicySearch(host, problem, p, budget or default_budget(), memo=memo)
    root = RevealedState()
    v = search.value(root, search.key(root))
    ordering = search.witness_ordering()
    return GameResult(public_score(v), ordering, _stats(search, t0))


def replay(host: Graph, ordering, p: Policy, problem) -> tuple[RevealedState, object]:
    """Present ``host`` in ``ordering`` to ``p``; return the trace and its score."""
    problem = Problem.parse(problem)
    ordering = list(ordering)
    if sorted(ordering) != list(range(host.n)):
        raise ValueError("ordering must be a permutation of the host's vertices")
    pos = {}
    st = RevealedState()
    for i, v in enumerate(ordering):
        nbrs = 0
        for u, j in pos.items():
            if host.rows[v] >> u & 1:
                nbrs |= 1 << j
        st = st.extend(nbrs, p.decide(st, nbrs))
        pos[v] = i
    return st, public_score(score(problem, st.adj, st.accepted))


def online_matching_number(host: Graph, *, budget: int | None = None, limit: int | None = None) -> GameResult:
    """Online matching number in the edge-arrival model, via independent sets of the line graph."""
    lg, _ = line_graph(host, limit=limit)
    return solve_value(lg, Problem.IS, budget=budget, limit=limit)


def greedy_matching_worst(host: Graph, *, budget: int | None = None, limit: int | None = None) -> GameResult:
    """Worst case of the greedy matching algorithm; witness is an edge ordering."""
    lg, edge_map = line_graph(host, limit=limit)
    res = policy_worst_case(lg, Problem.IS, GIS, budget=budget, limit=limit)
    res.witness = [list(edge_map[i]) for i in res.witness]
    return res
