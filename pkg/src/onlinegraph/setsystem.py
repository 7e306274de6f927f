"""Maximum Online Set: a base set with an upward-closed family of forbidden subsets.

Only the minimal forbidden sets are stored.  A request for element ``e``
reveals every minimal forbidden set that contains ``e`` and whose other
elements have already arrived, expressed over arrival indices.  The trace
an algorithm sees is therefore the sub-hypergraph induced by the arrived
elements, the set analogue of the revealed induced subgraph.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from itertools import combinations

from .canon import canonical_state, key_bytes
from .errors import BudgetExceededError, SetSystemError, SizeLimitError
from .game import GameResult, default_budget, public_score
from .graph_core import Graph

MOS_LIMIT = 10
_SET_COLOR = 3


@dataclass(frozen=True)
class SetSystem:
    elements: tuple[str, ...]
    forbidden: tuple[int, ...]  # minimal forbidden sets as bitmasks over element indices

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise SetSystemError("element labels must be unique")
        full = (1 << len(self.elements)) - 1
        for f in self.forbidden:
            if f == 0:
                raise SetSystemError("the empty set cannot be forbidden")
            if f & ~full:
                raise SetSystemError("forbidden set refers to an unknown element")
        for a, b in combinations(self.forbidden, 2):
            if a & b in (a, b):
                raise SetSystemError("forbidden family is not minimal: one set contains another")
        object.__setattr__(self, "forbidden", tuple(sorted(self.forbidden)))

    @property
    def size(self) -> int:
        return len(self.elements)

    def forbidden_sets(self) -> list[frozenset[str]]:
        return [frozenset(self.elements[i] for i in _bits(f)) for f in self.forbidden]

    def feasible(self, s: int) -> bool:
        return not any(f & s == f for f in self.forbidden)

    def to_json(self) -> dict:
        return {"elements": list(self.elements),
                "forbidden": [[self.elements[i] for i in _bits(f)] for f in self.forbidden]}


@dataclass(frozen=True)
class SetSystemStats:
    isolated_count: int
    core: SetSystem
    s_size: int
    core_s_size: int
    s_witness: frozenset[str]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def load_setsystem(text: str) -> SetSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SetSystemError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "elements" not in data or "forbidden" not in data:
        raise SetSystemError('expected an object with "elements" and "forbidden"')
    elements = [str(e) for e in data["elements"]]
    index = {e: i for i, e in enumerate(elements)}
    masks = []
    for fs in data["forbidden"]:
        if not fs:
            raise SetSystemError("the empty set cannot be forbidden")
        m = 0
        for e in fs:
            if str(e) not in index:
                raise SetSystemError(f"unknown element {e!r} in a forbidden set")
            m |= 1 << index[str(e)]
        masks.append(m)
    return SetSystem(tuple(elements), tuple(masks))


def setsystem_from_graph(g: Graph) -> SetSystem:
    """Edges become the minimal forbidden pairs: Online Independent Set as MOS."""
    return SetSystem(tuple(g.name(v) for v in range(g.n)), tuple((1 << u) | (1 << v) for u, v in g.edges))


def _check(ss: SetSystem, limit: int):
    if ss.size > limit:
        raise SizeLimitError(f"{ss.size} elements exceeds the limit of {limit}")


def _restrict(ss: SetSystem, keep: list[int]) -> SetSystem:
    pos = {e: i for i, e in enumerate(keep)}
    masks = []
    for f in ss.forbidden:
        if all(e in pos for e in _bits(f)):
            masks.append(sum(1 << pos[e] for e in _bits(f)))
    return SetSystem(tuple(ss.elements[e] for e in keep), tuple(masks))


def _min_maximal_feasible(ss: SetSystem) -> int:
    n = ss.size
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            s = sum(1 << e for e in combo)
            if ss.feasible(s) and all(not ss.feasible(s | 1 << e) for e in range(n) if not s >> e & 1):
                return s
    raise AssertionError("unreachable")


def setsystem_stats(ss: SetSystem, limit: int = 16) -> SetSystemStats:
    _check(ss, limit)
    used = 0
    for f in ss.forbidden:
        used |= f
    core_idx = [e for e in range(ss.size) if used >> e & 1]
    core = _restrict(ss, core_idx)
    s = _min_maximal_feasible(ss)
    return SetSystemStats(
        isolated_count=ss.size - len(core_idx),
        core=core,
        s_size=s.bit_count(),
        core_s_size=_min_maximal_feasible(core).bit_count(),
        s_witness=frozenset(ss.elements[e] for e in _bits(s)),
    )


def _greedy_accepts(ss: SetSystem, accepted: int, e: int) -> bool:
    return ss.feasible(accepted | 1 << e)


def gmos_worst(ss: SetSystem, limit: int = MOS_LIMIT) -> GameResult:
    """Fewest elements the greedy algorithm accepts over all presentation orders.

    The greedy decision only depends on which elements arrived and which were
    accepted, so the search is memoized on that pair of bitmasks.
    """
    _check(ss, limit)
    t0 = time.perf_counter()
    n = ss.size
    full = (1 << n) - 1
    memo: dict[tuple[int, int], tuple[int, int]] = {}
    stats = {"nodes": 0, "memo_hits": 0}

    def worst(arrived: int, accepted: int) -> int:
        hit = memo.get((arrived, accepted))
        if hit is not None:
            stats["memo_hits"] += 1
            return hit[0]
        stats["nodes"] += 1
        if arrived == full:
            memo[(arrived, accepted)] = (accepted.bit_count(), -1)
            return accepted.bit_count()
        best, arg = None, -1
        for e in range(n):
            if arrived >> e & 1:
                continue
            acc = accepted | 1 << e if _greedy_accepts(ss, accepted, e) else accepted
            v = worst(arrived | 1 << e, acc)
            if best is None or v < best:
                best, arg = v, e
        memo[(arrived, accepted)] = (best, arg)
        return best

    value = worst(0, 0)
    order = []
    arrived = accepted = 0
    while arrived != full:
        e = memo[(arrived, accepted)][1]
        order.append(ss.elements[e])
        if _greedy_accepts(ss, accepted, e):
            accepted |= 1 << e
        arrived |= 1 << e
    stats["ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return GameResult(value, order, stats)


def replay_gmos(ss: SetSystem, ordering) -> int:
    index = {e: i for i, e in enumerate(ss.elements)}
    accepted = 0
    for label in ordering:
        e = index[label]
        if _greedy_accepts(ss, accepted, e):
            accepted |= 1 << e
    return accepted.bit_count()


def _trace_state(k: int, edges, marks):
    rows = [0] * (k + len(edges))
    for j, e in enumerate(edges):
        node = k + j
        for i in _bits(e):
            rows[i] |= 1 << node
            rows[node] |= 1 << i
    return canonical_state(tuple(rows), tuple(marks) + (_SET_COLOR,) * len(edges))


def trace_key(k: int, edges, marks) -> bytes:
    """Canonical key of a revealed trace: element nodes coloured by mark, set nodes by ``_SET_COLOR``."""
    _, cert, cols = _trace_state(k, edges, marks)
    return key_bytes(cert, cols)


class _TraceSearch:
    """Minimax over traces; the adversary's hidden assignment is the embedding list.

    Without restrictions the embeddings are exactly those consistent with the
    trace, so the trace's canonical key is a sound memo key.  A conservative
    adversary may only request an element that is not pointless (completing a
    forbidden set with accepted elements) unless every unrevealed element is,
    judged per embedding; the surviving embeddings then depend on the path,
    so they become part of the key.
    """

    def __init__(self, ss: SetSystem, budget: int, conservative: bool, memo: bool = True):
        self.ss = ss
        self.n = ss.size
        self.by_elem = [[f for f in ss.forbidden if f >> e & 1] for e in range(self.n)]
        self.budget = budget
        self.conservative = conservative
        self.use_memo = memo
        self.memo: dict = {}
        self.nodes = 0
        self.hits = 0

    def _pointless(self, w: int, acc_img: int) -> bool:
        return any(f & ~(1 << w) & ~acc_img == 0 for f in self.by_elem[w])

    def moves(self, embeddings, acc: int = 0):
        """Group every allowed extension by the sets it reveals (over arrival indices)."""
        groups: dict[tuple[int, ...], list] = {}
        for emb in embeddings:
            inv = {e: i for i, e in enumerate(emb)}
            free = [w for w in range(self.n) if w not in inv]
            if self.conservative:
                acc_img = sum(1 << e for i, e in enumerate(emb) if acc >> i & 1)
                useful = [w for w in free if not self._pointless(w, acc_img)]
                if useful:
                    free = useful
            for w in free:
                fam = []
                for f in self.by_elem[w]:
                    rest = f & ~(1 << w)
                    a = 0
                    for e in _bits(rest):
                        if e not in inv:
                            break
                        a |= 1 << inv[e]
                    else:
                        fam.append(a)
                groups.setdefault(tuple(sorted(fam)), []).append(emb + (w,))
        return groups

    def key(self, edges, marks, embeddings):
        order, cert, cols = _trace_state(len(marks), edges, marks)
        key = key_bytes(cert, cols)
        if not self.conservative:
            return key
        k = len(marks)
        elems = [v for v in order if v < k]
        return key, frozenset(tuple(e[v] for v in elems) for e in embeddings)

    def value(self, edges, marks, embeddings):
        k = len(marks)
        key = self.key(edges, marks, embeddings) if self.use_memo else None
        if self.use_memo and key in self.memo:
            self.hits += 1
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.budget)
        acc = sum(1 << i for i, m in enumerate(marks) if m)
        if k == self.n:
            v = acc.bit_count() if not any(e & acc == e for e in edges) else float("-inf")
        else:
            v = None
            for fam, embs in sorted(self.moves(embeddings, acc).items()):
                new_edges = tuple(sorted(edges + tuple(a | 1 << k for a in fam)))
                pointless = any(a & ~acc == 0 for a in fam)
                best = None
                for d in ((0,) if pointless else (0, 1)):
                    cv = self.value(new_edges, marks + (d,), embs)
                    if best is None or cv > best:
                        best = cv
                if v is None or best < v:
                    v = best
        if self.use_memo:
            self.memo[key] = v
        return v


def mso_value(ss: SetSystem, *, conservative: bool = False, budget: int | None = None,
              memo: bool = True, limit: int = MOS_LIMIT) -> GameResult:
    """Best worst-case count any online algorithm can guarantee on ``ss``.

    The adversary picks the hidden assignment of requests to elements move by
    move, constrained only by consistency with what was revealed so far.
    ``conservative`` restricts it to requests that are not pointless while
    one remains.
    """
    _check(ss, limit)
    t0 = time.perf_counter()
    search = _TraceSearch(ss, budget or default_budget(), conservative, memo)
    v = search.value((), (), [()])
    stats = {"nodes": search.nodes, "memo_hits": search.hits, "ms": round((time.perf_counter() - t0) * 1000, 3)}
    return GameResult(public_score(v), None, stats)


def enumerate_setsystems(m: int) -> list[SetSystem]:
    """One instance per isomorphism class of minimal families on ``m`` elements."""
    subsets = sorted(range(1, 1 << m), key=lambda s: (s.bit_count(), s))
    seen = {}
    labels = tuple("abcdefghij"[:m]) if m <= 10 else tuple(str(i) for i in range(m))

    def rec(i, chosen):
        if i == len(subsets):
            key = trace_key(m, tuple(sorted(chosen)), (0,) * m)
            if key not in seen:
                seen[key] = SetSystem(labels, tuple(chosen))
            return
        s = subsets[i]
        rec(i + 1, chosen)
        if all(c & s != c and c & s != s for c in chosen):
            rec(i + 1, chosen + [s])

    rec(0, [])
    return [seen[k] for k in sorted(seen)]
