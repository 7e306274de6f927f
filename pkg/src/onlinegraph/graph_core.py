"""Graph representation, text formats and the named graph families.

Graphs are small (at most ``VERTEX_LIMIT`` vertices by default) and stored as
one adjacency bitmask per vertex, which is what every search in this package
works on.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    DuplicateEdgeError,
    EndpointRangeError,
    GraphFormatError,
    MalformedHeaderError,
    SelfLoopError,
    SizeLimitError,
)

VERTEX_LIMIT = int(os.environ.get("ONLINEGRAPH_VERTEX_LIMIT", "16"))
GRAPH6_MAX_N = 62


def _check_limit(n: int, limit: int | None) -> None:
    lim = VERTEX_LIMIT if limit is None else limit
    if n > lim:
        raise SizeLimitError(f"{n} vertices exceeds the limit of {lim}")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``rows[v]`` is the bitmask of neighbours of ``v``.  Construction checks
    symmetry, irreflexivity and the vertex limit; instances are immutable.
    """

    n: int
    rows: tuple[int, ...]
    names: tuple[str, ...] | None = field(default=None, compare=False)
    limit: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0 or len(self.rows) != self.n:
            raise ValueError("row count does not match n")
        _check_limit(self.n, self.limit)
        full = (1 << self.n) - 1
        for v, r in enumerate(self.rows):
            if r & ~full:
                raise EndpointRangeError(f"vertex {v} has a neighbour outside 0..{self.n - 1}")
            if r >> v & 1:
                raise SelfLoopError(f"self-loop at vertex {v}")
            m = r
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric between {v} and {u}")
                m ^= low
        if self.names is not None and len(self.names) != self.n:
            raise ValueError("names must label every vertex")

    @property
    def vertex_limit(self) -> int:
        return VERTEX_LIMIT if self.limit is None else self.limit

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], names=None, limit=None) -> "Graph":
        _check_limit(n, limit)
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise EndpointRangeError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if rows[u] >> v & 1:
                raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(names) if names is not None else None, limit)

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(n, (0,) * n)

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(_bits(r)) for r in self.rows)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for v in range(self.n) for u in _bits(self.rows[v] & ((1 << v) - 1)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self):
        return self.n

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``i`` of the result is ``vertices[i]``."""
        pos = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for u in _bits(self.rows[v]):
                if u in pos:
                    r |= 1 << pos[u]
            rows.append(r)
        names = tuple(self.names[v] for v in vertices) if self.names else None
        return Graph(len(vertices), tuple(rows), names, self.limit)

    def relabel(self, order: Sequence[int]) -> "Graph":
        """Graph whose vertex ``i`` is ``order[i]`` of this one (``order`` a permutation)."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order is not a permutation of the vertices")
        return self.induced(order)

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- text formats ------------------------------------------------------------


class GraphFormat(str, enum.Enum):
    GRAPH6 = "graph6"
    EDGE_LIST = "edge_list"


def load_graph(text: str, fmt: GraphFormat | str = GraphFormat.GRAPH6, limit: int | None = None) -> Graph:
    fmt = GraphFormat(_format_alias(fmt))
    if fmt is GraphFormat.GRAPH6:
        return _parse_graph6(text, limit)
    return _parse_edge_list(text, limit)


def _format_alias(fmt) -> str:
    if isinstance(fmt, GraphFormat):
        return fmt.value
    fmt = str(fmt).lower().replace("-", "_")
    return {"g6": "graph6", "edges": "edge_list", "edgelist": "edge_list"}.get(fmt, fmt)


def _parse_graph6(text: str, limit: int | None) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise MalformedHeaderError("empty graph6 string")
    if any(not 63 <= ord(c) <= 126 for c in s):
        raise GraphFormatError("graph6 characters must lie in the range '?'..'~'")
    n = ord(s[0]) - 63
    if n == 63:
        raise SizeLimitError("graph6 multi-byte sizes (n > 62) are not supported")
    _check_limit(n, limit)
    nbits = n * (n - 1) // 2
    body = s[1:]
    if len(body) != (nbits + 5) // 6:
        raise MalformedHeaderError(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}")
    bits = 0
    for c in body:
        bits = bits << 6 | (ord(c) - 63)
    total = 6 * len(body)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits >> (total - 1 - k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if total > nbits and bits & ((1 << (total - nbits)) - 1):
        raise GraphFormatError("non-zero graph6 padding bits")
    return Graph(n, tuple(rows), limit=limit)


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise SizeLimitError(f"graph6 single-byte size supports n <= {GRAPH6_MAX_N}")
    out = [chr(g.n + 63)]
    acc = 0
    nacc = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = acc << 1 | (g.rows[i] >> j & 1)
            nacc += 1
            if nacc == 6:
                out.append(chr(acc + 63))
                acc = nacc = 0
    if nacc:
        out.append(chr((acc << (6 - nacc)) + 63))
    return "".join(out)


def _parse_edge_list(text: str, limit: int | None) -> Graph:
    lines = [ln.strip() for ln in text.replace("\r\n", "\n").split("\n")]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedHeaderError("missing 'n m' header")
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise MalformedHeaderError(f"bad header {lines[0]!r}; expected 'n m'")
    n, m = int(head[0]), int(head[1])
    _check_limit(n, limit)
    if len(lines) - 1 != m:
        raise MalformedHeaderError(f"header announces {m} edges but {len(lines) - 1} edge lines follow")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise GraphFormatError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges, limit=limit)


def encode_edge_list(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


# -- families ---------------------------------------------------------------


class Family(str, enum.Enum):
    EMPTY = "empty"
    PATH = "path"
    COMPLETE = "complete"
    STAR = "star"
    COMPLETE_BIPARTITE = "complete_bipartite"
    AGI = "agi"
    FOREST_GADGET = "forest_gadget"


_FAMILY_MIN = {
    Family.EMPTY: 0,
    Family.PATH: 0,
    Family.COMPLETE: 0,
    Family.STAR: 1,
    Family.COMPLETE_BIPARTITE: 1,
    Family.AGI: 2,
    Family.FOREST_GADGET: 1,
}


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    n: int
    k: int = 0

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(str(self.family).lower().replace("-", "_")))
        if self.n < _FAMILY_MIN[self.family]:
            raise ValueError(f"{self.family.value} needs n >= {_FAMILY_MIN[self.family]}, got {self.n}")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.k and self.family is not Family.FOREST_GADGET:
            raise ValueError("k (isolated padding) only applies to forest_gadget")


def make_family(spec: FamilySpec, limit: int | None = None) -> Graph:
    f, n = spec.family, spec.n
    if f is Family.EMPTY:
        return Graph.from_edges(n, [], limit=limit)
    if f is Family.PATH:
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], limit=limit)
    if f is Family.COMPLETE:
        return Graph.from_edges(n, combinations(range(n), 2), limit=limit)
    if f is Family.STAR:
        names = ["s"] + [f"l{i}" for i in range(1, n + 1)]
        return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)], names, limit)
    if f is Family.COMPLETE_BIPARTITE:
        names = [f"a{i}" for i in range(1, n + 1)] + [f"b{i}" for i in range(1, n + 1)]
        return Graph.from_edges(2 * n, [(i, n + j) for i in range(n) for j in range(n)], names, limit)
    if f is Family.AGI:
        # x_1..x_n, y_1..y_n, z, u_1..u_n
        z = 2 * n
        names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)] + ["z"]
        names += [f"u{i}" for i in range(1, n + 1)]
        edges = [(i, n + i) for i in range(n)] + [(n + i, z) for i in range(n)]
        edges += [(z, z + 1 + i) for i in range(n)]
        return Graph.from_edges(3 * n + 1, edges, names, limit)
    # forest gadget: x, y, v_1..v_n, then k isolated vertices
    names = ["x", "y"] + [f"v{i}" for i in range(1, n + 1)] + [f"i{i}" for i in range(1, spec.k + 1)]
    edges = [(0, 1)] + [(0, 2 + i) for i in range(n)] + [(1, 2 + i) for i in range(n)]
    return Graph.from_edges(n + 2 + spec.k, edges, names, limit)


def family(name: str, n: int, k: int = 0, limit: int | None = None) -> Graph:
    return make_family(FamilySpec(Family(name.lower().replace("-", "_")), n, k), limit)


# -- structural helpers ------------------------------------------------------


def add_isolated(g: Graph, k: int) -> Graph:
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return g
    _check_limit(g.n + k, g.limit)
    names = None
    if g.names:
        names = g.names + tuple(f"iso{i}" for i in range(1, k + 1))
    return Graph(g.n + k, g.rows + (0,) * k, names, g.limit)


def split_isolated(g: Graph) -> tuple[int, Graph]:
    """Return ``(k, core)``: the isolated-vertex count and the induced non-isolated core."""
    core = [v for v in range(g.n) if g.rows[v]]
    return g.n - len(core), g.induced(core)


def line_graph(g: Graph, limit: int | None = None) -> tuple[Graph, list[tuple[int, int]]]:
    edges = sorted(g.edges)
    _check_limit(len(edges), limit if limit is not None else g.limit)
    rows = [0] * len(edges)
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            if set(edges[a]) & set(edges[b]):
                rows[a] |= 1 << b
                rows[b] |= 1 << a
    names = tuple(f"{g.name(u)}-{g.name(v)}" for u, v in edges)
    return Graph(len(edges), tuple(rows), names, limit if limit is not None else g.limit), edges


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shift = a.n
    return Graph.from_edges(a.n + b.n, list(a.edges) + [(u + shift, v + shift) for u, v in b.edges])
