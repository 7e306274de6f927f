"""Canonical forms of decision-marked graphs and adversary move generation.

The heavy lifting is ``canonical_form``, served by the compiled kernel when
it is importable and by the pure-Python twin otherwise (or when
``ONLINEGRAPH_PURE=1``).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from ..errors import SizeLimitError
from ..graph_core import VERTEX_LIMIT, Graph
from . import _canon_py

try:
    if os.environ.get("ONLINEGRAPH_PURE"):
        raise ImportError("pure backend forced")
    from ._canon_ext import canonical_form as _ext_canonical_form
except ImportError:
    _ext_canonical_form = None

BACKEND = "cython" if _ext_canonical_form is not None else "python"
_EXT_MAXN = 64


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ext_canonical_form is not None else [])


def set_backend(name: str) -> None:
    """Switch the process-wide kernel (used by benchmarks and cross-checks)."""
    global BACKEND
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    BACKEND = name


def canonical_form(adj, colors):
    """``(order, cert)`` of the coloured graph; see ``_canon_py.canonical_form``."""
    if BACKEND == "cython" and len(adj) <= _EXT_MAXN:
        return _ext_canonical_form(adj, colors)
    return _canon_py.canonical_form(adj, colors)


class Mark(enum.IntEnum):
    REJECTED = 0
    ACCEPTED = 1
    PENDING = 2  # revealed, decision not yet taken; internal to move dedup


@dataclass(frozen=True)
class MarkedGraph:
    g: Graph
    marks: tuple[Mark, ...]

    def __post_init__(self):
        if len(self.marks) != self.g.n:
            raise ValueError("every vertex needs a mark")
        object.__setattr__(self, "marks", tuple(Mark(m) for m in self.marks))


CanonicalKey = bytes


def key_bytes(cert, colors) -> CanonicalKey:
    """Serialise a canonical certificate and its (sorted) colour sequence."""
    n = len(cert)
    width = max(1, (n + 7) // 8)
    out = bytearray([n & 0xFF, n >> 8])
    out += bytes(colors)
    for r in cert:
        out += r.to_bytes(width, "big")
    return bytes(out)


def canonical_state(adj, colors):
    """Canonical relabelling: ``(order, cert, colors_in_canonical_order)``."""
    order, cert = canonical_form(adj, colors)
    return order, cert, tuple(colors[v] for v in order)


def canonical_key(mg: MarkedGraph, limit: int | None = None) -> CanonicalKey:
    lim = VERTEX_LIMIT if limit is None else limit
    if mg.g.n > lim:
        raise SizeLimitError(f"{mg.g.n} vertices exceeds the limit of {lim}")
    _, cert, cols = canonical_state(mg.g.rows, tuple(int(m) for m in mg.marks))
    return key_bytes(cert, cols)


def isomorphic(a: MarkedGraph, b: MarkedGraph) -> bool:
    if a.g.n != b.g.n or a.g.m != b.g.m or sorted(a.marks) != sorted(b.marks):
        return False
    return canonical_key(a) == canonical_key(b)


def graph_key(g: Graph) -> CanonicalKey:
    """Key of the unmarked graph (all vertices share one colour)."""
    return canonical_key(MarkedGraph(g, (Mark.REJECTED,) * g.n), limit=max(g.n, VERTEX_LIMIT))


def extend_rows(adj, nbrs: int):
    """Rows of ``adj`` with one new vertex adjacent to the bitmask ``nbrs``."""
    k = len(adj)
    bit = 1 << k
    return tuple(r | bit if nbrs >> i & 1 else r for i, r in enumerate(adj)) + (nbrs,)


def induced_rows(rows, vertices):
    pos = {v: i for i, v in enumerate(vertices)}
    out = []
    for v in vertices:
        r = 0
        a = rows[v]
        while a:
            low = a & -a
            u = low.bit_length() - 1
            if u in pos:
                r |= 1 << pos[u]
            a ^= low
        out.append(r)
    return tuple(out)


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Move:
    """Neighbourhood of the next presented vertex among the revealed ones."""

    neighborhood: frozenset[int]
    witness_vertex: int

    @property
    def mask(self) -> int:
        return sum(1 << v for v in self.neighborhood)


class MoveGenerator:
    """Legal adversary moves against one host graph.

    A neighbourhood ``N`` is legal for revealed graph ``R`` iff ``R`` plus a
    vertex adjacent to ``N`` is isomorphic to an induced subgraph of the host.
    This is decided against a table of the canonical certificates of every
    induced subgraph of the host, so legality is global embeddability rather
    than a local check.  Results are cached per isomorphism class of ``R``.
    """

    def __init__(self, host: Graph):
        self.host = host
        self.n = host.n
        self._induced: dict[int, dict] = {}
        self._degseqs: dict[int, set] = {}
        self._class_moves: dict[tuple, tuple[int, ...]] = {}
        self._legal: dict[tuple, tuple[int, ...]] = {}

    def induced_classes(self, size: int) -> dict:
        """Map certificate -> (host subset, canonical order) for every induced class of ``size``."""
        table = self._induced.get(size)
        if table is None:
            table = {}
            zeros = (0,) * size
            for sub in combinations(range(self.n), size):
                order, cert = canonical_form(induced_rows(self.host.rows, sub), zeros)
                if cert not in table:
                    table[cert] = (sub, order)
            self._induced[size] = table
            self._degseqs[size] = {tuple(sorted(r.bit_count() for r in c)) for c in table}
        return table

    def class_moves(self, cert) -> tuple[int, ...]:
        moves = self._class_moves.get(cert)
        if moves is not None:
            return moves
        k = len(cert)
        out = []
        if k < self.n:
            succ = self.induced_classes(k + 1)
            degseqs = self._degseqs[k + 1]
            degs = [r.bit_count() for r in cert]
            zeros = (0,) * (k + 1)
            for nbrs in range(1 << k):
                ds = sorted([d + (nbrs >> i & 1) for i, d in enumerate(degs)] + [nbrs.bit_count()])
                if tuple(ds) not in degseqs:
                    continue
                _, c2 = canonical_form(extend_rows(cert, nbrs), zeros)
                if c2 in succ:
                    out.append(nbrs)
        moves = tuple(out)
        self._class_moves[cert] = moves
        return moves

    def legal(self, adj) -> tuple[int, ...]:
        """Legal neighbourhood bitmasks, in the labelling of ``adj``."""
        adj = tuple(adj)
        moves = self._legal.get(adj)
        if moves is None:
            order, cert = canonical_form(adj, (0,) * len(adj))
            moves = []
            for m in self.class_moves(cert):
                r = 0
                for i in bits(m):
                    r |= 1 << order[i]
                moves.append(r)
            moves = tuple(moves)
            self._legal[adj] = moves
        return moves

    def embedding(self, adj):
        """One induced embedding of ``adj`` into the host as a list of host vertices, or None."""
        adj = tuple(adj)
        if len(adj) > self.n:
            return None
        order, cert = canonical_form(adj, (0,) * len(adj))
        hit = self.induced_classes(len(adj)).get(cert)
        if hit is None:
            return None
        sub, horder = hit
        image = [0] * len(adj)
        for p, v in enumerate(order):
            image[v] = sub[horder[p]]
        return image


@lru_cache(maxsize=64)
def move_generator(host: Graph) -> MoveGenerator:
    return MoveGenerator(host)


def adversary_moves(host: Graph, revealed) -> list[Move]:
    """All adversary moves from ``revealed``, one per successor class.

    ``revealed`` is anything with ``adj`` (symmetric rows over arrival
    indices) and ``marks``; the successor class is the revealed graph plus
    the new, still undecided vertex.
    """
    gen = move_generator(host)
    adj = tuple(revealed.adj)
    if len(adj) >= host.n:
        raise ValueError("every host vertex has already been revealed")
    if gen.embedding(adj) is None:
        raise ValueError("revealed graph is not an induced subgraph of the host")
    colors = tuple(int(m) for m in revealed.marks) + (int(Mark.PENDING),)
    seen = set()
    out = []
    for nbrs in gen.legal(adj):
        rows = extend_rows(adj, nbrs)
        _, cert, cols = canonical_state(rows, colors)
        key = (cert, cols)
        if key in seen:
            continue
        seen.add(key)
        out.append(Move(frozenset(bits(nbrs)), gen.embedding(rows)[len(adj)]))
    return out


def graph_classes(n: int) -> list[Graph]:
    """One representative of every isomorphism class of graphs on ``n`` vertices.

    Built by adding a vertex with every neighbourhood to the classes on
    ``n - 1`` vertices; deterministic order.
    """
    return list(_graph_classes(n))


@lru_cache(maxsize=None)
def _graph_classes(n: int) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph.empty(0),)
    seen = {}
    zeros = (0,) * n
    for g in _graph_classes(n - 1):
        for nbrs in range(1 << (n - 1)):
            rows = extend_rows(g.rows, nbrs)
            _, cert = canonical_form(rows, zeros)
            if cert not in seen:
                seen[cert] = Graph(n, cert, limit=max(n, VERTEX_LIMIT))
    return tuple(seen[c] for c in sorted(seen))


def edge_classes(m: int) -> list[Graph]:
    """One representative per isomorphism class of graphs with ``m`` edges and no isolated vertex."""
    return list(_edge_classes(m))


@lru_cache(maxsize=None)
def _edge_classes(m: int) -> tuple[Graph, ...]:
    if m == 0:
        return (Graph.empty(0),)
    seen = {}
    for g in _edge_classes(m - 1):
        n = g.n
        # the new edge joins two old vertices, an old and a new one, or two new ones
        cands = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.rows[u] >> v & 1]
        cands += [(u, n) for u in range(n)] + [(n, n + 1)]
        for u, v in cands:
            size = max(n, v + 1)
            lim = max(size, VERTEX_LIMIT)
            h = Graph.from_edges(size, list(g.edges) + [(u, v)], limit=lim)
            _, cert = canonical_form(h.rows, (0,) * size)
            if cert not in seen:
                seen[cert] = Graph(size, cert, limit=lim)
    return tuple(seen[c] for c in sorted(seen))
