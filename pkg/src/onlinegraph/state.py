"""The revealed, arrival-ordered history an online algorithm sees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .canon import Mark, MarkedGraph
from .graph_core import Graph


@dataclass(frozen=True)
class RevealedState:
    """Arrival ``i`` is vertex ``i``; ``adj`` holds symmetric adjacency rows.

    Edges of arrival ``i`` only point to earlier arrivals when it is added,
    so ``back_edges[i]`` is the neighbourhood revealed together with it.
    """

    adj: tuple[int, ...] = ()
    marks: tuple[Mark, ...] = ()

    @classmethod
    def from_back_edges(cls, back_edges, marks) -> "RevealedState":
        st = cls()
        for nb, mk in zip(back_edges, marks, strict=True):
            st = st.extend(nb, Mark(mk) == Mark.ACCEPTED)
        return st

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self):
        return len(self.adj)

    @property
    def back_edges(self) -> tuple[int, ...]:
        return tuple(r & ((1 << i) - 1) for i, r in enumerate(self.adj))

    @cached_property
    def accepted(self) -> int:
        m = 0
        for i, mk in enumerate(self.marks):
            if mk == Mark.ACCEPTED:
                m |= 1 << i
        return m

    @property
    def rejected(self) -> int:
        return ((1 << self.n) - 1) & ~self.accepted

    def extend(self, nbrs: int, accept: bool) -> "RevealedState":
        k = len(self.adj)
        if nbrs >> k:
            raise ValueError("a new vertex can only be adjacent to earlier arrivals")
        bit = 1 << k
        adj = tuple(r | bit if nbrs >> i & 1 else r for i, r in enumerate(self.adj)) + (nbrs,)
        return RevealedState(adj, self.marks + (Mark.ACCEPTED if accept else Mark.REJECTED,))

    def flipped(self) -> "RevealedState":
        """Same history with every decision inverted."""
        return RevealedState(self.adj, tuple(Mark(1 - m) for m in self.marks))

    def marked_graph(self) -> MarkedGraph:
        return MarkedGraph(Graph(self.n, self.adj, limit=max(self.n, 16)), self.marks)

    def accepted_vertices(self) -> list[int]:
        return [i for i, m in enumerate(self.marks) if m == Mark.ACCEPTED]
