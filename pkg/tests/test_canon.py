from __future__ import annotations

from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onlinegraph import canon
from onlinegraph.canon import (
    Mark,
    MarkedGraph,
    adversary_moves,
    canonical_form,
    canonical_key,
    edge_classes,
    graph_classes,
    isomorphic,
    move_generator,
)
from onlinegraph.canon import _canon_py
from onlinegraph.errors import SizeLimitError
from onlinegraph.graph_core import Graph, family
from onlinegraph.state import RevealedState

from .conftest import graphs

R, A = Mark.REJECTED, Mark.ACCEPTED


def brute_form(rows, marks):
    """Lexicographically least relabelling, by trying every permutation."""
    n = len(rows)
    best = None
    for perm in permutations(range(n)):
        inv = {v: i for i, v in enumerate(perm)}
        edges = tuple(sorted(tuple(sorted((inv[u], inv[v]))) for u in range(n) for v in range(u + 1, n)
                             if rows[u] >> v & 1))
        form = (tuple(marks[v] for v in perm), edges)
        if best is None or form < best:
            best = form
    return best


def labelled_graphs(n):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def mg(g, marks=None):
    return MarkedGraph(g, marks if marks is not None else (R,) * g.n)


def test_relabelled_path_same_key():
    a = Graph.from_edges(3, [(0, 1), (1, 2)])
    b = Graph.from_edges(3, [(2, 1), (1, 0)]).relabel([2, 1, 0])
    assert canonical_key(mg(a)) == canonical_key(mg(b))


def test_triangle_vs_path():
    assert canonical_key(mg(family("complete", 3))) != canonical_key(mg(family("path", 3)))


def test_marks_distinguish():
    p = family("path", 3)
    assert canonical_key(mg(p, (A, R, R))) != canonical_key(mg(p, (R, A, R)))
    assert canonical_key(mg(p, (A, R, R))) == canonical_key(mg(p, (R, R, A)))


def test_isomorphic_examples():
    k22 = family("complete_bipartite", 2)
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert isomorphic(mg(k22), mg(c4))
    assert isomorphic(mg(c4), mg(c4))
    assert not isomorphic(mg(family("path", 3)), mg(family("path", 4)))


def test_key_size_limit():
    with pytest.raises(SizeLimitError):
        canonical_key(mg(Graph(17, (0,) * 17, limit=17)))


def test_marked_graph_needs_every_mark():
    with pytest.raises(ValueError):
        MarkedGraph(family("path", 3), (R, R))


@pytest.mark.parametrize("n", range(6))
def test_congruence_unmarked_exhaustive(n):
    by_key, by_brute = {}, {}
    for g in labelled_graphs(n):
        k = canonical_key(mg(g))
        b = brute_form(g.rows, (0,) * n)
        assert by_key.setdefault(k, b) == b
        assert by_brute.setdefault(b, k) == k


@pytest.mark.parametrize("n", range(1, 6))
def test_congruence_marked_classes(n):
    """Every mark pattern on every class: keys agree exactly when brute-force forms do."""
    for g in graph_classes(n):
        by_key, by_brute = {}, {}
        for marks in product((R, A), repeat=n):
            k = canonical_key(mg(g, marks))
            b = brute_form(g.rows, marks)
            assert by_key.setdefault(k, b) == b
            assert by_brute.setdefault(b, k) == k


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=9), st.data())
def test_key_invariant_under_relabelling(g, data):
    order = data.draw(st.permutations(range(g.n)))
    marks = data.draw(st.lists(st.sampled_from([R, A]), min_size=g.n, max_size=g.n))
    h = g.relabel(order)  # vertex i of h is order[i] of g
    h_marks = tuple(marks[v] for v in order)
    assert canonical_key(mg(g, tuple(marks))) == canonical_key(mg(h, h_marks))


@pytest.mark.skipif("cython" not in canon.available_backends(), reason="compiled kernel not built")
@settings(max_examples=300, deadline=None)
@given(graphs(max_n=14), st.data())
def test_backends_agree(g, data):
    colors = tuple(data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n)))
    from onlinegraph.canon import _canon_ext

    assert _canon_ext.canonical_form(g.rows, colors) == _canon_py.canonical_form(g.rows, colors)


def test_canonical_form_is_relabelling():
    g = family("agi", 2)
    order, cert = canonical_form(g.rows, (0,) * g.n)
    assert sorted(order) == list(range(g.n))
    assert Graph(g.n, cert) == g.relabel(order)


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        canon.set_backend("fortran")


def test_graph_class_counts():
    assert [len(graph_classes(n)) for n in range(8)] == [1, 1, 2, 4, 11, 34, 156, 1044]


def test_edge_class_counts():
    assert [len(edge_classes(m)) for m in range(7)] == [1, 1, 2, 5, 11, 26, 68]
    assert all(0 not in g.rows for m in range(1, 6) for g in edge_classes(m))


# -- adversary moves -------------------------------------------------------------


def state(back_edges, marks=None):
    return RevealedState.from_back_edges(back_edges, marks or [R] * len(back_edges))


def test_moves_first_vertex():
    moves = adversary_moves(family("star", 3), RevealedState())
    assert [m.neighborhood for m in moves] == [frozenset()]


def test_moves_star_two_leaves():
    moves = adversary_moves(family("star", 3), state([0, 0]))
    assert sorted(sorted(m.neighborhood) for m in moves) == [[], [0, 1]]
    host = family("star", 3)
    centre = next(m for m in moves if m.neighborhood)
    assert centre.witness_vertex == 0
    leaf = next(m for m in moves if not m.neighborhood)
    assert host.degree(leaf.witness_vertex) == 1


def test_moves_triangle():
    moves = adversary_moves(family("complete", 3), state([0]))
    assert [m.neighborhood for m in moves] == [frozenset({0})]


def test_moves_dedupe_by_successor():
    # two rejected leaves: attaching to either one gives the same successor class
    host = family("path", 4)
    moves = adversary_moves(host, state([0, 0]))
    succ = sorted(sorted(m.neighborhood) for m in moves)
    assert [0] in succ or [1] in succ
    assert not ([0] in succ and [1] in succ)
    marked = adversary_moves(host, state([0, 0], [A, R]))
    assert len(marked) == len(moves) + 1


def test_moves_errors():
    with pytest.raises(ValueError):
        adversary_moves(family("complete", 3), state([0, 0]))  # not induced in K3
    with pytest.raises(ValueError):
        adversary_moves(family("path", 2), state([0, 1]))


@pytest.mark.parametrize("host", [family("star", 3), family("agi", 2), family("path", 5), family("complete_bipartite", 2)])
def test_moves_sound_and_complete(host):
    """Every successor embeds, and every play reaches a copy of the host."""
    gen = move_generator(host)
    full_key = canonical_key(mg(host))

    def walk(st):
        if st.n == host.n:
            assert canonical_key(mg(Graph(st.n, st.adj))) == full_key
            return
        moves = adversary_moves(host, st)
        assert moves
        for m in moves:
            child = st.extend(m.mask, False)
            emb = gen.embedding(child.adj)
            assert emb is not None and emb[-1] is not None
            walk(child)

    walk(RevealedState())


def test_pure_backend_forced_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ONLINEGRAPH_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from onlinegraph import canon; print(canon.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
