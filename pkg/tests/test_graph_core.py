from __future__ import annotations

import pytest
from hypothesis import given, settings

from onlinegraph.canon import graph_key
from onlinegraph.errors import (
    DuplicateEdgeError,
    EndpointRangeError,
    GraphFormatError,
    MalformedHeaderError,
    SelfLoopError,
    SizeLimitError,
)
from onlinegraph.graph_core import (
    FamilySpec,
    Graph,
    add_isolated,
    encode_edge_list,
    encode_graph6,
    family,
    line_graph,
    load_graph,
    make_family,
    split_isolated,
)

from .conftest import graphs


def test_graph6_path():
    g = load_graph("Bg", "graph6")
    assert g.n == 3
    assert set(g.edges) == {(0, 1), (1, 2)}
    assert encode_graph6(g) == "Bg"


def test_graph6_single_vertex():
    assert encode_graph6(Graph.empty(1)) == "@"
    assert load_graph("@").n == 1


def test_graph6_header_marker_is_ignored():
    assert load_graph(">>graph6<<Bg\n") == load_graph("Bg")


@pytest.mark.parametrize("text, exc", [
    ("", MalformedHeaderError),
    ("Bgg", MalformedHeaderError),
    ("B", MalformedHeaderError),
    ("Bh", GraphFormatError),  # padding bits set
    ("B g", GraphFormatError),
])
def test_graph6_errors(text, exc):
    with pytest.raises(exc):
        load_graph(text, "graph6")


def test_graph6_size_limits():
    with pytest.raises(SizeLimitError):
        load_graph(chr(63 + 20) + "?" * 32, "graph6")
    with pytest.raises(SizeLimitError):
        encode_graph6(Graph(63, (0,) * 63, limit=64))


def test_edge_list_empty():
    g = load_graph("3 0", "edge_list")
    assert g.n == 3 and g.m == 0


def test_edge_list_crlf():
    g = load_graph("3 2\r\n0 1\r\n1 2\r\n", "edges")
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize("text, exc", [
    ("2 1\n0 0", SelfLoopError),
    ("2 1\n0 2", EndpointRangeError),
    ("3 2\n0 1\n1 0", DuplicateEdgeError),
    ("x 1\n0 1", MalformedHeaderError),
    ("3 2\n0 1", MalformedHeaderError),
    ("3", MalformedHeaderError),
    ("3 1\n0 one", GraphFormatError),
    ("17 0", SizeLimitError),
])
def test_edge_list_errors(text, exc):
    with pytest.raises(exc):
        load_graph(text, "edge_list")


def test_parse_errors_are_distinct():
    kinds = {MalformedHeaderError, EndpointRangeError, DuplicateEdgeError, SelfLoopError}
    assert len(kinds) == 4
    assert all(issubclass(k, GraphFormatError) for k in kinds)


def test_unknown_format():
    with pytest.raises(ValueError):
        load_graph("Bg", "sparse6")


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=10))
def test_graph6_round_trip(g):
    assert load_graph(encode_graph6(g)) == g


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10))
def test_edge_list_round_trip(g):
    assert load_graph(encode_edge_list(g), "edge_list") == g


def test_graph_invariants():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))  # asymmetric
    with pytest.raises(SelfLoopError):
        Graph(1, (1,))
    with pytest.raises(SizeLimitError):
        Graph.empty(17)
    assert Graph(20, (0,) * 20, limit=20).n == 20


def test_star():
    g = family("star", 3)
    assert g.n == 4
    assert set(g.edges) == {(0, 1), (0, 2), (0, 3)}


def test_agi_matches_figure():
    g = family("agi", 4)
    assert (g.n, g.m) == (13, 12)
    x, y, z, u = range(4), range(4, 8), 8, range(9, 13)
    expected = {(xi, yi) for xi, yi in zip(x, y)} | {(yi, z) for yi in y} | {(z, ui) for ui in u}
    assert set(g.edges) == expected
    assert g.name(0) == "x1" and g.name(8) == "z" and g.name(12) == "u4"


def test_forest_gadget_matches_figure():
    g = family("forest_gadget", 5)
    assert (g.n, g.m) == (7, 11)
    assert g.has_edge(0, 1)
    assert all(g.has_edge(0, v) and g.has_edge(1, v) for v in range(2, 7))
    padded = family("forest-gadget", 5, 2)
    assert padded.n == 9 and split_isolated(padded)[0] == 2


def test_complete_bipartite():
    g = family("complete_bipartite", 3)
    assert (g.n, g.m) == (6, 9)
    assert graph_key(family("complete_bipartite", 2)) == graph_key(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))


@pytest.mark.parametrize("name, n", [("star", 0), ("agi", 1), ("forest_gadget", 0), ("path", -1)])
def test_family_ranges(name, n):
    with pytest.raises(ValueError):
        family(name, n)


def test_family_k_only_for_gadget():
    with pytest.raises(ValueError):
        FamilySpec("star", 3, 1)
    assert make_family(FamilySpec("forest_gadget", 2, 1)).n == 5


def test_unknown_family():
    with pytest.raises(ValueError):
        family("petersen", 3)


def test_add_isolated():
    k3 = family("complete", 3)
    g = add_isolated(k3, 1)
    assert g.n == 4 and g.degree(3) == 0
    assert add_isolated(k3, 0) is k3
    assert split_isolated(add_isolated(family("star", 4), 2)) == (2, family("star", 4))
    with pytest.raises(SizeLimitError):
        add_isolated(family("complete", 10), 7)


@pytest.mark.parametrize("g, k, core", [
    (add_isolated(family("star", 3), 2), 2, family("star", 3)),
    (Graph.empty(4), 4, Graph.empty(0)),
    (family("complete_bipartite", 2), 0, family("complete_bipartite", 2)),
])
def test_split_isolated(g, k, core):
    assert split_isolated(g) == (k, core)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_split_then_pad_is_isomorphic(g):
    k, core = split_isolated(g)
    assert k + core.n == g.n
    assert graph_key(add_isolated(core, k)) == graph_key(g)


@pytest.mark.parametrize("g, expected", [
    (family("star", 3), family("complete", 3)),
    (family("path", 4), family("path", 3)),
    (family("path", 2), Graph.empty(1)),
])
def test_line_graph_examples(g, expected):
    lg, edge_map = line_graph(g)
    assert graph_key(lg) == graph_key(expected)
    assert len(edge_map) == g.m


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7))
def test_line_graph_degrees(g):
    if g.m > 16:
        return
    lg, edge_map = line_graph(g)
    assert lg.n == g.m
    for i, (u, v) in enumerate(edge_map):
        assert lg.degree(i) == g.degree(u) + g.degree(v) - 2


def test_line_graph_limit():
    with pytest.raises(SizeLimitError):
        line_graph(family("complete", 7))
