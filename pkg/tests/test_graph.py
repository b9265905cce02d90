import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covgame.errors import InvalidArgumentError
from covgame.graph import ObservationGraph, format_edge_list, parse_edge_list


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 7))
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return ObservationGraph(n, edges)


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(1, g.n + 1))
    G.add_edges_from(g.edges)
    return G


@given(graphs())
def test_two_connectivity_matches_networkx(g):
    G = to_nx(g)
    expected = g.n == 1 or (g.n >= 3 and nx.is_connected(G) and nx.is_biconnected(G))
    assert g.is_two_connected() == expected


@given(graphs())
def test_distances_match_networkx(g):
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    table = g.shortest_path_lengths()
    for a in range(1, g.n + 1):
        for b in range(1, g.n + 1):
            assert table[a][b] == ref[a].get(b, math.inf)


@given(graphs())
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g), g.n) == g


def test_named_graphs():
    assert ObservationGraph.complete(4).is_complete()
    assert ObservationGraph.cycle(5).is_two_connected()
    assert not ObservationGraph.path(3).is_two_connected()
    assert not ObservationGraph.complete(2).is_two_connected()
    assert ObservationGraph.cycle(4).without_edge(1, 2) == ObservationGraph(4, [(2, 3), (3, 4), (4, 1)])


def test_neighbors_and_degree():
    g = ObservationGraph(4, [(1, 2), (2, 3)])
    assert g.neighbors(2) == {1, 3}
    assert g.degree(4) == 0
    with pytest.raises(InvalidArgumentError):
        g.neighbors(5)


@pytest.mark.parametrize("text,msg", [
    ("1 2\n2 2\n", "self-loop"),
    ("1 2\n1 9\n", "outside"),
    ("1 2\n1\n", "line 2"),
    ("# c\n\nx 2\n", "line 3"),
])
def test_parse_errors(text, msg):
    with pytest.raises(InvalidArgumentError, match=msg):
        parse_edge_list(text, 3)


def test_parse_comments_and_duplicates():
    g = parse_edge_list("1 2  # first\n\n2 1\n2 3\n", 3)
    assert g.edges == {(1, 2), (2, 3)}
