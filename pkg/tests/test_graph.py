import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relgraph.errors import GraphFormatError, InvalidGraphError
from relgraph.graph import (
    INF,
    Multigraph,
    complete_graph,
    cycle_graph,
    edge_connectivity,
    edge_distance,
    girth,
    girth6_family,
    heawood_graph,
    metrics,
    parse_graph,
    parse_graph6,
    parse_sparse6,
    path_graph,
    petersen_graph,
    to_graph6,
    to_sparse6,
    wagner_graph,
)
from relgraph.cutsets import boundary

from conftest import to_nx


def test_graph6_examples():
    k4 = parse_graph6("C~")
    assert k4.n == 4 and sorted(k4.edges) == sorted(complete_graph(4).edges)
    one = parse_graph6("@")
    assert one.n == 1 and one.m == 0
    tri = parse_graph6("Bw")
    assert tri.n == 3 and sorted(tri.edges) == [(0, 1), (0, 2), (1, 2)]
    assert parse_graph6(">>graph6<<C~").m == 6


@pytest.mark.parametrize("bad,offset", [("C~x", 2), ("C", 1), ("C\x7f", 1), ("Bx", 1)])
def test_graph6_errors_name_offset(bad, offset):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph6(bad)
    assert exc.value.offset == offset
    assert f"byte offset {offset}" in str(exc.value)


def test_graph6_matches_networkx_on_random_graphs():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 70)
        G = nx.gnp_random_graph(n, rng.random(), seed=rng.randint(0, 10**6))
        line = nx.to_graph6_bytes(G, header=False).decode().strip()
        g = parse_graph6(line)
        assert g.n == n and sorted(g.edges) == sorted(tuple(sorted(e)) for e in G.edges())
        assert to_graph6(g) == line


def test_sparse6_triple_edge_and_loop():
    theta = Multigraph(2, ((0, 1), (0, 1), (0, 1)))
    line = to_sparse6(theta)
    assert parse_sparse6(line).edges == ((0, 1), (0, 1), (0, 1))
    # hand check against networkx, which writes the same encoding
    G = nx.MultiGraph([(0, 1)] * 3)
    assert nx.to_sparse6_bytes(G, header=False).decode().strip() == line
    loop = parse_sparse6(to_sparse6(Multigraph(1, ((0, 0),))))
    assert loop.edges == ((0, 0),) and loop.has_loops


def test_sparse6_matches_networkx_decoder():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 40)
        edges = [tuple(sorted((rng.randrange(n), rng.randrange(n)))) for _ in range(rng.randint(0, 60))]
        g = Multigraph(n, tuple(edges))
        line = to_sparse6(g)
        H = nx.from_sparse6_bytes(line.encode())
        assert sorted(tuple(sorted(e)) for e in H.edges()) == sorted(g.edges)
        assert nx.to_sparse6_bytes(H, header=False).decode().strip() == line


def _random_multigraph(seed, n_max=20):
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    edges = [tuple(sorted((rng.randrange(n), rng.randrange(n)))) for _ in range(rng.randint(0, 3 * n))]
    return Multigraph(n, tuple(edges))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_both_formats(seed):
    g = _random_multigraph(seed)
    line = to_sparse6(g)
    back = parse_sparse6(line)
    assert back.n == g.n and sorted(back.edges) == sorted(g.edges)
    assert to_sparse6(back) == line
    assert parse_graph(line).edges == back.edges
    if g.is_simple:
        line6 = to_graph6(g)
        assert sorted(parse_graph6(line6).edges) == sorted(g.edges)


def test_ten_vertex_multigraph_round_trip_identity():
    g = _random_multigraph(3, 10)
    g = Multigraph(10, tuple(sorted(g.edges, key=lambda e: (e[1], e[0]))))
    assert parse_sparse6(to_sparse6(g)) == g


def test_sparse6_rejects_garbage():
    with pytest.raises(GraphFormatError):
        parse_sparse6("Aa")
    with pytest.raises(GraphFormatError):
        parse_sparse6(":A\x01")


def test_girth_examples():
    assert girth(complete_graph(4)) == 3
    assert girth(petersen_graph()) == 5 == nx.girth(nx.petersen_graph())
    assert girth(path_graph(3)) == INF
    assert girth(Multigraph(2, ((0, 1), (0, 1)))) == 2
    assert girth(Multigraph(1, ((0, 0),))) == 1


def test_edge_connectivity_examples():
    assert edge_connectivity(cycle_graph(5)) == 2
    assert edge_connectivity(petersen_graph()) == 3
    assert edge_connectivity(path_graph(6)) == 1
    assert edge_connectivity(Multigraph(4, ((0, 1), (2, 3)))) == 0


def test_edge_connectivity_against_networkx(rng):
    for _ in range(60):
        n = rng.randint(2, 12)
        G = nx.gnp_random_graph(n, 0.5, seed=rng.randint(0, 10**6))
        g = Multigraph(n, tuple(G.edges()))
        expected = nx.edge_connectivity(G) if nx.is_connected(G) else 0
        assert edge_connectivity(g) == expected
        if nx.is_connected(G):
            assert edge_connectivity(g) <= min(g.degrees)


def test_edge_distance_convention():
    star = Multigraph(4, ((0, 1), (0, 2), (0, 3)))
    assert edge_distance(star, 0, 1) == 1
    assert edge_distance(star, 2, 2) == 0
    c6 = cycle_graph(6)
    assert edge_distance(c6, 0, 3) == 3
    # a chain's two boundary edges on a path a-u-v-b are at distance 2
    path = path_graph(4)
    assert edge_distance(path, 0, 2) == 2


def test_girth6_family():
    g = girth6_family(14)
    assert g.regular_degree() == 3 and girth(g) == 6
    g16 = girth6_family(16)
    assert g16.regular_degree() == 3 and g16.m == 24
    for n in range(14, 41, 2):
        gg = girth6_family(n)
        assert gg.regular_degree() == 3 and girth(gg) == 6
    for bad in (13, 12, 7):
        with pytest.raises(InvalidGraphError):
            girth6_family(bad)


def test_heawood_is_the_heawood_graph():
    assert nx.is_isomorphic(nx.Graph(to_nx(heawood_graph())), nx.heawood_graph())
    assert nx.is_isomorphic(nx.Graph(to_nx(wagner_graph())), nx.circulant_graph(8, [1, 4]))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_boundary_size_formula_regular(seed):
    rng = random.Random(seed)
    G = nx.random_regular_graph(3, 2 * rng.randint(2, 8), seed=seed)
    g = Multigraph(G.number_of_nodes(), tuple(G.edges()))
    size = rng.randint(1, g.n - 1)
    X = set(rng.sample(range(g.n), size))
    inner = sum(1 for u, v in g.edges if u in X and v in X)
    assert len(boundary(g, X)) == 3 * len(X) - 2 * inner


def test_metrics_redundancy():
    met = metrics(petersen_graph())
    assert (met.redundancy, met.is_k_regular, met.girth) == (6, 3, 5)
    assert met.edge_connectivity <= met.min_degree


def test_multigraph_validation():
    with pytest.raises(InvalidGraphError):
        Multigraph(2, ((0, 2),))
    with pytest.raises(InvalidGraphError):
        Multigraph(0, ())
    assert Multigraph(3, ((2, 0),)).edges == ((0, 2),)
