import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relgraph.errors import InvalidGraphError, ResourceLimitError
from relgraph.graph import Multigraph, complete_graph, cycle_graph, petersen_graph, theta_graph, wagner_graph
from relgraph.reliability import unrel_exact
from relgraph.spanning import (
    is_tree_balanced,
    tree_number,
    tree_number_minus_edge,
    tree_number_of_subdivision,
    tree_poly,
)
from relgraph.structure import subdivide

from conftest import corpus, random_connected_multigraph, spanning_tree_count


def test_known_tree_numbers():
    assert tree_number(cycle_graph(7)) == 7
    assert tree_number(complete_graph(4)) == 16
    assert tree_number(complete_graph(6)) == 6 ** 4
    assert tree_number(petersen_graph()) == 2000
    assert tree_number(Multigraph(1, ())) == 1
    assert tree_number(Multigraph(3, ((0, 1),))) == 0
    assert tree_number_minus_edge(complete_graph(4), 0) == 8


def test_against_union_find_oracle(rng):
    for _ in range(25):
        g = random_connected_multigraph(rng, 7, 11)
        assert tree_number(g) == spanning_tree_count(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_deletion_contraction_recurrence(seed):
    g = random_connected_multigraph(random.Random(seed), 7, 13)
    e = 0
    u, v = g.edges[e]
    rest = [x for i, x in enumerate(g.edges) if i != e]
    relabel = lambda w: u if w == v else (w if w < v else w - 1)
    contracted = Multigraph(g.n - 1, tuple((relabel(a), relabel(b)) for a, b in rest
                                           if relabel(a) != relabel(b)))
    assert tree_number(g) == tree_number_minus_edge(g, e) + tree_number(contracted)


def test_edge_removal_feeds_redundancy_coefficient():
    for g in corpus(8):
        b = unrel_exact(g).bernstein
        r = g.m - g.n + 1
        assert b[r] == comb(g.m, r) - tree_number(g)


def test_balance():
    assert is_tree_balanced(petersen_graph()).balanced
    assert is_tree_balanced(complete_graph(4)).balanced
    assert is_tree_balanced(cycle_graph(5)).balanced
    w = is_tree_balanced(wagner_graph())
    assert not w.balanced
    assert sorted(set(w.values)) == [161, 168]
    hi, lo = w.witness
    assert w.values[hi] == 168 and w.values[lo] == 161
    assert is_tree_balanced(petersen_graph()).witness is None
    with pytest.raises(InvalidGraphError):
        is_tree_balanced(Multigraph(3, ((0, 1),)))


def test_edge_transitive_graphs_are_balanced():
    # every edge in an orbit gives the same count
    from relgraph.graph import heawood_graph
    assert is_tree_balanced(heawood_graph()).balanced


def test_tree_poly_theta():
    th = theta_graph()
    tp = tree_poly(th, (0, 0, 1))
    assert tp.coeffs == (0, 2, 3) and tp.r == 2
    for c in (2, 3, 4):
        assert tp(c) == tree_number(subdivide(th, (c, c, c + 1)))
    assert [tp(c) for c in (2, 3, 4)] == [16, 33, 56]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_tree_poly_matches_subdivision(seed):
    rng = random.Random(seed)
    s = random.Random(seed).choice(corpus(4) + corpus(6) + [theta_graph()])
    r_assign = [rng.randint(0, 2) for _ in range(s.m)]
    tp = tree_poly(s, r_assign)
    assert tp.coeffs[tp.r] == tree_number(s)
    for c in (1, 2, 3):
        lengths = [c + x for x in r_assign]
        want = tree_number_of_subdivision(s, lengths)
        assert tp(c) == want
        if c <= 2 and sum(lengths) <= 20:
            assert want == tree_number(subdivide(s, lengths))


def test_tree_poly_cap():
    with pytest.raises(ResourceLimitError):
        tree_poly(corpus(10)[0], [1] * 15, max_edges=10)


def test_unbalanced_structure_shifts_subdivision():
    # lengthening a chain with more trees through it changes T(c) at order c^(r-1)
    s = wagner_graph()
    bal = is_tree_balanced(s)
    hi, lo = bal.witness
    r_hi = [1 if e == hi else 0 for e in range(s.m)]
    r_lo = [1 if e == lo else 0 for e in range(s.m)]
    p_hi, p_lo = tree_poly(s, r_hi), tree_poly(s, r_lo)
    r = p_hi.r
    assert p_hi.coeffs[r - 1] == bal.values[hi]
    assert p_lo.coeffs[r - 1] == bal.values[lo]
    assert p_hi(10) > p_lo(10)


def test_subdivision_length_validation():
    with pytest.raises(InvalidGraphError):
        tree_number_of_subdivision(theta_graph(), (1, 0, 1))
