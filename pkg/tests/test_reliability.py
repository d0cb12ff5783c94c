import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relgraph.errors import InvalidGraphError, ResourceLimitError
from relgraph.graph import (
    Multigraph,
    complete_graph,
    cycle_graph,
    edge_connectivity,
    heawood_graph,
    path_graph,
    petersen_graph,
    wagner_graph,
)
from relgraph.reliability import (
    UnrelPoly,
    bernstein_to_power,
    class_filtration,
    compare_near_one,
    compare_near_zero,
    connected_subgraph_counts,
    evaluate,
    near_zero_prefix,
    power_to_bernstein,
    unrel_bruteforce,
    unrel_exact,
    verify_coefficient_comparison,
)
from relgraph.spanning import tree_number

from conftest import brute_disconnecting_counts, corpus, random_connected_multigraph


def test_small_examples():
    assert unrel_bruteforce(cycle_graph(4)).bernstein == (0, 0, 6, 4, 1)
    assert unrel_exact(cycle_graph(4)).bernstein == (0, 0, 6, 4, 1)
    # b_3 = C(6,3) - T(K4) = 20 - 16
    assert unrel_bruteforce(complete_graph(4)).bernstein == (0, 0, 0, 4, 15, 6, 1)
    tree = path_graph(6)
    assert unrel_exact(tree).bernstein == tuple([0] + [comb(5, k) for k in range(1, 6)])


def test_petersen_low_coefficients():
    b = unrel_exact(petersen_graph()).bernstein
    # 10 vertex stars; at size 4, a star plus any of 12 other edges (120)
    # and the 15 boundaries of single edges
    assert b[3] == 10 and b[4] == 10 * 12 + 15
    assert unrel_bruteforce(petersen_graph()) == unrel_exact(petersen_graph())


def test_cycles_up_to_20():
    for n in range(3, 21):
        b = unrel_exact(cycle_graph(n)).bernstein
        assert b[0] == b[1] == 0 and all(b[k] == comb(n, k) for k in range(2, n + 1))


def test_exact_matches_independent_oracle(rng):
    for _ in range(20):
        g = random_connected_multigraph(rng, 7, 12)
        assert list(unrel_exact(g).bernstein) == brute_disconnecting_counts(g)


def test_bruteforce_cap():
    g = Multigraph(2, ((0, 1),) * 29)
    with pytest.raises(ResourceLimitError):
        unrel_bruteforce(g)


def test_exact_cap_and_disconnected_and_loops():
    with pytest.raises(ResourceLimitError):
        unrel_exact(Multigraph(2, ((0, 1),) * 61))
    with pytest.raises(InvalidGraphError):
        unrel_exact(Multigraph(3, ((0, 1),)))
    with pytest.raises(InvalidGraphError):
        unrel_exact(Multigraph(2, ((0, 1), (1, 1))))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_polynomial_invariants(seed):
    g = random_connected_multigraph(random.Random(seed), 8, 16)
    poly = unrel_exact(g)
    b = poly.bernstein
    m, n = g.m, g.n
    assert b[0] == 0
    if n >= 2:
        assert b[m] == 1
    assert all(0 <= b[k] <= comb(m, k) for k in range(m + 1))
    for k in range(max(0, m - (n - 2)), m + 1):
        assert b[k] == comb(m, k)
    r = m - n + 1
    assert b[r] == comb(m, r) - tree_number(g)
    conn = connected_subgraph_counts(g)
    assert sum(b) == 2 ** m - sum(conn)
    assert evaluate(poly, 0) == 0 and evaluate(poly, 1) == 1
    vals = [evaluate(poly, Fraction(i, 20)) for i in range(21)]
    assert all(x <= y for x, y in zip(vals, vals[1:]))


def test_eval_examples():
    c4 = unrel_exact(cycle_graph(4))
    assert evaluate(c4, Fraction(1, 2)) == Fraction(11, 16)
    assert evaluate(c4, 0.5) == pytest.approx(11 / 16, abs=1e-15)
    assert evaluate(c4, 0.0) == 0.0 and evaluate(c4, 1.0) == 1.0
    big = unrel_exact(heawood_graph())
    assert float(evaluate(big, Fraction(3, 10))) == pytest.approx(evaluate(big, 0.3), rel=1e-12)
    with pytest.raises(ValueError):
        evaluate(c4, Fraction(3, 2))


def test_power_form():
    assert bernstein_to_power([0, 0, 6, 4, 1]) == [0, 0, 6, -8, 3]
    assert bernstein_to_power([0, 0, 0]) == [0, 0, 0]
    assert power_to_bernstein([0, 0, 6, -8, 3], 4) == [0, 0, 6, 4, 1]
    with pytest.raises(ValueError):
        power_to_bernstein([1, 2, 3], 4)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=30))
def test_power_round_trip(b):
    assert power_to_bernstein(bernstein_to_power(b)) == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=12), st.integers(1, 11))
def test_power_prefix_determines_bernstein_prefix(b, k):
    k = min(k, len(b) - 1)
    a = bernstein_to_power(b)
    b2 = list(b)
    b2[k:] = [x + 7 for x in b2[k:]]
    assert bernstein_to_power(b2)[:k] == a[:k]


def test_comparators():
    wag = unrel_exact(wagner_graph())
    for g in corpus(8):
        p = unrel_exact(g)
        if p != wag:
            assert compare_near_zero(wag, p) == -1
    assert compare_near_zero(wag, wag) == 0 and compare_near_one(wag, wag) == 0
    k4 = unrel_exact(complete_graph(4))
    doubled = unrel_exact(Multigraph(4, ((0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (2, 3))))
    assert compare_near_zero(k4, doubled) == -1
    with pytest.raises(ValueError):
        compare_near_zero(k4, unrel_exact(cycle_graph(4)))


def test_near_one_is_reverse_lex_and_tracks_tree_number():
    polys = [unrel_exact(g) for g in corpus(10)]
    trees = [tree_number(g) for g in corpus(10)]
    best = min(range(len(polys)), key=lambda i: polys[i].bernstein[::-1])
    assert trees[best] == max(trees)
    for i in range(len(polys)):
        assert compare_near_one(polys[best], polys[i]) <= 0


def test_filtration_examples():
    g8 = corpus(8)
    f = class_filtration(g8, "near_zero")
    assert len(f.final) == 1 and g8[f.final[0]] == g8[[unrel_exact(g) for g in g8].index(unrel_exact(wagner_graph()))]
    single = class_filtration([petersen_graph()], "near_one")
    assert all(s == (0,) for _, s in single.levels) and len(single.levels) == 16
    with pytest.raises(InvalidGraphError):
        class_filtration([petersen_graph(), cycle_graph(4)])


def test_filtration_levels_nest_and_end_identical():
    g10 = corpus(10)
    polys = [unrel_exact(g) for g in g10]
    for order in ("near_zero", "near_one"):
        f = class_filtration(polys, order)
        for (_, a), (_, b) in zip(f.levels, f.levels[1:]):
            assert set(b) <= set(a)
        assert len({polys[i].bernstein for i in f.final}) == 1


def test_level_one_keeps_two_edge_connected(rng):
    for _ in range(10):
        pool = []
        n = rng.randint(4, 6)
        while len(pool) < 6:
            g = random_connected_multigraph(rng, n, n + 4)
            if g.n == n:
                pool.append(g)
        m_groups = {}
        for g in pool:
            m_groups.setdefault(g.m, []).append(g)
        for group in m_groups.values():
            f = class_filtration(group, "near_zero")
            good = {i for i, g in enumerate(group) if edge_connectivity(g) >= 2}
            if good:
                assert set(f.survivors(1)) == good


def test_filtration_accepts_prefixes():
    g10 = corpus(10)
    pre = [near_zero_prefix(g, 5) for g in g10]
    f = class_filtration(pre, "near_zero", max_level=5)
    full = class_filtration(g10, "near_zero")
    assert f.levels == full.levels[:6]


def test_verify_coefficient_comparison():
    g8 = [unrel_exact(g) for g in corpus(8)]
    ordered = sorted(g8, key=lambda p: p.bernstein[1:])
    for x, y in [(ordered[0], ordered[1]), (ordered[0], ordered[4]), (ordered[2], ordered[3])]:
        assert compare_near_zero(x, y) == -1
        assert verify_coefficient_comparison(x, y)
        assert not verify_coefficient_comparison(y, x)
    assert verify_coefficient_comparison(ordered[0], ordered[0])
    assert verify_coefficient_comparison(UnrelPoly(2, (0, 1, 1)), UnrelPoly(2, (0, 1, 1)))
