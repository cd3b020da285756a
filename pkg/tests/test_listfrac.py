import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fracdemand import setsys
from fracdemand.errors import HypothesisViolated, InvalidInput, SizeCapExceeded
from fracdemand.fracsolve import (FractionalColoring, SetColoring, check_fractional_coloring,
                                  is_fcolorable, verdict_set_coloring)
from fracdemand.graph import Graph, complete, cycle, petersen
from fracdemand.intervals import IntervalSet
from fracdemand.listfrac import (DiscreteListAssignment, atv_hypotheses,
                                 atv_partition_hypergraph, atv_partition_integers,
                                 check_fold_coloring, clique_minus_matching_conditions,
                                 color_clique_minus_matching, find_bad_list_assignment, hall_check,
                                 hall_color, lcm_upto, list_colorable_bruteforce,
                                 list_transfer_color, multiplicative_uplift, random_interval_lists,
                                 random_list_assignment, residual_lists, smallest_admissible_M)

from conftest import graphs

F = Fraction
I = IntervalSet.interval
U = IntervalSet.unit()


def ok(G, g, phi, lists):
    return not check_fractional_coloring(G, g, phi, lists)


def test_residual_lists_examples():
    assert residual_lists(complete(2), {0: I(0, F(1, 3))})[1] == I(F(1, 3), 1)
    L = residual_lists(cycle(5), {0: I(0, F(2, 5))})
    assert L[1] == L[4] == I(F(2, 5), 1)
    assert L[2] == L[3] == U
    L3 = residual_lists(complete(3), {0: I(0, F(1, 3)), 1: I(F(1, 3), F(2, 3))})
    assert L3 == {2: I(F(2, 3), 1)}
    with pytest.raises(InvalidInput):
        residual_lists(complete(2), {0: U, 1: U})


def test_hall_examples():
    K2, K3 = complete(2), complete(3)
    assert hall_check(K2, [F(1, 2)] * 2, [U, U]) is None
    assert hall_check(K2, [F(2, 3)] * 2, [U, U]) == (0, 1)
    thirds = [I(F(i, 3), F(i + 1, 3)) for i in range(3)]
    assert hall_check(K3, [F(1, 3)] * 3, thirds) is None
    with pytest.raises(SizeCapExceeded):
        hall_check(Graph(21), [0] * 21, [U] * 21)


def test_hall_color_examples():
    phi = hall_color(complete(2), [F(1, 2)] * 2, [U, U])
    assert phi.assignment == (I(0, F(1, 2)), I(F(1, 2), 1))
    thirds = [I(F(i, 3), F(i + 1, 3)) for i in range(3)]
    assert hall_color(complete(3), [F(1, 3)] * 3, thirds).assignment == tuple(thirds)
    forced = hall_color(complete(2), [F(1, 2)] * 2, [I(0, F(1, 2)), U])
    assert forced.assignment == (I(0, F(1, 2)), I(F(1, 2), 1))
    with pytest.raises(HypothesisViolated):
        hall_color(complete(2), [F(2, 3)] * 2, [U, U])


def test_clique_minus_matching_examples():
    both = color_clique_minus_matching(Graph(2), [F(1, 2)] * 2, [I(0, F(1, 2))] * 2)
    assert both.assignment == (I(0, F(1, 2)),) * 2
    H = Graph(3, ((0, 2), (1, 2)))
    phi = color_clique_minus_matching(H, [F(1, 3)] * 3, [U] * 3)
    assert phi[0] == phi[1] == I(0, F(1, 3)) and phi[2] == I(F(1, 3), F(2, 3))
    K4xy = Graph(4, ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    lists = [I(0, F(1, 2)), I(F(1, 2), 1), U, U]
    g = [F(1, 4)] * 4
    assert ok(K4xy, g, color_clique_minus_matching(K4xy, g, lists), lists)
    lists[0] = I(0, F(1, 2) - F(1, 100))
    assert clique_minus_matching_conditions(K4xy, g, lists) == ["(iii)"]
    with pytest.raises(HypothesisViolated, match=r"\(iii\)"):
        color_clique_minus_matching(K4xy, g, lists)


def test_clique_minus_matching_rejects_non_matching():
    with pytest.raises(InvalidInput):
        color_clique_minus_matching(Graph(3, ((0, 1),)), [0] * 3, [U] * 3)


def test_list_transfer_examples():
    G = cycle(5)
    f = [F(2, 5)] * 5
    half = [I(0, F(1, 2))] * 5
    g = [x / 2 for x in f]
    assert ok(G, g, list_transfer_color(G, f, g, half), half)
    two = [I(0, F(1, 2)), I(F(1, 2), 1)]
    phi = list_transfer_color(complete(2), [1, 1], [F(1, 2)] * 2, two)
    assert ok(complete(2), [F(1, 2)] * 2, phi, two)
    rng = random.Random(5)
    L = random_interval_lists(5, F(1, 2), rng)
    g = [F(1, 5)] * 5
    assert ok(G, g, list_transfer_color(G, f, g, L), L)
    with pytest.raises(HypothesisViolated):
        list_transfer_color(G, f, [F(1, 2)] * 5, L)


@pytest.mark.parametrize("G,f", [(cycle(5), [F(2, 5)] * 5), (petersen(), [F(2, 5)] * 10)])
def test_list_transfer_on_uniform_lists(G, f):
    # G is f-colorable, so with c-uniform lists the demand c*f is list colorable
    rng = random.Random(G.n)
    c = F(1, 2)
    for _ in range(50):
        L = random_interval_lists(G.n, c, rng)
        g = [c * x for x in f]
        assert ok(G, g, list_transfer_color(G, f, g, L), L.lists)


@settings(max_examples=40)
@given(graphs(min_n=2, max_n=7), st.randoms(use_true_random=False))
def test_residual_then_hall_extends(G, rnd):
    """Color everything outside a clique, then finish the clique from its residual lists."""
    K = max(setsys.enumerate_cliques(G), key=len)
    rest = [v for v in range(G.n) if v not in K]
    f = [F(1, 2 * (G.max_degree() + 1))] * G.n
    verdict = is_fcolorable(G.induced(rest), [f[v] for v in rest]) if rest else None
    phi = {v: verdict.primal[i] for i, v in enumerate(rest)} if rest else {}
    L = residual_lists(G, phi)
    H = G.induced(K)
    lists = [L[v] for v in K]
    g = [F(rnd.randint(0, 4), 4 * len(K)) for _ in K]
    if hall_check(H, g, lists) is not None:
        with pytest.raises(HypothesisViolated):
            hall_color(H, g, lists)
        return
    inner = hall_color(H, g, lists)
    full = dict(phi)
    full.update({v: inner[i] for i, v in enumerate(K)})
    demand = [f[v] if v in phi else g[K.index(v)] for v in range(G.n)]
    merged = FractionalColoring(tuple(full[v] for v in range(G.n)))
    assert not check_fractional_coloring(G, demand, merged)


def test_atv_integer_examples():
    parts = atv_partition_integers([1, 1, 1, 1], 4, 2, 1)
    assert sorted(map(len, parts)) == [2, 2]
    sizes = [2, 2, 2, 1, 1, 1, 1, 1, 1]
    parts = atv_partition_integers(sizes, 12, 2, 2)
    assert [sum(sizes[i] for i in p) for p in parts] == [6, 6]
    assert atv_partition_integers([1] * 5, 5, 1, 1) == [[0, 1, 2, 3, 4]]
    with pytest.raises(HypothesisViolated):
        atv_partition_integers([3, 1], 4, 2, 2)


@st.composite
def atv_instances(draw):
    k = draw(st.integers(1, 4))
    N = draw(st.integers(1, 4))
    L = lcm_upto(k)
    T = L * draw(st.integers(k, k + 3))
    M = N * T
    sizes = []
    left = M
    while left:
        s = draw(st.integers(1, min(k, left)))
        sizes.append(s)
        left -= s
    return sizes, M, N, k


@settings(max_examples=100)
@given(atv_instances())
def test_atv_parts_have_equal_sums(inst):
    sizes, M, N, k = inst
    assert not atv_hypotheses(sizes, M, N, k)
    parts = atv_partition_integers(sizes, M, N, k)
    assert len(parts) == N
    assert sorted(i for p in parts for i in p) == list(range(len(sizes)))
    assert all(sum(sizes[i] for i in p) == M // N for p in parts)


def test_atom_partition_examples():
    same = atv_partition_hypergraph(DiscreteListAssignment(4, (frozenset(range(4)),) * 2))
    assert {a.signature for a in same.atoms} == {(0, 1)}
    assert len(atv_partition_hypergraph(DiscreteListAssignment(4, (frozenset(range(4)),) * 2), 3).atoms) == 2
    apart = atv_partition_hypergraph(DiscreteListAssignment(2, (frozenset({0, 1}), frozenset({2, 3}))))
    assert len(apart.atoms) == 2
    lists = DiscreteListAssignment(4, (frozenset({0, 3, 4, 6}), frozenset({1, 3, 5, 6}),
                                       frozenset({2, 4, 5, 6})))
    part = atv_partition_hypergraph(lists, chunk=10)
    assert len(part.atoms) == 7


@given(st.integers(1, 4), st.integers(1, 6), st.integers(0, 4), st.randoms(use_true_random=False))
def test_atoms_tile_every_list(n, M, extra, rnd):
    lists = random_list_assignment(n, M, M + extra, rnd)
    part = atv_partition_hypergraph(lists, chunk=2)
    seen = [c for a in part.atoms for c in a.colors]
    assert sorted(seen) == lists.universe()
    for v, s in enumerate(lists.lists):
        assert s == {c for a in part.atoms if v in a.signature for c in a.colors}


def k2_coloring():
    return SetColoring(2, (frozenset({1}), frozenset({2})))


def c5_coloring():
    v = is_fcolorable(cycle(5), [F(2, 5)] * 5)
    psi = verdict_set_coloring(v, [F(2, 5)] * 5)
    assert psi.N == 5
    return psi


def test_uplift_identical_lists():
    psi = c5_coloring()
    M = smallest_admissible_M(5, 2)
    lists = DiscreteListAssignment(M, (frozenset(range(M)),) * 5)
    res = multiplicative_uplift(cycle(5), [F(2, 5)] * 5, psi, lists, chunk=2)
    assert res.route == "integer-partition"
    assert all(len(s) == 2 * M // 5 for s in res.coloring)
    assert not check_fold_coloring(cycle(5), [F(2, 5)] * 5, lists, res.coloring)


def test_uplift_k2_random_lists():
    rng = random.Random(1)
    M = smallest_admissible_M(2, 2)
    for _ in range(10):
        lists = random_list_assignment(2, M, 3 * M // 2, rng)
        res = multiplicative_uplift(complete(2), [F(1, 2)] * 2, k2_coloring(), lists, chunk=2)
        assert not check_fold_coloring(complete(2), [F(1, 2)] * 2, lists, res.coloring)
        assert not res.coloring[0] & res.coloring[1]


def test_uplift_rejects_bad_inputs():
    lists = DiscreteListAssignment(3, (frozenset(range(3)),) * 2)
    with pytest.raises(HypothesisViolated):
        multiplicative_uplift(complete(2), [F(1, 2)] * 2, k2_coloring(), lists)
    bad = SetColoring(2, (frozenset({1}), frozenset({1})))
    with pytest.raises(InvalidInput):
        multiplicative_uplift(complete(2), [F(1, 2)] * 2, bad, DiscreteListAssignment(2, (frozenset({0, 1}),) * 2))


def test_fold_checker_catches_defects():
    lists = DiscreteListAssignment(2, (frozenset({0, 1}), frozenset({0, 1})))
    assert check_fold_coloring(complete(2), [F(1, 2)] * 2, lists, [{0}, {0}])
    assert check_fold_coloring(complete(2), [F(1, 2)] * 2, lists, [{0}, {5}])
    assert check_fold_coloring(complete(2), [F(1, 2)] * 2, lists, [set(), {1}])
    assert not check_fold_coloring(complete(2), [F(1, 2)] * 2, lists, [{0}, {1}])


def test_list_brute_examples():
    assert list_colorable_bruteforce(complete(2), [F(1, 2)] * 2, 2)
    bad = find_bad_list_assignment(complete(3), [F(1, 2)] * 3, 2)
    assert bad is not None and len(set(bad)) == 1
    assert list_colorable_bruteforce(Graph(1), [F(1)], 5)
    with pytest.raises(SizeCapExceeded):
        list_colorable_bruteforce(cycle(5), [F(2, 5)] * 5, 3)


def test_list_brute_on_c4_matches_hand_count():
    # C4 is 2-choosable
    assert list_colorable_bruteforce(cycle(4), [F(1, 2)] * 4, 2)


def test_discrete_lists_validate_and_round_trip():
    with pytest.raises(InvalidInput):
        DiscreteListAssignment(2, (frozenset({1}),))
    d = DiscreteListAssignment(2, (frozenset({1, 2}), frozenset({2, 3})))
    assert DiscreteListAssignment.from_dict(d.to_dict()) == d
