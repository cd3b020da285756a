import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fracdemand.edgefrac import (check_degree_sum_lemma, check_jensen_lemma, edge_demand_from_values,
                                 edmonds_check, verify_local_konig, verify_local_shannon,
                                 verify_local_vizing)
from fracdemand.errors import InvalidInput, SizeCapExceeded
from fracdemand.fracsolve import is_fcolorable
from fracdemand.graph import (Graph, Multigraph, complete, complete_bipartite, cycle, line_graph,
                              random_bipartite, random_multigraph)

from conftest import graphs, graphs_up_to_edges

F = Fraction


def random_edge_demand(m, rng):
    return [F(rng.randint(0, 4), rng.randint(4, 8)) for _ in range(m)]


def test_edmonds_examples():
    hit = edmonds_check(complete(3), [F(1, 2)] * 3)
    assert hit.kind == "odd-set" and hit.where == (0, 1, 2) and hit.load == F(3, 2)
    assert edmonds_check(complete(3), [F(1, 3)] * 3) is None
    assert edmonds_check(cycle(4), [F(1, 2)] * 4) is None


def test_edmonds_vertex_violation_and_slack():
    hit = edmonds_check(complete(3), [F(2, 3)] * 3)
    assert hit.kind == "vertex" and hit.slack == F(-1, 3)


def test_edmonds_all_sets_flag():
    # even sets are implied by vertex constraints, so the flag never changes the verdict here
    assert edmonds_check(cycle(4), [F(1, 2)] * 4, all_sets=True) is None


def test_edmonds_parallel_edges_aggregate():
    M = Multigraph.from_multiplicities(2, {(0, 1): 2})
    assert edmonds_check(M, [F(1, 2), F(1, 2)]) is None
    assert edmonds_check(M, [F(1, 2), F(2, 3)]).kind == "vertex"
    with pytest.raises(InvalidInput):
        edmonds_check(M, [F(1, 2)])


def test_edmonds_cap():
    with pytest.raises(SizeCapExceeded):
        edmonds_check(Graph(23, ((0, 1),)), [F(1, 2)])


def test_local_edge_theorems_examples():
    r = verify_local_vizing(complete(4))
    assert r.passed and set(r.demand) == {F(1, 4)}
    tri = Multigraph.from_multiplicities(3, {(0, 1): 2, (1, 2): 2, (0, 2): 2})
    r = verify_local_shannon(tri)
    assert r.passed and set(r.demand) == {F(1, 6)}
    with pytest.raises(InvalidInput):
        verify_local_konig(complete(3))
    assert verify_local_konig(complete_bipartite(2, 3)).passed


def test_degree_sum_examples():
    assert check_degree_sum_lemma(complete(3)) == (2, 2, True)
    assert check_degree_sum_lemma(Graph(1)) == (0, 0, True)
    assert check_degree_sum_lemma(complete(5)) == (4, 4, True)


def test_jensen_examples():
    eq = Multigraph.from_multiplicities(4, {(0, 1): 2, (0, 2): 2, (0, 3): 2})
    lhs, rhs, ok = check_jensen_lemma(eq, 0)
    assert lhs == rhs and ok
    two = Multigraph.from_multiplicities(3, {(0, 1): 1, (0, 2): 3})
    assert check_jensen_lemma(two, 0) == (F(22, 35), F(2, 3), True)
    one = Multigraph.from_multiplicities(2, {(0, 1): 5})
    assert check_jensen_lemma(one, 0) == (F(1, 2), F(1, 2), True)
    with pytest.raises(InvalidInput):
        check_jensen_lemma(Graph(2), 0)


@given(graphs(max_n=9))
def test_degree_sum_inequality(G):
    lhs, rhs, ok = check_degree_sum_lemma(G)
    assert ok


@given(st.integers(2, 7), st.integers(1, 4), st.randoms(use_true_random=False))
def test_jensen_on_random_multigraphs(n, mu, rnd):
    M = random_multigraph(n, F(1, 2), mu, rnd)
    for v in range(n):
        if M.neighbors(v):
            assert check_jensen_lemma(M, v)[2]


def test_edmonds_matches_line_graph_lp_small():
    rng = random.Random(0)
    for level in graphs_up_to_edges(5):
        for G in level:
            for _ in range(10):
                f = random_edge_demand(len(G.edges), rng)
                assert (edmonds_check(G, f) is None) == is_fcolorable(line_graph(G), f).decision


@given(st.integers(2, 6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_edmonds_matches_lp_on_multigraphs(n, mu, rnd):
    M = random_multigraph(n, F(1, 2), mu, rnd, max_instances=9)
    f = random_edge_demand(len(M.edge_instances()), rnd)
    assert (edmonds_check(M, f) is None) == is_fcolorable(line_graph(M), f).decision


@given(st.integers(2, 7), st.integers(1, 3), st.randoms(use_true_random=False))
def test_local_vizing_and_shannon_hold(n, mu, rnd):
    M = random_multigraph(n, F(1, 2), mu, rnd, max_instances=12)
    for verify in (verify_local_vizing, verify_local_shannon):
        r = verify(M)
        assert r.passed and r.consistent


@given(st.integers(1, 4), st.integers(1, 4), st.randoms(use_true_random=False))
def test_local_konig_holds(a, b, rnd):
    G = random_bipartite(a, b, F(2, 3), rnd)
    assert verify_local_konig(G).passed


def test_edge_demand_from_values_checks_length():
    assert len(edge_demand_from_values(cycle(3), [F(1, 3)] * 3)) == 3
    with pytest.raises(InvalidInput):
        edge_demand_from_values(cycle(3), [F(1, 3)])
