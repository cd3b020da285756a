import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fracdemand.demand import demand_from_spec
from fracdemand.errors import HypothesisViolated, InvalidInput, SizeCapExceeded
from fracdemand.fracsolve import is_fcolorable
from fracdemand.graph import Graph, complete, cycle, odd_cycle_blowup, star
from fracdemand.structure import (CycleBlowupWitness, base_clique_report,
                                  blowup_definition_problems, classify_turtle, danger_sum, detect_dangerous_blowup, find_base_cliques,
                                  odd_cycle_blowup_colorable, proposition_blowup,
                                  witness_from_blowup, witness_problems)

from conftest import graphs

F = Fraction

HAND = {
    "skew-turtle": "a-v a-u v-up up-b up-c b-c b-u c-u b-x c-y x-y",
    "turtle": "a-v a-u v-up up-b up-c b-c b-u c-u u-v1 up-v2 v1-v2",
    "neither": "a-v a-u v-up up-b up-c b-c b-u c-u c-y x-y up-x",
}


def named(spec):
    pairs = [e.split("-") for e in spec.split()]
    idx = {n: i for i, n in enumerate(sorted({x for p in pairs for x in p}))}
    return Graph(len(idx), tuple((idx[a], idx[b]) for a, b in pairs)), idx


def witness(idx, *parts):
    return CycleBlowupWitness(tuple(tuple(idx[x] for x in p.split()) for p in parts))


def test_base_cliques_examples():
    (r,) = find_base_cliques(complete(4))
    assert r.K == (0, 1, 2, 3) and r.A_K == () and r.U_K == ()
    c5 = find_base_cliques(cycle(5))
    assert len(c5) == 5 and all(len(r.K) == 2 for r in c5)
    leaves = find_base_cliques(star(3))
    assert [r.K for r in leaves] == [(1,), (2,), (3,)]
    assert all(r.A_K == (0,) and r.U_K == () for r in leaves)


def test_base_clique_report_fields():
    # K = {0,1} in a triangle 0-1-2 plus pendant 3 on vertex 2 and 4 on vertex 1
    G = Graph(5, ((0, 1), (0, 2), (1, 2), (2, 3), (1, 4)))
    reports = {r.K: r for r in find_base_cliques(G)}
    assert set(reports) == {(3,), (4,)}
    r = base_clique_report(G, (0, 1))
    assert r.A_K == (2,) and r.U_K == (4,)
    assert dict(r.ell_per_vertex) == {0: 0, 1: 1} and r.ell == 1 and not r.uniform
    assert r.D_K == 1


def test_odd_cycle_blowup_examples():
    C5 = witness_from_blowup(odd_cycle_blowup(5, [1] * 5))
    assert odd_cycle_blowup_colorable(C5, [F(2, 5)] * 5)
    assert not odd_cycle_blowup_colorable(C5, [F(1, 2)] * 5)
    B = odd_cycle_blowup(5, [2, 1, 2, 1, 1])
    assert not odd_cycle_blowup_colorable(witness_from_blowup(B), [F(1, 3)] * 7, B)


def test_witness_validation():
    with pytest.raises(InvalidInput):
        CycleBlowupWitness(((0,), (1,)))
    with pytest.raises(InvalidInput):
        CycleBlowupWitness(((0,), (0,), (1,)))
    with pytest.raises(InvalidInput):
        CycleBlowupWitness(((0,), (), (1,)))
    w = CycleBlowupWitness(((0,), (1,), (2,), (3,), (4,)))
    assert CycleBlowupWitness.from_dict(w.to_dict()) == w and w.k == 2
    assert witness_problems(w, cycle(5)) == []
    assert witness_problems(w, complete(5))
    with pytest.raises(InvalidInput):
        odd_cycle_blowup_colorable(w, [0] * 5, complete(5))


sizes = st.lists(st.integers(1, 2), min_size=5, max_size=7).filter(lambda s: len(s) % 2)


@settings(max_examples=40)
@given(sizes, st.data())
def test_blowup_characterisation_matches_lp(sz, data):
    H = odd_cycle_blowup(len(sz), sz)
    g = [F(data.draw(st.integers(0, 6)), 6) for _ in range(H.n)]
    assert odd_cycle_blowup_colorable(witness_from_blowup(H), g, H) == is_fcolorable(H, g).decision


@pytest.mark.parametrize("label", sorted(HAND))
def test_hand_built_instances(label):
    G, idx = named(HAND[label])
    f = demand_from_spec(G, "brooks:eps=1/2")
    found = detect_dangerous_blowup(G, f, 2)
    main = witness(idx, "a", "v", "up", "b c", "u")
    mirror = witness(idx, "v", "a", "u", "b c", "up")
    assert main in found and mirror in found
    if label != "turtle":
        assert set(found) == {main, mirror}
    assert all(not blowup_definition_problems(w, G, 2) and danger_sum(w, f) > 1 for w in found)
    assert {classify_turtle(w, G) for w in found} == {label}


def test_turtle_instance_has_a_second_symmetric_pair():
    G, idx = named(HAND["turtle"])
    found = detect_dangerous_blowup(G, demand_from_spec(G, "brooks:eps=1/2"), 2)
    assert witness(idx, "v1", "v2", "up", "b c", "u") in found
    assert len(found) == 4


def test_detector_negative_cases():
    assert detect_dangerous_blowup(cycle(5), [F(2, 5)] * 5, 2) == []
    assert detect_dangerous_blowup(complete(4), [F(1, 4)] * 4, 2) == []
    with pytest.raises(InvalidInput):
        detect_dangerous_blowup(cycle(5), [F(2, 5)] * 4, 2)


def test_detector_cap():
    G, _ = named(HAND["turtle"])
    with pytest.raises(SizeCapExceeded):
        detect_dangerous_blowup(G, demand_from_spec(G, "brooks:eps=1/2"), 2, cap=1)


def test_classify_hypotheses():
    G, idx = named(HAND["skew-turtle"])
    w = witness(idx, "a", "v", "up", "b c", "u")
    H = Graph(G.n + 1, G.edges)  # an isolated vertex drops the minimum degree to 0
    with pytest.raises(HypothesisViolated):
        classify_turtle(w, H)
    with pytest.raises(InvalidInput):
        classify_turtle(CycleBlowupWitness(((0,), (1,), (2,))), G)


def brute_dangerous(G, f, delta):
    """Singleton V1 and V4, every labelling of the rest by V0, V2, V3 or unused."""
    out = set()
    for v, u in itertools.permutations(range(G.n), 2):
        rest = [x for x in range(G.n) if x not in (u, v)]
        for lab in itertools.product(range(4), repeat=len(rest)):
            V0, V2, V3 = (tuple(x for x, l in zip(rest, lab) if l == i) for i in range(3))
            if not (V0 and V2 and V3):
                continue
            w = CycleBlowupWitness((V0, (v,), V2, V3, (u,)))
            if not blowup_definition_problems(w, G, delta) and danger_sum(w, f) > 1:
                out.add(w.parts)
    return out


def assert_matches_brute(G, f, delta):
    found = {w.parts for w in detect_dangerous_blowup(G, f, delta)}
    brute = brute_dangerous(G, f, delta)
    assert found <= brute
    # the detector keeps only maximal V3; every brute witness extends to a detected one
    for p in brute:
        assert any(q[:3] == p[:3] and q[4] == p[4] and set(p[3]) <= set(q[3]) for q in found)
    return found


@pytest.mark.parametrize("label", sorted(HAND))
def test_detector_matches_brute_force_on_hand_graphs(label):
    G, _ = named(HAND[label])
    assert assert_matches_brute(G, demand_from_spec(G, "brooks:eps=1/2"), 2)


@settings(max_examples=30)
@given(graphs(min_n=5, max_n=7), st.sampled_from(["1/2", "1/3", "2/3"]))
def test_detector_matches_brute_force(G, eps):
    if G.min_degree() == 0:
        return
    assert_matches_brute(G, demand_from_spec(G, f"brooks:eps={eps}"), G.min_degree())


@pytest.mark.parametrize("delta", range(2, 13))
def test_propositions(delta):
    for which in ("five", "seven"):
        G, eps, ok = proposition_blowup(delta, which)
        assert ok and eps > 0
        target = 2 if which == "five" else 3
        assert sum(1 / (d + eps) for d in G.degrees()) > target
    G, eps, _ = proposition_blowup(delta, "five")
    assert eps > F(1, 4)


def test_proposition_degenerate_case_is_c5():
    G, _, ok = proposition_blowup(2, "five")
    assert ok and G.n == 5 and G.degrees() == [2] * 5
    with pytest.raises(InvalidInput):
        proposition_blowup(1, "five")
