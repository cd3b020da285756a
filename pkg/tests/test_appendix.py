import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracdemand.appendix import CLAIMS, FracArray, appendix_verify, d_x_bound, minimum, negated
from fracdemand.errors import InvalidInput

F = Fraction
H = F(1, 2)


def multiples(lo, hi, r, ends=False):
    pts = {F(j, r) for j in range(math.ceil(lo * r), math.floor(hi * r) + 1)}
    if ends and lo <= hi:
        pts |= {F(lo), F(hi)}
    return sorted(pts)


def reference_points(cid, delta, r):
    """The claim's parameter ranges, written out directly."""
    if cid == "sink-clique":
        return [(d, a, b) for d in range(delta, 2 * delta + 1)
                for a in range(d, 2 * d + 2) for b in range(a, 2 * d + 2)]
    if cid == "ell-not-0":
        pts = []
        for khat in range(delta + 1, 2 * delta - 1):
            for k in range(math.ceil(F(khat, 2)), delta):
                hi = d_x_bound(k, khat)
                if hi >= delta + 1:
                    pts += [(k, x) for x in multiples(delta + 1, hi, r, ends=True)]
        return pts
    if cid == "turtle-degree":
        return [(x,) for x in multiples(delta, 2 * delta, r)]
    if cid == "average-color":
        return [(a, b) for a in multiples(2, F(delta, 2), r, ends=True)
                for b in multiples(F(delta + 1, 2), delta + 1, r, ends=True)]
    shift, floor, top = {
        "k-prime-at-least-delta": (1, delta + 2, 2 * delta),
        "u-prime-2delta": (2, delta + 3, 2 * delta),
        "u-prime-below-2delta": (2, delta, 2 * delta - 1),
    }[cid]
    return [(kp, kh, x) for kp in range(delta, top + 1)
            for kh in range(max(kp + shift, floor), top + 1)
            for x in multiples(kh, top, r)]


def library_points(claim, delta, r):
    pts = set()
    for block in claim.grid(delta, r):
        arrs = [FracArray(*block[v]) for v in claim.variables]
        pts |= {tuple(a.at(i) for a in arrs) for i in range(len(arrs[0]))}
    return pts


@pytest.mark.parametrize("cid", sorted(CLAIMS))
def test_grid_matches_stated_ranges_and_q_is_nonnegative(cid):
    claim = CLAIMS[cid]
    for delta in range(max(2, claim.min_delta), 9):
        ref = reference_points(cid, delta, 4)
        assert library_points(claim, delta, 4) == set(ref)
        # plain Fraction evaluation, independent of the vectorised path
        assert all(claim.q(F(delta), *(F(x) for x in p)) >= 0 for p in ref)


@pytest.mark.parametrize("cid", sorted(CLAIMS))
def test_claims_pass_for_moderate_delta(cid):
    claim = CLAIMS[cid]
    res = appendix_verify(cid, (claim.min_delta, 30), 4)
    assert res.passed and res.points > 0


def test_sink_clique_example_point():
    # d = du = dup = delta = 2: 3/5 - 2/5 - 2/5 + min(1/5, 1/5) = 0
    assert CLAIMS["sink-clique"].q(F(2), F(2), F(2), F(2)) == 0


def test_negated_claim_reports_exact_counterpoint():
    res = appendix_verify(negated(CLAIMS["turtle-degree"]), (2, 10))
    assert not res.passed
    # q(2, 2) = 1 - 1/7 - 2/5 - 2/5 = 2/35 by hand
    assert res.counterpoint == {"delta": 2, "d": 2} and res.value == F(-2, 35)
    assert res.to_dict()["result"] == "counterpoint"


def test_empty_ranges_are_reported():
    res = appendix_verify("ell-not-0", (1, 4))
    assert res.empty_deltas[:2] == [1, 2] and res.passed


@pytest.mark.parametrize("args", [("nosuch", (1, 2)), ("turtle-degree", (5, 4)),
                                  ("average-color", (2, 10)), ("turtle-degree", (1, 2), 0)])
def test_verify_rejects_bad_arguments(args):
    with pytest.raises(InvalidInput):
        appendix_verify(*args)


small = st.integers(-50, 50)
pos = st.integers(1, 50)


@given(st.lists(st.tuples(small, pos, small, pos), min_size=1, max_size=20))
def test_fracarray_arithmetic_matches_fraction(rows):
    a = FracArray(np.array([r[0] for r in rows]), np.array([r[1] for r in rows]))
    b = FracArray(np.array([r[2] for r in rows]), np.array([r[3] for r in rows]))
    fa = [F(r[0], r[1]) for r in rows]
    fb = [F(r[2], r[3]) for r in rows]
    for got, want in ((a + b, [x + y for x, y in zip(fa, fb)]),
                      (a - b, [x - y for x, y in zip(fa, fb)]),
                      (a * b, [x * y for x, y in zip(fa, fb)]),
                      (minimum(a, b), [min(x, y) for x, y in zip(fa, fb)]),
                      (1 - a, [1 - x for x in fa])):
        assert [got.at(i) for i in range(len(rows))] == want
        assert list(got.sign()) == [(w > 0) - (w < 0) for w in want]
    if all(y != 0 for y in fb):
        q = a / b
        assert [q.at(i) for i in range(len(rows))] == [x / y for x, y in zip(fa, fb)]


@given(st.integers(2**40, 2**61), st.integers(2**40, 2**61), st.integers(1, 2**30))
def test_fracarray_large_values_stay_exact(p, q, s):
    a = FracArray(np.array([p], dtype=np.int64), np.array([q], dtype=np.int64))
    b = FracArray(np.array([s], dtype=np.int64), np.array([q - 1], dtype=np.int64))
    out = (a * a - b) / (a + b)
    x, y = F(p, q), F(s, q - 1)
    assert out.at(0) == (x * x - y) / (x + y)
