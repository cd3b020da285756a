"""Exact grid checks of the nonnegativity inequalities q_delta(...) >= 0.

Each claim quantifies over integer and real parameters. Integer parameters
are enumerated; real ones are sampled at every multiple of 1/refinement in
their range plus the range endpoints. Evaluation is exact: points are kept as
integer numerator/denominator arrays and q is computed with rational
arithmetic on them, so a "pass" means q >= 0 at every sampled point, not
approximately. Sampling cannot prove an inequality over a real interval; the
report records what was covered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import InvalidInput

HALF = Fraction(1, 2)
_REDUCE_AT = 2.0**50
_OBJECT_AT = 2.0**62


class FracArray:
    """Elementwise exact fractions num/den with den > 0; int64 until it would overflow."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = np.asarray(num)
        den = np.ones_like(num) if den is None else np.asarray(den)
        self.num, self.den = np.broadcast_arrays(num, den)
        self._settle()

    @staticmethod
    def _big(a) -> bool:
        return a.dtype != object and a.size and float(np.abs(a).max()) > _REDUCE_AT

    def _settle(self):
        if self._big(self.num) or self._big(self.den):
            if self.num.dtype != object:
                g = np.gcd(self.num, self.den)
                g[g == 0] = 1
                self.num, self.den = self.num // g, self.den // g
            if self._big(self.num) or self._big(self.den):
                self.num = self.num.astype(object)
                self.den = self.den.astype(object)

    @staticmethod
    def _lift(x) -> "FracArray":
        if isinstance(x, FracArray):
            return x
        x = Fraction(x)
        return FracArray(np.int64(x.numerator), np.int64(x.denominator))

    @staticmethod
    def _safe(*arrs) -> bool:
        """Whether products of pairs of these arrays stay inside int64."""
        if any(a.dtype == object for a in arrs):
            return False
        m = [float(np.abs(a).max()) if a.size else 0.0 for a in arrs]
        return max(m[0] * m[1], m[2] * m[3]) * 2 < _OBJECT_AT

    @classmethod
    def _combine(cls, a, b, op):
        a, b = cls._lift(a), cls._lift(b)
        an, ad, bn, bd = a.num, a.den, b.num, b.den
        if not cls._safe(an, bd, bn, ad):
            an, ad, bn, bd = (x.astype(object) for x in (an, ad, bn, bd))
        return op(an, ad, bn, bd)

    def __add__(self, other):
        return self._combine(self, other, lambda an, ad, bn, bd: FracArray(an * bd + bn * ad, ad * bd))

    __radd__ = __add__

    def __neg__(self):
        return FracArray(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(self, other, lambda an, ad, bn, bd: FracArray(an * bn, ad * bd))

    __rmul__ = __mul__

    def _inv(self):
        sign = np.where(self.num < 0, -1, 1)
        if np.any(self.num == 0):
            raise ZeroDivisionError("division by zero in claim evaluation")
        return FracArray(self.den * sign, self.num * sign)

    def __truediv__(self, other):
        return self * self._lift(other)._inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self._inv()

    def sign(self):
        return np.sign(self.num)

    def at(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), int(self.den[i]))

    def __len__(self):
        return len(self.num)


def minimum(a, b):
    """Elementwise minimum for FracArray, plain min for scalars."""
    if not isinstance(a, FracArray) and not isinstance(b, FracArray):
        return min(a, b)
    d = FracArray._lift(a) - b
    take_a = d.sign() <= 0
    a, b = FracArray._lift(a), FracArray._lift(b)
    return FracArray(np.where(take_a, a.num * b.den, b.num * a.den), a.den * b.den)


# claims ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClaimSpec:
    id: str
    variables: tuple[str, ...]
    real: frozenset[str]
    q: Callable  # q(delta, *vars), works on Fraction and FracArray
    grid: Callable  # grid(delta, refinement) -> list of dict var -> (num, den) arrays
    min_delta: int = 1
    ranges: str = ""


def _real_range(lo: Fraction, hi: Fraction, r: int) -> list[Fraction]:
    """Multiples of 1/r inside [lo, hi] together with both endpoints."""
    if lo > hi:
        return []
    a, b = math.ceil(lo * r), math.floor(hi * r)
    pts = {Fraction(j, r) for j in range(a, b + 1)}
    pts.update((lo, hi))
    return sorted(pts)


def _cols(rows: list[tuple[Fraction, ...]], names: tuple[str, ...]) -> dict:
    out = {}
    for i, name in enumerate(names):
        out[name] = (np.array([x[i].numerator for x in rows], dtype=np.int64),
                     np.array([x[i].denominator for x in rows], dtype=np.int64))
    return out


def _scaled_range(lo: Fraction, hi: Fraction, r: int):
    """Numerators over r of the multiples of 1/r in [lo, hi]."""
    return np.arange(math.ceil(lo * r), math.floor(hi * r) + 1, dtype=np.int64)


# sink clique: d >= delta, d_u, d_u' >= d; integer degrees, capped at d <= 2 delta and
# d_u, d_u' <= 2d + 1, with d_u <= d_u' by symmetry.
def _q_sink(delta, d, du, dup):
    return (Fraction(3, 2) / (d + HALF) - 1 / (du + HALF) - 1 / (dup + HALF)
            + minimum(HALF / (du + dup - d - HALF), HALF / (delta + HALF)))


def _grid_sink(delta, r):
    ds, dus, dups = [], [], []
    for d in range(delta, 2 * delta + 1):
        i, j = np.triu_indices(d + 2)
        ds.append(np.full(i.size, d, dtype=np.int64))
        dus.append(i + d)
        dups.append(j + d)
    one = lambda a: (a, np.ones_like(a))
    return [{"d": one(np.concatenate(ds)), "du": one(np.concatenate(dus)),
             "dup": one(np.concatenate(dups))}]


# free colour when ell != 0: khat >= delta + 1, k in [khat/2, delta - 1] integer,
# d_x real in [delta + 1, (khat + 1/2)/(3/2 - k/(khat - 1/2)) - 1/2].
def _q_free(delta, k, dx):
    return 1 - (dx - k) / (delta + HALF) - 1 / (dx + HALF)


def d_x_bound(k, khat) -> Fraction:
    k, khat = Fraction(k), Fraction(khat)
    return (khat + HALF) / (Fraction(3, 2) - k / (khat - HALF)) - HALF


def _grid_free(delta, r):
    chunks = []
    for khat in range(delta + 1, 2 * delta - 1):
        for k in range(math.ceil(Fraction(khat, 2)), delta):
            hi = d_x_bound(k, khat)
            lo = Fraction(delta + 1)
            if hi < lo:
                continue
            nums = _scaled_range(lo, hi, r)
            num = np.concatenate([nums, [hi.numerator]])
            den = np.concatenate([np.full(nums.size, r, dtype=np.int64), [hi.denominator]])
            chunks.append((np.full(num.size, k, dtype=np.int64), num, den))
    if not chunks:
        return []
    ks = np.concatenate([c[0] for c in chunks])
    return [{"k": (ks, np.ones_like(ks)),
             "dx": (np.concatenate([c[1] for c in chunks]), np.concatenate([c[2] for c in chunks]))}]


def _q_three(shift):
    def q(delta, kp, khat, dx):
        return (1 - (khat - kp - shift) / (khat + HALF)
                - (dx + shift - khat) / (delta + HALF) - 1 / (dx + HALF))
    return q


def _grid_three(shift, khat_floor, dx_top):
    def grid(delta, r):
        top = dx_top(delta)
        kps, khs, dxs = [], [], []
        for kp in range(delta, top + 1):
            for khat in range(max(kp + shift, khat_floor(delta)), top + 1):
                nums = _scaled_range(Fraction(khat), Fraction(top), r)
                kps.append(np.full(nums.size, kp, dtype=np.int64))
                khs.append(np.full(nums.size, khat, dtype=np.int64))
                dxs.append(nums)
        if not dxs:
            return []
        kp, kh, dx = (np.concatenate(a) for a in (kps, khs, dxs))
        return [{"kp": (kp, np.ones_like(kp)), "khat": (kh, np.ones_like(kh)),
                 "dx": (dx, np.full(dx.size, r, dtype=np.int64))}]
    return grid


# colour seen by u in the 5-cycle blowup: d real in [delta, 2 delta].
def _q_turtle(delta, d):
    return 1 - HALF * (d - 1) / (d + Fraction(3, 2)) - HALF * delta / (delta + HALF) - 1 / (d + HALF)


def _grid_turtle(delta, r):
    nums = _scaled_range(Fraction(delta), Fraction(2 * delta), r)
    return [{"d": (nums, np.full(nums.size, r, dtype=np.int64))}]


# average colour: ell in [2, delta/2], k >= (delta + 1)/2, both real; k is the clique
# size |K| and so is capped at delta + 1.
def _q_average(delta, ell, k):
    return (ell + HALF - k / (delta + HALF)
            - (ell * (delta + Fraction(3, 2) - k) + HALF * k) / (delta + 2 - ell))


def _grid_average(delta, r):
    ells = _real_range(Fraction(2), Fraction(delta, 2), r)
    ks = _real_range(Fraction(delta + 1, 2), Fraction(delta + 1), r)
    if not ells or not ks:
        return []
    rows = [(a, b) for a in ells for b in ks]
    return [_cols(rows, ("ell", "k"))]


CLAIMS: dict[str, ClaimSpec] = {c.id: c for c in (
    ClaimSpec("sink-clique", ("d", "du", "dup"), frozenset(), _q_sink, _grid_sink,
              ranges="d in [delta, 2delta], d <= du <= dup <= 2d+1, integers"),
    ClaimSpec("ell-not-0", ("k", "dx"), frozenset({"dx"}), _q_free, _grid_free,
              ranges="khat in [delta+1, 2delta-2], k in [khat/2, delta-1], dx in [delta+1, bound(k, khat)]"),
    ClaimSpec("k-prime-at-least-delta", ("kp", "khat", "dx"), frozenset({"dx"}), _q_three(1),
              _grid_three(1, lambda dl: dl + 2, lambda dl: 2 * dl),
              ranges="kp >= delta, khat >= max(kp+1, delta+2), dx in [khat, 2delta]"),
    ClaimSpec("u-prime-2delta", ("kp", "khat", "dx"), frozenset({"dx"}), _q_three(2),
              _grid_three(2, lambda dl: dl + 3, lambda dl: 2 * dl),
              ranges="kp >= delta, khat >= max(kp+2, delta+3), du' in [khat, 2delta]"),
    ClaimSpec("u-prime-below-2delta", ("kp", "khat", "dx"), frozenset({"dx"}), _q_three(2),
              _grid_three(2, lambda dl: dl, lambda dl: 2 * dl - 1),
              ranges="kp >= delta, khat >= kp+2, du' in [khat, 2delta-1]"),
    ClaimSpec("turtle-degree", ("d",), frozenset({"d"}), _q_turtle, _grid_turtle,
              ranges="d in [delta, 2delta]"),
    ClaimSpec("average-color", ("ell", "k"), frozenset({"ell", "k"}), _q_average, _grid_average,
              min_delta=4, ranges="ell in [2, delta/2], k in [(delta+1)/2, delta+1]"),
)}


def negated(claim: ClaimSpec) -> ClaimSpec:
    """Same ranges with -q; used to make sure the harness can find a counterpoint."""
    return ClaimSpec(claim.id + "-negated", claim.variables, claim.real,
                     lambda delta, *xs: -claim.q(delta, *xs), claim.grid,
                     claim.min_delta, claim.ranges)


@dataclass
class AppendixResult:
    claim: str
    deltas: tuple[int, int]
    refinement: int
    points: int = 0
    empty_deltas: list[int] = field(default_factory=list)
    counterpoint: dict | None = None
    value: Fraction | None = None

    @property
    def passed(self) -> bool:
        return self.counterpoint is None

    def to_dict(self) -> dict:
        out = {"claim": self.claim, "delta_min": self.deltas[0], "delta_max": self.deltas[1],
               "refinement": self.refinement, "points": self.points,
               "empty_deltas": self.empty_deltas,
               "result": "pass" if self.passed else "counterpoint",
               "coverage": "exact evaluation at sampled points only"}
        if not self.passed:
            out["counterpoint"] = {k: str(v) for k, v in self.counterpoint.items()}
            out["value"] = str(self.value)
        return out


def appendix_verify(claim: str | ClaimSpec, delta_range: tuple[int, int],
                    refinement: int = 4) -> AppendixResult:
    if isinstance(claim, str):
        if claim not in CLAIMS:
            raise InvalidInput(f"unknown claim {claim!r}; known: {', '.join(CLAIMS)}")
        claim = CLAIMS[claim]
    lo, hi = (int(x) for x in delta_range)
    if lo > hi:
        raise InvalidInput(f"empty delta range [{lo}, {hi}]")
    if lo < claim.min_delta:
        raise InvalidInput(f"{claim.id} needs delta >= {claim.min_delta}")
    if refinement < 1:
        raise InvalidInput("refinement must be a positive integer")
    res = AppendixResult(claim.id, (lo, hi), refinement)
    for delta in range(lo, hi + 1):
        blocks = claim.grid(delta, refinement)
        if not blocks or all(len(b[claim.variables[0]][0]) == 0 for b in blocks):
            res.empty_deltas.append(delta)
            continue
        for block in blocks:
            args = [FracArray(*block[v]) for v in claim.variables]
            q = claim.q(Fraction(delta), *args)
            res.points += len(q)
            bad = np.flatnonzero(q.sign() < 0)
            if bad.size:
                i = int(bad[0])
                point = {"delta": Fraction(delta)}
                point.update({v: a.at(i) for v, a in zip(claim.variables, args)})
                value = claim.q(Fraction(delta), *(point[v] for v in claim.variables))
                res.counterpoint, res.value = point, value
                return res
    return res
