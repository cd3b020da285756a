"""Finite unions of half-open rational intervals inside [0, 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InvalidInput


def _normalize(pieces: Iterable[tuple]) -> tuple[tuple[Fraction, Fraction], ...]:
    items = sorted((Fraction(a), Fraction(b)) for a, b in pieces if Fraction(a) < Fraction(b))
    out: list[list[Fraction]] = []
    for a, b in items:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint sorted intervals ``[a, b)``; adjacent pieces are merged."""

    pieces: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        pieces = _normalize(self.pieces)
        for a, b in pieces:
            if a < 0 or b > 1:
                raise InvalidInput(f"interval [{a}, {b}) leaves [0, 1)")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def interval(cls, a, b) -> "IntervalSet":
        return cls(((a, b),))

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls(((0, 1),))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.pieces), Fraction(0))

    def __bool__(self):
        return bool(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        A, B = self.pieces, other.pieces
        while i < len(A) and j < len(B):
            lo = max(A[i][0], B[j][0])
            hi = min(A[i][1], B[j][1])
            if lo < hi:
                out.append((lo, hi))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersection(other.complement())

    def complement(self) -> "IntervalSet":
        out = []
        cur = Fraction(0)
        for a, b in self.pieces:
            if cur < a:
                out.append((cur, a))
            cur = b
        if cur < 1:
            out.append((cur, Fraction(1)))
        return IntervalSet(tuple(out))

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def disjoint(self, other: "IntervalSet") -> bool:
        return not self.intersection(other)

    def issubset(self, other: "IntervalSet") -> bool:
        return not self.difference(other)

    def prefix(self, amount) -> "IntervalSet":
        """The leftmost part of this set with the given measure."""
        amount = Fraction(amount)
        if amount < 0 or amount > self.measure:
            raise InvalidInput(f"cannot take measure {amount} from a set of measure {self.measure}")
        out = []
        for a, b in self.pieces:
            if amount <= 0:
                break
            take = min(amount, b - a)
            out.append((a, a + take))
            amount -= take
        return IntervalSet(tuple(out))

    def locate(self, t) -> Fraction:
        """Point at which the measure of self to its left equals t."""
        t = Fraction(t)
        for a, b in self.pieces:
            if t <= b - a:
                return a + t
            t -= b - a
        raise InvalidInput("position beyond the measure of the set")

    def slice_measure(self, s, t) -> "IntervalSet":
        """Part of self lying between measure positions s and t."""
        s, t = Fraction(s), Fraction(t)
        out = []
        pos = Fraction(0)
        for a, b in self.pieces:
            lo = max(s, pos)
            hi = min(t, pos + (b - a))
            if lo < hi:
                out.append((a + lo - pos, a + hi - pos))
            pos += b - a
        return IntervalSet(tuple(out))

    def embed(self, sub: "IntervalSet") -> "IntervalSet":
        """Map a subset of [0, 1) into self, scaling measure by self.measure."""
        m = self.measure
        return IntervalSet(tuple(p for a, b in sub.pieces
                                 for p in self.slice_measure(a * m, b * m).pieces))

    def endpoints(self) -> list[Fraction]:
        return [x for p in self.pieces for x in p]

    def denominator(self) -> int:
        return math.lcm(*(x.denominator for x in self.endpoints())) if self.pieces else 1

    def to_json(self) -> list[list[str]]:
        return [[f"{a.numerator}/{a.denominator}", f"{b.numerator}/{b.denominator}"]
                for a, b in self.pieces]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        try:
            return cls(tuple((Fraction(a), Fraction(b)) for a, b in data))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"malformed interval list: {exc}") from None

    def __repr__(self):
        body = " ∪ ".join(f"[{a},{b})" for a, b in self.pieces)
        return f"IntervalSet({body or '∅'})"


def union_all(sets: Iterable[IntervalSet]) -> IntervalSet:
    pieces = []
    for s in sets:
        pieces.extend(s.pieces)
    return IntervalSet(tuple(pieces))
