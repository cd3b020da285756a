"""Demand functions, weight functions and the demand generators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput
from .graph import Graph, Multigraph, parse_spec, parse_value
from . import setsys


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not a rational: {text!r}") from None


@dataclass(frozen=True)
class DemandFn:
    """Per-vertex demands in [0, 1], indexed by vertex."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.values)
        for v, x in enumerate(vals):
            if not 0 <= x <= 1:
                raise InvalidInput(f"demand at {v} is {x}, outside [0, 1]")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, n: int, value) -> "DemandFn":
        return cls((Fraction(value),) * n)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def total(self, vs: Iterable[int] | None = None) -> Fraction:
        if vs is None:
            return sum(self.values, Fraction(0))
        return sum((self.values[v] for v in vs), Fraction(0))

    def restrict(self, vs: Sequence[int]) -> "DemandFn":
        return DemandFn(tuple(self.values[v] for v in vs))


@dataclass(frozen=True)
class WeightFn:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.values)
        if any(x < 0 for x in vals):
            raise InvalidInput("weights must be nonnegative")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __iter__(self):
        return iter(self.values)


def common_denominator(f) -> int:
    """Least N with N*f(v) integral for every v."""
    return math.lcm(*(Fraction(x).denominator for x in f)) if len(f) else 1


def demand_scale(f: DemandFn, factor) -> DemandFn:
    factor = Fraction(factor)
    if factor < 0:
        raise InvalidInput("scale factor must be nonnegative")
    scaled = [x * factor for x in f]
    if any(x > 1 for x in scaled):
        raise InvalidInput("scaling would push a demand above 1")
    return DemandFn(tuple(scaled))


def max_clique_sum(G: Graph, f) -> Fraction:
    return setsys.max_clique_weight(G, list(f))


def demand_clip_to_clique_condition(G: Graph, f: DemandFn) -> DemandFn:
    """Scale f down uniformly so that every clique sums to at most 1."""
    worst = max_clique_sum(G, f)
    if worst <= 1:
        return f
    return demand_scale(f, 1 / worst)


# natural log lower bound -------------------------------------------------------

def _atanh_lower(z: Fraction, tol: Fraction) -> Fraction:
    """Partial sum of 2 * sum_{k odd} z^k / k stopped once the tail is below tol.

    Every term is positive so each partial sum is a lower bound, and the tail
    after the term z^k/k is at most 2 z^(k+2) / ((k+2)(1 - z^2)).
    """
    z2 = z * z
    total = Fraction(0)
    power = z
    k = 1
    while True:
        total += 2 * power / k
        power *= z2
        if 2 * power / ((k + 2) * (1 - z2)) < tol:
            return total
        k += 2


def log_lower_bound(d: int, tol: Fraction) -> Fraction:
    """Rational L with ln(d) - tol < L <= ln(d).

    Writes d = 2^m * x with x in [1, 2) so both series arguments stay at most 1/3.
    """
    if d < 1:
        raise InvalidInput("log of a nonpositive integer")
    if d == 1:
        return Fraction(0)
    m = d.bit_length() - 1
    x = Fraction(d, 2**m)
    share = Fraction(tol) / (m + 1)
    ln2 = _atanh_lower(Fraction(1, 3), share)
    rest = _atanh_lower((x - 1) / (x + 1), share) if x != 1 else Fraction(0)
    return m * ln2 + rest


def _floor_to(x: Fraction, denom: int) -> Fraction:
    return Fraction(math.floor(x * denom), denom)


SHEARER_GRID = 10**7


def shearer_value(d: int, c) -> Fraction:
    """Rational lower bound of c*ln(d)/d within 1e-6, clipped to [0, 1]."""
    c = Fraction(c)
    if d == 0:
        return Fraction(1)
    series_tol = Fraction(4, 10**7) * d / max(c, Fraction(1))
    value = c * log_lower_bound(d, series_tol) / d
    return min(Fraction(1), max(Fraction(0), _floor_to(value, SHEARER_GRID)))


# generators ------------------------------------------------------------------

VERTEX_FAMILIES = ("greedy", "brooks", "reed", "chi_bounded", "shearer", "const")
EDGE_FAMILIES = ("vizing_edge", "shannon_edge", "konig_edge")
DEMAND_FAMILIES = VERTEX_FAMILIES + EDGE_FAMILIES + ("total",)

_DEMAND_POSITIONAL = {"brooks": ("eps",), "chi_bounded": ("c",), "shearer": ("c",),
                      "const": ("value",)}


def _cap1(x: Fraction) -> Fraction:
    return min(Fraction(1), x)


def _line_source(G: Graph) -> Multigraph:
    if G.kind != "line" or not isinstance(G.source, Multigraph):
        raise InvalidInput("edge demand families need a line graph with provenance")
    return G.source


def demand_generate(G: Graph, family: str, params: Mapping | None = None) -> DemandFn:
    """Evaluate a named local-demand formula on G.

    Edge families (``vizing_edge``, ``shannon_edge``, ``konig_edge``) expect the
    line graph of a (multi)graph, and ``total`` expects a total graph.
    """
    params = dict(params or {})
    n = G.n
    if family == "greedy":
        return DemandFn(tuple(Fraction(1, G.degree(v) + 1) for v in range(n)))
    if family == "brooks":
        eps = Fraction(params.get("eps", Fraction(1, 2)))
        if not 0 <= eps <= 1:
            raise InvalidInput("eps must lie in [0, 1]")
        return DemandFn(tuple(_cap1(1 / (G.degree(v) + 1 - eps)) for v in range(n)))
    if family == "reed":
        return DemandFn(tuple(Fraction(2, G.degree(v) + setsys.omega_local(G, v) + 1)
                              for v in range(n)))
    if family == "chi_bounded":
        c = Fraction(params.get("c", 1))
        if c <= 0:
            raise InvalidInput("c must be positive")
        return DemandFn(tuple(_cap1(1 / (c * setsys.omega_local(G, v))) for v in range(n)))
    if family == "shearer":
        c = Fraction(params.get("c", 1))
        if c <= 0:
            raise InvalidInput("c must be positive")
        return DemandFn(tuple(shearer_value(G.degree(v), c) for v in range(n)))
    if family == "const":
        return DemandFn.constant(n, Fraction(params.get("value", 0)))
    if family in EDGE_FAMILIES:
        M = _line_source(G)
        out = []
        for u, v, _ in G.origin:
            top = max(M.degree(u), M.degree(v))
            if family == "vizing_edge":
                out.append(Fraction(1, top + M.multiplicity(u, v)))
            elif family == "shannon_edge":
                out.append(Fraction(2, 3 * top))
            else:
                out.append(_cap1(Fraction(1, top)))
        return DemandFn(tuple(out))
    if family == "total":
        if G.kind != "total" or G.source is None:
            raise InvalidInput("total demand needs a total graph with provenance")
        base = G.source
        out = []
        for tag in G.origin:
            if tag[0] == "v":
                out.append(Fraction(1, base.degree(tag[1]) + 2))
            else:
                out.append(Fraction(1, max(base.degree(tag[1]), base.degree(tag[2])) + 2))
        return DemandFn(tuple(out))
    raise InvalidInput(f"unknown demand family {family!r}")


def parse_demand_spec(spec: str) -> tuple[str, dict]:
    return parse_spec(spec, _DEMAND_POSITIONAL)


def demand_from_spec(G: Graph, spec: str) -> DemandFn:
    """``greedy``, ``brooks:eps=1/2``, ``const:2/5`` and so on."""
    name, params = parse_demand_spec(spec)
    return demand_generate(G, name, params)


# serialization ---------------------------------------------------------------

def demand_to_dict(f) -> dict:
    return {"f": [frac_str(x) for x in f]}


def demand_to_json(f) -> str:
    return json.dumps(demand_to_dict(f), separators=(",", ":")) + "\n"


def demand_from_dict(d: Mapping) -> DemandFn:
    try:
        return DemandFn(tuple(parse_frac(x) for x in d["f"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed demand JSON: {exc}") from None


def demand_from_json(text: str) -> DemandFn:
    try:
        return demand_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from None


__all__ = [
    "DemandFn", "WeightFn", "common_denominator", "demand_generate", "demand_scale",
    "demand_clip_to_clique_condition", "demand_from_spec", "demand_to_json",
    "demand_from_json", "frac_str", "parse_frac", "parse_value", "shearer_value",
    "log_lower_bound", "max_clique_sum",
]
