"""Edge demands: matching polytope membership and the local edge-coloring bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .demand import DemandFn, demand_generate
from .errors import InvalidInput, SizeCapExceeded
from .fracsolve import is_fcolorable
from .graph import Graph, Multigraph, as_multigraph, line_graph
from . import setsys

EDMONDS_MAX_N = 22


@dataclass(frozen=True)
class Violation:
    kind: str  # "vertex" or "odd-set"
    where: tuple[int, ...]
    load: Fraction
    bound: Fraction

    @property
    def slack(self) -> Fraction:
        return self.bound - self.load


def aggregate_edge_demand(G: Multigraph, f: Sequence) -> dict[tuple[int, int], Fraction]:
    """Sum the demands of parallel copies onto the underlying simple edge."""
    inst = G.edge_instances()
    if len(f) != len(inst):
        raise InvalidInput(f"expected {len(inst)} edge demands, got {len(f)}")
    agg: dict[tuple[int, int], Fraction] = {e: Fraction(0) for e in G.edges}
    for (u, v, _), x in zip(inst, f):
        agg[(u, v)] += Fraction(x)
    return agg


def edmonds_check(G: Graph | Multigraph, f: Sequence, *, all_sets: bool = False) -> Violation | None:
    """None if f lies in the matching polytope of G, else the first violated constraint.

    Checks vertex constraints and odd sets of size at least 3; ``all_sets``
    also checks even sets (they are implied by the vertex constraints).
    """
    M = as_multigraph(G)
    n = M.n
    if n > EDMONDS_MAX_N:
        raise SizeCapExceeded(f"matching polytope check is limited to {EDMONDS_MAX_N} vertices")
    agg = aggregate_edge_demand(M, f)
    for v in range(n):
        load = sum((x for (a, b), x in agg.items() if v in (a, b)), Fraction(0))
        if load > 1:
            return Violation("vertex", (v,), load, Fraction(1))
    if not agg:
        return None
    scale = math.lcm(*(x.denominator for x in agg.values()))
    weights = {e: int(x * scale) for e, x in agg.items()}
    if sum(weights.values()) < 2**62 and scale * n < 2**62:
        hit = _odd_set_scan_numpy(n, weights, scale, all_sets)
    else:
        hit = _odd_set_scan(n, weights, scale, all_sets)
    if hit is None:
        return None
    size, S, load = hit
    return Violation("odd-set" if size % 2 else "even-set", setsys.to_set(S),
                     Fraction(load, scale), Fraction(size // 2))


def _odd_set_scan(n, weights, scale, all_sets):
    inside = [0] * (1 << n)
    nbr = [[0] * n for _ in range(n)]
    for (a, b), w in weights.items():
        nbr[a][b] = nbr[b][a] = w
    best = None
    for S in range(1, 1 << n):
        top = S.bit_length() - 1
        rest = S ^ (1 << top)
        inside[S] = inside[rest] + sum(nbr[top][u] for u in setsys.bits(rest))
        size = S.bit_count()
        if size < 3 or (size % 2 == 0 and not all_sets):
            continue
        if inside[S] > (size // 2) * scale and (best is None or (size, S) < best[:2]):
            best = (size, S, inside[S])
    return best


def _odd_set_scan_numpy(n, weights, scale, all_sets):
    idx = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        pop += (idx >> v) & 1
    inside = np.zeros(1 << n, dtype=np.int64)
    for (a, b), w in weights.items():
        inside += w * ((idx >> a) & (idx >> b) & 1)
    mask = (pop >= 3) & (inside > (pop // 2) * scale)
    if not all_sets:
        mask &= (pop % 2 == 1)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return None
    order = np.lexsort((hits, pop[hits]))
    S = int(hits[order[0]])
    return int(pop[S]), S, int(inside[S])


@dataclass(frozen=True)
class EdgeReport:
    theorem: str
    demand: tuple[Fraction, ...]
    edmonds: Violation | None
    lp_colorable: bool

    @property
    def passed(self) -> bool:
        return self.edmonds is None and self.lp_colorable

    @property
    def consistent(self) -> bool:
        return (self.edmonds is None) == self.lp_colorable


def _verify(G: Graph | Multigraph, family: str) -> EdgeReport:
    M = as_multigraph(G)
    LG = line_graph(M)
    f = demand_generate(LG, family)
    verdict = is_fcolorable(LG, f)
    return EdgeReport(family, f.values, edmonds_check(M, f.values), verdict.decision)


def verify_local_vizing(G: Graph | Multigraph) -> EdgeReport:
    return _verify(G, "vizing_edge")


def verify_local_shannon(G: Graph | Multigraph) -> EdgeReport:
    return _verify(G, "shannon_edge")


def verify_local_konig(G: Graph | Multigraph) -> EdgeReport:
    if not as_multigraph(G).underlying.is_bipartite():
        raise InvalidInput("the König variant needs a bipartite graph")
    return _verify(G, "konig_edge")


def check_degree_sum_lemma(G: Graph) -> tuple[Fraction, Fraction, bool]:
    """sum d/(d+1) against n-1 on a simple graph."""
    if isinstance(G, Multigraph):
        if not G.is_simple():
            raise InvalidInput("the degree-sum bound is for simple graphs")
        G = G.underlying
    lhs = sum((Fraction(d, d + 1) for d in G.degrees()), Fraction(0))
    rhs = Fraction(G.n - 1) if G.n else Fraction(0)
    if G.n == 0:
        return lhs, rhs, True
    return lhs, rhs, lhs <= rhs


def check_jensen_lemma(G: Graph | Multigraph, v: int) -> tuple[Fraction, Fraction, bool]:
    """sum_u mu/(d(v)+mu) against |N(v)|/(1+|N(v)|)."""
    M = as_multigraph(G)
    nbrs = sorted(M.neighbors(v))
    if not nbrs:
        raise InvalidInput(f"vertex {v} is isolated")
    d = M.degree(v)
    lhs = sum((Fraction(M.multiplicity(v, u), d + M.multiplicity(v, u)) for u in nbrs), Fraction(0))
    rhs = Fraction(len(nbrs), 1 + len(nbrs))
    return lhs, rhs, lhs <= rhs


def edge_demand_from_values(G: Graph | Multigraph, values: Sequence) -> DemandFn:
    M = as_multigraph(G)
    if len(values) != len(M.edge_instances()):
        raise InvalidInput("one demand per edge instance required")
    return DemandFn(tuple(Fraction(x) for x in values))
