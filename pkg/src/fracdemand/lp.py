"""Exact rational simplex for the independent-set covering LP.

    minimise   sum_I x_I
    subject to sum_{I contains v} x_I >= f(v)   for every vertex v
               x >= 0

The basis always has one column per vertex. Singleton sets give a feasible
starting basis (B = identity, x_B = f), so no phase one is needed. Columns are
either taken from a precomputed pool of maximal independent sets or generated
on demand by maximum-weight independent set pricing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import SizeCapExceeded
from .graph import Graph
from . import setsys

POOL_LIMIT_N = 18
_DEGENERATE_RUN = 50


@dataclass(frozen=True)
class CoverLP:
    columns: tuple[tuple[tuple[int, ...], Fraction], ...]  # independent sets with x_I > 0
    objective: Fraction
    dual: tuple[Fraction, ...]  # y >= 0 with y(I) <= 1 for every independent set I
    pivots: int
    mode: str


def _int_weights(y: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = math.lcm(*(v.denominator for v in y)) if y else 1
    return [int(v * scale) for v in y], scale


def solve_cover_lp(G: Graph, f: Sequence, *, pool_limit: int = POOL_LIMIT_N,
                   cap: int | None = None) -> CoverLP:
    n = G.n
    f = [Fraction(x) for x in f]
    cap = setsys.default_cap() if cap is None else cap
    if n == 0:
        return CoverLP((), Fraction(0), (), 0, "empty")

    pool: list[int] | None = None
    if n <= pool_limit:
        try:
            pool = sorted((setsys.to_mask(s) for s in
                           setsys.enumerate_maximal_independent_sets(G, cap)),
                          key=lambda m: setsys.to_set(m))
        except SizeCapExceeded:
            pool = None
    mode = "pool" if pool is not None else "pricing"

    # variable ids: surplus v -> v, set columns -> n + k in registration order
    registry: dict[int, int] = {}

    def reg(mask: int) -> int:
        if mask not in registry:
            registry[mask] = n + len(registry)
        return registry[mask]

    for v in range(n):
        reg(1 << v)
    for m in pool or ():
        reg(m)
    members = {m: list(setsys.bits(m)) for m in (pool or ())}

    # basis[i] is ("set", mask) or ("surplus", v)
    basis: list[tuple[str, int]] = [("set", 1 << v) for v in range(n)]
    binv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    xb = list(f)

    def var_id(col):
        return col[1] if col[0] == "surplus" else reg(col[1])

    pivots = 0
    degenerate = 0
    max_pivots = max(cap, 10_000)
    while True:
        cb = [Fraction(1) if kind == "set" else Fraction(0) for kind, _ in basis]
        y = [sum((cb[i] * binv[i][j] for i in range(n) if cb[i]), Fraction(0))
             for j in range(n)]
        bland = degenerate >= _DEGENERATE_RUN
        entering = None
        neg = [v for v in range(n) if y[v] < 0]
        if neg:
            if bland:
                v = min(neg)
            else:
                v = min(neg, key=lambda u: (y[u], u))
            entering = ("surplus", v)
        else:
            ints, scale = _int_weights(y)
            if pool is not None:
                best_val, best_mask = scale, None
                for m in pool:
                    s = sum(ints[v] for v in members[m])
                    if s > best_val:
                        best_val, best_mask = s, m
                        if bland:
                            break
                if best_mask is not None:
                    entering = ("set", best_mask)
            else:
                mask, val = setsys.max_weight_independent_set_int(G, ints)
                if val > scale:
                    entering = ("set", mask)
        if entering is None:
            break

        if entering[0] == "surplus":
            col = [-binv[i][entering[1]] for i in range(n)]
        else:
            vs = list(setsys.bits(entering[1]))
            col = [sum((binv[i][v] for v in vs), Fraction(0)) for i in range(n)]
        rows = [i for i in range(n) if col[i] > 0]
        if not rows:
            raise ArithmeticError("covering LP reported unbounded; this cannot happen")
        ratio = min(xb[i] / col[i] for i in rows)
        ties = [i for i in rows if xb[i] / col[i] == ratio]
        r = min(ties, key=lambda i: var_id(basis[i]))
        degenerate = degenerate + 1 if ratio == 0 else 0

        piv = col[r]
        row_r = [x / piv for x in binv[r]]
        x_r = xb[r] / piv
        for i in range(n):
            if i == r or col[i] == 0:
                continue
            c = col[i]
            bi = binv[i]
            for j in range(n):
                if row_r[j]:
                    bi[j] -= c * row_r[j]
            xb[i] -= c * x_r
        binv[r] = row_r
        xb[r] = x_r
        basis[r] = entering
        pivots += 1
        if pivots > max_pivots:
            raise SizeCapExceeded(f"simplex exceeded {max_pivots} pivots")

    cols = {}
    for (kind, m), x in zip(basis, xb):
        if kind == "set" and x > 0:
            cols[m] = cols.get(m, Fraction(0)) + x
    columns = tuple(sorted(((setsys.to_set(m), x) for m, x in cols.items())))
    objective = sum((x for _, x in columns), Fraction(0))
    return CoverLP(columns, objective, tuple(y), pivots, mode)
