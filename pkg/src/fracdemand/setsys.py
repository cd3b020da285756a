"""Independent-set and clique oracles on bitmask adjacency."""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import SizeCapExceeded
from .graph import Graph

VertexSet = tuple[int, ...]

DEFAULT_CAP = 10**6


def default_cap() -> int:
    """Enumeration cap, overridable through the FRACDEMAND_CAP environment variable."""
    raw = os.environ.get("FRACDEMAND_CAP")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_CAP


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> VertexSet:
    return tuple(bits(mask))


def to_mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _scaled(weights: Sequence) -> tuple[list[int], int]:
    """Integer weights proportional to the rationals given, plus the scale."""
    fr = [Fraction(x) for x in weights]
    if any(x < 0 for x in fr):
        raise ValueError("weights must be nonnegative")
    scale = math.lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * scale) for x in fr], scale


def _mwis_int(G: Graph, w: list[int]) -> tuple[int, int]:
    n = G.n
    masks = [G.mask(v) for v in range(n)]
    start = to_mask(v for v in range(n) if w[v] > 0)
    best = [0, 0]  # weight, set

    def bound(cand: int) -> int:
        # greedy clique cover: each clique can contribute at most one vertex
        total = 0
        left = cand
        while left:
            v = max(bits(left), key=lambda x: w[x])
            clique_w = w[v]
            common = masks[v] & left
            left &= ~(1 << v)
            while common:
                u = max(bits(common), key=lambda x: w[x])
                common &= masks[u]
                left &= ~(1 << u)
            total += clique_w
        return total

    def rec(cand: int, cur_w: int, cur: int) -> None:
        if cand == 0:
            if cur_w > best[0]:
                best[0], best[1] = cur_w, cur
            return
        if cur_w + bound(cand) <= best[0]:
            return
        v = max(bits(cand), key=lambda x: ((masks[x] & cand).bit_count(), w[x]))
        if masks[v] & cand == 0:
            # v conflicts with nothing left: always take it
            rec(cand & ~(1 << v), cur_w + w[v], cur | (1 << v))
            return
        rec(cand & ~(1 << v) & ~masks[v], cur_w + w[v], cur | (1 << v))
        rec(cand & ~(1 << v), cur_w, cur)

    rec(start, 0, 0)
    return best[1], best[0]


def max_weight_independent_set(G: Graph, w: Sequence) -> tuple[VertexSet, Fraction]:
    """Exact maximum-weight independent set by branch and bound."""
    ints, scale = _scaled(w)
    mask, value = _mwis_int(G, ints)
    return to_set(mask), Fraction(value, scale)


def max_weight_independent_set_int(G: Graph, w: Sequence[int]) -> tuple[int, int]:
    """Integer-weight variant returning (bitmask, weight); used by LP pricing."""
    return _mwis_int(G, list(w))


def independence_number(G: Graph) -> int:
    return _mwis_int(G, [1] * G.n)[1]


def brute_force_mwis(G: Graph, w: Sequence) -> Fraction:
    """Reference oracle over all 2^n subsets."""
    w = [Fraction(x) for x in w]
    best = Fraction(0)
    for m in range(1 << G.n):
        if all(G.mask(v) & m == 0 for v in bits(m)):
            best = max(best, sum((w[v] for v in bits(m)), Fraction(0)))
    return best


def _bron_kerbosch(adj: list[int], candidates: int, cap: int) -> Iterator[int]:
    count = 0
    stack = [(0, candidates, 0)]
    while stack:
        r, p, x = stack.pop()
        if p == 0:
            if x == 0:
                count += 1
                if count > cap:
                    raise SizeCapExceeded(f"more than {cap} maximal sets")
                yield r
            continue
        pivot = max(bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        branch = []
        for v in bits(p & ~adj[pivot]):
            branch.append((r | (1 << v), p & adj[v], x & adj[v]))
            p &= ~(1 << v)
            x |= 1 << v
        stack.extend(reversed(branch))


def enumerate_maximal_independent_sets(G: Graph, cap: int | None = None) -> Iterator[VertexSet]:
    cap = default_cap() if cap is None else cap
    full = (1 << G.n) - 1
    anti = [full & ~G.mask(v) & ~(1 << v) for v in range(G.n)]
    if G.n == 0:
        yield ()
        return
    for m in _bron_kerbosch(anti, full, cap):
        yield to_set(m)


def enumerate_cliques(G: Graph, cap: int | None = None) -> Iterator[VertexSet]:
    """All maximal cliques."""
    cap = default_cap() if cap is None else cap
    if G.n == 0:
        return
    for m in _bron_kerbosch([G.mask(v) for v in range(G.n)], (1 << G.n) - 1, cap):
        yield to_set(m)


def max_clique_weight(G: Graph, w: Sequence) -> Fraction:
    """Largest total weight of a clique (weights nonnegative)."""
    w = [Fraction(x) for x in w]
    return max((sum((w[v] for v in K), Fraction(0)) for K in enumerate_cliques(G)),
               default=Fraction(0))


def clique_number(G: Graph) -> int:
    return max((len(K) for K in enumerate_cliques(G)), default=0)


def omega_local(G: Graph, v: int) -> int:
    """Clique number of the closed neighbourhood of v."""
    adj = [G.mask(u) for u in range(G.n)]
    nbrs = G.mask(v)
    if nbrs == 0:
        return 1
    return 1 + max(m.bit_count() for m in _bron_kerbosch(adj, nbrs, default_cap()))


def is_simplicial(G: Graph, v: int) -> bool:
    return G.is_clique(G.neighbors(v))
