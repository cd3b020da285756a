"""Shared strategies and independent oracles for the test suite.

The oracles here deliberately avoid the package's own solvers: they enumerate
subsets directly, use floating point LPs from scipy for cross-checks, and
rebuild colorings on an integer grid.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st
from scipy.optimize import linprog

from fracdemand.graph import Graph

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# strategies -------------------------------------------------------------------

@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(e for e, k in zip(pairs, keep) if k))


@st.composite
def graph_and_demand(draw, min_n=1, max_n=7, max_den=6):
    G = draw(graphs(min_n, max_n))
    f = []
    for _ in range(G.n):
        q = draw(st.integers(1, max_den))
        f.append(Fraction(draw(st.integers(0, q)), q))
    return G, f


# oracles ----------------------------------------------------------------------

def independent_masks(G: Graph) -> list[int]:
    n = G.n
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    out = []
    for m in range(1 << n):
        if all(not (adj[v] & m) for v in range(n) if m >> v & 1):
            out.append(m)
    return out


def alpha_weight(G: Graph, w) -> Fraction:
    best = Fraction(0)
    for m in independent_masks(G):
        best = max(best, sum((Fraction(w[v]) for v in range(G.n) if m >> v & 1), Fraction(0)))
    return best


def float_cover_lp(G: Graph, f) -> float:
    """Covering LP value by scipy over every independent set."""
    cols = [m for m in independent_masks(G) if m]
    if not cols:
        return 0.0
    A = np.array([[-(m >> v & 1) for m in cols] for v in range(G.n)], dtype=float)
    b = -np.array([float(x) for x in f])
    res = linprog(np.ones(len(cols)), A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    assert res.success
    return res.fun


def grid_check(G: Graph, f, phi) -> bool:
    """Validate an interval coloring by discretising on a common grid."""
    dens = [Fraction(x).denominator for x in f]
    for s in phi.assignment:
        for a, b in s.pieces:
            dens += [a.denominator, b.denominator]
    N = math.lcm(*dens) if dens else 1
    slots = []
    for s in phi.assignment:
        cells = set()
        for a, b in s.pieces:
            cells.update(range(int(a * N), int(b * N)))
        slots.append(cells)
    if any(len(slots[v]) < Fraction(f[v]) * N for v in range(G.n)):
        return False
    return all(not (slots[u] & slots[v]) for u, v in G.edges)


def chromatic_number_brute(G: Graph) -> int:
    n = G.n
    if n == 0:
        return 0
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if all(col[u] != col[v] for u, v in G.edges):
                return k
    return n


@pytest.fixture
def rng():
    import random
    return random.Random(12345)


def graphs_up_to_edges(max_edges: int) -> list[list[Graph]]:
    """Non-isomorphic graphs without isolated vertices, grouped by edge count.

    Each level extends the previous one by a single edge; duplicates are
    removed with a Weisfeiler-Lehman hash followed by an exact isomorphism test.
    """
    import networkx as nx

    levels = [[nx.Graph()]]
    for _ in range(max_edges):
        buckets: dict[str, list] = {}
        for H in levels[-1]:
            n = H.number_of_nodes()
            cands = [(u, v) for u in range(n) for v in range(u + 1, n) if not H.has_edge(u, v)]
            cands += [(u, n) for u in range(n)] + [(n, n + 1)]
            for u, v in cands:
                K = H.copy()
                K.add_edge(u, v)
                key = nx.weisfeiler_lehman_graph_hash(K)
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(K, other) for other in bucket):
                    bucket.append(K)
        levels.append([K for b in buckets.values() for K in b])
    return [[Graph(K.number_of_nodes(), tuple(K.edges)) for K in level] for level in levels]
