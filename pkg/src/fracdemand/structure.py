"""Structural configurations: base cliques, odd-cycle blowups, dangerous 5-part blowups."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import HypothesisViolated, InvalidInput, SizeCapExceeded
from .graph import Graph, proposition_graph
from . import setsys

DETECT_CAP = 10_000


@dataclass(frozen=True)
class BaseCliqueReport:
    K: tuple[int, ...]
    A_K: tuple[int, ...]
    U_K: tuple[int, ...]
    ell_per_vertex: tuple[tuple[int, int], ...]  # (vertex of K, neighbours in U_K)
    D_K: int

    @property
    def ell(self) -> int:
        return max((c for _, c in self.ell_per_vertex), default=0)

    @property
    def uniform(self) -> bool:
        return len({c for _, c in self.ell_per_vertex}) <= 1

    def to_dict(self) -> dict:
        return {"K": list(self.K), "A_K": list(self.A_K), "U_K": list(self.U_K),
                "ell_per_vertex": {str(v): c for v, c in self.ell_per_vertex},
                "ell": self.ell, "uniform": self.uniform, "D_K": self.D_K}


def base_clique_report(G: Graph, K: Sequence[int]) -> BaseCliqueReport:
    K = tuple(sorted(K))
    inside = set(K)
    A = tuple(u for u in range(G.n) if u not in inside
              and all(G.adjacent(u, v) for v in K))
    skip = inside | set(A)
    U = tuple(u for u in range(G.n) if u not in skip and G.neighbors(u) & inside)
    Uset = set(U)
    ell = tuple((v, len(G.neighbors(v) & Uset)) for v in K)
    D = max((len(G.neighbors(u) & inside) for u in U), default=0)
    return BaseCliqueReport(K, A, U, ell, D)


def find_base_cliques(G: Graph) -> list[BaseCliqueReport]:
    """Every maximum clique among the minimum-degree vertices, with its report."""
    if G.n == 0:
        return []
    delta = G.min_degree()
    low = [v for v in range(G.n) if G.degree(v) == delta]
    H = G.induced(low)
    cliques = [tuple(sorted(low[i] for i in c)) for c in setsys.enumerate_cliques(H)]
    best = max(len(c) for c in cliques)
    return [base_clique_report(G, c) for c in sorted(c for c in cliques if len(c) == best)]


@dataclass(frozen=True)
class CycleBlowupWitness:
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(x) for x in p)) for p in self.parts)
        if len(parts) < 3 or len(parts) % 2 == 0:
            raise InvalidInput("a cycle blowup needs an odd number (at least 3) of parts")
        if any(not p for p in parts):
            raise InvalidInput("every part must be nonempty")
        flat = [x for p in parts for x in p]
        if len(flat) != len(set(flat)):
            raise InvalidInput("parts must be disjoint")
        object.__setattr__(self, "parts", parts)

    @property
    def k(self) -> int:
        return len(self.parts) // 2

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(x for p in self.parts for x in p))

    def to_dict(self) -> dict:
        return {"parts": [list(p) for p in self.parts]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "CycleBlowupWitness":
        try:
            return cls(tuple(tuple(p) for p in d["parts"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed witness: {exc}") from None


def witness_from_blowup(H: Graph) -> CycleBlowupWitness:
    """Parts of a graph built by ``blowup`` over a cycle, read off its provenance."""
    if H.kind != "blowup" or H.origin is None:
        raise InvalidInput("graph does not carry blowup provenance")
    m = H.source.n
    parts = [[] for _ in range(m)]
    for x, b in enumerate(H.origin):
        parts[b].append(x)
    return CycleBlowupWitness(tuple(tuple(p) for p in parts))


def witness_problems(witness: CycleBlowupWitness, G: Graph) -> list[str]:
    """Check that consecutive parts span cliques and non-consecutive parts are anticomplete."""
    P = witness.parts
    m = len(P)
    out = []
    for i in range(m):
        if not G.is_clique(P[i] + P[(i + 1) % m]):
            out.append(f"parts {i} and {(i + 1) % m} do not form a clique")
    if m > 3:
        for i, j in itertools.combinations(range(m), 2):
            if (j - i) % m in (1, m - 1):
                continue
            if any(G.adjacent(a, b) for a in P[i] for b in P[j]):
                out.append(f"parts {i} and {j} are joined by an edge")
    return out


def odd_cycle_blowup_colorable(witness: CycleBlowupWitness, g, G: Graph | None = None) -> bool:
    """Colorable iff the total is at most k and every clique has sum at most 1.

    For a blowup of a cycle of length at least 5 the maximal cliques are the
    unions of consecutive parts; a blown-up triangle is one clique.
    """
    if G is not None:
        bad = witness_problems(witness, G)
        if bad:
            raise InvalidInput("; ".join(bad))
    g = [Fraction(x) for x in g] if not isinstance(g, Mapping) else g
    part_sum = [sum((Fraction(g[x]) for x in p), Fraction(0)) for p in witness.parts]
    total = sum(part_sum, Fraction(0))
    m = len(part_sum)
    if m == 3:
        return total <= 1
    if total > witness.k:
        return False
    return all(part_sum[i] + part_sum[(i + 1) % m] <= 1 for i in range(m))


# dangerous 5-part blowups ------------------------------------------------------

def blowup_definition_problems(witness: CycleBlowupWitness, G: Graph, delta: int) -> list[str]:
    """Re-check every condition of a delta-based 5-cycle blowup from scratch."""
    P = witness.parts
    if len(P) != 5:
        return ["needs exactly five parts"]
    out = []
    for i in range(5):
        if not G.is_clique(P[i] + P[(i + 1) % 5]):
            out.append(f"V{i} ∪ V{(i + 1) % 5} is not a clique")
    if any(G.degree(x) != delta for x in P[0] + P[1]):
        out.append("V0 ∪ V1 has a vertex of the wrong degree")
    if any(G.degree(x) < delta + 1 for x in P[2] + P[4]):
        out.append("V2 ∪ V4 has a vertex of low degree")
    if len(P[1]) != 1 or len(P[4]) != 1:
        out.append("V1 and V4 must be singletons")
    if len(P[2]) > len(P[0]):
        out.append("|V2| exceeds |V0|")
    return out


def danger_sum(witness: CycleBlowupWitness, f) -> Fraction:
    P = witness.parts
    return sum((Fraction(f[x]) for x in P[2] + P[3] + P[4]), Fraction(0))


def _cliques_within(G: Graph, pool: Sequence[int], max_size: int | None = None):
    """All nonempty cliques inside ``pool``, smallest first."""
    pool = sorted(pool)
    top = len(pool) if max_size is None else min(max_size, len(pool))
    for r in range(1, top + 1):
        for c in itertools.combinations(pool, r):
            if G.is_clique(c):
                yield c


def _maximal_cliques_within(G: Graph, pool: Sequence[int]):
    pool = sorted(pool)
    if not pool:
        return
    H = G.induced(pool)
    for c in setsys.enumerate_cliques(H):
        yield tuple(sorted(pool[i] for i in c))


def detect_dangerous_blowup(G: Graph, f, delta: int, *, cap: int = DETECT_CAP) -> list[CycleBlowupWitness]:
    """Dangerous delta-based 5-cycle blowups of G.

    V1 = {v} and V4 = {u} range over all suitable vertices, V0 and V2 over
    all cliques allowed by the degree conditions, and V3 over maximal cliques
    of the common neighbourhood of V2 ∪ {u} (the danger sum only grows with V3).
    """
    f = [Fraction(x) for x in f]
    if len(f) != G.n:
        raise InvalidInput("demand length does not match the graph")
    found: set[tuple] = set()
    seen = 0
    low = [x for x in range(G.n) if G.degree(x) == delta]
    high = [x for x in range(G.n) if G.degree(x) >= delta + 1]
    for v in low:
        for u in high:
            if u == v:
                continue
            pool0 = [x for x in low if x not in (u, v)
                     and G.adjacent(x, v) and G.adjacent(x, u)]
            for V0 in _cliques_within(G, pool0):
                used = set(V0) | {u, v}
                pool2 = [x for x in G.neighbors(v) if x in high and x not in used]
                for V2 in _cliques_within(G, pool2, len(V0)):
                    common = set(G.neighbors(u))
                    for x in V2:
                        common &= G.neighbors(x)
                    common -= used | set(V2)
                    for V3 in _maximal_cliques_within(G, common):
                        seen += 1
                        if seen > cap:
                            raise SizeCapExceeded(f"more than {cap} candidate blowups")
                        w = CycleBlowupWitness((V0, (v,), V2, V3, (u,)))
                        if danger_sum(w, f) > 1 and not blowup_definition_problems(w, G, delta):
                            found.add(w.parts)
    return [CycleBlowupWitness(p) for p in sorted(found)]


@dataclass(frozen=True)
class EssentialRestriction:
    V0: tuple[int, ...]
    v: int
    u: int
    u_prime: int
    X: tuple[int, ...]


def essential_restrictions(witness: CycleBlowupWitness, G: Graph) -> list[EssentialRestriction]:
    """One restriction per choice of u' in V2 missing u; X uses degrees in G."""
    V0, V1, V2, V3, V4 = witness.parts
    (v,), (u,) = V1, V4
    W = V2 + V3 + V4
    X = tuple(sorted(w for w in W if G.degree(w) == len(W) - 1))
    return [EssentialRestriction(V0, v, u, up, X) for up in V2 if not G.adjacent(up, u)]


def classify_turtle(witness: CycleBlowupWitness, G: Graph) -> str:
    """'turtle', 'skew-turtle' or 'neither' for a blowup in a graph of minimum degree 2."""
    if len(witness.parts) != 5:
        raise InvalidInput("needs a five-part witness")
    if G.min_degree() != 2:
        raise HypothesisViolated("classification needs minimum degree 2")
    restrictions = essential_restrictions(witness, G)
    if not restrictions:
        raise HypothesisViolated("the blowup has no essential restriction")
    outer = set(witness.parts[0] + witness.parts[1])
    labels = []
    for r in restrictions:
        if len(r.X) != 2:
            raise HypothesisViolated(f"|X| = {len(r.X)}, expected 2")
        du, dup = G.degree(r.u), G.degree(r.u_prime)
        if du == dup == 3:
            labels.append("skew-turtle")
        elif du == dup == 4 and all(
                any(G.degree(y) == 2 and y not in outer for y in G.neighbors(z))
                for z in (r.u, r.u_prime)):
            labels.append("turtle")
        else:
            labels.append("neither")
    for name in ("turtle", "skew-turtle"):
        if name in labels:
            return name
    return "neither"


# explicit families -------------------------------------------------------------

def _inverse_degree_sum(G: Graph, eps: Fraction) -> Fraction:
    return sum((Fraction(1) / (d + eps) for d in G.degrees()), Fraction(0))


def proposition_blowup(delta: int, which: str) -> tuple[Graph, Fraction, bool]:
    """Blown-up C5 or C7 together with a rational eps and the exact check of its sum."""
    G = proposition_graph(delta, which)
    if which == "five":
        eps = Fraction(1, 4) + Fraction(1, 4 * (delta + 1))
        return G, eps, _inverse_degree_sum(G, eps) > 2
    eps = Fraction(1, 2)
    while not (3 * eps < (2 + eps) / (2 * delta - 2 + eps) and _inverse_degree_sum(G, eps) > 3):
        eps /= 2
        if eps < Fraction(1, 2**40):
            return G, eps, False
    return G, eps, True
