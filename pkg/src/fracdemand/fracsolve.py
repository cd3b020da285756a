"""Deciding f-colorability with primal and dual certificates.

A graph G has an f-coloring iff the covering LP over independent sets has
optimum at most 1. A "yes" comes with interval sets laid out from the LP
columns; a "no" comes with integer vertex weights w for which the weighted
demand sum beats every independent set.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .demand import DemandFn, common_denominator, frac_str, parse_frac
from .errors import CertificateError, InvalidInput, SizeCapExceeded
from .graph import BlowupSpec, Graph, blowup, graph_from_dict, graph_to_dict
from .intervals import IntervalSet, union_all
from .lp import CoverLP, solve_cover_lp
from . import setsys


@dataclass(frozen=True)
class FractionalColoring:
    assignment: tuple[IntervalSet, ...]

    def __getitem__(self, v):
        return self.assignment[v]

    def __len__(self):
        return len(self.assignment)


@dataclass(frozen=True)
class SetColoring:
    N: int
    assignment: tuple[frozenset[int], ...]


LPSolution = CoverLP


@dataclass(frozen=True)
class ColorabilityVerdict:
    decision: bool
    primal: FractionalColoring | None
    dual: tuple[int, ...] | None
    lp: LPSolution
    transcript_hash: str

    @property
    def objective(self) -> Fraction:
        return self.lp.objective


# checkers --------------------------------------------------------------------

def check_fractional_coloring(G: Graph, f, phi: FractionalColoring, lists=None) -> list[str]:
    """Return a list of problems; empty means phi is a valid f-coloring."""
    problems = []
    if len(phi) != G.n:
        return [f"coloring has {len(phi)} entries for {G.n} vertices"]
    for v in range(G.n):
        if phi[v].measure < Fraction(f[v]):
            problems.append(f"vertex {v} gets {phi[v].measure} < {f[v]}")
        if lists is not None and not phi[v].issubset(lists[v]):
            problems.append(f"vertex {v} leaves its list")
    for u, v in G.edges:
        if not phi[u].disjoint(phi[v]):
            problems.append(f"edge {u}-{v} shares color")
    return problems


def is_valid_fractional_coloring(G: Graph, f, phi: FractionalColoring, lists=None) -> bool:
    return not check_fractional_coloring(G, f, phi, lists)


def check_set_coloring(G: Graph, f, psi: SetColoring) -> bool:
    if len(psi.assignment) != G.n:
        return False
    for v, s in enumerate(psi.assignment):
        if not all(1 <= c <= psi.N for c in s):
            return False
        if len(s) < psi.N * Fraction(f[v]):
            return False
    return all(not (psi.assignment[u] & psi.assignment[v]) for u, v in G.edges)


def dual_separates(G: Graph, f, w: Sequence) -> bool:
    """True iff sum w*f strictly exceeds the maximum weight of an independent set."""
    if len(w) != G.n or any(Fraction(x) < 0 for x in w):
        return False
    lhs = sum((Fraction(a) * Fraction(b) for a, b in zip(w, f)), Fraction(0))
    _, best = setsys.max_weight_independent_set(G, list(w))
    return lhs > best


# LP driven decisions -----------------------------------------------------------

def extract_fractional_coloring(sol: LPSolution, f) -> FractionalColoring:
    """Lay the columns out as consecutive intervals in lexicographic order."""
    n = len(f)
    if sol.objective > 1:
        raise InvalidInput("solution uses more than one unit of color")
    cover = [Fraction(0)] * n
    pieces: list[list] = [[] for _ in range(n)]
    start = Fraction(0)
    for members, x in sorted(sol.columns):
        if x < 0:
            raise InvalidInput("negative column weight")
        if x == 0:
            continue
        for v in members:
            pieces[v].append((start, start + x))
            cover[v] += x
        start += x
    for v in range(n):
        if cover[v] < Fraction(f[v]):
            raise InvalidInput(f"solution does not cover vertex {v}")
    return FractionalColoring(tuple(IntervalSet(tuple(p)) for p in pieces))


def _integer_dual(y: Sequence[Fraction]) -> tuple[int, ...]:
    scale = math.lcm(*(Fraction(v).denominator for v in y)) if y else 1
    ints = [int(Fraction(v) * scale) for v in y]
    g = math.gcd(*ints) if any(ints) else 1
    return tuple(i // g for i in ints)


def _transcript(G: Graph, f, decision: bool, primal, dual) -> str:
    payload = {
        "graph": graph_to_dict(G),
        "demand": [frac_str(x) for x in f],
        "decision": "yes" if decision else "no",
        "primal": None if primal is None else [s.to_json() for s in primal.assignment],
        "dual": None if dual is None else list(dual),
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def is_fcolorable(G: Graph, f, *, cap: int | None = None) -> ColorabilityVerdict:
    f = tuple(Fraction(x) for x in f)
    if len(f) != G.n:
        raise InvalidInput("demand length does not match the graph")
    sol = solve_cover_lp(G, f, cap=cap)
    if sol.objective <= 1:
        phi = extract_fractional_coloring(sol, f)
        if not is_valid_fractional_coloring(G, f, phi):
            raise CertificateError("primal certificate failed re-verification")
        return ColorabilityVerdict(True, phi, None, sol, _transcript(G, f, True, phi, None))
    w = _integer_dual(sol.dual)
    if not dual_separates(G, f, w):
        raise CertificateError("dual certificate failed re-verification")
    return ColorabilityVerdict(False, None, w, sol, _transcript(G, f, False, None, w))


def chi_f(G: Graph, *, cap: int | None = None) -> Fraction:
    if G.n == 0:
        raise InvalidInput("fractional chromatic number of the empty graph is undefined")
    return solve_cover_lp(G, [1] * G.n, cap=cap).objective


def to_set_coloring(phi: FractionalColoring, f) -> SetColoring:
    N = math.lcm(common_denominator(f), *(s.denominator() for s in phi.assignment))
    out = []
    for s in phi.assignment:
        slots = set()
        for a, b in s.pieces:
            slots.update(range(int(a * N) + 1, int(b * N) + 1))
        out.append(frozenset(slots))
    return SetColoring(N, tuple(out))


def verdict_set_coloring(verdict: ColorabilityVerdict, f) -> SetColoring:
    if not verdict.decision:
        raise InvalidInput("no set coloring for a refused instance")
    return to_set_coloring(verdict.primal, f)


def dual_independent_set(G: Graph, f, w: Sequence) -> tuple[int, ...]:
    """An independent set at least as heavy as sum w*f (exists when G is f-colorable)."""
    if not is_fcolorable(G, f).decision:
        raise InvalidInput("instance is not f-colorable")
    best, value = setsys.max_weight_independent_set(G, list(w))
    target = sum((Fraction(a) * Fraction(b) for a, b in zip(w, f)), Fraction(0))
    if value < target:
        raise CertificateError("maximum-weight independent set below sum w*f")
    return best


# discrete oracles ------------------------------------------------------------------

def _twin_classes(H: Graph) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for v in range(H.n):
        groups.setdefault(H.mask(v) | (1 << v), []).append(v)
    return sorted(groups.values())


def chromatic_at_most(H: Graph, k: int, *, node_cap: int | None = None) -> bool:
    """Exact decision of chi(H) <= k.

    Vertices with equal closed neighbourhoods are interchangeable, so the search
    works on the quotient by twin classes with a residual count per class. Each
    step removes one color class: a maximal independent set of the quotient
    (restricted to classes still present) that contains the first such class.
    """
    if H.n == 0:
        return True
    if k <= 0:
        return False
    node_cap = setsys.default_cap() if node_cap is None else node_cap
    classes = _twin_classes(H)
    m = len(classes)
    where = {v: i for i, c in enumerate(classes) for v in c}
    qadj = [0] * m
    for u, v in H.edges:
        a, b = where[u], where[v]
        if a != b:
            qadj[a] |= 1 << b
            qadj[b] |= 1 << a
    Q = Graph(m, tuple((a, b) for a in range(m) for b in setsys.bits(qadj[a]) if a < b))
    cliques = [setsys.to_mask(K) for K in setsys.enumerate_cliques(Q)]
    full = (1 << m) - 1
    anti = [full & ~qadj[a] & ~(1 << a) for a in range(m)]
    failed: set = set()
    nodes = [0]

    def classes_through(first: int, support: int):
        # maximal independent sets of Q[support] that contain `first`
        cand = support & anti[first]
        for s in setsys._bron_kerbosch(anti, cand, setsys.default_cap()):
            yield s | (1 << first)

    def rec(r: tuple[int, ...], k: int) -> bool:
        support = setsys.to_mask(i for i in range(m) if r[i])
        if support == 0:
            return True
        if k == 0:
            return False
        key = (r, k)
        if key in failed:
            return False
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise SizeCapExceeded("coloring search exceeded its node budget")
        if any(sum(r[i] for i in setsys.bits(c)) > k for c in cliques):
            failed.add(key)
            return False
        alpha = setsys.max_weight_independent_set_int(Q, [1 if r[i] else 0 for i in range(m)])[1]
        if sum(r) > alpha * k:
            failed.add(key)
            return False
        first = (support & -support).bit_length() - 1
        options = sorted(classes_through(first, support),
                         key=lambda s: (-sum(r[i] for i in setsys.bits(s)), s))
        for s in options:
            nr = tuple(r[i] - 1 if s >> i & 1 else r[i] for i in range(m))
            if rec(nr, k - 1):
                return True
        failed.add(key)
        return False

    return rec(tuple(len(c) for c in classes), k)


def blowup_sizes(f, N: int) -> tuple[int, ...]:
    sizes = []
    for x in f:
        s = Fraction(x) * N
        if s.denominator != 1:
            raise InvalidInput(f"{N} is not a common denominator of the demand")
        sizes.append(int(s))
    return tuple(sizes)


def blowup_chromatic_oracle(G: Graph, f, N: int, *, node_cap: int | None = None) -> bool:
    """chi of the graph with v replaced by a clique of N*f(v) vertices, compared with N."""
    H = blowup(BlowupSpec(G, blowup_sizes(f, N)))
    return chromatic_at_most(H, N, node_cap=node_cap)


def set_coloring_search(G: Graph, f, N: int, *, node_cap: int | None = None) -> SetColoring | None:
    """Brute-force search for an (f, N)-coloring.

    An (f, N)-coloring is the same as a multiset of N independent sets (one per
    color) covering each v at least N*f(v) times. Candidate sets are the maximal
    independent sets found by scanning all 2^n subsets; the search assigns a
    multiplicity to each in turn.
    """
    n = G.n
    need0 = list(blowup_sizes(f, N))
    if n > 16:
        raise SizeCapExceeded("brute-force set coloring is limited to 16 vertices")
    node_cap = setsys.default_cap() if node_cap is None else node_cap
    indep = [m for m in range(1 << n) if all(G.mask(v) & m == 0 for v in setsys.bits(m))]
    indep_set = set(indep)
    maximal = [m for m in indep
               if not any((m | (1 << v)) in indep_set for v in range(n) if not m >> v & 1)]
    maximal.sort(key=lambda m: (-m.bit_count(), m))
    suffix = [0] * (len(maximal) + 1)
    for i in range(len(maximal) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | maximal[i]
    alpha_of = {}
    if n <= 10:
        for S in range(1, 1 << n):
            alpha_of[S] = max((m & S).bit_count() for m in maximal)
    failed: set = set()
    counts = [0] * len(maximal)
    nodes = [0]

    def feasible_bound(need, budget) -> bool:
        if any(x > budget for x in need):
            return False
        if alpha_of:
            for S, a in alpha_of.items():
                if sum(need[v] for v in setsys.bits(S)) > a * budget:
                    return False
        return True

    def rec(i, need, budget) -> bool:
        if all(x <= 0 for x in need):
            return True
        key = (i, need, budget)
        if key in failed:
            return False
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise SizeCapExceeded("set-coloring search exceeded its node budget")
        pos = tuple(max(x, 0) for x in need)
        open_mask = setsys.to_mask(v for v in range(n) if pos[v] > 0)
        if i == len(maximal) or open_mask & ~suffix[i] or not feasible_bound(pos, budget):
            failed.add(key)
            return False
        m = maximal[i]
        top = min(budget, max((pos[v] for v in setsys.bits(m)), default=0))
        for t in range(top, -1, -1):
            counts[i] = t
            nxt = tuple(need[v] - t if m >> v & 1 else need[v] for v in range(n))
            if rec(i + 1, nxt, budget - t):
                return True
        counts[i] = 0
        failed.add(key)
        return False

    if not rec(0, tuple(need0), N):
        return None
    assignment = [set() for _ in range(n)]
    color = 1
    for m, t in zip(maximal, counts):
        for _ in range(t):
            for v in setsys.bits(m):
                assignment[v].add(color)
            color += 1
    return SetColoring(N, tuple(frozenset(s) for s in assignment))


# sampling and clique bounds -------------------------------------------------------

def sample_greedy_independent_set(G: Graph, trials: int, seed: int = 0) -> dict[int, Fraction]:
    """Inclusion frequencies of v in {v : v precedes all its neighbours} under random orders.

    Independent uniform keys per vertex induce a uniform random ordering.
    """
    if trials < 1:
        raise InvalidInput("trials must be positive")
    rng = np.random.default_rng(seed)
    keys = rng.random((trials, G.n))
    freq = {}
    for v in range(G.n):
        nb = sorted(G.neighbors(v))
        if nb:
            hits = int(np.count_nonzero(keys[:, v] < keys[:, nb].min(axis=1)))
        else:
            hits = trials
        freq[v] = Fraction(hits, trials)
    return freq


def blowup_clique_bound(G: Graph, c, N: int) -> bool:
    """omega(blowup with sizes N/(c*omega(v))) <= N/c."""
    c = Fraction(c)
    f = [1 / (c * setsys.omega_local(G, v)) for v in range(G.n)]
    sizes = blowup_sizes(f, N)
    biggest = max((sum(sizes[v] for v in K) for K in setsys.enumerate_cliques(G)), default=0)
    return biggest <= Fraction(N) / c


# certificates ------------------------------------------------------------------------

def certificate_to_dict(G: Graph, f, verdict: ColorabilityVerdict) -> dict:
    return {
        "graph": graph_to_dict(G),
        "demand": [frac_str(x) for x in f],
        "decision": "yes" if verdict.decision else "no",
        "objective": frac_str(verdict.objective),
        "coloring": None if verdict.primal is None else [s.to_json() for s in verdict.primal.assignment],
        "dual": None if verdict.dual is None else list(verdict.dual),
        "transcript_hash": verdict.transcript_hash,
    }


def certificate_to_json(G: Graph, f, verdict: ColorabilityVerdict) -> str:
    return json.dumps(certificate_to_dict(G, f, verdict), sort_keys=True, indent=1) + "\n"


def verify_certificate(data: Mapping) -> bool:
    """Re-check a certificate without running the LP; raises on any defect."""
    try:
        G = graph_from_dict(data["graph"])
        f = tuple(parse_frac(x) for x in data["demand"])
        decision = data["decision"]
    except (KeyError, TypeError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from None
    if not isinstance(G, Graph):
        G = G.underlying
    DemandFn(f)
    if decision == "yes":
        phi = FractionalColoring(tuple(IntervalSet.from_json(s) for s in data["coloring"]))
        problems = check_fractional_coloring(G, f, phi)
        if problems:
            raise CertificateError("; ".join(problems))
        expected = _transcript(G, f, True, phi, None)
    elif decision == "no":
        w = tuple(int(x) for x in data["dual"])
        if not dual_separates(G, f, w):
            raise CertificateError("dual weights do not separate")
        expected = _transcript(G, f, False, None, w)
    else:
        raise CertificateError(f"unknown decision {decision!r}")
    if data.get("transcript_hash") != expected:
        raise CertificateError("transcript hash mismatch")
    return True


__all__ = [
    "FractionalColoring", "SetColoring", "LPSolution", "ColorabilityVerdict",
    "is_fcolorable", "chi_f", "extract_fractional_coloring", "to_set_coloring",
    "dual_independent_set", "blowup_chromatic_oracle", "set_coloring_search",
    "sample_greedy_independent_set", "blowup_clique_bound", "check_fractional_coloring",
    "check_set_coloring", "dual_separates", "verify_certificate", "union_all",
]
