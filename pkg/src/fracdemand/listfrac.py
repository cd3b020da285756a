"""Fractional and discrete list coloring.

Fractional lists are IntervalSets. Most constructions work on *atoms*: the
pieces of [0, 1) on which the set of vertices whose list contains the point is
constant.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import HypothesisViolated, InvalidInput, SizeCapExceeded
from .fracsolve import (FractionalColoring, SetColoring, check_fractional_coloring,
                        check_set_coloring, is_fcolorable)
from .graph import Graph
from .intervals import IntervalSet, union_all
from . import setsys


@dataclass(frozen=True)
class ListAssignment:
    lists: tuple[IntervalSet, ...]

    def __getitem__(self, v):
        return self.lists[v]

    def __len__(self):
        return len(self.lists)

    def uniform_measure(self) -> Fraction | None:
        ms = {s.measure for s in self.lists}
        return ms.pop() if len(ms) == 1 else None


@dataclass(frozen=True)
class DiscreteListAssignment:
    N: int
    lists: tuple[frozenset, ...]

    def __post_init__(self):
        lists = tuple(frozenset(s) for s in self.lists)
        if any(len(s) != self.N for s in lists):
            raise InvalidInput(f"every list must have exactly {self.N} colors")
        object.__setattr__(self, "lists", lists)

    def universe(self) -> list:
        return sorted(set().union(*self.lists)) if self.lists else []

    def to_dict(self) -> dict:
        return {"N": self.N, "lists": [sorted(s) for s in self.lists]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DiscreteListAssignment":
        try:
            return cls(int(d["N"]), tuple(frozenset(s) for s in d["lists"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed list file: {exc}") from None


@dataclass(frozen=True)
class Atom:
    colors: tuple
    signature: tuple[int, ...]
    size: int


@dataclass(frozen=True)
class AtomPartition:
    atoms: tuple[Atom, ...]
    groups: tuple[tuple[int, ...], ...] = ()


def _as_lists(L) -> tuple[IntervalSet, ...]:
    return L.lists if isinstance(L, ListAssignment) else tuple(L)


def interval_atoms(lists: Sequence[IntervalSet]) -> dict[int, IntervalSet]:
    """Map signature bitmask -> the set of points covered by exactly those lists."""
    points = sorted({Fraction(0), Fraction(1)} | {x for s in lists for x in s.endpoints()})
    acc: dict[int, list] = {}
    for a, b in zip(points, points[1:]):
        mid = (a + b) / 2
        sig = 0
        for v, s in enumerate(lists):
            if any(lo <= mid < hi for lo, hi in s.pieces):
                sig |= 1 << v
        if sig:
            acc.setdefault(sig, []).append((a, b))
    return {sig: IntervalSet(tuple(p)) for sig, p in acc.items()}


# partial colorings ----------------------------------------------------------------

def residual_lists(G: Graph, phi: Mapping[int, IntervalSet]) -> dict[int, IntervalSet]:
    """L(v) = [0, 1) minus the colors of v's colored neighbours, for uncolored v."""
    for u, v in G.edges:
        if u in phi and v in phi and not phi[u].disjoint(phi[v]):
            raise InvalidInput(f"partial coloring is improper on edge {u}-{v}")
    out = {}
    for v in range(G.n):
        if v in phi:
            continue
        seen = union_all(phi[u] for u in G.neighbors(v) if u in phi)
        out[v] = seen.complement()
    return out


def hall_check(H: Graph, g: Sequence, L) -> tuple[int, ...] | None:
    """None when every S has sum g <= measure of the union of its lists.

    Otherwise a violating S of minimum size.
    """
    lists = _as_lists(L)
    n = H.n
    if n > 20:
        raise SizeCapExceeded("Hall check is limited to 20 vertices")
    g = [Fraction(x) for x in g]
    atoms = [(sig, s.measure) for sig, s in interval_atoms(lists).items()]
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            m = setsys.to_mask(S)
            cover = sum((mu for sig, mu in atoms if sig & m), Fraction(0))
            if sum(g[v] for v in S) > cover:
                return S
    return None


def _max_flow(cap: list[dict[int, Fraction]], s: int, t: int) -> list[dict[int, Fraction]]:
    """Edmonds-Karp on exact rationals; returns the flow on each arc."""
    n = len(cap)
    flow = [dict.fromkeys(c, Fraction(0)) for c in cap]
    for u in range(n):
        for v in cap[u]:
            flow[v].setdefault(u, Fraction(0))
            cap[v].setdefault(u, Fraction(0))
    while True:
        parent = [-1] * n
        parent[s] = s
        q = deque([s])
        while q and parent[t] < 0:
            u = q.popleft()
            for v in cap[u]:
                if parent[v] < 0 and cap[u][v] - flow[u][v] > 0:
                    parent[v] = u
                    q.append(v)
        if parent[t] < 0:
            return flow
        push = None
        v = t
        while v != s:
            u = parent[v]
            r = cap[u][v] - flow[u][v]
            push = r if push is None else min(push, r)
            v = u
        v = t
        while v != s:
            u = parent[v]
            flow[u][v] += push
            flow[v][u] -= push
            v = u


def hall_color(H: Graph, g: Sequence, L) -> FractionalColoring:
    """Pairwise disjoint phi(v) inside L(v) with measure g(v).

    Exact max flow from vertices (capacity g) to atoms (capacity measure);
    each atom is then cut left to right among the vertices routed to it.
    """
    lists = _as_lists(L)
    n = H.n
    g = [Fraction(x) for x in g]
    atoms = sorted(interval_atoms(lists).items())
    src, sink = n + len(atoms), n + len(atoms) + 1
    cap: list[dict[int, Fraction]] = [dict() for _ in range(sink + 1)]
    big = sum(g, Fraction(1))
    for v in range(n):
        if g[v] > 0:
            cap[src][v] = g[v]
    for i, (sig, piece) in enumerate(atoms):
        cap[n + i][sink] = piece.measure
        for v in setsys.bits(sig):
            cap[v][n + i] = big
    flow = _max_flow(cap, src, sink)
    if sum(flow[src].values()) < sum(g):
        raise HypothesisViolated("Hall condition fails: no (g, L)-coloring of this clique")
    out = [[] for _ in range(n)]
    for i, (sig, piece) in enumerate(atoms):
        pos = Fraction(0)
        for v in setsys.bits(sig):
            amount = flow[v].get(n + i, Fraction(0))
            if amount > 0:
                out[v].extend(piece.slice_measure(pos, pos + amount).pieces)
                pos += amount
    return FractionalColoring(tuple(IntervalSet(tuple(p)) for p in out))


def _matching_of(H: Graph) -> list[tuple[int, int]]:
    missing = [(u, v) for u, v in itertools.combinations(range(H.n), 2) if not H.adjacent(u, v)]
    touched = [x for e in missing for x in e]
    if len(touched) != len(set(touched)):
        raise InvalidInput("graph is not a complete graph minus a matching")
    return missing


def clique_minus_matching_conditions(H: Graph, g: Sequence, L) -> list[str]:
    """Names of the failing conditions among (i), (ii), (iii)."""
    lists = _as_lists(L)
    g = [Fraction(x) for x in g]
    M = _matching_of(H)
    matched = {x for e in M for x in e}
    free = [v for v in range(H.n) if v not in matched]
    pair_max = {e: max(g[e[0]], g[e[1]]) for e in M}
    failed = []
    need_free = sum((g[u] for u in free), Fraction(0)) + sum(pair_max.values(), Fraction(0))
    if any(lists[v].measure < need_free for v in free):
        failed.append("(i)")
    for v in matched:
        need = g[v] + sum((m for e, m in pair_max.items() if v not in e), Fraction(0))
        if lists[v].measure < need:
            failed.append("(ii)")
            break
    total = sum(g, Fraction(0))
    if any(lists[u].measure + lists[v].measure < total for u, v in M):
        failed.append("(iii)")
    return failed


def color_clique_minus_matching(H: Graph, g: Sequence, L) -> FractionalColoring:
    """(g, L)-coloring of K_n minus a matching, following the pairing reduction.

    While some non-adjacent pair x, y has overlapping lists and positive demand,
    the leftmost common piece of measure up to min(g) is given to both and
    removed from every list. What is left is finished by hall_color.
    """
    lists = list(_as_lists(L))
    g = [Fraction(x) for x in g]
    failed = clique_minus_matching_conditions(H, g, lists)
    if failed:
        raise HypothesisViolated(f"condition {' and '.join(failed)} fails")
    shared = [IntervalSet() for _ in range(H.n)]
    for x, y in _matching_of(H):
        if g[x] > g[y]:
            x, y = y, x
        common = lists[x] & lists[y]
        if g[x] == 0 or not common:
            continue
        C = common.prefix(min(g[x], common.measure))
        shared[x] = shared[x] | C
        shared[y] = shared[y] | C
        g[x] -= C.measure
        g[y] -= C.measure
        lists = [s - C for s in lists]
    live = [v for v in range(H.n) if g[v] > 0]
    sub = H.induced(live)
    sub_lists = [lists[v] for v in live]
    sub_g = [g[v] for v in live]
    if hall_check(sub, sub_g, sub_lists) is not None:
        raise HypothesisViolated("internal: Hall fails after the pairing reduction")
    rest = hall_color(sub, sub_g, sub_lists)
    out = list(shared)
    for i, v in enumerate(live):
        out[v] = out[v] | rest[i]
    return FractionalColoring(tuple(out))


def list_transfer_color(G: Graph, f: Sequence, g: Sequence, L) -> FractionalColoring:
    """Cell-by-cell (g, L)-coloring from f-colorings of the induced subgraphs.

    Each atom C_S is a copy of [0, 1) scaled by its measure; an f-coloring of
    G[S] is embedded into it.
    """
    lists = _as_lists(L)
    f = [Fraction(x) for x in f]
    g = [Fraction(x) for x in g]
    for v in range(G.n):
        if g[v] > f[v] * lists[v].measure:
            raise HypothesisViolated(f"g({v}) exceeds f({v}) times the list measure")
    out = [[] for _ in range(G.n)]
    for sig, cell in sorted(interval_atoms(lists).items()):
        S = list(setsys.bits(sig))
        verdict = is_fcolorable(G.induced(S), [f[v] for v in S])
        if not verdict.decision:
            raise HypothesisViolated(f"G[{S}] has no f-coloring")
        for i, v in enumerate(S):
            out[v].extend(cell.embed(verdict.primal[i]).pieces)
    return FractionalColoring(tuple(IntervalSet(tuple(p)) for p in out))


# ATV style partitions ----------------------------------------------------------------

def lcm_upto(k: int) -> int:
    return math.lcm(*range(1, k + 1)) if k >= 1 else 1


def atv_hypotheses(n_list: Sequence[int], M: int, N: int, k: int) -> list[str]:
    problems = []
    if N < 1 or M < 0:
        problems.append("N must be positive and M nonnegative")
        return problems
    if any(x < 1 or x > k for x in n_list):
        problems.append("every part size must lie in [1, k]")
    if sum(n_list) != M:
        problems.append("sizes must sum to M")
    if M % N:
        problems.append("N must divide M")
        return problems
    T = M // N
    L = lcm_upto(k)
    if T % L:
        problems.append("M/N must be divisible by every integer up to k")
    if k * L > T:
        problems.append("k * lcm(2..k) must not exceed M/N")
    return problems


def atv_partition_integers(n_list: Sequence[int], M: int, N: int, k: int) -> list[list[int]]:
    """Split indices of n_list into N parts with equal sums M/N.

    Items of size s are grouped into blocks of lcm/s items (block sum = lcm).
    Leftovers total less than k*lcm <= M/N and are a multiple of lcm, so they
    fit in the first part; full blocks fill the rest exactly.
    """
    problems = atv_hypotheses(n_list, M, N, k)
    if problems:
        raise HypothesisViolated("; ".join(problems))
    T = M // N
    L = lcm_upto(k)
    by_size: dict[int, list[int]] = {}
    for i, s in sorted(enumerate(n_list), key=lambda p: (-p[1], p[0])):
        by_size.setdefault(s, []).append(i)
    blocks, leftover = [], []
    for s, idx in by_size.items():
        per = L // s
        full = len(idx) // per
        blocks.extend(idx[j * per:(j + 1) * per] for j in range(full))
        leftover.extend(idx[full * per:])
    parts = [list(leftover)] + [[] for _ in range(N - 1)]
    sums = [sum(n_list[i] for i in leftover)] + [0] * (N - 1)
    j = 0
    for b in blocks:
        while sums[j] == T:
            j += 1
        parts[j].extend(b)
        sums[j] += L
    if any(s != T for s in sums):
        raise HypothesisViolated("internal: partition sums are unequal")
    return [sorted(p) for p in parts]


def theorem_chunk_bound(n: int) -> int:
    """floor((n+1)^((n+1)/2))."""
    return math.isqrt((n + 1) ** (n + 1))


def atv_partition_hypergraph(lists: DiscreteListAssignment, chunk: int | None = None) -> AtomPartition:
    """Colors grouped by the set of lists containing them, cut into chunks."""
    n = len(lists.lists)
    chunk = theorem_chunk_bound(n) if chunk is None else chunk
    if chunk < 1:
        raise InvalidInput("chunk bound must be positive")
    by_sig: dict[tuple, list] = {}
    for c in lists.universe():
        sig = tuple(v for v, s in enumerate(lists.lists) if c in s)
        by_sig.setdefault(sig, []).append(c)
    atoms = []
    for sig in sorted(by_sig):
        colors = by_sig[sig]
        for i in range(0, len(colors), chunk):
            piece = tuple(colors[i:i + chunk])
            atoms.append(Atom(piece, sig, len(piece)))
    return AtomPartition(tuple(atoms))


def smallest_admissible_M(N: int, chunk: int) -> int:
    """Least M with N | M whose quotient meets the integer partition hypotheses."""
    L = lcm_upto(chunk)
    T = L
    while chunk * L > T:
        T += L
    return N * T


def check_fold_coloring(G: Graph, f: Sequence, lists: DiscreteListAssignment,
                        psi: Sequence) -> list[str]:
    """Independent f-fold L-coloring checker."""
    problems = []
    if len(psi) != G.n:
        return ["wrong number of vertices"]
    for v in range(G.n):
        if not set(psi[v]) <= lists.lists[v]:
            problems.append(f"vertex {v} uses colors outside its list")
        if len(set(psi[v])) < lists.N * Fraction(f[v]):
            problems.append(f"vertex {v} has too few colors")
    for u, v in G.edges:
        if set(psi[u]) & set(psi[v]):
            problems.append(f"edge {u}-{v} shares colors")
    return problems


@dataclass(frozen=True)
class UpliftResult:
    coloring: tuple[frozenset, ...]
    partition: AtomPartition
    route: str  # "integer-partition" or "balanced"


def _balance_groups(atoms: Sequence[Atom], n: int, N: int, psi: SetColoring,
                    need: Sequence[int]) -> list[int] | None:
    """Assign each chunk to a slot 1..N so every vertex sees enough of its slots.

    Solved as a 0/1 program: chunk i goes to exactly one slot; vertex v needs
    at least need[v] colors among chunks in its list placed on slots of psi(v),
    and ideally M/N colors on each slot. The exact-balance version is tried
    first, then the aggregate version.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    A = len(atoms)
    nv = A * N
    idx = lambda i, j: i * N + j
    rows, lo, hi = [], [], []
    for i in range(A):
        r = np.zeros(nv)
        r[[idx(i, j) for j in range(N)]] = 1
        rows.append(r); lo.append(1); hi.append(1)
    per_slot = [r.copy() for r in rows]
    per_lo, per_hi = list(lo), list(hi)
    for v in range(n):
        mine = [i for i, a in enumerate(atoms) if v in a.signature]
        r = np.zeros(nv)
        for i in mine:
            for j in psi.assignment[v]:
                r[idx(i, j - 1)] = atoms[i].size
        rows.append(r); lo.append(need[v]); hi.append(np.inf)
        total = sum(atoms[i].size for i in mine)
        if total % N == 0:
            for j in range(N):
                r = np.zeros(nv)
                for i in mine:
                    r[idx(i, j)] = atoms[i].size
                per_slot.append(r); per_lo.append(total // N); per_hi.append(total // N)
    for cons in ((per_slot, per_lo, per_hi), (rows, lo, hi)):
        res = milp(c=np.zeros(nv), constraints=LinearConstraint(np.array(cons[0]), cons[1], cons[2]),
                   integrality=np.ones(nv), bounds=Bounds(0, 1))
        if res.success and res.x is not None:
            x = np.rint(res.x).astype(int)
            return [int(np.argmax(x[i * N:(i + 1) * N])) + 1 for i in range(A)]
    return None


def multiplicative_uplift(G: Graph, f: Sequence, psi: SetColoring,
                          lists: DiscreteListAssignment, chunk: int | None = None) -> UpliftResult:
    """Turn an (f, N)-coloring into an f-fold L-coloring for M-lists.

    Colors are grouped into N slots; vertex v takes the colors of its list that
    lie in the slots psi(v). Slots are found by the integer partition lemma when
    every chunk lies in every list, otherwise by the balancing program. The
    result is always re-checked.
    """
    f = [Fraction(x) for x in f]
    N, M = psi.N, lists.N
    if len(lists.lists) != G.n:
        raise InvalidInput("one list per vertex required")
    if not check_set_coloring(G, f, psi):
        raise InvalidInput("psi is not an (f, N)-coloring")
    if M % N:
        raise HypothesisViolated("N must divide M")
    chunk = theorem_chunk_bound(G.n) if chunk is None else chunk
    part = atv_partition_hypergraph(lists, chunk)
    need = [math.ceil(M * x) for x in f]
    everyone = tuple(range(G.n))
    slot_of: list[int] | None = None
    route = "balanced"
    if all(a.signature == everyone for a in part.atoms) and not atv_hypotheses(
            [a.size for a in part.atoms], M, N, chunk):
        groups = atv_partition_integers([a.size for a in part.atoms], M, N, chunk)
        slot_of = [0] * len(part.atoms)
        for j, grp in enumerate(groups):
            for i in grp:
                slot_of[i] = j + 1
        route = "integer-partition"
    else:
        slot_of = _balance_groups(part.atoms, G.n, N, psi, need)
    if slot_of is None:
        raise HypothesisViolated("balance step found no slot assignment")
    groups = tuple(tuple(i for i in range(len(part.atoms)) if slot_of[i] == j + 1) for j in range(N))
    coloring = []
    for v in range(G.n):
        mine = set()
        for i, a in enumerate(part.atoms):
            if v in a.signature and slot_of[i] in psi.assignment[v]:
                mine.update(a.colors)
        coloring.append(frozenset(mine))
    problems = check_fold_coloring(G, f, lists, coloring)
    if problems:
        raise HypothesisViolated("uplift output rejected: " + "; ".join(problems))
    return UpliftResult(tuple(coloring), AtomPartition(part.atoms, groups), route)


# brute force list colorability ----------------------------------------------------------

def fold_coloring_search(G: Graph, need: Sequence[int], lists: Sequence[frozenset]) -> list[frozenset] | None:
    """Exact search for subsets of size need[v] from each list, disjoint on edges."""
    n = G.n
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    chosen: dict[int, frozenset] = {}

    def rec(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        blocked = set()
        for u in G.neighbors(v):
            if u in chosen:
                blocked |= chosen[u]
        avail = sorted(set(lists[v]) - blocked)
        if len(avail) < need[v]:
            return False
        for pick in itertools.combinations(avail, need[v]):
            chosen[v] = frozenset(pick)
            if rec(k + 1):
                return True
        del chosen[v]
        return False

    if not rec(0):
        return None
    return [chosen[v] for v in range(n)]


def canonical_list_assignments(n: int, N: int, universe: int):
    """List assignments up to renaming colors: new colors are introduced in order."""
    def rec(v, used, acc):
        if v == n:
            yield tuple(acc)
            return
        for t in range(max(0, N - (universe - used)), min(N, used) + 1):
            fresh = tuple(range(used, used + N - t))
            for old in itertools.combinations(range(used), t):
                acc.append(frozenset(old + fresh))
                yield from rec(v + 1, used + N - t, acc)
                acc.pop()
    yield from rec(0, 0, [])


def find_bad_list_assignment(G: Graph, f: Sequence, N: int) -> tuple[frozenset, ...] | None:
    if G.n * N > 12:
        raise SizeCapExceeded("brute-force list coloring needs n*N <= 12")
    need = [math.ceil(N * Fraction(x)) for x in f]
    for lists in canonical_list_assignments(G.n, N, G.n * N):
        if fold_coloring_search(G, need, lists) is None:
            return lists
    return None


def list_colorable_bruteforce(G: Graph, f: Sequence, N: int) -> bool:
    """Whether every N-list assignment admits an f-fold coloring."""
    return find_bad_list_assignment(G, f, N) is None


def random_list_assignment(n: int, M: int, universe: int, rng) -> DiscreteListAssignment:
    if universe < M:
        raise InvalidInput("universe smaller than list size")
    return DiscreteListAssignment(M, tuple(frozenset(rng.sample(range(universe), M)) for _ in range(n)))


def random_interval_lists(n: int, c: Fraction, rng, pieces: int = 3, denom: int = 24) -> ListAssignment:
    """c-uniform lists made of a few random rational pieces (c*denom must be integral)."""
    c = Fraction(c)
    total = c * denom
    if total.denominator != 1:
        raise InvalidInput("c * denom must be an integer")
    out = []
    for _ in range(n):
        cells = sorted(rng.sample(range(denom), int(total)))
        out.append(IntervalSet(tuple((Fraction(x, denom), Fraction(x + 1, denom)) for x in cells)))
    return ListAssignment(tuple(out))


__all__ = [
    "ListAssignment", "DiscreteListAssignment", "Atom", "AtomPartition", "residual_lists",
    "hall_check", "hall_color", "color_clique_minus_matching", "clique_minus_matching_conditions",
    "list_transfer_color", "atv_partition_integers", "atv_partition_hypergraph",
    "multiplicative_uplift", "list_colorable_bruteforce", "find_bad_list_assignment",
    "check_fold_coloring", "smallest_admissible_M", "theorem_chunk_bound",
    "check_fractional_coloring", "random_list_assignment", "random_interval_lists",
]
