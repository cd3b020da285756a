"""Simple graphs, multigraphs, derived graphs and family generators.

Vertices are the integers ``0..n-1``. Derived graphs (line, total, blowup)
remember where each vertex came from in ``origin`` and keep a reference to the
graph they were built from in ``source``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidInput


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    kind: str | None = field(default=None, compare=False)
    origin: tuple | None = field(default=None, compare=False, repr=False)
    source: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInput("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidInput(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"edge ({u},{v}) out of range")
            seen.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in nbrs))
        object.__setattr__(
            self, "_mask", tuple(sum(1 << u for u in s) for s in nbrs)
        )

    # basic queries -------------------------------------------------------
    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def mask(self, v: int) -> int:
        """Neighborhood of ``v`` as a bitmask."""
        return self._mask[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_independent(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return not any(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    def induced(self, vs: Iterable[int]) -> "Graph":
        """Induced subgraph; vertex ``i`` of the result is ``origin[i]`` here."""
        vs = sorted(set(vs))
        index = {v: i for i, v in enumerate(vs)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(vs), tuple(edges), kind="induced", origin=tuple(vs), source=self)

    def complement(self) -> "Graph":
        edges = [(u, v) for u, v in itertools.combinations(range(self.n), 2)
                 if not self.adjacent(u, v)]
        return Graph(self.n, tuple(edges))

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return False
        return True

    def has_triangle(self) -> bool:
        return any(self._adj[u] & self._adj[v] for u, v in self.edges)

    def as_multigraph(self) -> "Multigraph":
        return Multigraph(self, ())


@dataclass(frozen=True)
class Multigraph:
    """Underlying simple graph plus multiplicities; absent entries mean 1."""

    underlying: Graph
    mult: tuple[tuple[tuple[int, int], int], ...] = ()

    def __post_init__(self):
        table = {}
        for (u, v), m in self.mult:
            e = _norm_edge(u, v)
            if e not in self.underlying.edges:
                raise InvalidInput(f"multiplicity given for non-edge {e}")
            if int(m) != m or m < 1:
                raise InvalidInput(f"multiplicity of {e} must be a positive integer")
            table[e] = int(m)
        full = {e: table.get(e, 1) for e in self.underlying.edges}
        object.__setattr__(self, "mult", tuple(sorted((e, m) for e, m in full.items() if m > 1)))
        object.__setattr__(self, "_mu", full)

    @classmethod
    def from_multiplicities(cls, n: int, mu: Mapping[tuple[int, int], int]) -> "Multigraph":
        g = Graph(n, tuple(mu))
        return cls(g, tuple((_norm_edge(*e), m) for e, m in mu.items()))

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.underlying.edges

    def multiplicity(self, u: int, v: int) -> int:
        return self._mu.get(_norm_edge(u, v), 0)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.underlying.neighbors(v)

    def degree(self, v: int) -> int:
        return sum(self._mu[_norm_edge(v, u)] for u in self.underlying.neighbors(v))

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.n)]

    def edge_instances(self) -> list[tuple[int, int, int]]:
        """Every parallel copy as ``(u, v, i)`` in canonical sorted order."""
        return [(u, v, i) for (u, v) in self.edges for i in range(self._mu[(u, v)])]

    def is_simple(self) -> bool:
        return not self.mult


def as_multigraph(G: Graph | Multigraph) -> Multigraph:
    return G if isinstance(G, Multigraph) else G.as_multigraph()


# derived graphs ------------------------------------------------------------

def line_graph(G: Graph | Multigraph) -> Graph:
    """One vertex per edge instance; instances sharing an endpoint are adjacent."""
    M = as_multigraph(G)
    inst = M.edge_instances()
    at = [[] for _ in range(M.n)]
    for i, (u, v, _) in enumerate(inst):
        at[u].append(i)
        at[v].append(i)
    edges = set()
    for group in at:
        edges.update(itertools.combinations(group, 2))
    return Graph(len(inst), tuple(edges), kind="line", origin=tuple(inst), source=M)


def total_graph(G: Graph) -> Graph:
    """Vertices of G followed by its edges, with vertex/edge/incidence adjacency."""
    if isinstance(G, Multigraph):
        if not G.is_simple():
            raise InvalidInput("total graph is defined here for simple graphs only")
        G = G.underlying
    n = G.n
    m = len(G.edges)
    edges = set(G.edges)
    at = [[] for _ in range(n)]
    for i, (u, v) in enumerate(G.edges):
        edges.add((u, n + i))
        edges.add((v, n + i))
        at[u].append(n + i)
        at[v].append(n + i)
    for group in at:
        edges.update(itertools.combinations(group, 2))
    origin = tuple(("v", v) for v in range(n)) + tuple(("e", u, v) for u, v in G.edges)
    return Graph(n + m, tuple(edges), kind="total", origin=origin, source=G)


@dataclass(frozen=True)
class BlowupSpec:
    base: Graph
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(self.sizes)
        if len(sizes) != self.base.n:
            raise InvalidInput("blowup needs one size per base vertex")
        if any(int(s) != s or s < 0 for s in sizes):
            raise InvalidInput("blowup sizes must be nonnegative integers")
        object.__setattr__(self, "sizes", tuple(int(s) for s in sizes))


def blowup(spec: BlowupSpec) -> Graph:
    """Replace vertex v by a clique of ``sizes[v]`` vertices; ``origin`` maps back."""
    origin = []
    parts = []
    for v, s in enumerate(spec.sizes):
        parts.append(list(range(len(origin), len(origin) + s)))
        origin.extend([v] * s)
    edges = []
    for p in parts:
        edges.extend(itertools.combinations(p, 2))
    for u, v in spec.base.edges:
        edges.extend(itertools.product(parts[u], parts[v]))
    return Graph(len(origin), tuple(_norm_edge(a, b) for a, b in edges),
                 kind="blowup", origin=tuple(origin), source=spec.base)


# families ------------------------------------------------------------------

def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidInput("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star(k: int) -> Graph:
    return Graph(k + 1, tuple((0, i) for i in range(1, k + 1)))


def wheel(k: int) -> Graph:
    """Hub 0 joined to a k-cycle on 1..k."""
    rim = [(1 + i, 1 + (i + 1) % k) for i in range(k)]
    return Graph(k + 1, tuple(rim + [(0, i) for i in range(1, k + 1)]))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def gnp(n: int, p, rng: random.Random) -> Graph:
    p = Fraction(p)
    return Graph(n, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def random_bipartite(a: int, b: int, p, rng: random.Random) -> Graph:
    p = Fraction(p)
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b) if rng.random() < p))


def random_multigraph(n: int, p, mu_max: int, rng: random.Random,
                      max_instances: int | None = None) -> Multigraph:
    p = Fraction(p)
    mu = {}
    for e in itertools.combinations(range(n), 2):
        if rng.random() < p:
            mu[e] = rng.randint(1, mu_max)
    if max_instances is not None:
        # drop random edges until the instance budget is met
        keys = sorted(mu)
        while sum(mu.values()) > max_instances:
            e = keys.pop(rng.randrange(len(keys)))
            del mu[e]
    return Multigraph.from_multiplicities(n, mu)


def random_chordal(n: int, rng: random.Random) -> Graph:
    """Each new vertex attaches to a random clique of the graph so far."""
    edges = []
    adj = [set() for _ in range(n)]
    for v in range(1, n):
        anchor = rng.randrange(v)
        clique = [anchor]
        for w in sorted(adj[anchor]):
            if w < v and all(w in adj[c] for c in clique) and rng.random() < 0.5:
                clique.append(w)
        if rng.random() < 0.15:
            clique = []
        for c in clique:
            edges.append((c, v))
            adj[c].add(v)
            adj[v].add(c)
    return Graph(n, tuple(edges))


def odd_cycle_blowup(length: int, sizes: Iterable[int]) -> Graph:
    return blowup(BlowupSpec(cycle(length), tuple(sizes)))


def proposition_graph(delta: int, which: str) -> Graph:
    """C5 with vertices 0,2 (or C7 with 0,2,4) blown up to cliques of size delta-1."""
    if delta < 2:
        raise InvalidInput("delta must be at least 2")
    if which == "five":
        sizes = [delta - 1, 1, delta - 1, 1, 1]
        return odd_cycle_blowup(5, sizes)
    if which == "seven":
        sizes = [delta - 1, 1, delta - 1, 1, delta - 1, 1, 1]
        return odd_cycle_blowup(7, sizes)
    raise InvalidInput(f"unknown proposition variant {which!r}")


# spec strings ----------------------------------------------------------------

_POSITIONAL = {
    "cycle": ("n",), "complete": ("n",), "path": ("n",), "star": ("k",),
    "empty": ("n",), "wheel": ("k",), "complete_bipartite": ("a", "b"),
    "gnp": ("n", "p"), "random_bipartite": ("a", "b", "p"),
    "random_multigraph": ("n", "p", "mu_max"), "random_chordal": ("n",),
    "c5_extremal": ("delta",), "c7_extremal": ("delta",), "petersen": (),
}

FAMILIES = tuple(sorted(_POSITIONAL)) + ("line", "total")


def parse_value(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"cannot parse parameter value {text!r}") from None


def parse_spec(spec: str, positional: Mapping[str, tuple[str, ...]] | None = None):
    """Split ``name:a,b,k=v`` into a name and a parameter dict."""
    name, _, rest = spec.strip().partition(":")
    params: dict = {}
    if rest:
        names = (positional or {}).get(name, ())
        for i, tok in enumerate(rest.split(",")):
            if "=" in tok:
                k, _, v = tok.partition("=")
                params[k.strip()] = parse_value(v)
            elif i < len(names):
                params[names[i]] = parse_value(tok)
            else:
                raise InvalidInput(f"too many positional parameters in {spec!r}")
    return name, params


def _need(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise InvalidInput(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _int(x, what):
    if Fraction(x).denominator != 1:
        raise InvalidInput(f"{what} must be an integer")
    return int(x)


def _prob(p):
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidInput("probability must lie in [0, 1]")
    return p


def generate_family(name: str, params: Mapping | None = None, seed: int = 0):
    """Build a named graph family; a pure function of (name, params, seed)."""
    params = dict(params or {})
    if name in ("line", "total"):
        inner = params.pop("of", None)
        if inner is None:
            raise InvalidInput(f"{name} family needs an inner family ('of')")
        iname, iparams = parse_spec(inner, _POSITIONAL) if isinstance(inner, str) else inner
        base = generate_family(iname, {**iparams, **params}, seed)
        return line_graph(base) if name == "line" else total_graph(base)
    rng = random.Random(seed)
    if name == "cycle":
        return cycle(_int(*_need(params, "n"), "n"))
    if name == "complete":
        return complete(_int(*_need(params, "n"), "n"))
    if name == "empty":
        return Graph(_int(*_need(params, "n"), "n"))
    if name == "path":
        return path(_int(*_need(params, "n"), "n"))
    if name == "star":
        return star(_int(*_need(params, "k"), "k"))
    if name == "wheel":
        return wheel(_int(*_need(params, "k"), "k"))
    if name == "complete_bipartite":
        a, b = _need(params, "a", "b")
        return complete_bipartite(_int(a, "a"), _int(b, "b"))
    if name == "petersen":
        return petersen()
    if name == "gnp":
        n, p = _need(params, "n", "p")
        return gnp(_int(n, "n"), _prob(p), rng)
    if name == "random_bipartite":
        a, b, p = _need(params, "a", "b", "p")
        return random_bipartite(_int(a, "a"), _int(b, "b"), _prob(p), rng)
    if name == "random_multigraph":
        n, p, mu = _need(params, "n", "p", "mu_max")
        cap = params.get("max_instances")
        return random_multigraph(_int(n, "n"), _prob(p), _int(mu, "mu_max"), rng,
                                 None if cap is None else _int(cap, "max_instances"))
    if name == "random_chordal":
        return random_chordal(_int(*_need(params, "n"), "n"), rng)
    if name == "c5_extremal":
        return proposition_graph(_int(*_need(params, "delta"), "delta"), "five")
    if name == "c7_extremal":
        return proposition_graph(_int(*_need(params, "delta"), "delta"), "seven")
    raise InvalidInput(f"unknown graph family {name!r}")


def family_from_spec(spec: str, seed: int = 0):
    """``cycle:7``, ``gnp:n=8,p=1/2``, ``line:petersen``, ``total:cycle:5``."""
    name, sep, rest = spec.partition(":")
    if name in ("line", "total"):
        if not rest:
            raise InvalidInput(f"{name} needs an inner family")
        return generate_family(name, {"of": rest}, seed)
    name, params = parse_spec(spec, _POSITIONAL)
    return generate_family(name, params, seed)


# serialization ---------------------------------------------------------------

def graph_to_dict(G: Graph | Multigraph) -> dict:
    if isinstance(G, Multigraph):
        d = {"n": G.n, "edges": [list(e) for e in G.edges]}
        if G.mult:
            d["mult"] = {f"{u}-{v}": m for (u, v), m in G.mult}
        return d
    return {"n": G.n, "edges": [list(e) for e in G.edges]}


def graph_to_json(G: Graph | Multigraph) -> str:
    return json.dumps(graph_to_dict(G), sort_keys=True, separators=(",", ":")) + "\n"


def graph_from_dict(d: Mapping) -> Graph | Multigraph:
    try:
        n = int(d["n"])
        edges = [tuple(int(x) for x in e) for e in d.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed graph JSON: {exc}") from None
    if any(len(e) != 2 for e in edges):
        raise InvalidInput("every edge must have two endpoints")
    g = Graph(n, tuple(edges))
    if "mult" not in d:
        return g
    mult = []
    for key, m in d["mult"].items():
        u, _, v = key.partition("-")
        mult.append(((int(u), int(v)), int(m)))
    return Multigraph(g, tuple(mult))


def graph_from_json(text: str) -> Graph | Multigraph:
    try:
        return graph_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from None


def read_dimacs(text: str) -> Graph:
    """DIMACS edge format: ``p edge n m`` then ``e u v`` lines, 1-indexed."""
    n = None
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 4:
                raise InvalidInput("bad DIMACS problem line")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise InvalidInput("DIMACS edge before problem line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u != v:
                edges.append((u, v))
        else:
            raise InvalidInput(f"unrecognised DIMACS line {line!r}")
    if n is None:
        raise InvalidInput("missing DIMACS problem line")
    return Graph(n, tuple(edges))


def write_dimacs(G: Graph) -> str:
    lines = [f"p edge {G.n} {len(G.edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in G.edges]
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Graph | Multigraph:
    with open(path) as fh:
        text = fh.read()
    if path.endswith((".col", ".dimacs")) or text.lstrip().startswith(("p ", "c ")):
        return read_dimacs(text)
    return graph_from_json(text)
