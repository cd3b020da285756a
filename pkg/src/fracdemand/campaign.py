"""Randomised campaigns over the local-demand theorems and conjectures.

A trial is a pure function of (config, trial index): the instance comes from
a ``random.Random`` seeded with ``"{seed}:{trial}"``, so reports are
byte-identical across runs and worker counts. Failing theorem trials and
conjecture counterexamples are emitted as bundles that replay exactly.
"""

from __future__ import annotations

import dataclasses
import hashlib
import itertools
import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .demand import (demand_from_spec, demand_generate, frac_str, max_clique_sum,
                     parse_frac)
from .edgefrac import edmonds_check
from .errors import FracDemandError, InvalidInput, SizeCapExceeded
from .fracsolve import certificate_to_dict, is_fcolorable
from .graph import (Graph, Multigraph, as_multigraph, generate_family, graph_from_dict,
                    graph_to_dict, line_graph, total_graph)
from .listfrac import find_bad_list_assignment
from . import setsys

THEOREM_KINDS = ("greedy", "brooks", "perfect", "quasiline", "claw-free",
                 "independence", "vizing", "shannon", "konig")
CONJECTURE_KINDS = ("reed", "total", "shearer", "local-brooks-extended", "list")
KINDS = THEOREM_KINDS + CONJECTURE_KINDS
FILTERS = ("clique-sum", "simplicial-free", "bipartite", "triangle-free")
EDGE_KINDS = {"vizing": "vizing_edge", "shannon": "shannon_edge", "konig": "konig_edge"}

_DEFAULT_DEMAND = {
    "greedy": "greedy", "brooks": "brooks:eps=1/2", "perfect": "chi_bounded:c=1",
    "quasiline": "chi_bounded:c=3/2", "claw-free": "chi_bounded:c=2", "reed": "reed",
    "shearer": "shearer:c=1", "local-brooks-extended": "brooks:eps=1/2",
    "list": "const:1/2", "independence": "", "total": "total",
    "vizing": "vizing_edge", "shannon": "shannon_edge", "konig": "konig_edge",
}


@dataclass(frozen=True)
class CampaignConfig:
    kind: str
    trials: int = 100
    seed: int = 0
    family: str = "gnp"
    n_min: int = 1
    n_max: int = 10
    p_choices: tuple[str, ...] = ("1/4", "1/2", "3/4")
    demand: str = ""
    filters: tuple[str, ...] = ()
    mu_max: int = 3
    max_instances: int = 14
    list_m: int = 2
    max_attempts: int = 200

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown campaign kind {self.kind!r}")
        bad = [x for x in self.filters if x not in FILTERS]
        if bad:
            raise InvalidInput(f"unknown filters {bad}")
        if self.trials < 0 or self.n_min < 1 or self.n_min > self.n_max:
            raise InvalidInput("invalid trial count or vertex range")
        for p in self.p_choices:
            if not 0 <= parse_frac(p) <= 1:
                raise InvalidInput(f"edge probability {p} outside [0, 1]")
        object.__setattr__(self, "p_choices", tuple(self.p_choices))
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.demand:
            object.__setattr__(self, "demand", _DEFAULT_DEMAND[self.kind])

    @property
    def mode(self) -> str:
        return "theorem" if self.kind in THEOREM_KINDS else "conjecture"

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["p_choices"] = list(self.p_choices)
        d["filters"] = list(self.filters)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "CampaignConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - names
        if extra:
            raise InvalidInput(f"unknown config keys {sorted(extra)}")
        d = dict(d)
        for key in ("p_choices", "filters"):
            if key in d:
                d[key] = tuple(d[key])
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidInput(f"invalid campaign config: {exc}") from None


def default_config(kind: str, **overrides) -> CampaignConfig:
    """The shipped configuration for each campaign kind."""
    base = {
        "greedy": dict(trials=500),
        "brooks": dict(trials=300, filters=("clique-sum",)),
        "perfect": dict(trials=200, family="random_chordal"),
        "quasiline": dict(trials=200, family="line", n_max=7, p_choices=("1/3", "1/2")),
        "claw-free": dict(trials=200, family="line", n_max=7, p_choices=("1/3", "1/2")),
        "independence": dict(trials=200, n_min=3, n_max=12, filters=("simplicial-free",),
                             p_choices=("1/3", "1/2", "2/3")),
        "vizing": dict(trials=200, family="random_multigraph", n_min=2, n_max=8,
                       p_choices=("1/3", "1/2")),
        "shannon": dict(trials=200, family="random_multigraph", n_min=2, n_max=8,
                        p_choices=("1/3", "1/2")),
        "konig": dict(trials=200, family="bipartite_multigraph", n_min=2, n_max=8,
                      p_choices=("1/3", "1/2")),
        "reed": dict(trials=300, n_max=8),
        "total": dict(trials=100, n_max=5, p_choices=("1/3", "1/2")),
        "shearer": dict(trials=200, n_min=4, n_max=10, filters=("triangle-free",),
                        p_choices=("1/5", "1/4", "1/3")),
        "local-brooks-extended": dict(trials=200, n_max=8),
        "list": dict(trials=30, n_min=2, n_max=3, p_choices=("1/2", "1")),
    }[kind]
    base.update(overrides)
    return CampaignConfig(kind=kind, **base)


# instances -------------------------------------------------------------------

def _bipartite_multigraph(n: int, p: Fraction, mu_max: int, rng: random.Random,
                          max_instances: int) -> Multigraph:
    a = rng.randint(1, max(1, n - 1)) if n > 1 else 1
    mu = {}
    for u in range(a):
        for v in range(a, n):
            if rng.random() < p:
                mu[(u, v)] = rng.randint(1, mu_max)
    keys = sorted(mu)
    while sum(mu.values()) > max_instances:
        del mu[keys.pop(rng.randrange(len(keys)))]
    return Multigraph.from_multiplicities(n, mu)


def _build_graph(cfg: CampaignConfig, n: int, p: Fraction, rng: random.Random):
    seed = rng.getrandbits(32)
    if cfg.family == "bipartite_multigraph":
        return _bipartite_multigraph(n, p, cfg.mu_max, random.Random(seed), cfg.max_instances)
    if cfg.family == "random_multigraph":
        return generate_family("random_multigraph", {"n": n, "p": p, "mu_max": cfg.mu_max,
                                                     "max_instances": cfg.max_instances}, seed)
    if cfg.family == "line":
        base = generate_family("gnp", {"n": n, "p": p}, seed)
        return line_graph(base) if base.edges else Graph(1)
    if cfg.family in ("random_chordal",):
        return generate_family(cfg.family, {"n": n}, seed)
    if cfg.family == "random_bipartite":
        a = max(1, n // 2)
        return generate_family("random_bipartite", {"a": a, "b": max(1, n - a), "p": p}, seed)
    return generate_family(cfg.family, {"n": n, "p": p}, seed)


def _graph_filters_ok(G: Graph, filters) -> bool:
    for name in filters:
        if name == "simplicial-free" and any(setsys.is_simplicial(G, v) for v in range(G.n)):
            return False
        if name == "bipartite" and not G.is_bipartite():
            return False
        if name == "triangle-free" and G.has_triangle():
            return False
    return True


def make_instance(cfg: CampaignConfig, trial: int) -> dict | None:
    """Input record for one trial, or None when the filters rejected every attempt."""
    rng = random.Random(f"{cfg.seed}:{trial}")
    for _ in range(cfg.max_attempts):
        n = rng.randint(cfg.n_min, cfg.n_max)
        p = parse_frac(rng.choice(cfg.p_choices))
        G = _build_graph(cfg, n, p, rng)
        simple = G.underlying if isinstance(G, Multigraph) else G
        if not _graph_filters_ok(simple, cfg.filters):
            continue
        record = {"graph": graph_to_dict(G)}
        if cfg.kind in EDGE_KINDS:
            f = demand_generate(line_graph(as_multigraph(G)), EDGE_KINDS[cfg.kind])
        elif cfg.kind == "total":
            f = demand_generate(total_graph(G), "total")
        elif cfg.kind == "independence":
            f = None
        else:
            f = demand_from_spec(G, cfg.demand)
        if f is not None:
            target = simple if cfg.kind not in ("total",) + tuple(EDGE_KINDS) else None
            if "clique-sum" in cfg.filters and target is not None and max_clique_sum(target, f) > 1:
                continue
            record["demand"] = [frac_str(x) for x in f]
        if cfg.kind == "local-brooks-extended":
            record["eps"] = frac_str(Fraction(demand_param(cfg.demand, "eps", "1/2")))
        if cfg.kind == "list":
            record["m"] = cfg.list_m
        return record
    return None


def demand_param(spec: str, key: str, default: str) -> Fraction:
    from .demand import parse_demand_spec
    _, params = parse_demand_spec(spec)
    return Fraction(params.get(key, parse_frac(default)))


# local Brooks obstructions ------------------------------------------------------

def _all_cliques(G: Graph) -> list[tuple[int, ...]]:
    seen = set()
    for K in setsys.enumerate_cliques(G):
        for r in range(1, len(K) + 1):
            seen.update(itertools.combinations(K, r))
    return sorted(seen)


def cycle_blowup_subgraph(G: Graph, f, k: int, *, node_cap: int = 200_000):
    """Parts of a (not necessarily induced) blowup of C_{2k+1} with demand sum > k, or None."""
    f = [Fraction(x) for x in f]
    cliques = _all_cliques(G)
    weight = {c: sum((f[v] for v in c), Fraction(0)) for c in cliques}
    masks = {c: setsys.to_mask(c) for c in cliques}
    total = sum(f, Fraction(0))
    length = 2 * k + 1
    nodes = 0

    def joins(a, b):
        return G.is_clique(a + b)

    def rec(parts, used, acc):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise SizeCapExceeded("cycle blowup search exceeded its node budget")
        rest = total - sum((f[v] for v in setsys.bits(used)), Fraction(0))
        if acc + rest <= k:
            return None
        if len(parts) == length:
            return parts if acc > k and joins(parts[-1], parts[0]) else None
        for c in cliques:
            if masks[c] & used:
                continue
            if parts and not joins(parts[-1], c):
                continue
            if not parts and c[0] != min(c):
                continue
            hit = rec(parts + [c], used | masks[c], acc + weight[c])
            if hit:
                return hit
        return None

    return rec([], 0, Fraction(0))


def wheel_obstruction(G: Graph, f):
    """Hub u and rim C of a six-vertex wheel with f(C) > 2(1 - f(u)), or None."""
    f = [Fraction(x) for x in f]
    for u in range(G.n):
        for rim in itertools.combinations(sorted(G.neighbors(u)), 5):
            s = sum((f[x] for x in rim), Fraction(0))
            if s <= 2 * (1 - f[u]):
                continue
            first = rim[0]
            for perm in itertools.permutations(rim[1:]):
                order = (first,) + perm
                if perm[0] > perm[-1]:
                    continue
                if all(G.adjacent(order[i], order[(i + 1) % 5]) for i in range(5)):
                    return u, order
    return None


def local_brooks_obstruction(G: Graph, f, eps: Fraction) -> dict | None:
    f = [Fraction(x) for x in f]
    for K in setsys.enumerate_cliques(G):
        if sum((f[v] for v in K), Fraction(0)) > 1:
            return {"type": "clique", "vertices": list(K)}
    kmax = G.n // 2 if eps == 0 else min(math.floor(1 / eps), G.n // 2)
    for k in range(2, kmax + 1):
        hit = cycle_blowup_subgraph(G, f, k)
        if hit:
            return {"type": f"C{2 * k + 1}-blowup", "parts": [list(p) for p in hit]}
    w = wheel_obstruction(G, f)
    if w:
        return {"type": "wheel", "hub": w[0], "rim": list(w[1])}
    return None


# evaluation ----------------------------------------------------------------------

def _fracs(xs):
    return [parse_frac(x) for x in xs]


def evaluate(kind: str, record: Mapping) -> dict:
    """Outcome of one trial; 'status' is pass, fail, counterexample or excluded."""
    G = graph_from_dict(record["graph"])
    if kind in EDGE_KINDS:
        M = as_multigraph(G)
        f = _fracs(record["demand"])
        if kind == "konig" and not M.underlying.is_bipartite():
            raise InvalidInput("konig trial on a non-bipartite graph")
        LG = line_graph(M)
        violation = edmonds_check(M, f)
        verdict = is_fcolorable(LG, f)
        ok = violation is None and verdict.decision
        out = {"status": "pass" if ok else "fail", "edmonds": None if violation is None else
               {"kind": violation.kind, "where": list(violation.where),
                "load": frac_str(violation.load), "bound": frac_str(violation.bound)},
               "lp": "yes" if verdict.decision else "no"}
        if not ok:
            out["certificate"] = certificate_to_dict(LG, f, verdict)
        return out
    if kind == "independence":
        alpha = setsys.independence_number(G)
        rhs = sum((1 / (d + Fraction(1, 2)) for d in G.degrees()), Fraction(0))
        return {"status": "pass" if alpha >= rhs else "fail", "alpha": alpha, "bound": frac_str(rhs)}
    if kind == "list":
        f = _fracs(record["demand"])
        N = math.lcm(*(x.denominator for x in f))
        m = int(record["m"])
        base = find_bad_list_assignment(G, f, N)
        if base is not None:
            return {"status": "pass", "note": "not (f,N)-list-colorable; conjecture vacuous",
                    "N": N}
        bad = find_bad_list_assignment(G, f, m * N)
        if bad is None:
            return {"status": "pass", "N": N, "mN": m * N}
        return {"status": "counterexample", "N": N, "mN": m * N,
                "lists": [sorted(L) for L in bad]}
    H = total_graph(G) if kind == "total" else G
    f = _fracs(record["demand"])
    verdict = is_fcolorable(H, f)
    if verdict.decision:
        return {"status": "pass"}
    out = {"certificate": certificate_to_dict(H, f, verdict)}
    if kind in THEOREM_KINDS:
        out["status"] = "fail"
    elif kind == "local-brooks-extended":
        obstruction = local_brooks_obstruction(H, f, parse_frac(record["eps"]))
        out["status"] = "excluded" if obstruction else "counterexample"
        out["obstruction"] = obstruction
    else:
        out["status"] = "counterexample"
    return out


def _hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _run_trial(args) -> dict:
    cfg, trial = args
    try:
        record = make_instance(cfg, trial)
        if record is None:
            return {"trial": trial, "status": "skip", "reason": "filters rejected every attempt"}
        outcome = evaluate(cfg.kind, record)
    except SizeCapExceeded as exc:
        return {"trial": trial, "status": "skip", "reason": f"size cap: {exc}"}
    out = {"trial": trial, "status": outcome["status"]}
    if outcome["status"] in ("fail", "counterexample"):
        out["bundle"] = make_bundle(cfg, trial, record, outcome)
    return out


def make_bundle(cfg: CampaignConfig, trial: int, record: Mapping, outcome: Mapping) -> dict:
    return {"kind": cfg.kind, "trial": trial, "seed": cfg.seed, "input": dict(record),
            "input_hash": _hash(record), "outcome": dict(outcome),
            "replay": "fracdemand campaign --replay bundle.json"}


@dataclass
class CampaignReport:
    config: CampaignConfig
    passes: int = 0
    excluded: int = 0
    failures: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    skips: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "mode": self.config.mode,
                "trials": self.config.trials, "passes": self.passes,
                "excluded": self.excluded, "failures": self.failures,
                "counterexamples": self.counterexamples, "skips": self.skips}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, default=str) + "\n"

    def summary(self) -> str:
        cfg = self.config
        lines = [f"{cfg.kind} ({cfg.mode}): {self.passes}/{cfg.trials} passed"]
        if self.excluded:
            lines.append(f"  {self.excluded} refused instances contained an excluded obstruction")
        if self.skips:
            lines.append(f"  {len(self.skips)} skipped")
        if self.failures:
            lines.append(f"  {len(self.failures)} FAILURES (trials {[b['trial'] for b in self.failures]})")
        if self.counterexamples:
            lines.append(f"  {len(self.counterexamples)} counterexamples")
        return "\n".join(lines)


def theorem_campaign(cfg: CampaignConfig, workers: int = 1) -> CampaignReport:
    """Run every trial of cfg; the report does not depend on ``workers``."""
    jobs = [(cfg, t) for t in range(cfg.trials)]
    if workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, cfg.trials // (4 * workers))))
    else:
        results = [_run_trial(j) for j in jobs]
    report = CampaignReport(cfg)
    for r in results:
        status = r["status"]
        if status == "pass":
            report.passes += 1
        elif status == "excluded":
            report.excluded += 1
        elif status == "skip":
            report.skips.append({"trial": r["trial"], "reason": r["reason"]})
        elif status == "fail":
            report.failures.append(r["bundle"])
        else:
            report.counterexamples.append(r["bundle"])
    return report


# bundles -------------------------------------------------------------------------

def counterexample_bundle_export(bundle: Mapping, out_dir: str) -> list[str]:
    """Write graph, demand, certificate, bundle and replay files; return their paths."""
    os.makedirs(out_dir, exist_ok=True)
    files = {
        "graph.json": bundle["input"]["graph"],
        "demand.json": {"f": bundle["input"].get("demand", [])},
        "bundle.json": bundle,
    }
    cert = bundle["outcome"].get("certificate")
    if cert is not None:
        files["certificate.json"] = cert
    paths = []
    for name, data in files.items():
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=1)
            fh.write("\n")
        paths.append(path)
    path = os.path.join(out_dir, "replay.txt")
    with open(path, "w") as fh:
        fh.write(f"fracdemand campaign --replay {os.path.join(out_dir, 'bundle.json')}\n")
    paths.append(path)
    return paths


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    message: str


def replay_bundle(bundle: Mapping) -> ReplayResult:
    try:
        record = bundle["input"]
        stored = bundle["outcome"]
        kind = bundle["kind"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed bundle: {exc}") from None
    if _hash(record) != bundle.get("input_hash"):
        return ReplayResult(False, "hash mismatch: bundle input was modified")
    try:
        outcome = evaluate(kind, record)
    except FracDemandError as exc:
        return ReplayResult(False, f"replay raised {exc}")
    if json.loads(json.dumps(outcome, default=str)) != json.loads(json.dumps(stored, default=str)):
        return ReplayResult(False, "replayed outcome differs from the stored one")
    return ReplayResult(True, f"replayed: {outcome['status']}")
