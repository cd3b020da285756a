"""Command line entry point.

Exit codes: 0 pass/yes, 1 no or failure (with a certificate where one
exists), 2 usage or malformed input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .appendix import CLAIMS, appendix_verify
from .campaign import KINDS, CampaignConfig, default_config, replay_bundle, theorem_campaign, \
    counterexample_bundle_export
from .demand import demand_from_json, demand_from_spec, demand_to_dict, frac_str, parse_frac
from .edgefrac import edmonds_check, verify_local_konig, verify_local_shannon, verify_local_vizing
from .errors import CertificateError, FracDemandError, InvalidInput, SizeCapExceeded
from .fracsolve import (certificate_to_json, chi_f, is_fcolorable, to_set_coloring,
                        verify_certificate)
from .graph import Graph, Multigraph, as_multigraph, family_from_spec, load_graph
from .listfrac import (DiscreteListAssignment, find_bad_list_assignment, multiplicative_uplift,
                       random_list_assignment, smallest_admissible_M)
from .structure import classify_turtle, detect_dangerous_blowup, find_base_cliques

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=1, default=str))


def _graph(args, simple: bool = True):
    if args.graph and args.family:
        raise InvalidInput("give --graph or --family, not both")
    if args.graph:
        G = load_graph(args.graph)
    elif args.family:
        G = family_from_spec(args.family, seed=args.seed)
    else:
        raise InvalidInput("a graph is required (--graph or --family)")
    if simple and isinstance(G, Multigraph):
        if not G.is_simple():
            raise InvalidInput("this command needs a simple graph")
        G = G.underlying
    return G


def _demand(G, spec: str | None, default: str | None = None):
    spec = spec or default
    if spec is None:
        raise InvalidInput("a demand is required (--demand)")
    if os.path.exists(spec):
        with open(spec) as fh:
            f = demand_from_json(fh.read())
    elif "," in spec and ":" not in spec:
        f = tuple(parse_frac(x) for x in spec.split(","))
    else:
        return demand_from_spec(G, spec)
    if len(f) != G.n:
        raise InvalidInput(f"demand has {len(f)} values for {G.n} vertices")
    return f


def _write(out_dir: str | None, name: str, text: str) -> str | None:
    if not out_dir:
        return None
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


# subcommands -----------------------------------------------------------------

def cmd_solve(args) -> int:
    if args.verify_only:
        with open(args.verify_only) as fh:
            data = json.load(fh)
        try:
            verify_certificate(data)
        except CertificateError as exc:
            print(f"invalid certificate: {exc}")
            return EXIT_NO
        print(f"certificate valid ({data['decision']})")
        return EXIT_OK
    G = _graph(args)
    f = _demand(G, args.demand)
    verdict = is_fcolorable(G, f, cap=args.cap)
    print(f"{'yes' if verdict.decision else 'no'} objective={frac_str(verdict.objective)}")
    if not verdict.decision:
        print("dual weights:", " ".join(str(w) for w in verdict.dual))
    path = _write(args.out_dir, "certificate.json", certificate_to_json(G, f, verdict))
    if path:
        print(f"certificate written to {path}")
    return EXIT_OK if verdict.decision else EXIT_NO


def cmd_chif(args) -> int:
    print(frac_str(chi_f(_graph(args), cap=args.cap)))
    return EXIT_OK


def cmd_demand(args) -> int:
    G = _graph(args)
    f = demand_from_spec(G, args.spec)
    text = json.dumps(demand_to_dict(f), separators=(",", ":")) + "\n"
    path = _write(args.out_dir, "demand.json", text)
    print(text, end="") if path is None else print(f"demand written to {path}")
    return EXIT_OK


def cmd_edge(args) -> int:
    G = _graph(args, simple=False)
    fn = {"vizing": verify_local_vizing, "shannon": verify_local_shannon,
          "konig": verify_local_konig}[args.theorem]
    rep = fn(G)
    _emit({"theorem": args.theorem, "demand": [frac_str(x) for x in rep.demand],
           "edmonds": "pass" if rep.edmonds is None else
           {"where": list(rep.edmonds.where), "load": frac_str(rep.edmonds.load)},
           "lp": "yes" if rep.lp_colorable else "no", "passed": rep.passed})
    return EXIT_OK if rep.passed else EXIT_NO


def cmd_edmonds(args) -> int:
    M = as_multigraph(_graph(args, simple=False))
    count = len(M.edge_instances())
    spec = args.demand
    if os.path.exists(spec):
        with open(spec) as fh:
            f = demand_from_json(fh.read()).values
    elif spec.startswith("const:"):
        f = (parse_frac(spec.split(":", 1)[1]),) * count
    else:
        f = tuple(parse_frac(x) for x in spec.split(","))
    v = edmonds_check(M, f, all_sets=args.all_sets)
    if v is None:
        print("pass")
        return EXIT_OK
    print(f"violated {v.kind} {list(v.where)}: load {frac_str(v.load)} > {frac_str(v.bound)}"
          f" (slack {frac_str(v.slack)})")
    return EXIT_NO


def cmd_structure(args) -> int:
    G = _graph(args)
    out = {"base_cliques": [r.to_dict() for r in find_base_cliques(G)]}
    if G.n:
        delta = G.min_degree() if args.delta is None else args.delta
        f = _demand(G, args.demand, "brooks:eps=1/2")
        found = []
        for w in detect_dangerous_blowup(G, f, delta, cap=args.cap or 10_000):
            item = w.to_dict()
            if delta == 2 and G.min_degree() == 2:
                try:
                    item["class"] = classify_turtle(w, G)
                except FracDemandError as exc:
                    item["class"] = f"unclassified: {exc}"
            found.append(item)
        out["delta"] = delta
        out["dangerous_blowups"] = found
    _emit(out)
    return EXIT_OK


def cmd_appendix(args) -> int:
    ids = list(CLAIMS) if args.claim == "all" else [args.claim]
    status = EXIT_OK
    for cid in ids:
        if cid not in CLAIMS:
            raise InvalidInput(f"unknown claim {cid!r}; known: {', '.join(CLAIMS)}")
        lo = CLAIMS[cid].min_delta if args.delta_min is None else args.delta_min
        res = appendix_verify(cid, (lo, args.delta_max), args.refinement)
        if res.passed:
            print(f"{cid}: pass ({res.points} points, delta {lo}..{args.delta_max})")
        else:
            point = ", ".join(f"{k}={frac_str(v)}" for k, v in res.counterpoint.items())
            print(f"{cid}: counterpoint {point} value {frac_str(res.value)}")
            status = EXIT_NO
    return status


def cmd_campaign(args) -> int:
    if args.replay:
        with open(args.replay) as fh:
            res = replay_bundle(json.load(fh))
        print(res.message)
        return EXIT_OK if res.ok else EXIT_NO
    if args.config:
        with open(args.config) as fh:
            cfg = CampaignConfig.from_dict(json.load(fh))
    elif args.kind:
        overrides = {"seed": args.seed}
        if args.trials is not None:
            overrides["trials"] = args.trials
        cfg = default_config(args.kind, **overrides)
    else:
        raise InvalidInput("campaign needs --config, --kind or --replay")
    report = theorem_campaign(cfg, workers=args.workers)
    print(report.summary())
    if args.out_dir:
        _write(args.out_dir, "report.json", report.to_json())
        for b in report.failures + report.counterexamples:
            counterexample_bundle_export(b, os.path.join(args.out_dir, f"bundle-{b['trial']:05d}"))
    if cfg.mode == "theorem" and not report.ok:
        return EXIT_NO
    return EXIT_OK


def cmd_list(args) -> int:
    G = _graph(args)
    f = _demand(G, args.demand)
    bad = find_bad_list_assignment(G, f, args.N)
    if bad is None:
        print(f"(f,{args.N})-list-colorable: yes")
        return EXIT_OK
    print(f"(f,{args.N})-list-colorable: no; bad lists {[sorted(L) for L in bad]}")
    return EXIT_NO


def cmd_uplift(args) -> int:
    G = _graph(args)
    f = _demand(G, args.demand)
    verdict = is_fcolorable(G, f, cap=args.cap)
    if not verdict.decision:
        print("no: G has no f-coloring, nothing to lift")
        return EXIT_NO
    psi = to_set_coloring(verdict.primal, f)
    if args.lists:
        with open(args.lists) as fh:
            lists = DiscreteListAssignment.from_dict(json.load(fh))
    else:
        M = args.M or smallest_admissible_M(psi.N, args.chunk)
        universe = args.universe or -(-3 * M // 2)
        lists = random_list_assignment(G.n, M, universe, random.Random(args.seed))
    res = multiplicative_uplift(G, f, psi, lists, args.chunk)
    _emit({"N": psi.N, "M": lists.N, "route": res.route,
           "coloring": [sorted(c) for c in res.coloring], "verified": True})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph JSON or DIMACS file")
    common.add_argument("--family", help="family spec such as cycle:7 or gnp:n=8,p=1/2")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cap", type=int, default=None, help="enumeration cap")
    common.add_argument("--out-dir", default=None)

    p = argparse.ArgumentParser(prog="fracdemand", description="Exact fractional coloring with local demands.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="decide f-colorability with a certificate")
    s.add_argument("--demand", help="demand spec, JSON file, or comma list")
    s.add_argument("--verify-only", metavar="CERT", help="re-verify a certificate file")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("chif", parents=[common], help="exact fractional chromatic number")
    s.set_defaults(func=cmd_chif)

    s = sub.add_parser("demand", help="demand functions")
    dsub = s.add_subparsers(dest="action", required=True)
    g = dsub.add_parser("gen", parents=[common], help="generate a demand file")
    g.add_argument("spec", help="e.g. greedy, brooks:eps=1/2, reed, chi_bounded:c=3/2")
    g.set_defaults(func=cmd_demand)

    s = sub.add_parser("edge", help="edge-coloring theorems")
    esub = s.add_subparsers(dest="action", required=True)
    g = esub.add_parser("verify", parents=[common])
    g.add_argument("theorem", choices=("vizing", "shannon", "konig"))
    g.set_defaults(func=cmd_edge)

    s = sub.add_parser("edmonds", parents=[common], help="matching polytope membership")
    s.add_argument("--demand", required=True, help="JSON file, const:x, or comma list per edge instance")
    s.add_argument("--all-sets", action="store_true", help="also check even subsets")
    s.set_defaults(func=cmd_edmonds)

    s = sub.add_parser("structure", help="structural detectors")
    ssub = s.add_subparsers(dest="action", required=True)
    g = ssub.add_parser("scan", parents=[common])
    g.add_argument("--demand", default=None)
    g.add_argument("--delta", type=int, default=None)
    g.set_defaults(func=cmd_structure)

    s = sub.add_parser("appendix", help="exact grid check of a q-inequality")
    s.add_argument("--claim", required=True, help=f"one of {', '.join(CLAIMS)} or 'all'")
    s.add_argument("--delta-min", type=int, default=None)
    s.add_argument("--delta-max", type=int, default=100)
    s.add_argument("--refinement", type=int, default=4)
    s.set_defaults(func=cmd_appendix)

    s = sub.add_parser("campaign", parents=[common], help="run or replay a campaign")
    s.add_argument("--config", help="campaign config JSON")
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--replay", metavar="BUNDLE", help="replay a counterexample bundle")
    s.set_defaults(func=cmd_campaign)

    s = sub.add_parser("list", help="list colorability")
    lsub = s.add_subparsers(dest="action", required=True)
    g = lsub.add_parser("brute", parents=[common])
    g.add_argument("--demand", required=True)
    g.add_argument("--N", type=int, required=True)
    g.set_defaults(func=cmd_list)

    s = sub.add_parser("uplift", parents=[common], help="multiplicative list pipeline")
    s.add_argument("--demand", required=True)
    s.add_argument("--M", type=int, default=None)
    s.add_argument("--chunk", type=int, default=2)
    s.add_argument("--universe", type=int, default=None)
    s.add_argument("--lists", default=None, help="discrete list JSON file")
    s.set_defaults(func=cmd_uplift)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "cap", None) is not None:
        os.environ["FRACDEMAND_CAP"] = str(args.cap)
    try:
        return args.func(args)
    except SizeCapExceeded as exc:
        print(f"size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidInput, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracDemandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO


def main() -> None:
    sys.exit(run())
