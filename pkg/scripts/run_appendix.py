"""Check every inequality claim over a range of delta and print a summary table.

    python3 scripts/run_appendix.py --delta-max 100 --refinement 4
"""
import argparse
import json
import sys
from time import perf_counter

from fracdemand.appendix import CLAIMS, appendix_verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta-max", type=int, default=100)
    ap.add_argument("--refinement", type=int, default=4)
    ap.add_argument("--json", action="store_true", help="print full results as JSON")
    args = ap.parse_args(argv)

    results = []
    for cid, claim in CLAIMS.items():
        t0 = perf_counter()
        res = appendix_verify(cid, (claim.min_delta, args.delta_max), args.refinement)
        results.append(res.to_dict())
        status = "pass" if res.passed else f"COUNTERPOINT {res.counterpoint} value {res.value}"
        print(f"{cid:24s} {res.points:>10d} points  {status}  [{perf_counter() - t0:.1f}s]")
    if args.json:
        print(json.dumps(results, indent=1, default=str))
    return 0 if all(r["result"] == "pass" for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
