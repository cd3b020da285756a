"""Run every campaign kind and write one JSON report per kind.

    python3 scripts/run_campaigns.py --trials 500 --workers 4 --out-dir runs/campaigns
"""
import argparse
import os
import sys
from time import perf_counter

from fracdemand.campaign import CONJECTURE_KINDS, THEOREM_KINDS, default_config, theorem_campaign


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kinds", nargs="+", default=THEOREM_KINDS + CONJECTURE_KINDS)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", default="runs/campaigns")
    args = ap.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    failed = False
    for kind in args.kinds:
        t0 = perf_counter()
        report = theorem_campaign(default_config(kind, trials=args.trials, seed=args.seed), args.workers)
        with open(os.path.join(args.out_dir, f"{kind}.json"), "w") as fh:
            fh.write(report.to_json())
        print(f"{report.summary()}  [{perf_counter() - t0:.1f}s]")
        failed |= not report.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
