"""Scan zeta' zeros up to height 1000, pair them, and summarize the gap ratios.

    python3 scripts/scan_to_1000.py --out runs/scan1000
"""

import argparse
import json
import time

from zetagap import pipeline
from zetagap.config import ScanConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/scan1000")
    ap.add_argument("--t-max", type=float, default=1000.0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = ScanConfig(t_min=14.0, t_max=args.t_max, threads=args.threads, out=args.out)
    t0 = time.perf_counter()
    code = pipeline.run_scan(cfg)
    if code:
        raise SystemExit(code)
    pipeline.run_report(args.out)
    with open(f"{args.out}/summary.json") as fh:
        s = json.load(fh)
    print(f"\n{s['n_pairs']} pairs in {time.perf_counter() - t0:.1f}s")
    print(f"max ratio_thm in theorem range: {s['ratio_thm_theorem_range']['max']:.4f} "
          f"(asymptotic constant {s['asymptotic_constant_reference']})")


if __name__ == "__main__":
    main()
