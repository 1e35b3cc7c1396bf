"""Kernel sums over the zeta ordinates against log(gamma')/2 for each zeta' zero.

Prints one row per zero: the truncated sum, its tail estimate, the residual
against log(gamma')/2 and the exact value from the Hadamard product.

    python3 scripts/lemma1_table.py --t-min 20 --t-max 500 > lemma1.tsv
"""

import argparse
import sys

from zetagap import pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-min", type=float, default=20.0)
    ap.add_argument("--t-max", type=float, default=500.0)
    ap.add_argument("--sigma-max", type=float, default=4.0)
    args = ap.parse_args()
    if 10 * args.t_max > 1e4:
        sys.exit("the sums need zeros up to 10 * t_max <= 1e4")

    zeros = pipeline.critical_zeros(14.0, 10 * args.t_max, 1e-10)
    zp = pipeline.zeta_prime_zeros(args.t_min, args.t_max, args.sigma_max, 1e-10)
    print("beta_prime\tgamma_prime\tsum\ttail_bound\tresidual\texact")
    worst = 0.0
    for z, res, exact in pipeline.lemma1_rows(zp, zeros):
        worst = max(worst, abs(res.residual))
        print(f"{z.beta_prime!r}\t{z.gamma_prime!r}\t{res.sum!r}\t{res.tail_bound!r}\t"
              f"{res.residual!r}\t{exact!r}")
    print(f"# {len(zp)} zeros, max |residual| = {worst:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
