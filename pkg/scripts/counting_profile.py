"""Tabulate N(T) = L + S + E on a grid of heights, with the located-zero count.

    python3 scripts/counting_profile.py --t-max 2000 --step 50
"""

import argparse

import numpy as np

from zetagap import counting, pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-max", type=float, default=1000.0)
    ap.add_argument("--step", type=float, default=50.0)
    args = ap.parse_args()

    zeros = pipeline.critical_zeros(14.0, args.t_max, 1e-10)
    g = zeros.gammas
    print("T\tN\tlocated\tL\tS\tE")
    for T in np.arange(args.step, args.t_max + args.step / 2, args.step):
        if T < 14:
            continue
        cv = counting.n_of_t(float(T))
        found = int(np.count_nonzero(g <= T))
        flag = "" if found == cv.N else "\tMISMATCH"
        print(f"{T:g}\t{cv.N}\t{found}\t{cv.L:.6f}\t{cv.S:+.6f}\t{cv.E:.3e}{flag}")


if __name__ == "__main__":
    main()
