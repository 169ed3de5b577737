"""Worst unitarity residuals over a parameter grid and random representations."""
import argparse
import itertools
import time

from diracwalk.clifford import random_representation
from diracwalk.coins import ModelParams, Variant, build_coins, check_unitarity
from diracwalk.lattice import build_walk_operator, walk_unitarity_residuals


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--sites", type=int, default=32)
    args = ap.parse_args()

    reps = [random_representation(s) for s in range(args.reps)]
    grid = itertools.product((1.0, 0.1, 0.01), (0.0, 0.5, 1.0), (-2, -1, 0, 0.5, 1, 2), (0.3, 0.6, 0.9), (0, 2))
    worst = {}
    t0 = time.perf_counter()
    for eps, m, r, rho, lam in grid:
        for variant in Variant:
            p = ModelParams(epsilon=eps, mass=m, wilson_r=r, rho=rho, lam=lam, variant=variant)
            for rep in reps:
                coins = build_coins(rep, p)
                for key, val in check_unitarity(coins).residuals.items():
                    worst[key] = max(worst.get(key, 0.0), val)
                udu, uud = walk_unitarity_residuals(build_walk_operator(coins, args.sites))
                worst["UdagU"] = max(worst.get("UdagU", 0.0), udu)
                worst["UUdag"] = max(worst.get("UUdag", 0.0), uud)
    for key, val in worst.items():
        print(f"{key:28s} {val:.3e}")
    print(f"({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
