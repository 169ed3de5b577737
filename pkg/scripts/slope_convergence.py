"""Initial-slope convergence of the walk (both lambda) and Wilson lattice models."""
import argparse

from diracwalk import spectral
from diracwalk.coins import ModelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, default=0.6)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.03, 0.01, 0.003, 0.001])
    args = ap.parse_args()
    base = ModelParams(epsilon=0.1, mass=1.0, wilson_r=1.0, rho=args.rho)

    for model in (spectral.DQW(0), spectral.DQW(2), spectral.LGT):
        table = spectral.convergence_study(model, base, args.eps)
        print(f"\n{model.name}: order {table.order:.3f}, monotone {table.monotone}")
        print(f"{'eps':>8} {'fitted':>14} {'exact':>14} {'|1-slope|':>11} {'lam gap':>11}")
        for row in table.rows:
            gap = f"{row['lambda_gap']:11.3e}" if "lambda_gap" in row else " " * 11
            print(f"{row['epsilon']:8.4g} {row['fitted_slope']:14.10f} {row['exact_slope']:14.10f} "
                  f"{row['error']:11.3e} {gap}")
        for w in table.warnings:
            print("warning:", w)


if __name__ == "__main__":
    main()
