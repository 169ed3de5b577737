"""Write the four gapless-frequency curves and print their edge values.

    python scripts/reproduce_figure1.py [--out DIR] [--plot]
"""
import argparse
import math

from diracwalk import io, spectral
from diracwalk.clifford import pauli_representation
from diracwalk.coins import ModelParams
from diracwalk.lattice import symbol_gapless_frequency


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/figure1")
    ap.add_argument("--plot", action="store_true", help="save figure1.png (needs matplotlib)")
    args = ap.parse_args()

    params = ModelParams(epsilon=0.1, mass=1.0, wilson_r=1.0, rho=0.6, lam=0)
    models = [spectral.DIRAC, spectral.NAIVE, spectral.LGT, spectral.DQW(0)]
    curves = [spectral.dispersion_curve(m, params, 1001) for m in models]
    names = ["dirac", "naive", "lgt", "dqw"]
    io.emit_csv(curves, args.out, names)
    io.write_combined_csv(curves, f"{args.out}/combined.csv", names)

    edge = math.pi / params.epsilon
    rep = pauli_representation()
    for m, c in zip(models, curves):
        zeros = spectral.doubling_report(m, params, 1001).zero_count
        line = f"{m.name:6s} zeros={zeros} f(pi/eps)={c.f_values[-1]:.10f}"
        if m.on_lattice:
            line += f"  eigenvalue oracle={symbol_gapless_frequency(m, params, edge, rep):.10f}"
        print(line)

    if args.plot:
        import matplotlib.pyplot as plt

        for name, c in zip(names, curves):
            plt.plot(c.k_grid, c.f_values, label=name)
        plt.xlabel("k")
        plt.ylabel("f(k)")
        plt.legend()
        plt.savefig(f"{args.out}/figure1.png", dpi=150)


if __name__ == "__main__":
    main()
