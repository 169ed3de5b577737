"""Command-line entry point.

``diracwalk <experiment> --config FILE [--out DIR] [--seed INT]``

Exit codes: 0 success, 1 I/O or configuration error, 2 a physics constraint
check failed, 3 no real frequency exists where one was required.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io, spectral
from .clifford import RepresentationError, gamma_operators, pauli_representation, random_representation
from .coins import ParameterError, build_coins, check_unitarity, hamiltonian_blocks
from .config import EXPERIMENTS, ConfigError, RunConfig, config_help, parse_config
from .dynamics import (WavePacket, evolve_one_step, evolve_two_step, group_velocity_estimate,
                       make_wave_packet, observables)
from .lattice import (DENSE_LIMIT, LatticeState, build_walk_operator, lattice_momenta, symbol_gapless_frequency,
                      walk_unitarity_residuals)

EXIT_OK, EXIT_CONFIG, EXIT_CONSTRAINT, EXIT_NO_FREQUENCY = 0, 1, 2, 3

FIGURE1_FILES = ("dirac", "naive", "lgt", "dqw")
SUPPLEMENTAL_DEFAULTS = {"epsilon": 1.0, "mass": 0.1, "r": 1.0}


class Report:
    """Collects summary lines; written to report.txt and echoed to stdout."""

    def __init__(self, title: str):
        self.lines = [f"# {title}"]

    def add(self, line: str = ""):
        self.lines.append(line)

    def write(self, directory: Path) -> Path:
        path = directory / "report.txt"
        path.write_text("\n".join(self.lines) + "\n")
        return path


def load_representation(cfg: RunConfig):
    if cfg["rep"] == "pauli":
        return pauli_representation()
    if cfg["rep"] == "random":
        return random_representation(cfg["seed"])
    return io.read_representation(cfg["rep_file"])


def _f(x) -> str:
    return repr(float(x))


def _params_line(p) -> str:
    return (f"epsilon={p.epsilon!r} m={p.mass!r} r={p.wilson_r!r} rho={p.rho!r} "
            f"lambda={p.lam} variant={p.variant.value}")


# --- experiments ----------------------------------------------------------

def run_check(cfg: RunConfig, out: Path, report: Report) -> int:
    rep = load_representation(cfg)
    p = cfg.params
    tol = cfg["tol"]
    coins = build_coins(rep, p)
    crep = check_unitarity(coins, tol)
    walk = build_walk_operator(coins, min(cfg["sites"], DENSE_LIMIT))
    udu, uud = walk_unitarity_residuals(walk)
    blocks = hamiltonian_blocks(coins, tol=max(tol, 1e-12))
    _, _, gres = gamma_operators(rep, coins.norms.mu)
    residuals = dict(crep.residuals)
    residuals[f"walk:UdagU(N={walk.sites})"] = udu
    residuals[f"walk:UUdag(N={walk.sites})"] = uud
    residuals.update({f"blocks:{k}": v for k, v in blocks.algebra.items()})
    residuals["gamma:metric"] = gres
    full = replace(crep, residuals=residuals)
    (out / "check_report.txt").write_text(full.to_text())
    report.add(_params_line(p))
    report.add(f"representation {rep.label} (d={rep.dim})")
    report.add(full.to_text().rstrip())
    return EXIT_OK if full.passed else EXIT_CONSTRAINT


def run_evolve(cfg: RunConfig, out: Path, report: Report) -> int:
    rep = load_representation(cfg)
    p = cfg.params
    coins = build_coins(rep, p)
    n = cfg["sites"]
    walk = build_walk_operator(coins, n)
    dk = 2 * math.pi / (n * p.epsilon)
    packet = WavePacket(cfg["k0_fraction"] * math.pi / p.epsilon, cfg["packet_width"] * dk, cfg["branch"])
    psi0 = make_wave_packet(coins, n, packet)
    if cfg["scheme"] == "one-step":
        traj = evolve_one_step(walk, psi0, cfg["steps"])
    else:
        psi1 = LatticeState(walk.apply(psi0.amplitudes), 1)
        traj = evolve_two_step(walk, psi0, psi1, cfg["steps"])
    io.emit_csv([traj], out, ["trajectory"], extra={"packet": {"k0": packet.center_k, "width": packet.width,
                                                                "branch": packet.branch, "representation": rep.label}})
    drift = 0.0
    with (out / "observables.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "norm", "mean_position", "std_position"])
        for s in traj.states:
            o = observables(s)
            drift = max(drift, abs(o.norm - 1.0))
            w.writerow([s.step_index, _f(o.norm), _f(o.mean_position), _f(o.std_position)])
    report.add(_params_line(p))
    report.add(f"sites={n} steps={traj.steps} scheme={traj.scheme.value} k0={packet.center_k!r}")
    report.add(f"max norm drift {drift:.3e} (tolerance {cfg['norm_tol']:.1e})")
    if traj.steps >= 10:
        report.add(f"group velocity {group_velocity_estimate(traj):.12f}")
    return EXIT_OK if drift <= cfg["norm_tol"] else EXIT_CONSTRAINT


def _model(cfg: RunConfig):
    return spectral.parse_model(cfg["model"], cfg["lambda"])


def run_dispersion(cfg: RunConfig, out: Path, report: Report) -> int:
    model, p = _model(cfg), cfg.params
    curve = spectral.dispersion_curve(model, p, cfg["grid_points"])
    io.emit_csv([curve], out)
    missing = 0
    with (out / "frequencies.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "omega_plus", "omega_minus"])
        for k, F in zip(curve.k_grid, curve.F_values):
            if model.on_lattice:
                try:
                    pair = spectral.frequency_solutions(model, p, k)
                    w.writerow([_f(k), _f(pair.plus), _f(pair.minus)])
                except spectral.NoRealFrequency:
                    missing += 1
                    w.writerow([_f(k), "nan", "nan"])
            else:
                w.writerow([_f(k), _f(math.sqrt(F)), _f(-math.sqrt(F))])
    report.add(f"model {model.name}: {_params_line(p)}")
    report.add(f"central gap {curve.central_gap!r}; f(pi/eps) = {_f(curve.f_values[-1])}")
    for wmsg in (p.criteria_warnings() if model.kind == "DQW" else []):
        report.add(f"warning: {wmsg}")
    if missing:
        report.add(f"no real frequency at {missing} of {len(curve.k_grid)} momenta")
        return EXIT_NO_FREQUENCY
    return EXIT_OK


def run_doubling(cfg: RunConfig, out: Path, report: Report) -> int:
    model, p = _model(cfg), cfg.params
    dr = spectral.doubling_report(model, p, cfg["grid_points"])
    report.add(f"model {model.name}: {_params_line(p)}")
    report.add(f"zeros {[round(z, 12) for z in dr.zeros]} (count {dr.zero_count})")
    report.add(f"edge value f(pi/eps) = {dr.edge_value!r}")
    report.add(f"raising amplitude {dr.raising_amplitude!r}")
    report.add(f"doubling avoided: {dr.doubling_avoided}")
    trend = spectral.raising_trend(model, p, cfg["epsilons"])
    with (out / "raising_amplitude.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epsilon", "raising_amplitude"])
        for e, a in zip(trend.epsilons, trend.amplitudes):
            w.writerow([_f(e), _f(a)])
    if model.kind in ("DQW", "LGT", "LGT-noncrossed"):
        verdict = "decays toward 0" if trend.decaying else ("bounded below" if trend.bounded_below else "non-monotone")
        report.add(f"raising amplitude across epsilon sweep {trend.epsilons}: {verdict}")
    for wmsg in dr.warnings:
        report.add(f"warning: {wmsg}")
    (out / "doubling_report.txt").write_text("\n".join(report.lines[1:]) + "\n")
    return EXIT_OK


def run_slope(cfg: RunConfig, out: Path, report: Report) -> int:
    model, p = _model(cfg), cfg.params
    sr = spectral.initial_slope(model, p)
    report.add(f"model {model.name}: {_params_line(p)}")
    report.add(f"fitted slope {sr.fitted_slope!r}, predicted {sr.predicted_slope!r}, "
               f"exact {sr.exact_slope!r}, relative error {sr.relative_error:.3e}")
    if model.kind in ("DQW", "LGT", "LGT-noncrossed"):
        table = spectral.convergence_study(model, p, cfg["epsilons"])
        keys = list(table.rows[0])
        with (out / "convergence.csv").open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(keys)
            for row in table.rows:
                w.writerow([_f(row[k]) for k in keys])
        report.add(f"convergence order {table.order:.4f} (rms log residual {table.order_residual:.2e}), "
                   f"monotone {table.monotone}")
        for wmsg in table.warnings:
            report.add(f"warning: {wmsg}")
    return EXIT_OK


def run_sweep(cfg: RunConfig, out: Path, report: Report) -> int:
    tol = cfg["tol"]
    reps = [random_representation(s) for s in range(cfg["seed"], cfg["seed"] + cfg["sweep_reps"])]
    failures = total = 0
    worst = 0.0
    with (out / "sweep.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epsilon", "m", "r", "rho", "lambda", "representation", "coin_residual", "UdagU", "UUdag", "pass"])
        for eps in cfg["sweep_epsilons"]:
            for m in cfg["sweep_masses"]:
                for r in cfg["sweep_r"]:
                    for rho in cfg["sweep_rho"]:
                        for lam in cfg["sweep_lambdas"]:
                            p = cfg.params.with_(epsilon=eps, mass=m, wilson_r=r, rho=rho, lam=lam)
                            for rep in reps:
                                coins = build_coins(rep, p)
                                cres = max(check_unitarity(coins, tol).residuals.values())
                                udu, uud = walk_unitarity_residuals(build_walk_operator(coins, 32))
                                ok = max(cres, udu, uud) <= tol
                                total += 1
                                failures += not ok
                                worst = max(worst, cres, udu, uud)
                                w.writerow([_f(eps), _f(m), _f(r), _f(rho), lam, rep.label,
                                            f"{cres:.6e}", f"{udu:.6e}", f"{uud:.6e}", "pass" if ok else "FAIL"])
    report.add(f"{total} configurations, {failures} failures, worst residual {worst:.3e} (tolerance {tol:.1e})")
    return EXIT_OK if failures == 0 else EXIT_CONSTRAINT


PLOT_SCRIPT = '''"""Plot the gapless frequencies in {csv}; requires matplotlib."""
import csv
import matplotlib.pyplot as plt

with open("{csv}") as fh:
    rows = list(csv.reader(fh))
names, data = rows[0], [[float(x) for x in r] for r in rows[1:]]
k = [r[0] for r in data]
for j, name in enumerate(names[1:], 1):
    plt.plot(k, [r[j] for r in data], label=name)
plt.xlabel("k")
plt.ylabel("f(k)")
plt.legend()
plt.savefig("{png}", dpi=150)
'''


def run_figure1(cfg: RunConfig, out: Path, report: Report) -> int:
    p, n = cfg.params, cfg["grid_points"]
    rep = load_representation(cfg)
    models = [spectral.DIRAC, spectral.NAIVE, spectral.LGT, spectral.DQW(cfg["lambda"])]
    curves = [spectral.dispersion_curve(m, p, n) for m in models]
    io.emit_csv(curves, out, list(FIGURE1_FILES), extra={"figure": "figure1", "representation": rep.label})
    io.write_combined_csv(curves, out / "combined.csv", list(FIGURE1_FILES))
    report.add(_params_line(p))
    ok = True
    for m, c in zip(models, curves):
        dr = spectral.doubling_report(m, p, n)
        report.add(f"{m.name}: zeros {dr.zero_count}, f(0) = {_f(c.f_values[n // 2])}, f(pi/eps) = {_f(c.f_values[-1])}")
        if m.kind in ("LGT", "DQW"):
            oracle = np.array([symbol_gapless_frequency(m, p, k, rep) for k in c.k_grid])
            dev = float(np.max(np.abs(oracle - c.f_values)))
            report.add(f"  max |f - eigenvalue oracle| = {dev:.3e}")
            ok &= dev <= 1e-9 and dr.doubling_avoided
    if cfg["plot_script"]:
        (out / "plot_figure1.py").write_text(PLOT_SCRIPT.format(csv="combined.csv", png="figure1.png"))
    for wmsg in p.criteria_warnings():
        report.add(f"warning: {wmsg}")
    return EXIT_OK if ok else EXIT_CONSTRAINT


def run_figure_supplemental(cfg: RunConfig, out: Path, report: Report) -> int:
    # unset keys fall back to a = 1, m = 0.1, r = 1 rather than the global defaults
    p = cfg.params
    p = p.with_(epsilon=p.epsilon if "epsilon" in cfg.explicit else SUPPLEMENTAL_DEFAULTS["epsilon"],
                mass=p.mass if "mass" in cfg.explicit else SUPPLEMENTAL_DEFAULTS["mass"],
                wilson_r=p.wilson_r if "r" in cfg.explicit else SUPPLEMENTAL_DEFAULTS["r"])
    n = cfg["grid_points"]
    models = [spectral.DIRAC, spectral.NAIVE, spectral.LGT, spectral.LGT_NONCROSSED]
    names = ["dirac", "naive", "lgt", "lgt-noncrossed"]
    curves = [spectral.dispersion_curve(m, p, n) for m in models]
    io.emit_csv(curves, out, names, extra={"figure": "figure-supplemental"})
    io.write_combined_csv(curves, out / "combined.csv", names)
    k = curves[0].k_grid
    a, m, r = p.epsilon, p.mass, p.wilson_r
    with (out / "g_terms.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "f_dirac_sq", "g_naive", "g_noncrossed", "g_crossed"])
        for kk in k:
            one_minus_cos = 2 * math.sin(kk * a / 2) ** 2
            w.writerow([_f(kk), _f(kk * kk), _f(math.sin(kk * a) ** 2 / a**2),
                        _f((r / a) ** 2 * one_minus_cos**2), _f(2 * m * (r / a) * one_minus_cos)])
    with (out / "temporal_doublers.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "exists", "omega_plus", "Omega_plus"])
        for kk in k:
            try:
                td = spectral.temporal_doublers(p, kk)
                w.writerow([_f(kk), 1, _f(td.omega_plus), _f(td.Omega_plus)])
            except spectral.NoRealFrequency:
                w.writerow([_f(kk), 0, "nan", "nan"])
    report.add(_params_line(p))
    counts = {}
    for model, c in zip(models, curves):
        dr = spectral.doubling_report(model, p, n)
        counts[model.name] = dr.zero_count
        report.add(f"{model.name}: zeros {dr.zero_count} at {[round(z, 12) for z in dr.zeros]}")
    ratio = spectral.lgt_quartic_halving_ratio(p, 0.1)
    report.add(f"LGT quartic expansion: residual halving ratio at k_max = 0.1 is {ratio:.3f} (64 for a pure k^6 remainder)")
    if cfg["plot_script"]:
        (out / "plot_supplemental.py").write_text(PLOT_SCRIPT.format(csv="combined.csv", png="supplemental.png"))
    ok = counts["Naive"] == 3 and counts["LGT"] == 1 and counts["LGT-noncrossed"] == 1
    return EXIT_OK if ok else EXIT_CONSTRAINT


RUNNERS = {
    "check": run_check,
    "evolve": run_evolve,
    "dispersion": run_dispersion,
    "doubling": run_doubling,
    "slope": run_slope,
    "sweep": run_sweep,
    "figure1": run_figure1,
    "figure-supplemental": run_figure_supplemental,
}


def run(cfg: RunConfig, echo: bool = True) -> int:
    try:
        out = io.ensure_writable(cfg.output_dir)
        report = Report(f"diracwalk {cfg.experiment}")
        code = RUNNERS[cfg.experiment](cfg, out, report)
        report.add(f"exit {code}")
        report.write(out)
    except (OSError, ValueError, RepresentationError, ParameterError) as exc:
        if isinstance(exc, spectral.NoRealFrequency):
            code = EXIT_NO_FREQUENCY
        else:
            code = EXIT_CONFIG
        print(f"error: {exc}", file=sys.stderr)
        return code
    if echo:
        print("\n".join(report.lines))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracwalk",
        description="Unitary quantum-walk discretisation of the 1+1D Dirac equation: checks, evolution, dispersion.",
        epilog=config_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*EXPERIMENTS, "run"):
        helptext = "run the experiment named in the config" if name == "run" else f"run the {name} experiment"
        sp = sub.add_parser(name, help=helptext, epilog=config_help(),
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("--config", required=True, help="key = value config file")
        sp.add_argument("--out", help="output directory (overrides output_dir)")
        sp.add_argument("--seed", type=int, help="seed (overrides seed)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command != "run" and args.command != cfg.experiment:
        print(f"config error: subcommand {args.command!r} but config sets experiment = {cfg.experiment!r}",
              file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        cfg.values["output_dir"] = args.out
    if args.seed is not None:
        cfg.values["seed"] = args.seed
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
