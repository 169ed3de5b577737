"""Acceptance gate: one recorded PASS/FAIL line per criterion, at the contract tolerances."""
import itertools
import math
import time

import numpy as np
import pytest

from diracwalk import spectral
from diracwalk.clifford import conjugate, gamma_operators, pauli_representation, random_representation, random_unitary
from diracwalk.coins import ModelParams, build_coins, check_unitarity, hamiltonian_blocks
from diracwalk.dynamics import (WavePacket, evolve_one_step, evolve_two_step, group_velocity_estimate,
                                make_wave_packet, position_distribution, support)
from diracwalk.lattice import (LatticeState, build_walk_operator, delta_state, random_state,
                               symbol_gapless_frequency, walk_unitarity_residuals)
from diracwalk.spectral import DIRAC, DQW, LGT, NAIVE, NoRealFrequency

TOL = 1e-12
GRID = dict(eps=(1.0, 0.1, 0.01), m=(0.0, 0.5, 1.0), r=(-2.0, -1.0, 0.0, 0.5, 1.0, 2.0),
            rho=(0.3, 0.6, 0.9), lam=(0, 2))
REPS = [random_representation(seed) for seed in range(5)]
FIG1 = ModelParams(epsilon=0.1, mass=1.0, wilson_r=1.0, rho=0.6, lam=0)


def param_grid():
    for eps, m, r, rho, lam in itertools.product(*GRID.values()):
        yield ModelParams(epsilon=eps, mass=m, wilson_r=r, rho=rho, lam=lam)


def test_c1_unitarity_for_any_r(criterion):
    t0 = time.perf_counter()
    worst_coin = worst_walk = 0.0
    count = 0
    for p in param_grid():
        for rep in REPS:
            coins = build_coins(rep, p)
            worst_coin = max(worst_coin, max(check_unitarity(coins, TOL).residuals.values()))
            worst_walk = max(worst_walk, *walk_unitarity_residuals(build_walk_operator(coins, 32)))
            count += 1
    dt = time.perf_counter() - t0
    ok = worst_coin <= TOL and worst_walk <= TOL and dt < 10
    criterion("C1 unitarity", ok, f"{count} configs, worst coin residual {worst_coin:.2e}, "
              f"worst walk residual (N=32) {worst_walk:.2e}", dt)
    assert ok


def test_c2_clifford_emergence(criterion):
    t0 = time.perf_counter()
    worst_block = worst_gamma = 0.0
    for p in param_grid():
        for rep in REPS:
            coins = build_coins(rep, p)
            blocks = hamiltonian_blocks(coins)
            worst_block = max(worst_block, max(blocks.algebra.values()))
            worst_gamma = max(worst_gamma, gamma_operators(rep, coins.norms.mu)[2])
    dt = time.perf_counter() - t0
    ok = worst_block <= TOL and worst_gamma <= TOL and dt < 5
    criterion("C2 Clifford emergence", ok,
              f"worst block-algebra residual {worst_block:.2e}, worst metric residual {worst_gamma:.2e}", dt)
    assert ok


def test_c3_representation_invariance(criterion):
    t0 = time.perf_counter()
    pauli = pauli_representation()
    s = random_unitary(2, 11)
    haar = conjugate(pauli, s)
    k_grid = spectral.brillouin_grid(FIG1, 101)
    curve_dev = 0.0
    for lam in (0, 2):
        model = DQW(lam)
        a = np.array([symbol_gapless_frequency(model, FIG1, k, pauli) for k in k_grid])
        b = np.array([symbol_gapless_frequency(model, FIG1, k, haar) for k in k_grid])
        curve_dev = max(curve_dev, float(np.max(np.abs(a - b))))

    walk_p = build_walk_operator(build_coins(pauli, FIG1), 128)
    walk_h = build_walk_operator(build_coins(haar, FIG1), 128)
    psi = random_state(128, 2, seed=3, support=range(60, 68))
    tp = evolve_one_step(walk_p, psi, 100)
    th = evolve_one_step(walk_h, psi.transformed(s), 100)
    dist_dev = max(float(np.max(np.abs(position_distribution(x) - position_distribution(y))))
                   for x, y in zip(tp.states, th.states))
    dt = time.perf_counter() - t0
    ok = curve_dev <= TOL and dist_dev <= TOL and dt < 5
    criterion("C3 representation invariance", ok,
              f"max curve deviation {curve_dev:.2e}, max distribution deviation {dist_dev:.2e}", dt)
    assert ok


def test_c4_figure1(criterion):
    t0 = time.perf_counter()
    rep = pauli_representation()
    models = (DIRAC, NAIVE, LGT, DQW(0))
    curves = {m.name: spectral.dispersion_curve(m, FIG1, 1001) for m in models}
    counts = {m.name: spectral.doubling_report(m, FIG1, 1001).zero_count for m in models}
    f0 = max(abs(float(spectral.gapless_frequency(m, FIG1, 0.0))) for m in models)
    edge = math.pi / FIG1.epsilon
    f_lgt = float(curves["LGT"].f_values[-1])
    f_dqw = float(curves["DQW0"].f_values[-1])
    oracle_lgt = symbol_gapless_frequency(LGT, FIG1, edge, rep)
    oracle_dqw = symbol_gapless_frequency(DQW(0), FIG1, edge, rep)
    dt = time.perf_counter() - t0
    ok = (f0 == 0.0 and counts["Naive"] == 3 and counts["LGT"] == 1 and counts["DQW0"] == 1
          and abs(f_lgt - math.sqrt(440)) <= 1e-9 and abs(f_lgt - oracle_lgt) <= 1e-9
          and abs(f_dqw - 5.4896) < 5e-5 and abs(f_dqw - oracle_dqw) <= 1e-9 and dt < 1)
    criterion("C4 figure-1 curves", ok,
              f"zeros naive/LGT/DQW = {counts['Naive']}/{counts['LGT']}/{counts['DQW0']}, "
              f"f_LGT(pi/eps) = {f_lgt:.10f} (oracle diff {abs(f_lgt - oracle_lgt):.1e}), "
              f"f_DQW(pi/eps) = {f_dqw:.10f} (oracle diff {abs(f_dqw - oracle_dqw):.1e})", dt)
    assert ok


SWEEP = [0.1, 0.03, 0.01, 0.003]
LGT_NOISE_FLOOR = 1e-9


def test_c5_slope_laws(criterion):
    t0 = time.perf_counter()
    tables = {m.name: spectral.convergence_study(m, FIG1, SWEEP) for m in (DQW(0), DQW(2), LGT)}
    details, ok = [], True
    for name, table in tables.items():
        rel = [row["relative_error"] for row in table.rows]
        if name == "LGT":
            # the fit reproduces 1 + eps m r to round-off, so only the floor can be checked
            shrinking = all(b < a or b < LGT_NOISE_FLOOR for a, b in zip(rel, rel[1:]))
            target = 1.0
        else:
            shrinking = all(b < a for a, b in zip(rel, rel[1:]))
            target = 2 * FIG1.rho
        order_ok = abs(table.order - target) <= 0.25
        ok &= shrinking and order_ok
        details.append(f"{name} order {table.order:.3f} (target {target:g}), rel. error {rel[-1]:.1e}")
    last = tables["DQW0"].rows[-1]
    ratio = abs(1 - last["fitted_slope"]) / last["lambda_gap"]
    ok &= ratio >= 10
    dt = time.perf_counter() - t0
    ok &= dt < 10
    criterion("C5 slope laws", ok, "; ".join(details) + f"; crossed-term ratio {ratio:.2f}", dt)
    assert ok


def test_c6_doubling_criterion(criterion):
    t0 = time.perf_counter()
    sweep = [0.1, 0.01, 0.001]
    lifted = spectral.raising_trend(DQW(0), FIG1, sweep)
    fading = spectral.raising_trend(DQW(0), FIG1.with_(rho=1.2), sweep)
    dt = time.perf_counter() - t0
    ok = lifted.bounded_below and fading.decaying and dt < 1
    criterion("C6 doubling criterion", ok,
              f"rho=0.6 amplitudes {[f'{a:.3g}' for a in lifted.amplitudes]}, "
              f"rho=1.2 amplitudes {[f'{a:.3g}' for a in fading.amplitudes]}", dt)
    assert ok


def test_c7_dynamics_invariants(criterion):
    t0 = time.perf_counter()
    coins = build_coins(random_representation(7), FIG1)

    n = 129
    walk = build_walk_operator(coins, n)
    traj = evolve_one_step(walk, delta_state(n, 2, 64, [1, 1j]), 60)
    cone = all(set(support(s)) <= set(range(64 - j, 64 + j + 1)) for j, s in enumerate(traj.states))

    long = evolve_one_step(build_walk_operator(coins, 128), random_state(128, 2, seed=1), 1000)
    drift = max(abs(s.norm() - 1.0) for s in long.states)

    psi0 = random_state(128, 2, seed=2)
    w128 = build_walk_operator(coins, 128)
    one = evolve_one_step(w128, psi0, 200)
    two = evolve_two_step(w128, psi0, LatticeState(w128.apply(psi0.amplitudes), 1), 200)
    scheme_dev = max(float(np.max(np.abs(a.amplitudes - b.amplitudes))) for a, b in zip(one.states, two.states))

    rng = np.random.default_rng(20)
    w256 = build_walk_operator(coins, 256)
    dk = 2 * math.pi / (256 * FIG1.epsilon)
    speeds = []
    for _ in range(20):
        k0 = rng.uniform(-0.95, 0.95) * math.pi / FIG1.epsilon
        packet = WavePacket(k0, rng.uniform(3, 15) * dk, str(rng.choice(["plus", "minus"])))
        speeds.append(group_velocity_estimate(evolve_one_step(w256, make_wave_packet(coins, 256, packet), 40)))
    vmax = max(abs(v) for v in speeds)
    dt = time.perf_counter() - t0
    ok = cone and drift <= 1e-10 and scheme_dev <= TOL and vmax <= 1 + 1e-9 and dt < 30
    criterion("C7 dynamics invariants", ok,
              f"light cone exact {cone}, norm drift (1000 steps) {drift:.1e}, "
              f"one/two-step deviation {scheme_dev:.1e}, max |v| {vmax:.6f}", dt)
    assert ok


def test_c8_supplemental(criterion):
    t0 = time.perf_counter()
    p = ModelParams(epsilon=0.5, mass=1.2)
    ks = spectral.brillouin_grid(p, 1001)
    agree = 0
    for k in ks:
        allowed = (p.epsilon * p.mass) ** 2 <= math.cos(k * p.epsilon) ** 2
        try:
            spectral.temporal_doublers(p, k)
            raised = False
        except NoRealFrequency:
            raised = True
        agree += raised != allowed
    boundary_ok = agree == len(ks)

    # the quartic polynomial is the complete quartic Taylor expansion only at m = 0
    ratio = spectral.lgt_quartic_halving_ratio(ModelParams(epsilon=1.0, mass=0.0, wilson_r=1.0), 0.1)
    ratio_m = spectral.lgt_quartic_halving_ratio(ModelParams(epsilon=1.0, mass=0.1, wilson_r=1.0), 0.1)

    sp = ModelParams(epsilon=1.0, mass=0.1, wilson_r=1.0)
    naive = spectral.doubling_report(NAIVE, sp, 1001).zero_count
    lgt = spectral.doubling_report(LGT, sp, 1001).zero_count
    dt = time.perf_counter() - t0
    ok = boundary_ok and 48 <= ratio <= 80 and naive == 3 and lgt == 1 and dt < 5
    criterion("C8 supplemental", ok,
              f"existence boundary {agree}/{len(ks)} points, quartic halving ratio {ratio:.2f} at m=0 "
              f"({ratio_m:.2f} at m=0.1, where a k^4 mass term is absent from the polynomial), "
              f"poles naive {naive}, LGT {lgt}", dt)
    assert ok


@pytest.mark.parametrize("eps", [1.0, 0.1])
def test_dqw_always_has_real_frequency(eps):
    p = FIG1.with_(epsilon=eps, mass=2.0)
    for k in spectral.brillouin_grid(p, 101):
        spectral.frequency_solutions(DQW(0), p, k)
