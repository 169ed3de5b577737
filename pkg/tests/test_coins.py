import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracwalk.clifford import anticommutator, pauli_representation, random_representation
from diracwalk.coins import (LAMBDA_ONE_MESSAGE, ModelParams, ParameterError, Variant, build_coins, check_unitarity,
                             coins_from_jump, coins_from_transport, hamiltonian_blocks, jump_from_transport,
                             normalization_factors, transport_from_jump)

PAULI = pauli_representation()
FIG1 = ModelParams(epsilon=0.1, mass=1.0, wilson_r=1.0, rho=0.6, lam=0)
Q0 = ModelParams(epsilon=0.1, mass=1.0, variant=Variant.MASSIVE_Q0)

# direct closed-form evaluations at eps=0.1, m=r=1, rho=0.6
MU = 0.9950371902099892
NU0, ETA0 = 0.912470020, 0.940816211
NU2, ETA2 = 0.935980795, 0.965057356


def test_mu_value():
    assert normalization_factors(FIG1).mu == pytest.approx(MU, abs=1e-15)
    assert normalization_factors(Q0).mu == pytest.approx(1 / math.sqrt(1.01), abs=1e-15)


@pytest.mark.parametrize("lam,nu,eta", [(0, NU0, ETA0), (2, NU2, ETA2)])
def test_nu_eta_values(lam, nu, eta):
    n = normalization_factors(FIG1.with_(lam=lam))
    assert n.nu == pytest.approx(nu, abs=1e-9)
    assert n.eta == pytest.approx(eta, abs=1e-9)


def test_trivial_normalizations():
    n = normalization_factors(ModelParams(epsilon=0.3, mass=0.0, wilson_r=0.0))
    assert (n.mu, n.nu, n.eta) == (1.0, 1.0, 1.0)


def test_lambda_one_rejected():
    with pytest.raises(ParameterError, match="lambda"):
        ModelParams(lam=1)
    assert "lambda" in LAMBDA_ONE_MESSAGE


@pytest.mark.parametrize("kwargs", [dict(epsilon=0), dict(epsilon=-0.1), dict(mass=-1), dict(rho=0),
                                    dict(lam=3), dict(epsilon=float("nan"))])
def test_invalid_params(kwargs):
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


def test_rho_warnings():
    assert any("rho >= 1" in w for w in FIG1.with_(rho=1.2).criteria_warnings())
    assert any("rho <= 0.5" in w for w in FIG1.with_(rho=0.4).criteria_warnings())
    assert FIG1.criteria_warnings() == []


def test_massive_q0_mass_coin_unitary():
    c = build_coins(PAULI, Q0)
    assert np.max(np.abs(c.M.conj().T @ c.M - np.eye(2))) <= 1e-14


def test_massive_q0_massless_coins():
    c = build_coins(PAULI, Q0.with_(mass=0.0))
    assert np.array_equal(c.M, np.eye(2))
    assert np.array_equal(c.B, PAULI.alpha1)
    assert np.array_equal(c.V, np.eye(2))


def test_transport_jump_round_trip():
    c = build_coins(random_representation(3), FIG1)
    b, v, m = transport_from_jump(*jump_from_transport(c.B, c.V, c.M))
    assert np.allclose(b, c.B) and np.allclose(v, c.V) and np.allclose(m, c.M)


def test_default_constraints_pass():
    report = check_unitarity(build_coins(PAULI, FIG1), 1e-12)
    assert report.passed
    assert len(report.residuals) == 11
    assert "overall" in report.to_text()


def test_doubled_w_plus_flags_completeness():
    c = build_coins(PAULI, FIG1)
    bad = coins_from_jump(PAULI, FIG1, c.W_minus, c.W_zero, 2 * c.W_plus)
    report = check_unitarity(bad, 1e-12)
    assert not report.passed
    assert "sum-to-identity" in report.failures()


def test_lambda_one_ansatz_breaks_hermiticity_constraint():
    p = FIG1
    n = normalization_factors(p)
    s = p.epsilon**p.rho * p.wilson_r
    V = n.nu * (np.eye(2) + 1j * s * PAULI.alpha1)
    B = n.eta * PAULI.alpha1
    M = n.mu * (np.eye(2) - 1j * p.epsilon * p.mass * PAULI.alpha0)
    report = check_unitarity(coins_from_transport(PAULI, p, B, V, M), 1e-12)
    assert "BdV=VdB" in report.failures()


params_strategy = st.builds(
    ModelParams,
    epsilon=st.floats(1e-3, 1.0),
    mass=st.floats(0.0, 5.0),
    wilson_r=st.floats(-3.0, 3.0),
    rho=st.floats(0.05, 1.5),
    lam=st.sampled_from([0, 2]),
    variant=st.sampled_from(list(Variant)),
)


@settings(max_examples=150, deadline=None)
@given(params_strategy, st.integers(0, 10_000))
def test_unitarity_holds_for_any_params(p, seed):
    assert check_unitarity(build_coins(random_representation(seed), p), 1e-12).passed


@settings(max_examples=100, deadline=None)
@given(params_strategy)
def test_block_algebra_for_any_params(p):
    blocks = hamiltonian_blocks(build_coins(PAULI, p))
    assert max(blocks.algebra.values()) <= 1e-12


def test_massive_q0_blocks():
    b = hamiltonian_blocks(build_coins(PAULI, Q0))
    mu = normalization_factors(Q0).mu
    assert np.allclose(b.A0, mu * PAULI.alpha0, atol=1e-15)
    assert np.allclose(b.A1, mu * PAULI.alpha1, atol=1e-15)
    assert np.array_equal(b.wilson_block, np.zeros((2, 2)))


def test_wilson_block_anticommutator_with_mass_block():
    b0 = hamiltonian_blocks(build_coins(PAULI, FIG1))
    ac = anticommutator(b0.A0, b0.wilson_block)
    assert abs(ac[0, 0]) > 0.1
    assert np.allclose(ac, ac[0, 0] * np.eye(2), atol=1e-15)
    b2 = hamiltonian_blocks(build_coins(PAULI, FIG1.with_(lam=2)))
    assert np.max(np.abs(anticommutator(b2.A0, b2.wilson_block))) <= 1e-15


def test_lambda_two_needs_third_matrix():
    from diracwalk.clifford import CliffordRep
    rep = CliffordRep(PAULI.alpha0, PAULI.alpha1)
    build_coins(rep, FIG1)
    with pytest.raises(Exception):
        build_coins(rep, FIG1.with_(lam=2))


def test_vanishing_v_incompatible_with_transport():
    # V = 0 forces B^dag B = 0, i.e. no hopping at all
    n = normalization_factors(FIG1)
    z = np.zeros((2, 2), dtype=complex)
    B = n.eta * PAULI.alpha1
    M = n.mu * (np.eye(2) - 1j * FIG1.epsilon * FIG1.mass * PAULI.alpha0)
    report = check_unitarity(coins_from_transport(PAULI, FIG1, B, z, M), 1e-12)
    assert "VdV=BdB" in report.failures()
