"""Coin operators of the Dirac quantum walk.

Two constructions share the same mass coin ``M = mu (1 - i eps m alpha0)``:

* ``MassiveQ0``: ``B = mu alpha1``, ``V = mu`` (Hermitian V, so no Wilson term);
* ``WilsonLambda``: ``V = nu (1 + i eps^rho r alpha^lam)``, ``B = eta alpha1``
  with lam in {0, 2}.

Jump coins follow from ``W_{+-1} = (V +- B)/2`` and ``W_0 = M - V``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .clifford import DEFAULT_TOL, CliffordRep, anticommutator, max_abs, verify_algebra


class Variant(str, enum.Enum):
    MASSIVE_Q0 = "MassiveQ0"
    WILSON_LAMBDA = "WilsonLambda"


class ParameterError(ValueError):
    pass


class CoinConsistencyError(ValueError):
    """Closed-form blocks disagree with the quotient definitions."""


LAMBDA_ONE_MESSAGE = (
    "lambda = 1 is forbidden: the unitarity constraint B^dag V = V^dag B requires lambda != 1"
)


@dataclass(frozen=True)
class ModelParams:
    epsilon: float = 0.1
    mass: float = 1.0
    wilson_r: float = 1.0
    rho: float = 0.6
    lam: int = 0
    variant: Variant = Variant.WILSON_LAMBDA

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ParameterError(f"epsilon must be positive and finite, got {self.epsilon}")
        if not self.mass >= 0:
            raise ParameterError(f"mass must be nonnegative, got {self.mass}")
        if not math.isfinite(self.wilson_r):
            raise ParameterError("wilson_r must be finite")
        if self.variant is Variant.WILSON_LAMBDA:
            if self.lam == 1:
                raise ParameterError(LAMBDA_ONE_MESSAGE)
            if self.lam not in (0, 2):
                raise ParameterError(f"lambda must be 0 or 2, got {self.lam}")
            if not self.rho > 0:
                raise ParameterError(f"rho must be positive, got {self.rho}")

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def criteria_warnings(self) -> list[str]:
        """Flags for rho outside ]0.5, 1[ (only meaningful for the Wilson model)."""
        if self.variant is not Variant.WILSON_LAMBDA:
            return []
        out = []
        if self.rho >= 1:
            out.append("doubling criterion violated (rho >= 1): raising amplitude vanishes as epsilon -> 0")
        if self.rho <= 0.5:
            out.append("convergence criterion violated (rho <= 0.5): initial slope converges no faster than LGT")
        return out


@dataclass(frozen=True)
class Normalizations:
    mu: float
    nu: float
    eta: float


def normalization_factors(params: ModelParams) -> Normalizations:
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    mu = 1.0 / math.sqrt(1.0 + (eps * m) ** 2)
    if params.variant is Variant.MASSIVE_Q0:
        return Normalizations(mu, mu, mu)
    s = eps**params.rho * r
    if params.lam == 0:
        nu = mu * (1.0 - eps ** (1.0 + params.rho) * m * r) / (1.0 + s * s)
    else:
        nu = mu / (1.0 + s * s)
    return Normalizations(mu, nu, nu * math.sqrt(1.0 + s * s))


@dataclass(frozen=True)
class CoinSet:
    params: ModelParams
    rep: CliffordRep
    B: np.ndarray
    V: np.ndarray
    M: np.ndarray
    W_minus: np.ndarray
    W_zero: np.ndarray
    W_plus: np.ndarray
    norms: Normalizations

    @property
    def dim(self) -> int:
        return self.rep.dim

    def jump(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.W_minus, self.W_zero, self.W_plus


def jump_from_transport(B, V, M):
    """(W_-1, W_0, W_1) from (B, V, M)."""
    return (V - B) / 2, M - V, (V + B) / 2


def transport_from_jump(w_minus, w_zero, w_plus):
    """(B, V, M) from (W_-1, W_0, W_1)."""
    V = w_plus + w_minus
    return w_plus - w_minus, V, V + w_zero


def coins_from_transport(rep, params, B, V, M, norms=None) -> CoinSet:
    """Assemble a CoinSet from arbitrary transport coins (no validation).

    Used to probe failure modes, e.g. a forbidden lambda = 1 ansatz.
    """
    norms = normalization_factors(params) if norms is None else norms
    wm, w0, wp = jump_from_transport(B, V, M)
    return CoinSet(params, rep, B, V, M, wm, w0, wp, norms)


def coins_from_jump(rep, params, w_minus, w_zero, w_plus, norms=None) -> CoinSet:
    norms = normalization_factors(params) if norms is None else norms
    B, V, M = transport_from_jump(w_minus, w_zero, w_plus)
    return CoinSet(params, rep, B, V, M, w_minus, w_zero, w_plus, norms)


def build_coins(rep: CliffordRep, params: ModelParams, tol: float = 1e-10) -> CoinSet:
    alg = verify_algebra(rep, tol)
    if not alg.passed:
        raise ParameterError(f"representation {rep.label!r} fails the Clifford algebra (worst {alg.worst:.3g})")
    norms = normalization_factors(params)
    eps, m = params.epsilon, params.mass
    eye = np.eye(rep.dim, dtype=complex)
    M = norms.mu * (eye - 1j * eps * m * rep.alpha0)
    if params.variant is Variant.MASSIVE_Q0:
        B = norms.mu * rep.alpha1
        V = norms.mu * eye
    else:
        alpha_lam = rep.alpha(params.lam)
        V = norms.nu * (eye + 1j * eps**params.rho * params.wilson_r * alpha_lam)
        B = norms.eta * rep.alpha1
    return coins_from_transport(rep, params, B, V, M, norms)


@dataclass(frozen=True)
class ConstraintReport:
    residuals: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL
    warnings: tuple = ()

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.residuals.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v > self.tolerance]

    def to_text(self) -> str:
        """One ``name residual pass`` line per constraint, plus a summary line."""
        lines = [f"{k} {v:.6e} {'pass' if v <= self.tolerance else 'FAIL'}" for k, v in self.residuals.items()]
        lines.append(f"overall {max(self.residuals.values(), default=0.0):.6e} {'pass' if self.passed else 'FAIL'}")
        lines.extend(f"# warning: {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"


def _dag(a):
    return a.conj().T


def check_unitarity(coins: CoinSet, tol: float = DEFAULT_TOL) -> ConstraintReport:
    """Residuals of every coin-level unitarity identity.

    Three jump-level identities from U^dag U = 1, the five transport-level
    identities they are equivalent to, and the three mirrored jump-level
    identities from U U^dag = 1.
    """
    wm, w0, wp = coins.jump()
    B, V, M = coins.B, coins.V, coins.M
    eye = np.eye(coins.dim)
    res = {
        "sum-to-identity": max_abs(_dag(wm) @ wm + _dag(wp) @ wp + _dag(w0) @ w0 - eye),
        "cross-zero-neighbour": max_abs(_dag(wm) @ w0 + _dag(w0) @ wp),
        "cross-two-step": max_abs(_dag(wm) @ wp),
        "VdV=BdB": max_abs(_dag(V) @ V - _dag(B) @ B),
        "BdV=VdB": max_abs(_dag(B) @ V - _dag(V) @ B),
        "2VdV=VdM+MdV": max_abs(2 * _dag(V) @ V - _dag(V) @ M - _dag(M) @ V),
        "BdM=MdB": max_abs(_dag(B) @ M - _dag(M) @ B),
        "MdM=1": max_abs(_dag(M) @ M - eye),
        "UUdag:sum-to-identity": max_abs(wm @ _dag(wm) + wp @ _dag(wp) + w0 @ _dag(w0) - eye),
        "UUdag:cross-zero-neighbour": max_abs(w0 @ _dag(wm) + wp @ _dag(w0)),
        "UUdag:cross-two-step": max_abs(wp @ _dag(wm)),
    }
    return ConstraintReport(res, tol, tuple(coins.params.criteria_warnings()))


@dataclass(frozen=True)
class HamiltonianBlocks:
    """Coin blocks of H = A1 (-i D1) + wilson_block (-L) + eps m A0."""

    A0: np.ndarray
    A1: np.ndarray
    wilson_block: np.ndarray
    algebra: dict = field(default_factory=dict)
    cross_checks: dict = field(default_factory=dict)


def hamiltonian_blocks(coins: CoinSet, tol: float = 1e-12) -> HamiltonianBlocks:
    """Closed-form blocks, cross-checked against the quotient definitions.

    A0 = mu alpha0 is primary; eps m A0 = i(M - M^dag)/2 is only a check, and is
    skipped when eps m = 0.  Likewise the Wilson block nu eps^rho (r/2)
    alpha^lam is checked against -(i/2)(V - V^dag)/2.
    """
    p, n, rep = coins.params, coins.norms, coins.rep
    eps, m = p.epsilon, p.mass
    A0 = n.mu * rep.alpha0
    A1 = (coins.B + _dag(coins.B)) / 2
    if p.variant is Variant.MASSIVE_Q0:
        wilson = np.zeros((rep.dim, rep.dim), dtype=complex)
    else:
        wilson = n.nu * eps**p.rho * (p.wilson_r / 2) * rep.alpha(p.lam)

    checks = {"wilson_quotient": max_abs(wilson - (-0.5j) * (coins.V - _dag(coins.V)) / 2)}
    if eps * m != 0:
        # multiplied through by eps m so that tiny masses do not overflow
        checks["A0_quotient"] = max_abs(eps * m * A0 - 0.5j * (coins.M - _dag(coins.M)))
    bad = {k: v for k, v in checks.items() if v > tol}
    if bad:
        raise CoinConsistencyError(f"closed-form blocks disagree with coins: {bad}")

    eye = np.eye(rep.dim)
    algebra = {
        "A0^2-mu^2": max_abs(A0 @ A0 - n.mu**2 * eye),
        "A1^2-eta^2": max_abs(A1 @ A1 - n.eta**2 * eye),
        "{A0,A1}": max_abs(anticommutator(A0, A1)),
        "{W,A1}": max_abs(anticommutator(wilson, A1)),
    }
    for name, mat in (("A0", A0), ("A1", A1), ("wilson", wilson)):
        algebra[f"hermitian[{name}]"] = max_abs(mat - _dag(mat))
    return HamiltonianBlocks(A0, A1, wilson, algebra, checks)
