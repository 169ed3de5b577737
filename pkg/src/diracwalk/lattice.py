"""Periodic N-site lattice: walk operator, local Hamiltonian, momentum symbols.

Shift convention: ``(T1 psi)_p = psi_{p-1}``, hence ``T1 -> exp(-i k eps)`` on
plane waves ``exp(i k p eps)``.  Every nearest-neighbour operator here is a
``BandOperator`` made of three d x d blocks::

    (A psi)_p = left psi_{p+1} + center psi_p + right psi_{p-1}

so ``left`` multiplies T1^{-1} and ``right`` multiplies T1.  Dense matrices
are built only as test oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import CliffordRep, max_abs
from .coins import CoinSet, HamiltonianBlocks, ModelParams, build_coins, hamiltonian_blocks
from .spectral import BZ_SLACK, BrillouinZoneError, ModelTag, dqw_F, dqw_params

DENSE_LIMIT = 64


@dataclass(frozen=True)
class LatticeState:
    amplitudes: np.ndarray
    step_index: int = 0

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 2:
            raise ValueError(f"amplitudes must have shape (N, d), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def sites(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "LatticeState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return LatticeState(self.amplitudes / n, self.step_index)

    def transformed(self, s: np.ndarray) -> "LatticeState":
        """Apply the same coin-space matrix on every site."""
        return LatticeState(self.amplitudes @ np.asarray(s).T, self.step_index)


def delta_state(sites: int, dim: int, site: int, spinor=None) -> LatticeState:
    a = np.zeros((sites, dim), dtype=complex)
    spinor = np.eye(dim)[0] if spinor is None else np.asarray(spinor, dtype=complex)
    a[site % sites] = spinor / np.linalg.norm(spinor)
    return LatticeState(a)


def random_state(sites: int, dim: int, seed: int, support=None) -> LatticeState:
    """Normalised Gaussian random state, optionally restricted to a site range."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((sites, dim)) + 1j * rng.standard_normal((sites, dim))
    if support is not None:
        mask = np.zeros(sites, dtype=bool)
        mask[list(support)] = True
        a[~mask] = 0
    return LatticeState(a).normalized()


@dataclass(frozen=True)
class BandOperator:
    sites: int
    left: np.ndarray
    center: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        if self.sites < 3:
            raise ValueError("need at least 3 sites so the band does not overlap itself")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi)
        if psi.shape != (self.sites, self.dim):
            raise ValueError(f"state shape {psi.shape} does not match operator {(self.sites, self.dim)}")
        return (
            np.roll(psi, -1, axis=0) @ self.left.T
            + psi @ self.center.T
            + np.roll(psi, 1, axis=0) @ self.right.T
        )

    def adjoint(self) -> "BandOperator":
        # (A^dag)_{p,p+1} = (A_{p+1,p})^dag, and A_{p+1,p} is the ``right`` block.
        return BandOperator(self.sites, self.right.conj().T, self.center.conj().T, self.left.conj().T)

    def dense(self) -> np.ndarray:
        if self.sites > DENSE_LIMIT:
            raise ValueError(f"dense materialisation is limited to N <= {DENSE_LIMIT}")
        n, d = self.sites, self.dim
        out = np.zeros((n * d, n * d), dtype=complex)
        for p in range(n):
            rows = slice(p * d, (p + 1) * d)
            for q, block in (((p + 1) % n, self.left), (p, self.center), ((p - 1) % n, self.right)):
                out[rows, q * d:(q + 1) * d] += block
        return out


@dataclass(frozen=True)
class WalkOperator:
    """U = W_-1 T1^{-1} + W_1 T1 + W_0 on a periodic lattice."""

    sites: int
    coins: CoinSet

    @property
    def band(self) -> BandOperator:
        c = self.coins
        return BandOperator(self.sites, c.W_minus, c.W_zero, c.W_plus)

    @property
    def dim(self) -> int:
        return self.coins.dim

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.band.apply(psi)

    def apply_adjoint(self, psi: np.ndarray) -> np.ndarray:
        return self.band.adjoint().apply(psi)

    def dense(self) -> np.ndarray:
        return self.band.dense()


def build_walk_operator(coins: CoinSet, sites: int) -> WalkOperator:
    if sites < 3:
        raise ValueError("need N >= 3: the three-site band would overlap itself")
    return WalkOperator(sites, coins)


def identity_coins(coins: CoinSet) -> CoinSet:
    """Same parameters, W_0 = 1 and W_{+-1} = 0 (U acts as the identity)."""
    from .coins import coins_from_jump

    d = coins.dim
    z = np.zeros((d, d), dtype=complex)
    return coins_from_jump(coins.rep, coins.params, z, np.eye(d, dtype=complex), z, coins.norms)


def walk_unitarity_residuals(walk: WalkOperator) -> tuple[float, float]:
    """(||U^dag U - 1||, ||U U^dag - 1||) from the dense oracle."""
    u = walk.dense()
    eye = np.eye(u.shape[0])
    ud = u.conj().T
    return max_abs(ud @ u - eye), max_abs(u @ ud - eye)


@dataclass(frozen=True)
class LocalHamiltonian:
    blocks: HamiltonianBlocks
    sites: int
    band: BandOperator
    construction_residual: float

    def apply(self, psi):
        return self.band.apply(psi)

    def dense(self):
        return self.band.dense()


def hamiltonian_from_walk(walk: WalkOperator) -> BandOperator:
    """(i/2)(U - U^dag) as a band operator."""
    u, ud = walk.band, walk.band.adjoint()
    return BandOperator(
        walk.sites,
        0.5j * (u.left - ud.left),
        0.5j * (u.center - ud.center),
        0.5j * (u.right - ud.right),
    )


def hamiltonian_from_blocks(blocks: HamiltonianBlocks, eps_m: float, sites: int) -> BandOperator:
    """A1(-i D1) + wilson(-L) + eps m A0 with D1 = (T^-1 - T)/2, L = T^-1 + T - 2."""
    A1, W = blocks.A1, blocks.wilson_block
    return BandOperator(sites, -0.5j * A1 - W, 2 * W + eps_m * blocks.A0, 0.5j * A1 - W)


def local_hamiltonian(walk: WalkOperator, tol: float = 1e-12) -> LocalHamiltonian:
    """Build H both ways and require entrywise agreement of the band blocks."""
    blocks = hamiltonian_blocks(walk.coins)
    from_walk = hamiltonian_from_walk(walk)
    p = walk.coins.params
    assembled = hamiltonian_from_blocks(blocks, p.epsilon * p.mass, walk.sites)
    resid = max(
        max_abs(from_walk.left - assembled.left),
        max_abs(from_walk.center - assembled.center),
        max_abs(from_walk.right - assembled.right),
    )
    if resid > tol:
        raise ValueError(f"walk and block constructions of H disagree by {resid:.3g}")
    return LocalHamiltonian(blocks, walk.sites, assembled, resid)


def hermiticity_residual(band: BandOperator) -> float:
    adj = band.adjoint()
    return max(max_abs(band.left - adj.left), max_abs(band.center - adj.center), max_abs(band.right - adj.right))


# --- momentum space -------------------------------------------------------

def _zone_check(eps: float, k: float):
    if abs(k) > math.pi / eps * (1 + BZ_SLACK):
        raise BrillouinZoneError(f"k = {k} outside [-pi/eps, pi/eps]")


def momentum_symbol(coins: CoinSet, k: float) -> np.ndarray:
    """h~(k): the symbol of H/eps with -i D1 -> sin(k eps), -L -> 2(1 - cos(k eps))."""
    p = coins.params
    eps = p.epsilon
    _zone_check(eps, k)
    blocks = hamiltonian_blocks(coins)
    return (
        blocks.A1 * math.sin(k * eps)
        + blocks.wilson_block * (4 * math.sin(k * eps / 2) ** 2)
        + eps * p.mass * blocks.A0
    ) / eps


def walk_symbol(coins: CoinSet, k: float) -> np.ndarray:
    """U~(k) = W_-1 e^{i k eps} + W_1 e^{-i k eps} + W_0."""
    eps = coins.params.epsilon
    return coins.W_minus * np.exp(1j * k * eps) + coins.W_plus * np.exp(-1j * k * eps) + coins.W_zero


def symbol_square_residual(coins: CoinSet, k_grid) -> float:
    """max_k ||h~(k)^2 - F(k) 1|| for the closed-form F of these coins."""
    eye = np.eye(coins.dim)
    worst = 0.0
    for k in np.asarray(k_grid, dtype=float):
        h = momentum_symbol(coins, k)
        worst = max(worst, max_abs(h @ h - float(dqw_F(coins.params, k)) * eye))
    return worst


def model_symbol(model: ModelTag, params: ModelParams, k: float, rep: CliffordRep) -> np.ndarray:
    """Momentum-space Hamiltonian of any of the compared models."""
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    if model.kind == "Dirac":
        return rep.alpha1 * k + m * rep.alpha0
    if model.kind == "DQW":
        return momentum_symbol(build_coins(rep, dqw_params(params, model.lam)), k)
    _zone_check(eps, k)
    transport = rep.alpha1 * math.sin(k * eps) / eps
    wilson = (r / eps) * (1 - math.cos(k * eps))
    if model.kind == "Naive":
        return transport + m * rep.alpha0
    if model.kind == "LGT":
        return transport + (m + wilson) * rep.alpha0
    return transport + m * rep.alpha0 + wilson * rep.alpha(2)


def symbol_F(model: ModelTag, params: ModelParams, k: float, rep: CliffordRep) -> float:
    """Largest squared eigenvalue of the model symbol (diagonalisation oracle)."""
    ev = np.linalg.eigvalsh(model_symbol(model, params, k, rep))
    return float(np.max(ev**2))


def symbol_gapless_frequency(model: ModelTag, params: ModelParams, k: float, rep: CliffordRep) -> float:
    return math.sqrt(max(symbol_F(model, params, k, rep) - symbol_F(model, params, 0.0, rep), 0.0))


def lattice_momenta(sites: int, eps: float) -> np.ndarray:
    """k_q = 2 pi q / (N eps) for q = -floor(N/2) .. ceil(N/2) - 1."""
    q = np.arange(-(sites // 2), sites - sites // 2)
    return 2 * math.pi * q / (sites * eps)
