"""Time evolution on the lattice and wave-packet observables."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coins import CoinSet, ModelParams
from .lattice import LatticeState, WalkOperator, lattice_momenta, momentum_symbol


class Scheme(str, enum.Enum):
    ONE_STEP = "OneStep"
    TWO_STEP = "TwoStep"


@dataclass
class Trajectory:
    states: list
    params: ModelParams
    scheme: Scheme

    def __len__(self):
        return len(self.states)

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def amplitudes(self) -> np.ndarray:
        return np.stack([s.amplitudes for s in self.states])


def _check_shape(walk: WalkOperator, psi: LatticeState):
    if psi.amplitudes.shape != (walk.sites, walk.dim):
        raise ValueError(f"state shape {psi.amplitudes.shape} does not match walk {(walk.sites, walk.dim)}")


def evolve_one_step(walk: WalkOperator, psi0: LatticeState, steps: int) -> Trajectory:
    """psi_{j+1} = U psi_j."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    _check_shape(walk, psi0)
    states = [psi0]
    psi = psi0.amplitudes
    for j in range(1, steps + 1):
        psi = walk.apply(psi)
        states.append(LatticeState(psi, psi0.step_index + j))
    return Trajectory(states, walk.coins.params, Scheme.ONE_STEP)


def evolve_two_step(walk: WalkOperator, psi0: LatticeState, psi1: LatticeState, steps: int) -> Trajectory:
    """Centred-time scheme psi_{j+1} = psi_{j-1} + (U - U^dag) psi_j.

    Identical to the one-step walk when seeded with psi1 = U psi0.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    _check_shape(walk, psi0)
    if psi1.amplitudes.shape != psi0.amplitudes.shape:
        raise ValueError("psi0 and psi1 must have the same shape")
    states = [psi0]
    if steps == 0:
        return Trajectory(states, walk.coins.params, Scheme.TWO_STEP)
    states.append(LatticeState(psi1.amplitudes, psi0.step_index + 1))
    prev, cur = psi0.amplitudes, psi1.amplitudes
    for j in range(2, steps + 1):
        nxt = prev + walk.apply(cur) - walk.apply_adjoint(cur)
        states.append(LatticeState(nxt, psi0.step_index + j))
        prev, cur = cur, nxt
    return Trajectory(states, walk.coins.params, Scheme.TWO_STEP)


# --- wave packets -------------------------------------------------------

@dataclass(frozen=True)
class WavePacket:
    """Gaussian superposition of one eigenbranch of h~(k).

    ``width`` is the standard deviation of the momentum weight; ``None``
    means ten lattice momenta and ``0`` a single plane wave at the lattice
    momentum nearest ``center_k``.
    """

    center_k: float
    width: Optional[float] = None
    branch: str = "plus"
    center_site: Optional[int] = None

    def __post_init__(self):
        if self.branch not in ("plus", "minus"):
            raise ValueError("branch must be 'plus' or 'minus'")
        if self.width is not None and self.width < 0:
            raise ValueError("width must be nonnegative")


def branch_projector(coins: CoinSet, k: float, branch: str, degeneracy_tol: float = 1e-12) -> np.ndarray:
    """Spectral projector of h~(k) onto its nonnegative (plus) or negative (minus) part.

    Where the two branches touch (h~(k) = 0) the projector is taken from the
    limit k -> 0+, i.e. evaluated a tiny step to the right.
    """
    eps = coins.params.epsilon
    h = momentum_symbol(coins, k)
    w, v = np.linalg.eigh(h)
    if np.max(np.abs(w)) <= degeneracy_tol:
        kk = min(k + 1e-7 / eps, math.pi / eps)
        if kk == k:
            kk = k - 1e-7 / eps
        w, v = np.linalg.eigh(momentum_symbol(coins, kk))
    sel = w >= 0 if branch == "plus" else w < 0
    vs = v[:, sel]
    return vs @ vs.conj().T


def make_wave_packet(coins: CoinSet, sites: int, packet: WavePacket) -> LatticeState:
    eps = coins.params.epsilon
    if abs(packet.center_k) >= math.pi / eps:
        raise ValueError("|center_k| must be inside the open Brillouin zone")
    ks = lattice_momenta(sites, eps)
    dk = 2 * math.pi / (sites * eps)
    p0 = sites // 2 if packet.center_site is None else packet.center_site
    bz = 2 * math.pi / eps
    dist = (ks - packet.center_k + bz / 2) % bz - bz / 2
    width = 10 * dk if packet.width is None else packet.width
    if width == 0:
        weights = np.zeros_like(ks)
        weights[np.argmin(np.abs(dist))] = 1.0
    else:
        weights = np.exp(-0.5 * (dist / width) ** 2)

    # Fixed reference spinor projected onto the branch gives a smooth gauge in k.
    proj0 = branch_projector(coins, ks[np.argmin(np.abs(dist))], packet.branch)
    w, v = np.linalg.eigh(proj0)
    ref = v[:, -1]
    positions = np.arange(sites) - p0
    amps = np.zeros((sites, coins.dim), dtype=complex)
    for kq, g in zip(ks, weights):
        if g < 1e-300:
            continue
        spinor = branch_projector(coins, kq, packet.branch) @ ref
        n = np.linalg.norm(spinor)
        if n < 1e-12:
            continue
        amps += g * np.exp(1j * kq * eps * positions)[:, None] * (spinor / n)[None, :]
    return LatticeState(amps).normalized()


# --- observables ----------------------------------------------------------

@dataclass
class Observables:
    norm: float
    distribution: np.ndarray
    mean_position: float
    std_position: float
    support_radius: int
    center: float = field(default=0.0)


def position_distribution(psi: LatticeState) -> np.ndarray:
    a = psi.amplitudes
    weights = np.sum(np.abs(a) ** 2, axis=1)
    total = weights.sum()
    if total == 0:
        raise ValueError("zero state has no position distribution")
    return weights / total


def support(psi: LatticeState) -> np.ndarray:
    """Sites with any exactly nonzero amplitude."""
    return np.flatnonzero(np.any(psi.amplitudes != 0, axis=1))


def observables(psi: LatticeState, center: Optional[float] = None, tol: float = 1e-12) -> Observables:
    """Position statistics; site labels 0..N-1 are used without unwrapping."""
    prob = position_distribution(psi)
    sites = np.arange(psi.sites)
    mean = float(prob @ sites)
    std = float(math.sqrt(max(prob @ (sites - mean) ** 2, 0.0)))
    c = mean if center is None else center
    d = np.abs(sites - c)
    d = np.minimum(d, psi.sites - d)
    above = prob > tol
    radius = int(math.ceil(np.max(d[above]) - 1e-9)) if np.any(above) else 0
    return Observables(psi.norm(), prob, mean, std, radius, c)


def mean_positions(traj: Trajectory) -> np.ndarray:
    sites = np.arange(traj.states[0].sites)
    return np.array([position_distribution(s) @ sites for s in traj.states])


def group_velocity_estimate(traj: Trajectory) -> float:
    """Least-squares slope of mean position (sites) against step.

    With a = eps this is the velocity in units of the speed of light.
    """
    if traj.steps < 10:
        raise ValueError("need at least 10 steps to estimate a group velocity")
    x = mean_positions(traj)
    j = np.arange(len(x))
    return float(np.polyfit(j, x, 1)[0])
