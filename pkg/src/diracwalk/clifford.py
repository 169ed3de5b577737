"""Finite-dimensional Clifford-algebra representations in 1+1 dimensions.

A representation is a pair (alpha0, alpha1) of Hermitian involutions that
anticommute, optionally extended by a third matrix alpha2 anticommuting with
both.  Everything downstream (coins, walk operator, symbols) is built from a
``CliffordRep`` and never from explicit Pauli matrices, so changing the
representation by a unitary conjugation must leave all physics unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

DEFAULT_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class RepresentationError(ValueError):
    """Raised for malformed matrices or non-unitary conjugations."""


def max_abs(a: np.ndarray) -> float:
    """Maximum absolute entry; the default matrix norm for residuals."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def _as_matrix(m, name: str) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise RepresentationError(f"{name} must be a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CliffordRep:
    alpha0: np.ndarray
    alpha1: np.ndarray
    alpha2: Optional[np.ndarray] = None
    label: str = "custom"

    def __post_init__(self):
        a0 = _as_matrix(self.alpha0, "alpha0")
        a1 = _as_matrix(self.alpha1, "alpha1")
        object.__setattr__(self, "alpha0", a0)
        object.__setattr__(self, "alpha1", a1)
        if self.alpha2 is not None:
            object.__setattr__(self, "alpha2", _as_matrix(self.alpha2, "alpha2"))
        dims = {m.shape[0] for m in self.matrices()}
        if len(dims) != 1:
            raise RepresentationError(f"dimension mismatch among matrices: {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.alpha0.shape[0]

    def matrices(self) -> list[np.ndarray]:
        out = [self.alpha0, self.alpha1]
        if self.alpha2 is not None:
            out.append(self.alpha2)
        return out

    def alpha(self, index: int) -> np.ndarray:
        if index == 0:
            return self.alpha0
        if index == 1:
            return self.alpha1
        if index == 2:
            if self.alpha2 is None:
                raise RepresentationError(f"representation {self.label!r} carries no alpha2")
            return self.alpha2
        raise RepresentationError(f"no alpha matrix with index {index}")


@dataclass(frozen=True)
class AlgebraReport:
    residuals: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.residuals.values())

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)


def pauli_representation() -> CliffordRep:
    """alpha0 = sigma_x, alpha1 = sigma_z, alpha2 = sigma_y."""
    return CliffordRep(SIGMA_X, SIGMA_Z, SIGMA_Y, label="pauli")


def verify_algebra(rep: CliffordRep, tol: float = DEFAULT_TOL) -> AlgebraReport:
    """Residuals of the defining relations, in max-abs norm.

    Checks Hermiticity and squaring to the identity for each matrix, and
    pairwise anticommutation for every pair present.
    """
    mats = rep.matrices()
    eye = np.eye(rep.dim)
    res = {}
    for i, a in enumerate(mats):
        res[f"hermitian[{i}]"] = max_abs(a - a.conj().T)
        res[f"square[{i}]"] = max_abs(a @ a - eye)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            res[f"anticommutator[{i}{j}]"] = max_abs(anticommutator(mats[i], mats[j]))
    return AlgebraReport(res, tol)


def unitarity_residual(s: np.ndarray) -> float:
    s = np.asarray(s)
    return max_abs(s.conj().T @ s - np.eye(s.shape[0]))


def conjugate(rep: CliffordRep, s: np.ndarray, tol: float = 1e-10) -> CliffordRep:
    """Change of representation alpha -> S alpha S^dagger."""
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape != (rep.dim, rep.dim):
        raise RepresentationError(f"S has shape {s.shape}, expected {(rep.dim, rep.dim)}")
    if unitarity_residual(s) > tol:
        raise RepresentationError("conjugating matrix is not unitary")
    sd = s.conj().T
    a2 = None if rep.alpha2 is None else s @ rep.alpha2 @ sd
    return CliffordRep(s @ rep.alpha0 @ sd, s @ rep.alpha1 @ sd, a2, label=f"{rep.label}-conj")


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-distributed d x d unitary from a seeded complex Gaussian.

    QR with the phases of R's diagonal absorbed into Q (Mezzadri 2007);
    without that correction the distribution is not Haar.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_representation(seed: int, base: Optional[CliffordRep] = None) -> CliffordRep:
    base = pauli_representation() if base is None else base
    rep = conjugate(base, random_unitary(base.dim, seed))
    return CliffordRep(rep.alpha0, rep.alpha1, rep.alpha2, label=f"haar-{seed}")


def gamma_operators(rep: CliffordRep, mu: float):
    """Gamma0 = alpha0/mu, Gamma1 = alpha0 alpha1 and the metric residual.

    The residual is the max over index pairs of
    ``{Gamma^a, Gamma^b} - 2 eta~^{ab}`` with eta~ = diag(1/mu^2, -1).
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    rep_check = verify_algebra(rep, 1e-8)
    if not rep_check.passed:
        raise RepresentationError(f"invalid representation (worst residual {rep_check.worst:.3g})")
    g0 = rep.alpha0 / mu
    g1 = rep.alpha0 @ rep.alpha1
    metric = np.diag([1.0 / mu**2, -1.0])
    gammas = (g0, g1)
    eye = np.eye(rep.dim)
    residual = max(
        max_abs(anticommutator(gammas[a], gammas[b]) - 2 * metric[a, b] * eye)
        for a in range(2)
        for b in range(2)
    )
    return g0, g1, residual
