"""Closed-form dispersion analysis for the Dirac, naive, LGT and DQW models.

All lattice models use the ballistic scaling a = epsilon and live on the
closed Brillouin zone [-pi/eps, pi/eps].  ``F`` is the squared frequency in
the low-frequency limit and ``f = sqrt(F - F(0))`` the gapless frequency.
The gapless form is evaluated without subtracting the gap, using
``1 - cos(x) = 2 sin^2(x/2)``, so small-k slopes are free of cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .coins import ModelParams, Variant, normalization_factors

ZERO_THRESHOLD_FACTOR = 1e-6
CLUSTER_CELLS = 3
BZ_SLACK = 1e-12


@dataclass(frozen=True)
class ModelTag:
    kind: str
    lam: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Dirac", "Naive", "LGT", "LGT-noncrossed", "DQW"):
            raise ValueError(f"unknown model {self.kind!r}")
        if self.kind == "DQW" and self.lam not in (0, 2):
            raise ValueError("DQW model carries lambda in {0, 2}")

    @property
    def name(self) -> str:
        return f"DQW{self.lam}" if self.kind == "DQW" else self.kind

    @property
    def on_lattice(self) -> bool:
        return self.kind != "Dirac"


DIRAC = ModelTag("Dirac")
NAIVE = ModelTag("Naive")
LGT = ModelTag("LGT")
LGT_NONCROSSED = ModelTag("LGT-noncrossed")


def DQW(lam: int = 0) -> ModelTag:
    return ModelTag("DQW", lam)


def parse_model(text: str, lam: int = 0) -> ModelTag:
    key = text.strip().lower()
    table = {"dirac": DIRAC, "naive": NAIVE, "lgt": LGT, "lgt-noncrossed": LGT_NONCROSSED}
    if key in table:
        return table[key]
    if key == "dqw":
        return DQW(lam)
    if key in ("dqw0", "dqw2"):
        return DQW(int(key[-1]))
    raise ValueError(f"unknown model {text!r}")


class BrillouinZoneError(ValueError):
    pass


class NoRealFrequency(ArithmeticError):
    """No real frequency solves the discrete-time dispersion relation."""


def _check_zone(model: ModelTag, params: ModelParams, k):
    k = np.asarray(k, dtype=float)
    if model.on_lattice:
        edge = math.pi / params.epsilon
        if np.any(np.abs(k) > edge * (1 + BZ_SLACK)):
            raise BrillouinZoneError(f"k outside the Brillouin zone [-{edge}, {edge}]")
    return k


def dqw_params(params: ModelParams, lam: int) -> ModelParams:
    return params.with_(lam=lam, variant=Variant.WILSON_LAMBDA)


def _dqw_terms(params: ModelParams, k):
    """(transport^2, mass, wilson) pieces of the DQW dispersion."""
    eps = params.epsilon
    n = normalization_factors(params)
    sin2 = np.sin(k * eps) ** 2 / eps**2
    mass = n.mu * params.mass
    if params.variant is Variant.MASSIVE_Q0:
        wilson = np.zeros_like(k)
    else:
        wilson = n.nu * eps**params.rho * (params.wilson_r / eps) * 2 * np.sin(k * eps / 2) ** 2
    return n.eta**2 * sin2, mass, wilson


def dqw_F(params: ModelParams, k):
    """F for the DQW defined by ``params`` (either coin variant)."""
    transport, mass, wilson = _dqw_terms(params, np.asarray(k, dtype=float))
    if params.variant is Variant.WILSON_LAMBDA and params.lam == 0:
        return transport + (mass + wilson) ** 2
    return transport + mass**2 + wilson**2


def dqw_gapless_squared(params: ModelParams, k):
    transport, mass, wilson = _dqw_terms(params, np.asarray(k, dtype=float))
    if params.variant is Variant.WILSON_LAMBDA and params.lam == 0:
        return transport + wilson * (2 * mass + wilson)
    return transport + wilson**2


def F_of_k(model: ModelTag, params: ModelParams, k):
    """Squared low-frequency dispersion F^model(k); vectorised over k."""
    k = _check_zone(model, params, k)
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    if model.kind == "Dirac":
        return k**2 + m**2
    if model.kind == "DQW":
        return dqw_F(dqw_params(params, model.lam), k)
    sin2 = np.sin(k * eps) ** 2 / eps**2
    if model.kind == "Naive":
        return sin2 + m**2
    wilson = (r / eps) * 2 * np.sin(k * eps / 2) ** 2
    if model.kind == "LGT":
        return sin2 + (m + wilson) ** 2
    return sin2 + m**2 + wilson**2


def gapless_squared(model: ModelTag, params: ModelParams, k):
    """f^2 = F(k) - F(0), evaluated without cancellation."""
    k = _check_zone(model, params, k)
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    if model.kind == "Dirac":
        return k**2
    if model.kind == "DQW":
        return dqw_gapless_squared(dqw_params(params, model.lam), k)
    sin2 = np.sin(k * eps) ** 2 / eps**2
    if model.kind == "Naive":
        return sin2
    wilson = (r / eps) * 2 * np.sin(k * eps / 2) ** 2
    if model.kind == "LGT":
        return sin2 + wilson * (2 * m + wilson)
    return sin2 + wilson**2


def gapless_frequency(model: ModelTag, params: ModelParams, k):
    return np.sqrt(np.maximum(gapless_squared(model, params, k), 0.0))


def central_gap(model: ModelTag, params: ModelParams) -> float:
    if model.kind == "DQW":
        return float(normalization_factors(dqw_params(params, model.lam)).mu * params.mass) ** 2
    return float(params.mass) ** 2


def raising_amplitude(model: ModelTag, params: ModelParams) -> float:
    """Coefficient by which the Wilson term lifts F at the zone edges."""
    eps, r = params.epsilon, params.wilson_r
    if model.kind == "DQW":
        nu = normalization_factors(dqw_params(params, model.lam)).nu
        return (nu * r * eps ** (params.rho - 1)) ** 2
    if model.kind in ("LGT", "LGT-noncrossed"):
        return (r / eps) ** 2
    return 0.0


@dataclass
class DispersionCurve:
    model: ModelTag
    params: ModelParams
    k_grid: np.ndarray
    F_values: np.ndarray
    f_values: np.ndarray
    central_gap: float


def brillouin_grid(params: ModelParams, grid_points: int) -> np.ndarray:
    if grid_points < 3 or grid_points % 2 == 0:
        raise ValueError("grid_points must be odd and >= 3 so that k = 0 and both edges are sampled")
    edge = math.pi / params.epsilon
    grid = np.linspace(-edge, edge, grid_points)
    grid[grid_points // 2] = 0.0
    return grid


def dispersion_curve(model: ModelTag, params: ModelParams, grid_points: int = 1001, k_grid=None) -> DispersionCurve:
    k = brillouin_grid(params, grid_points) if k_grid is None else np.asarray(k_grid, dtype=float)
    return DispersionCurve(
        model,
        params,
        k,
        np.asarray(F_of_k(model, params, k), dtype=float),
        np.asarray(gapless_frequency(model, params, k), dtype=float),
        central_gap(model, params),
    )


@dataclass(frozen=True)
class FrequencyPair:
    plus: float
    minus: float


def frequency_solutions(model: ModelTag, params: ModelParams, k: float) -> FrequencyPair:
    """Real solutions of sin^2(omega eps)/eps^2 = F(k) on the principal branch.

    Defined for the two-step (discrete-time) lattice models.  For the DQW
    eps^2 F <= 1 holds identically, so a solution always exists; the naive
    and LGT two-step schemes can fail for large eps m.
    """
    if not model.on_lattice:
        raise ValueError("the continuum Dirac model has no discrete-time frequency relation")
    eps = params.epsilon
    x = eps * math.sqrt(float(F_of_k(model, params, k)))
    if x > 1 + 1e-12:
        raise NoRealFrequency(f"eps^2 F = {x * x:.6g} > 1 at k = {k}")
    w = math.asin(min(x, 1.0)) / eps
    return FrequencyPair(w, -w)


@dataclass(frozen=True)
class TemporalDoublers:
    omega_plus: float
    omega_minus: float
    Omega_plus: float
    Omega_minus: float


def temporal_doubler_exists(params: ModelParams, k) -> np.ndarray:
    eps = params.epsilon
    return (eps * params.mass) ** 2 <= np.cos(np.asarray(k, dtype=float) * eps) ** 2


def temporal_doublers(params: ModelParams, k: float) -> TemporalDoublers:
    """Low- and high-frequency solutions of sin^2(w eps) = sin^2(k eps) + eps^2 m^2.

    Computed from the defining relation with the principal arcsin branch.
    """
    _check_zone(NAIVE, params, k)
    eps, m = params.epsilon, params.mass
    if not temporal_doubler_exists(params, k):
        raise NoRealFrequency(f"eps^2 m^2 = {(eps * m) ** 2:.6g} > cos^2(k eps) at k = {k}")
    s2 = min(math.sin(k * eps) ** 2 + (eps * m) ** 2, 1.0)
    w = math.asin(math.sqrt(s2)) / eps
    big = math.pi / eps - w
    return TemporalDoublers(w, -w, big, -big)


@dataclass
class DoublingReport:
    model: ModelTag
    params: ModelParams
    zeros: list
    edge_value: float
    raising_amplitude: float
    warnings: list = field(default_factory=list)

    @property
    def zero_count(self) -> int:
        return len(self.zeros)

    @property
    def doubling_avoided(self) -> bool:
        return self.zero_count == 1 and self.zeros[0] == 0.0


def find_zeros(k: np.ndarray, f: np.ndarray, threshold: float, merge_cells: int = CLUSTER_CELLS) -> list:
    """Cluster grid points with f < threshold; one zero (argmin) per cluster."""
    idx = np.flatnonzero(f < threshold)
    zeros = []
    start = 0
    for i in range(1, len(idx) + 1):
        if i == len(idx) or idx[i] - idx[i - 1] > merge_cells:
            cluster = idx[start:i]
            zeros.append(float(k[cluster[np.argmin(f[cluster])]]))
            start = i
    return zeros


def doubling_report(model: ModelTag, params: ModelParams, grid_points: int = 1001) -> DoublingReport:
    if grid_points < 101 or grid_points % 2 == 0:
        raise ValueError("grid_points must be odd and >= 101")
    curve = dispersion_curve(model, params, grid_points)
    threshold = ZERO_THRESHOLD_FACTOR * math.pi / params.epsilon
    zeros = find_zeros(curve.k_grid, curve.f_values, threshold)
    warns = dqw_params(params, model.lam).criteria_warnings() if model.kind == "DQW" else []
    return DoublingReport(model, params, zeros, float(curve.f_values[-1]), raising_amplitude(model, params), warns)


@dataclass
class RaisingTrend:
    epsilons: list
    amplitudes: list

    @property
    def decaying(self) -> bool:
        """Strictly decreasing as epsilon decreases."""
        a = self.amplitudes
        return all(a[i + 1] < a[i] for i in range(len(a) - 1))

    @property
    def bounded_below(self) -> bool:
        """Non-decreasing as epsilon decreases (bounded by its first value)."""
        a = self.amplitudes
        return all(a[i + 1] >= a[i] for i in range(len(a) - 1))


def raising_trend(model: ModelTag, params: ModelParams, epsilons: Sequence[float]) -> RaisingTrend:
    eps_sorted = sorted(epsilons, reverse=True)
    amps = [raising_amplitude(model, params.with_(epsilon=e)) for e in eps_sorted]
    return RaisingTrend(eps_sorted, amps)


# --- initial slopes -------------------------------------------------------

SLOPE_POINTS = 20
SLOPE_WINDOW = 0.05


@dataclass
class SlopeReport:
    model: ModelTag
    params: ModelParams
    fitted_slope: float
    predicted_slope: float
    exact_slope: float
    fit_window: tuple

    @property
    def relative_error(self) -> float:
        return abs(self.fitted_slope - self.predicted_slope) / abs(self.predicted_slope)


def predicted_slope(model: ModelTag, params: ModelParams) -> float:
    """Leading small-eps prediction for the k^2 coefficient of f^2."""
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    if model.kind == "DQW":
        return 1.0 - 0.5 * r**2 * eps ** (2 * params.rho)
    if model.kind == "LGT":
        return 1.0 + eps * m * r
    return 1.0


def exact_slope(model: ModelTag, params: ModelParams) -> float:
    """Exact k^2 Taylor coefficient of f^2 at fixed eps."""
    eps, m, r = params.epsilon, params.mass, params.wilson_r
    if model.kind == "DQW":
        p = dqw_params(params, model.lam)
        mu = normalization_factors(p).mu
        s2 = (eps**p.rho * r) ** 2
        cross = eps ** (1 + p.rho) * m * r if model.lam == 0 else 0.0
        return mu**2 * (1 - cross) / (1 + s2)
    if model.kind == "LGT":
        return 1.0 + eps * m * r
    return 1.0


def fit_initial_slope(model: ModelTag, params: ModelParams, points: int = SLOPE_POINTS, window: float = SLOPE_WINDOW):
    """Least-squares k^2 coefficient of f^2 over 0 < k <= window/eps.

    The fit carries k^4 and k^6 terms so that curvature inside the window does
    not bias the k^2 coefficient; the window scales with 1/eps.
    """
    kmax = window / params.epsilon if model.on_lattice else window
    k = kmax * np.arange(1, points + 1) / points
    u2 = (k / kmax) ** 2
    y = gapless_squared(model, params, k) / kmax**2
    design = np.column_stack([u2, u2**2, u2**3])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1] or not np.all(np.isfinite(coef)):
        raise ValueError("degenerate slope fit")
    return float(coef[0]), (0.0, float(kmax))


def initial_slope(model: ModelTag, params: ModelParams, points: int = SLOPE_POINTS, window: float = SLOPE_WINDOW) -> SlopeReport:
    fitted, win = fit_initial_slope(model, params, points, window)
    return SlopeReport(model, params, fitted, predicted_slope(model, params), exact_slope(model, params), win)


def lgt_quartic_polynomial(params: ModelParams, k):
    """(1 + a m r) k^2 + (a^2 r^2/4 - 2 a^2/3!) k^4 with a = eps."""
    a, m, r = params.epsilon, params.mass, params.wilson_r
    k = np.asarray(k, dtype=float)
    return (1 + a * m * r) * k**2 + (0.25 * a**2 * r**2 - 2 * a**2 / 6) * k**4


def lgt_quartic_check(params: ModelParams, k_max: float, points: int = 64) -> float:
    """Max |f_LGT^2 - quartic polynomial| over 0 < k <= k_max."""
    k = k_max * np.arange(1, points + 1) / points
    return float(np.max(np.abs(gapless_squared(LGT, params, k) - lgt_quartic_polynomial(params, k))))


def lgt_quartic_halving_ratio(params: ModelParams, k_max: float, points: int = 64) -> float:
    return lgt_quartic_check(params, k_max, points) / lgt_quartic_check(params, k_max / 2, points)


@dataclass
class ConvergenceTable:
    model: ModelTag
    rows: list
    order: float
    order_residual: float
    monotone: bool
    warnings: list = field(default_factory=list)


def fit_order(epsilons: Sequence[float], errors: Sequence[float]):
    """Least-squares slope of log(error) against log(eps) and its rms residual."""
    if len(epsilons) < 3:
        raise ValueError("need at least 3 epsilons to fit a convergence order")
    x = np.log(np.asarray(epsilons, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    return float(coef[0]), float(np.sqrt(np.mean(resid**2)))


def convergence_study(model: ModelTag, base_params: ModelParams, epsilons: Sequence[float]) -> ConvergenceTable:
    """Initial-slope errors against the continuum slope 1 across an eps sweep."""
    epsilons = list(epsilons)
    if len(epsilons) < 3:
        raise ValueError("need at least 3 epsilons")
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    if model.kind in ("Dirac", "Naive"):
        raise ValueError(f"{model.name} has the continuum slope at every eps; nothing converges")
    rows = []
    for eps in epsilons:
        p = base_params.with_(epsilon=eps)
        rep = initial_slope(model, p)
        row = {
            "epsilon": eps,
            "fitted_slope": rep.fitted_slope,
            "predicted_slope": rep.predicted_slope,
            "exact_slope": rep.exact_slope,
            "error": abs(1.0 - rep.fitted_slope),
            "relative_error": rep.relative_error,
        }
        if model.kind == "DQW":
            other = initial_slope(DQW(2 - model.lam), p)
            row["lambda_gap"] = abs(rep.fitted_slope - other.fitted_slope)
        rows.append(row)
    errors = [r["error"] for r in rows]
    order, resid = fit_order(epsilons, errors)
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    warns = [] if monotone else ["non-monotone error sequence"]
    if model.kind == "DQW":
        warns += dqw_params(base_params, model.lam).criteria_warnings()
    return ConvergenceTable(model, rows, order, resid, monotone, warns)
