"""Quasi-likelihood fitting of time-varying AR models.

Two sieves are provided for the innovation variance:

- fit_monotone_tvar alternates weighted least squares for constant AR
  coefficients with the isotonic sieve variance step, driving the
  conditional Gaussian likelihood downhill (each half step is an exact
  minimizer of the objective over its own block, so the trace never
  increases);
- fit_fourier_tvar profiles the variance out of the exact Whittle contrast
  for an order-1 model with a trigonometric-polynomial coefficient curve and
  minimizes over the curve coefficients by coordinate descent.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .curves import Curve, FourierCurve, MonotoneStepCurve
from .isotonic import sieve_pava
from .likelihood import conditional_likelihood
from .process import check_stability
from .spectral import _series_values

__all__ = [
    "DegenerateDataError",
    "InfeasibleStartError",
    "FitConfig",
    "FitResult",
    "FourierFitResult",
    "wls_ar",
    "fit_monotone_tvar",
    "fit_fourier_tvar",
    "inverse_l2_distance",
    "curve_inverse_l2_distance",
]


class DegenerateDataError(ValueError):
    """Raised when the data cannot identify the requested fit."""


class InfeasibleStartError(RuntimeError):
    """Raised when no admissible starting point exists."""


def default_knots(n):
    """Sieve size ceil(n^{1/3} (log n)^{-2/3})."""
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    return max(1, math.ceil(n ** (1.0 / 3.0) / math.log(n) ** (2.0 / 3.0)))

def default_eps(n):
    """Bound parameter (log n)^{-1/5}; requires log n > 1."""
    n = int(n)
    if n < 3:
        raise ValueError("default eps needs n >= 3")
    return math.log(n) ** -0.2


@dataclass
class FitConfig:
    """Configuration of the alternating monotone-variance fit.

    Attributes
    ----------
    p : int
        AR order.
    k_n : int or None
        Sieve size; None selects ceil(n^{1/3} (log n)^{-2/3}).
    eps : float or None
        Bound parameter in (0, 1); None selects (log n)^{-1/5}.
    max_iter : int
        Maximum number of full (WLS + PAVA) iterations.
    rel_tol : float
        Stop when the objective decrease falls below
        rel_tol * max(1, |previous|).
    stability_delta : float
        Margin used only to report stability of the fitted coefficients.
    bounds : str
        Bound handling of the variance step: "clip" or "mean_preserving".
    """

    p: int = 1
    k_n: int | None = None
    eps: float | None = None
    max_iter: int = 100
    rel_tol: float = 1e-8
    stability_delta: float = 0.0
    bounds: str = "clip"

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.eps is not None and not (0.0 < self.eps < 1.0):
            raise ValueError("eps must lie in (0, 1)")
        if self.k_n is not None and self.k_n < 1:
            raise ValueError("k_n must be at least 1")
        if self.bounds not in ("clip", "mean_preserving"):
            raise ValueError(f"unknown bounds mode {self.bounds!r}")

    def resolve(self, n):
        """Concrete (k_n, eps) for a sample size."""
        k = self.k_n if self.k_n is not None else default_knots(n)
        e = self.eps if self.eps is not None else default_eps(n)
        return int(k), float(e)


@dataclass
class FitResult:
    """Outcome of fit_monotone_tvar.

    objective_trace holds the conditional likelihood after each full
    iteration, starting with the value at the initial (alpha = 0) point;
    wls_trace / pava_trace hold the half-step values per iteration.
    """

    alpha_hat: np.ndarray
    sigma2_hat: MonotoneStepCurve
    objective_trace: list = field(default_factory=list)
    wls_trace: list = field(default_factory=list)
    pava_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    alpha_stable: bool = True
    k_n: int = 0
    eps: float = 0.0

    @property
    def objective(self):
        return self.objective_trace[-1]


def wls_ar(series, sigma2, p):
    """Weighted least squares for constant AR coefficients.

    Minimizes sum_{t>p} (x_t + sum_j a_j x_{t-j})^2 / sigma^2(t/n) and
    returns the coefficient vector.  The fitted residuals are orthogonal to
    the weighted lagged regressors.

    Parameters
    ----------
    series : TimeSeries or array_like
    sigma2 : Curve or positive float
        Weight curve; observation t gets weight 1/sigma^2(t/n).
    p : int
        Order, >= 0 (order 0 returns an empty vector).

    Raises
    ------
    DegenerateDataError
        If the weighted normal equations are singular (constant-zero series).
    """
    x = _series_values(series)
    p = int(p)
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p == 0:
        return np.zeros(0)
    n = len(x)
    if n <= p:
        raise ValueError(f"need more than p={p} observations")
    if isinstance(sigma2, Curve):
        w = 1.0 / sigma2.values(np.arange(p + 1, n + 1) / n)
    else:
        w = np.full(n - p, 1.0 / float(sigma2))
    if np.min(w) <= 0 or not np.all(np.isfinite(w)):
        raise ValueError("weights must be positive and finite")

    lags = np.column_stack([x[p - j : n - j] for j in range(1, p + 1)])
    target = x[p:]
    A = (lags * w[:, None]).T @ lags
    b = -(lags * w[:, None]).T @ target
    try:
        coef = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        raise DegenerateDataError("normal equations are singular") from None
    if not np.all(np.isfinite(coef)):
        raise DegenerateDataError("normal equations are numerically singular")
    return coef


def fit_monotone_tvar(series, config=None, sigma2_init=None):
    """Alternating fit of constant AR coefficients and a monotone variance.

    Starts from the sieve-isotonized squared data (the alpha = 0 residuals,
    or sigma2_init when given), then repeats: (i) weighted least squares for
    alpha with the current variance as weights, (ii) the sieve variance step
    on the new squared residuals.  Both half steps minimize the conditional
    likelihood exactly over their blocks, so the objective trace is
    nonincreasing.  The run is a pure function of (series, config,
    sigma2_init).

    Parameters
    ----------
    series : TimeSeries or array_like
    config : FitConfig, optional
    sigma2_init : MonotoneStepCurve, optional
        Warm start for the variance curve.

    Returns
    -------
    FitResult
    """
    config = config or FitConfig()
    x = _series_values(series)
    n = len(x)
    p = config.p
    if n <= p:
        raise ValueError(f"need more than p={p} observations")
    k_n, eps = config.resolve(n)

    def residuals(alpha):
        r = x[p:].copy()
        for j in range(1, p + 1):
            r += alpha[j - 1] * x[p - j : n - j]
        return r

    alpha = np.zeros(p)
    if sigma2_init is None:
        sigma = sieve_pava(residuals(alpha) ** 2, n, p, k_n, eps, bounds=config.bounds)
    else:
        sigma = sigma2_init
    current = conditional_likelihood(x, alpha, sigma)

    result = FitResult(
        alpha_hat=alpha,
        sigma2_hat=sigma,
        objective_trace=[current],
        k_n=k_n,
        eps=eps,
    )

    for it in range(1, config.max_iter + 1):
        if p:
            alpha = wls_ar(x, sigma, p)
        after_wls = conditional_likelihood(x, alpha, sigma)
        sigma = sieve_pava(residuals(alpha) ** 2, n, p, k_n, eps, bounds=config.bounds)
        after_pava = conditional_likelihood(x, alpha, sigma)
        result.wls_trace.append(after_wls)
        result.pava_trace.append(after_pava)
        result.objective_trace.append(after_pava)
        result.iterations = it
        if current - after_pava <= config.rel_tol * max(1.0, abs(current)):
            result.converged = True
            current = after_pava
            break
        current = after_pava

    result.alpha_hat = alpha
    result.sigma2_hat = sigma
    result.alpha_stable = check_stability(alpha, config.stability_delta)
    return result


class FourierFitResult(NamedTuple):
    alpha_curve: FourierCurve
    sigma2: float
    objective: float
    sweeps: int
    converged: bool


def fit_fourier_tvar(series, k_n=1, eps=None, max_iter=200, rel_tol=1e-8, check_grid=512):
    """Order-1 fit with a trigonometric coefficient curve and constant variance.

    The candidate curve is alpha(u) = a_0 + sum_{j<=k_n} a_j cos(2 pi j u)
    + b_j sin(2 pi j u), constrained to sup |alpha| < 1 on a uniform check
    grid.  For each curve the constant variance is profiled out of the exact
    Whittle contrast (clipped to [eps^2, 1/eps^2]) and the remaining
    objective is minimized by coordinate descent with a shrinking step,
    started from the constant least-squares coefficient.

    Parameters
    ----------
    series : TimeSeries or array_like
    k_n : int
        Trigonometric order of the coefficient curve, >= 0.
    eps : float, optional
        Variance bound parameter; defaults to (log n)^{-1/5}.
    max_iter : int
        Maximum coordinate-descent sweeps.
    rel_tol : float
        Convergence threshold on the objective decrease.
    check_grid : int
        Resolution of the sup |alpha| < 1 feasibility grid.

    Returns
    -------
    FourierFitResult
    """
    x = _series_values(series)
    n = len(x)
    k_n = int(k_n)
    if k_n < 0:
        raise ValueError("k_n must be nonnegative")
    if n < 8 * (k_n + 1):
        raise ValueError("series too short for the requested curve order")
    if eps is None:
        eps = default_eps(n)
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    lo, hi = eps ** 2, 1.0 / eps ** 2

    u_t = np.arange(1, n + 1) / n
    u_check = np.arange(1, check_grid + 1) / check_grid
    xx = x * x
    cross = x[:-1] * x[1:]

    dim = 1 + 2 * k_n

    def curve_values(theta, u):
        vals = np.full(u.shape, theta[0])
        for j in range(1, k_n + 1):
            vals = vals + theta[2 * j - 1] * np.cos(2 * np.pi * j * u)
            vals = vals + theta[2 * j] * np.sin(2 * np.pi * j * u)
        return vals

    def objective(theta):
        a_check = curve_values(theta, u_check)
        if np.max(np.abs(a_check)) >= 1.0:
            return np.inf, np.nan
        a_t = curve_values(theta, u_t)
        qbar = (np.sum((1.0 + a_t ** 2) * xx) + 2.0 * np.sum(a_t[:-1] * cross)) / n
        if qbar <= 0 or not np.isfinite(qbar):
            return np.inf, np.nan
        s2 = min(max(qbar, lo), hi)
        val = 0.5 * np.log(s2) - 0.5 * np.log(2 * np.pi) + qbar / (2 * s2)
        return val, s2

    denom = float(np.sum(xx[:-1]))
    if denom == 0.0:
        raise DegenerateDataError("series is identically zero")
    start = -float(np.sum(cross)) / denom
    if abs(start) >= 1.0:
        start = math.copysign(0.95, start)
    theta = np.zeros(dim)
    theta[0] = start
    current, s2 = objective(theta)
    if not np.isfinite(current):
        theta[0] = 0.0
        current, s2 = objective(theta)
        if not np.isfinite(current):
            raise InfeasibleStartError("no admissible starting point")

    step = 0.25
    sweeps = 0
    converged = False
    while sweeps < max_iter and step >= 1e-7:
        sweeps += 1
        best_improvement = 0.0
        for i in range(dim):
            for direction in (1.0, -1.0):
                trial = theta.copy()
                trial[i] += direction * step
                val, trial_s2 = objective(trial)
                if val < current:
                    improvement = current - val
                    theta, current, s2 = trial, val, trial_s2
                    best_improvement = max(best_improvement, improvement)
        if best_improvement <= 0.0:
            step /= 2.0
        elif best_improvement <= rel_tol * max(1.0, abs(current)):
            converged = True
            break
    if step < 1e-7:
        converged = True

    curve = FourierCurve(theta[0], theta[1 : 2 * k_n + 1 : 2], theta[2 : 2 * k_n + 1 : 2])
    return FourierFitResult(curve, float(s2), float(current), sweeps, converged)


def _as_field(g):
    from .likelihood import SpectrumField, _field

    return _field(g) if not isinstance(g, SpectrumField) else g


def inverse_l2_distance(g, f, grid=None, u_grid_size=512):
    """L2 distance of the inverse spectra on (0,1] x [-pi, pi].

    sqrt( int int (1/g - 1/f)^2 dlam du ), computed on a midpoint mesh;
    doubling both resolutions moves the value by O(mesh variation) only.
    """
    from .spectral import FrequencyGrid

    g, f = _as_field(g), _as_field(f)
    if grid is None:
        grid = FrequencyGrid()
    u = (np.arange(int(u_grid_size)) + 0.5) / int(u_grid_size)
    gv = g.values(u[:, None], grid.nodes[None, :])
    fv = f.values(u[:, None], grid.nodes[None, :])
    if np.min(gv) <= 0 or np.min(fv) <= 0:
        raise ValueError("spectra must be strictly positive on the mesh")
    return float(np.sqrt(np.sum((1.0 / gv - 1.0 / fv) ** 2) * grid.weight / len(u)))


def curve_inverse_l2_distance(c1, c2, u_grid_size=4096):
    """L2 distance of inverse curves, sqrt( 2 pi int (1/c1 - 1/c2)^2 du ).

    The 2 pi factor makes a time-only function comparable with the
    time-frequency distance above (constant in frequency).
    """
    u = (np.arange(int(u_grid_size)) + 0.5) / int(u_grid_size)
    v1 = c1.values(u) if isinstance(c1, Curve) else np.full(u.shape, float(c1))
    v2 = c2.values(u) if isinstance(c2, Curve) else np.full(u.shape, float(c2))
    if np.min(v1) <= 0 or np.min(v2) <= 0:
        raise ValueError("curves must be strictly positive")
    return float(np.sqrt(2 * np.pi * np.mean((1.0 / v1 - 1.0 / v2) ** 2)))
