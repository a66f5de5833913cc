"""Fluctuation studies for empirical spectral functionals.

Monte Carlo machinery around the centered functionals

    sqrt(n) ( mean_t int phi J dlam  -  center ),

with the center either the population functional (analytic centering) or the
Monte Carlo mean (mean centering), plus two closed-form references they are
checked against: exponential tail bounds for centered weighted chi-square
sums, and the limiting covariance of the Gaussian central limit theorem.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .process import simulate_tvar
from .spectral import FrequencyGrid, spectral_functional, spectral_functional_limit

__all__ = [
    "TailStudySpec",
    "chi2_tail_study",
    "clopper_pearson_upper",
    "SpectralProcessSample",
    "spectral_process_sample",
    "limit_covariance",
    "bias_scaling_study",
    "expected_functional_trace",
    "replication_seed",
]

TRACE_MAX_N = 256


def replication_seed(master, *indices):
    """Deterministic per-replication seed derived from (master, indices)."""
    seq = np.random.SeedSequence([int(master)] + [int(i) for i in indices])
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass
class TailStudySpec:
    """Design of a weighted chi-square tail study.

    The statistic is S = n^{-1/2} sum_i lambda_i (Z_i^2 - 1) with iid
    standard normal Z and fixed positive weights lambda.
    """

    lambdas: np.ndarray
    replications: int
    etas: np.ndarray
    seed: int = 0
    chunk: int = 20000

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.etas = np.asarray(self.etas, dtype=float)
        if self.lambdas.ndim != 1 or self.lambdas.size == 0:
            raise ValueError("need a nonempty weight vector")
        if np.any(self.lambdas <= 0) or not np.all(np.isfinite(self.lambdas)):
            raise ValueError("weights must be positive and finite")
        if self.etas.ndim != 1 or self.etas.size == 0 or np.any(self.etas <= 0):
            raise ValueError("need positive thresholds")
        if np.any(np.diff(self.etas) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        if self.replications < 1000:
            raise ValueError("need at least 1000 replications")

    @property
    def n(self):
        return len(self.lambdas)

    @classmethod
    def unit_design(cls, n, replications, etas, seed=0):
        """lambda_i = 1 for all i."""
        return cls(np.ones(int(n)), replications, etas, seed)

    @classmethod
    def linear_design(cls, n, replications, etas, seed=0):
        """lambda_i = 1 + i/n for i = 1..n."""
        n = int(n)
        return cls(1.0 + np.arange(1, n + 1) / n, replications, etas, seed)


def clopper_pearson_upper(successes, trials, level=0.99):
    """One-sided upper confidence limit for a binomial proportion."""
    successes, trials = int(successes), int(trials)
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError("need 0 <= successes <= trials")
    if successes == trials:
        return 1.0
    return float(stats.beta.ppf(level, successes + 1, trials - successes))


def tail_bound_quadratic(eta, r_sq, l_max, n):
    """2 exp( -eta^2 / (8 (R^2 + L eta / sqrt(n))) )."""
    return 2.0 * math.exp(-(eta ** 2) / (8.0 * (r_sq + l_max * eta / math.sqrt(n))))


def tail_bound_linear(eta, r_sq):
    """6 exp( -eta / (16 R) ) with R = sqrt(R^2)."""
    return 6.0 * math.exp(-eta / (16.0 * math.sqrt(r_sq)))


def chi2_tail_study(spec):
    """Empirical tail of S against its two exponential bounds.

    Simulates the replications in fixed-size chunks from a single stream
    (deterministic in the seed), and reports for each threshold the
    empirical exceedance probability, its 99% upper confidence limit, and
    the two closed-form bounds.

    Returns
    -------
    list of dict
        Keys: eta, exceedances, empirical, upper99, bound_quadratic,
        bound_linear.
    """
    if not isinstance(spec, TailStudySpec):
        raise ValueError("expected a TailStudySpec")
    lam = spec.lambdas
    n = spec.n
    r_sq = float(np.mean(lam ** 2))
    l_max = float(np.max(np.abs(lam)))
    rng = np.random.default_rng(spec.seed)

    counts = np.zeros(len(spec.etas), dtype=np.int64)
    remaining = spec.replications
    while remaining > 0:
        rows = min(spec.chunk, remaining)
        z = rng.standard_normal((rows, n))
        s = (z * z - 1.0) @ lam / math.sqrt(n)
        abs_s = np.abs(s)
        for i, eta in enumerate(spec.etas):
            counts[i] += int(np.count_nonzero(abs_s >= eta))
        remaining -= rows

    out = []
    for eta, k in zip(spec.etas, counts):
        out.append(
            {
                "eta": float(eta),
                "exceedances": int(k),
                "empirical": float(k / spec.replications),
                "upper99": clopper_pearson_upper(k, spec.replications),
                "bound_quadratic": tail_bound_quadratic(eta, r_sq, l_max, n),
                "bound_linear": tail_bound_linear(eta, r_sq),
            }
        )
    return out


@dataclass
class SpectralProcessSample:
    """Monte Carlo sample of a centered spectral functional.

    Attributes
    ----------
    functionals : ndarray
        Raw functional values, one per replication, ordered by replication.
    center : float
        The centering constant actually used.
    deviations : ndarray
        sqrt(n) (functional - center).
    centering : str
        "analytic" (population functional) or "mean" (Monte Carlo mean).
    """

    functionals: np.ndarray
    center: float
    deviations: np.ndarray
    centering: str
    n: int
    replications: int
    seed: int
    extras: dict = field(default_factory=dict)

    def variance(self):
        """Unbiased variance of the deviations."""
        return float(np.var(self.deviations, ddof=1))


def spectral_process_sample(
    model,
    phi,
    n,
    replications,
    seed,
    centering="analytic",
    grid=None,
    u_grid_size=4096,
    burn_in=None,
):
    """Simulate replications of the centered spectral functional.

    Each replication r simulates the model with a stream derived from
    (seed, r), evaluates the functional by the exact lag path, and centers
    either at the population functional of the model spectrum or at the
    Monte Carlo mean (computed with compensated summation, so the mean-
    centered deviations average to zero exactly up to rounding).

    Parameters
    ----------
    model : TvARModel
    phi : TestFunction
        Must have finite lag support.
    n : int
    replications : int
    seed : int
    centering : {"analytic", "mean"}
    """
    n = int(n)
    replications = int(replications)
    if replications < 2:
        raise ValueError("need at least 2 replications")
    if centering not in ("analytic", "mean"):
        raise ValueError(f"unknown centering {centering!r}")
    if phi.lag_support is None:
        raise ValueError("need a weight with finite lag support")

    values = np.empty(replications)
    for r in range(replications):
        x = simulate_tvar(model, n, replication_seed(seed, r), burn_in=burn_in)
        values[r] = spectral_functional(x, phi, path="lag")

    if centering == "analytic":
        center = spectral_functional_limit(phi, model, grid=grid, u_grid_size=u_grid_size)
    else:
        center = math.fsum(values) / replications
    deviations = math.sqrt(n) * (values - center)
    return SpectralProcessSample(
        functionals=values,
        center=float(center),
        deviations=deviations,
        centering=centering,
        n=n,
        replications=replications,
        seed=int(seed),
    )


def limit_covariance(phi_j, phi_k, f, grid=None, u_grid_size=512):
    """Limiting covariance of two centered spectral functionals.

    2 pi int_0^1 int phi_j(u, lam) { phi_k(u, lam) + phi_k(u, -lam) }
    f(u, lam)^2 dlam du, the Gaussian central-limit covariance for a true
    spectrum f.

    Parameters
    ----------
    phi_j, phi_k : TestFunction
    f : SpectrumField, TvARModel, or callable
    """
    from .likelihood import _field

    f = _field(f)
    if grid is None:
        grid = FrequencyGrid()
    u = (np.arange(int(u_grid_size)) + 0.5) / int(u_grid_size)
    lam = grid.nodes
    pj = phi_j.values(u[:, None], lam[None, :])
    pk = phi_k.values(u[:, None], lam[None, :])
    pk_neg = phi_k.values(u[:, None], -lam[None, :])
    fv = f.values(u[:, None], lam[None, :])
    val = np.sum(pj * (pk + pk_neg) * fv ** 2) * grid.weight / len(u)
    return float(2 * np.pi * val)


def bias_scaling_study(model, phi, n_list, replications, seed, grid=None, u_grid_size=4096):
    """Bias of the mean functional against the population functional.

    For each n, estimates E[functional] by Monte Carlo and reports the
    scaled discrepancies sqrt(n) |mean - limit| and n |mean - limit| with
    the Monte Carlo standard error.  The expected-mean bias of the
    functional is O(1/n), so the n-scaled column stays bounded while the
    sqrt(n)-scaled one shrinks.

    Returns
    -------
    list of dict
        Keys: n, mean, limit, stderr, sqrt_n_bias, n_bias.
    """
    rows = []
    for n in n_list:
        n = int(n)
        limit = spectral_functional_limit(phi, model, grid=grid, u_grid_size=u_grid_size)
        values = np.empty(int(replications))
        for r in range(int(replications)):
            x = simulate_tvar(model, n, replication_seed(seed, n, r))
            values[r] = spectral_functional(x, phi, path="lag")
        mean = math.fsum(values) / len(values)
        stderr = float(np.std(values, ddof=1) / math.sqrt(len(values)))
        rows.append(
            {
                "n": n,
                "mean": float(mean),
                "limit": float(limit),
                "stderr": stderr,
                "sqrt_n_bias": math.sqrt(n) * abs(mean - limit),
                "n_bias": n * abs(mean - limit),
            }
        )
    return rows


def expected_functional_trace(model, phi, n, grid=None):
    """Expected functional via the trace identity, for cross-checking only.

    Assembles an approximate covariance Sigma[s, t] = c(floor((s+t)/2)/n,
    s - t) from the local covariance function and returns
    tr(M Sigma) / (2 pi n) with M the dense kernel of phi.  Exact for
    constant-coefficient models (stationary case, long burn-in);
    an approximation otherwise.  Capped at n = 256.
    """
    from .spectral import quadratic_form_matrix
    from .process import spectral_density

    n = int(n)
    if n > TRACE_MAX_N:
        raise ValueError(f"trace path capped at n = {TRACE_MAX_N}")
    if grid is None:
        grid = FrequencyGrid()
    mids = np.arange(1, n + 1) / n
    fmat = spectral_density(model, mids[:, None], grid.nodes[None, :])
    lags = np.arange(-(n - 1), n)
    phases = np.exp(1j * np.outer(grid.nodes, lags))
    cmat = (fmat @ phases).real * grid.weight  # cmat[mid-1, lag index]

    s_idx = np.arange(1, n + 1)
    mid_of = (s_idx[:, None] + s_idx[None, :]) // 2
    lag_of = s_idx[:, None] - s_idx[None, :]
    sigma = cmat[mid_of - 1, lag_of + (n - 1)]
    M = quadratic_form_matrix(phi, n)
    return float(np.sum(M * sigma.T) / (2 * np.pi * n))
