"""Monte Carlo studies and reproducible output files.

Every study is a pure function of its spec (model, sizes, replication count,
master seed): each replication draws from a stream derived from
(seed, n, replication), reductions use compensated summation or sorting by
replication index, and outputs are written with full float precision -- so
rerunning a study reproduces its files byte for byte.
"""

import csv
import hashlib
import json
import math
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .curves import ConstantCurve, FourierCurve, SampledCurve
from .espec import replication_seed
from .estimator import FitConfig, curve_inverse_l2_distance, fit_monotone_tvar, inverse_l2_distance
from .likelihood import SpectrumField, conditional_likelihood, whittle_contrast
from .process import TvARModel, simulate_tvar

__all__ = [
    "default_rate_model",
    "wavy_alpha_model",
    "study_knots",
    "RateStudySpec",
    "RateStudyResult",
    "rate_study",
    "log_log_slope",
    "likelihood_equivalence_decay",
    "default_equivalence_candidates",
    "write_rows_csv",
    "read_rows_csv",
    "write_metadata",
]


def default_rate_model():
    """Order-1 model with constant coefficient 0.5 and a variance step 1 -> 2
    at u = 2/5.  The truth lies in the fitted class: constant coefficient,
    nondecreasing variance of bounded variation.

    The jump sits at 2/5 rather than 1/2 because 1/2 is degenerate for every
    sieve the rate study uses: an even knot count resolves the jump exactly
    (no approximation error, pure-noise decay at n^{-1/2}) while an odd count
    centers it in a cell (an approximation floor decaying only through the
    knot schedule).  At 2/5 no study sieve has a knot on the jump, so the fit
    carries both approximation and estimation error, the regime the sieve
    schedule is designed for, and the error decay shows the intended
    n^{-1/3}-ish exponent."""
    return TvARModel(1, [ConstantCurve(0.5)], SampledCurve([1.0, 1.0, 2.0, 2.0, 2.0]))


def wavy_alpha_model():
    """Order-1 demo model with oscillating coefficient 0.5 cos(2 pi u) and
    unit variance; stable everywhere but outside the constant-coefficient
    fitted class."""
    return TvARModel(1, [FourierCurve(0.0, a=[0.5], b=[0.0])], ConstantCurve(1.0))


def study_knots(n):
    """Sieve size 2 ceil(n^{1/3} (log n)^{-2/3}) used by the rate study.

    Doubling the default schedule keeps the n^{1/3} (log n)^{-2/3} growth
    (6, 6, 6, 8, 8 over the default sizes) while giving every knot a chunk
    of at least ~40 residuals at the smallest n, so per-knot means are well
    resolved and the decay is driven by the schedule, not by tiny-chunk
    artifacts.
    """
    n = int(n)
    return 2 * max(1, math.ceil(n ** (1.0 / 3.0) / math.log(n) ** (2.0 / 3.0)))


@dataclass
class RateStudySpec:
    """Specification of the error-decay study for the monotone fit."""

    n_list: tuple = (256, 512, 1024, 2048, 4096)
    replications: int = 50
    seed: int = 2026
    model: TvARModel | None = None
    p: int = 1
    u_grid_size: int = 2048
    lambda_grid_size: int = 512

    def __post_init__(self):
        self.n_list = tuple(int(n) for n in self.n_list)
        if len(self.n_list) < 2 or any(n < 8 for n in self.n_list):
            raise ValueError("need at least two sizes, all >= 8")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ValueError("sizes must be strictly increasing")
        if self.replications < 2:
            raise ValueError("need at least 2 replications")

    def resolved_model(self):
        return self.model if self.model is not None else default_rate_model()

    def fit_config_for(self, n):
        from .estimator import default_eps

        return FitConfig(p=self.p, k_n=study_knots(n), eps=default_eps(n))


@dataclass
class RateStudyResult:
    rows: list = field(default_factory=list)
    slope_spectrum: float = float("nan")
    slope_variance: float = float("nan")
    spec: RateStudySpec | None = None

    def medians(self, key):
        return np.array([row[key] for row in self.rows])


def log_log_slope(ns, values):
    """Least-squares slope of log(values) against log(ns)."""
    xs = np.log(np.asarray(ns, dtype=float))
    ys = np.log(np.asarray(values, dtype=float))
    xs = xs - xs.mean()
    return float(np.dot(xs, ys) / np.dot(xs, xs))


def _rate_one(spec, model, truth_field, n, r):
    # common random numbers: replication r reuses one innovation stream for
    # every n, so cross-n median comparisons see the systematic trend rather
    # than independent per-n draws
    x = simulate_tvar(model, n, replication_seed(spec.seed, r))
    fit = fit_monotone_tvar(x, spec.fit_config_for(n))
    from .spectral import FrequencyGrid

    grid = FrequencyGrid(spec.lambda_grid_size)
    fitted_field = SpectrumField.from_coefficients(fit.alpha_hat, fit.sigma2_hat, validate=False)
    err_spec = inverse_l2_distance(fitted_field, truth_field, grid=grid, u_grid_size=spec.u_grid_size)
    err_var = curve_inverse_l2_distance(fit.sigma2_hat, model.sigma2, u_grid_size=spec.u_grid_size)
    return {
        "err_spectrum": err_spec,
        "err_variance": err_var,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "alpha_stable": fit.alpha_stable,
    }


def rate_study(spec=None, threads=1):
    """Monte Carlo decay of the fit errors over a grid of sample sizes.

    For each n and replication: simulate the model, run the monotone fit
    with the study's sieve schedule, and measure the inverse-spectrum L2
    error of the full fitted spectrum and of the variance curve alone.
    Reports per-n medians and the log-log slopes across n.  Replication r
    shares its innovation stream across all n (common random numbers), which
    sharpens cross-n comparisons of the medians without changing any per-n
    distribution.

    Parameters
    ----------
    spec : RateStudySpec, optional
    threads : int
        Worker threads for replications; results are merged by replication
        index, so the thread count never changes the output.

    Returns
    -------
    RateStudyResult
    """
    spec = spec or RateStudySpec()
    model = spec.resolved_model()
    truth_field = SpectrumField.from_model(model)

    rows = []
    for n in spec.n_list:
        jobs = list(range(spec.replications))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda r: _rate_one(spec, model, truth_field, n, r), jobs))
        else:
            results = [_rate_one(spec, model, truth_field, n, r) for r in jobs]
        cfg_k, cfg_eps = spec.fit_config_for(n).resolve(n)
        rows.append(
            {
                "n": n,
                "k_n": cfg_k,
                "eps": cfg_eps,
                "median_err_spectrum": float(np.median([res["err_spectrum"] for res in results])),
                "median_err_variance": float(np.median([res["err_variance"] for res in results])),
                "median_iterations": float(np.median([res["iterations"] for res in results])),
                "all_converged": bool(all(res["converged"] for res in results)),
                "all_alpha_stable": bool(all(res["alpha_stable"] for res in results)),
            }
        )

    result = RateStudyResult(rows=rows, spec=spec)
    ns = [row["n"] for row in rows]
    result.slope_spectrum = log_log_slope(ns, [row["median_err_spectrum"] for row in rows])
    result.slope_variance = log_log_slope(ns, [row["median_err_variance"] for row in rows])
    return result


def default_equivalence_candidates():
    """Stable candidate (alpha, sigma2 curve) pairs, including the default
    rate model's truth, for the likelihood-equivalence study."""
    return [
        (np.array([0.5]), SampledCurve([1.0, 1.0, 2.0, 2.0, 2.0])),
        (np.array([0.3]), ConstantCurve(1.0)),
        (np.array([0.7]), SampledCurve([0.8, 1.2, 1.5, 2.5])),
        (np.array([-0.4]), ConstantCurve(1.6)),
    ]


def likelihood_equivalence_decay(model=None, n_list=(256, 2048), replications=20, seed=7, candidates=None):
    """Gap between the conditional likelihood and the exact Whittle contrast.

    For each candidate (alpha, sigma2) evaluates
    d = | (1/2)(conditional - log 2 pi) - whittle | on simulated series and
    reports, per n, the median over replications of the worst candidate gap.
    The gap comes from boundary terms only, so it decays at rate 1/n.
    Replication r shares its innovation stream across all n (common random
    numbers), as in the rate study.

    Returns
    -------
    list of dict with keys n, median_gap.
    """
    model = model or default_rate_model()
    candidates = candidates if candidates is not None else default_equivalence_candidates()
    fields = [
        SpectrumField.from_coefficients(alpha, sigma2)
        for alpha, sigma2 in candidates
    ]
    rows = []
    for n in n_list:
        n = int(n)
        gaps = []
        for r in range(int(replications)):
            x = simulate_tvar(model, n, replication_seed(seed, r))
            worst = 0.0
            for (alpha, sigma2), g in zip(candidates, fields):
                lt = conditional_likelihood(x, alpha, sigma2)
                ln = whittle_contrast(x, g)
                worst = max(worst, abs(0.5 * (lt - math.log(2 * math.pi)) - ln))
            gaps.append(worst)
        rows.append({"n": n, "median_gap": float(np.median(gaps))})
    return rows


def write_rows_csv(path, rows, fieldnames=None):
    """Write a list of dicts as CSV with full float precision."""
    if not rows:
        raise ValueError("nothing to write")
    if fieldnames is None:
        fieldnames = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_cell(row.get(k)) for k in fieldnames})


def _format_cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def read_rows_csv(path):
    """Read a CSV written by write_rows_csv; numeric cells are parsed."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                try:
                    parsed[k] = int(v)
                except (TypeError, ValueError):
                    try:
                        parsed[k] = float(v)
                    except (TypeError, ValueError):
                        parsed[k] = v
            rows.append(parsed)
    return rows


def write_metadata(out_dir, command, config_text=None, seed=None, extra=None):
    """Write the metadata sidecar for a command's outputs.

    Records the command, a hash of the configuration it ran with, the seed,
    and library versions; no timestamps, so reruns produce identical files.
    """
    import scipy

    from . import __version__

    payload = {
        "command": command,
        "config_sha256": hashlib.sha256((config_text or "").encode()).hexdigest(),
        "seed": seed,
        "versions": {
            "locstat": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    if extra:
        payload.update(extra)
    path = os.path.join(out_dir, "metadata.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
