"""Time-varying autoregressions and their local spectra.

The model simulated and fitted throughout this package is

    X_t + sum_{j=1}^p alpha_j(t/n) X_{t-j} = sigma(t/n) eps_t,

with the AR terms on the LEFT-hand side.  The simulation recursion therefore
NEGATES the coefficient sum:

    X_t = -sum_j alpha_j(t/n) X_{t-j} + sigma(t/n) eps_t.

This is the opposite sign of most AR toolkits; a process with positive
lag-one autocorrelation has a negative alpha_1 here.  The local spectral
density at rescaled time u is

    f(u, lam) = sigma^2(u) / (2 pi) * |1 + sum_j alpha_j(u) e^{i lam j}|^{-2}.
"""

import csv
import json

import numpy as np

from .curves import ConstantCurve, Curve, curve_from_spec, curve_to_spec

__all__ = [
    "TimeSeries",
    "TvARModel",
    "check_stability",
    "simulate_tvar",
    "spectral_density",
    "tv_covariance",
    "white_noise_model",
    "model_to_json",
    "model_from_json",
]

DEFAULT_BURN_IN = 1000
STABILITY_GRID = 512


def check_stability(coeffs, delta=0.0):
    """Check that 1 + sum_j coeffs[j-1] z^j has no root in |z| <= 1 + delta.

    Parameters
    ----------
    coeffs : sequence of float
        AR coefficients alpha_1, ..., alpha_p.  Empty means white noise,
        which is always stable.
    delta : float
        Stability margin, >= 0.

    Returns
    -------
    bool
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if coeffs.size and not np.all(np.isfinite(coeffs)):
        raise ValueError("AR coefficients must be finite")
    if delta < 0:
        raise ValueError("stability margin must be nonnegative")
    if coeffs.size == 0 or not np.any(coeffs):
        return True
    # highest degree first for np.roots; trailing zero alphas reduce the degree
    poly = np.concatenate([coeffs[::-1], [1.0]])
    roots = np.roots(poly)
    if roots.size == 0:
        return True
    return bool(np.min(np.abs(roots)) > 1.0 + delta)


class TimeSeries:
    """A finite real-valued series with optional provenance.

    Parameters
    ----------
    values : array_like
        Observations x_1, ..., x_n.
    seed : int, optional
        RNG seed the series was generated from, if any.
    provenance : dict, optional
        Free-form description of how the series arose (model spec, burn-in).
    """

    def __init__(self, values, seed=None, provenance=None):
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("need a nonempty 1-d array of observations")
        if not np.all(np.isfinite(v)):
            raise ValueError("observations must be finite")
        self.values = v
        self.seed = seed
        self.provenance = provenance

    @property
    def n(self):
        return len(self.values)

    def rescaled_times(self):
        """The design points t/n for t = 1..n."""
        return np.arange(1, self.n + 1) / self.n

    def to_csv(self, path, header=True):
        """Write one value per line, optionally preceded by a header 'x'."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if header:
                writer.writerow(["x"])
            for v in self.values:
                writer.writerow([repr(float(v))])

    @classmethod
    def from_csv(cls, path):
        """Read a series written by :meth:`to_csv` (header optional)."""
        rows = []
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh)):
                if not row or not row[0].strip():
                    continue
                cell = row[0].strip()
                if lineno == 0 and cell.lower() == "x":
                    continue
                rows.append(float(cell))
        return cls(rows)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"TimeSeries(n={self.n}, seed={self.seed!r})"


class TvARModel:
    """Time-varying AR(p) model with curve-valued coefficients.

    Parameters
    ----------
    p : int
        Autoregressive order, >= 0.
    alpha : sequence of Curve
        Coefficient curves alpha_1, ..., alpha_p.
    sigma2 : Curve
        Innovation variance curve, must be strictly positive.
    delta : float
        Stability margin used when validating the coefficient curves.
    burn_in : int
        Default warm-up length used by :func:`simulate_tvar`.

    Raises
    ------
    ValueError
        If the coefficient curves violate the root condition at any point of
        a uniform validation grid, or sigma2 is not positive there.
    """

    def __init__(self, p, alpha, sigma2, delta=0.0, burn_in=DEFAULT_BURN_IN, validate=True):
        p = int(p)
        if p < 0:
            raise ValueError("order p must be nonnegative")
        alpha = tuple(alpha)
        if len(alpha) != p:
            raise ValueError(f"expected {p} coefficient curves, got {len(alpha)}")
        for c in alpha:
            if not isinstance(c, Curve):
                raise ValueError("alpha entries must be Curve instances")
        if not isinstance(sigma2, Curve):
            raise ValueError("sigma2 must be a Curve instance")
        burn_in = int(burn_in)
        if burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        self.p = p
        self.alpha = alpha
        self.sigma2 = sigma2
        self.delta = float(delta)
        self.burn_in = burn_in
        self.validated = False
        if validate:
            self.validate()

    def validate(self, grid_size=STABILITY_GRID):
        u = np.arange(1, grid_size + 1) / grid_size
        s2 = self.sigma2.values(u)
        if np.min(s2) <= 0:
            raise ValueError("sigma2 must be strictly positive on (0, 1]")
        if self.p:
            coeffs = self.alpha_matrix(u)
            for i in range(grid_size):
                if not check_stability(coeffs[i], self.delta):
                    raise ValueError(
                        f"AR polynomial violates the root condition at u={u[i]:.6f}"
                    )
        self.validated = True

    def alpha_matrix(self, u):
        """Evaluate all coefficient curves at u; shape (len(u), p)."""
        u = np.asarray(u, dtype=float)
        if self.p == 0:
            return np.zeros(u.shape + (0,))
        return np.stack([c.values(u) for c in self.alpha], axis=-1)

    def describe(self):
        return {
            "p": self.p,
            "alpha": [curve_to_spec(c) for c in self.alpha],
            "sigma2": curve_to_spec(self.sigma2),
            "delta": self.delta,
            "burn_in": self.burn_in,
        }

    def __repr__(self):
        return f"TvARModel(p={self.p}, alpha={list(self.alpha)!r}, sigma2={self.sigma2!r})"


def white_noise_model(sigma2=1.0):
    """Convenience constructor for the order-0 model."""
    return TvARModel(0, (), ConstantCurve(sigma2))


def simulate_tvar(model, n, seed, burn_in=None):
    """Simulate n observations of a time-varying AR model.

    The recursion X_t = -sum_j alpha_j(t/n) X_{t-j} + sigma(t/n) eps_t is run
    for burn_in + n steps with standard normal innovations; during burn-in the
    coefficients are frozen at their u = 1/n values.  The same
    (model, n, seed, burn_in) always produces bit-identical output.

    Parameters
    ----------
    model : TvARModel
    n : int
        Number of observations returned, >= 1.
    seed : int
        Seed for numpy's default generator.
    burn_in : int, optional
        Number of warm-up steps discarded, >= 0; defaults to model.burn_in.

    Returns
    -------
    TimeSeries
    """
    n = int(n)
    burn_in = int(model.burn_in if burn_in is None else burn_in)
    if n < 1:
        raise ValueError("n must be at least 1")
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    rng = np.random.default_rng(seed)
    total = burn_in + n
    eps = rng.standard_normal(total)

    u = np.empty(total)
    u[:burn_in] = 1.0 / n
    u[burn_in:] = np.arange(1, n + 1) / n
    sig = np.sqrt(model.sigma2.values(u))
    prov = {"model": model.describe(), "burn_in": burn_in, "n": n}

    if model.p == 0:
        return TimeSeries(sig[burn_in:] * eps[burn_in:], seed=seed, provenance=prov)

    a = model.alpha_matrix(u)
    p = model.p
    x = np.zeros(total)
    for t in range(total):
        acc = sig[t] * eps[t]
        for j in range(1, min(p, t) + 1):
            acc -= a[t, j - 1] * x[t - j]
        x[t] = acc
    return TimeSeries(x[burn_in:], seed=seed, provenance=prov)


def transfer_abs2(coeffs, lam):
    """|1 + sum_j coeffs[j] e^{i lam (j+1)}|^2 for an array of frequencies."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    lam = np.asarray(lam, dtype=float)
    acc = np.ones(lam.shape, dtype=complex)
    for j in range(1, coeffs.size + 1):
        acc = acc + coeffs[j - 1] * np.exp(1j * lam * j)
    return np.abs(acc) ** 2


def spectral_density(model, u, lam):
    """Local spectral density f(u, lam) of a TvARModel.

    Parameters
    ----------
    model : TvARModel
    u : array_like
        Rescaled times in (0, 1]; broadcast against lam.
    lam : array_like
        Frequencies in radians; broadcast against u.

    Returns
    -------
    ndarray
        f(u, lam) = sigma^2(u)/(2 pi) |1 + sum_j alpha_j(u) e^{i lam j}|^{-2}.
    """
    u = np.asarray(u, dtype=float)
    lam = np.asarray(lam, dtype=float)
    ub, lb = np.broadcast_arrays(u, lam)
    s2 = model.sigma2.values(ub)
    if model.p == 0:
        return s2 / (2 * np.pi) * np.ones(lb.shape)
    a = model.alpha_matrix(ub)
    acc = np.ones(lb.shape, dtype=complex)
    for j in range(1, model.p + 1):
        acc = acc + a[..., j - 1] * np.exp(1j * lb * j)
    return s2 / (2 * np.pi) / np.abs(acc) ** 2


def tv_covariance(model, u, k, grid=None):
    """Local covariance c(u, k) = int f(u, lam) e^{i lam k} dlam.

    Computed by midpoint quadrature on a symmetric frequency grid; for AR
    spectra the quadrature error decays exponentially in the grid size.

    Parameters
    ----------
    model : TvARModel
    u : float
        Rescaled time in (0, 1].
    k : int
        Lag; c(u, -k) = c(u, k).
    grid : FrequencyGrid, optional
        Defaults to the spectral module's 1024-point grid.

    Returns
    -------
    float
    """
    if grid is None:
        from .spectral import FrequencyGrid

        grid = FrequencyGrid()
    k = int(k)
    f = spectral_density(model, float(u), grid.nodes)
    val = np.sum(f * np.exp(1j * grid.nodes * k)) * grid.weight
    return float(val.real)


def model_to_json(model, path=None):
    """Serialize a TvARModel to JSON text (and optionally a file)."""
    payload = model.describe()
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def model_from_json(source):
    """Load a TvARModel from a JSON string, dict, or file path."""
    if isinstance(source, dict):
        payload = source
    else:
        text = str(source)
        if "{" not in text:
            with open(text) as fh:
                text = fh.read()
        payload = json.loads(text)
    alpha = [curve_from_spec(s) for s in payload.get("alpha", [])]
    sigma2 = curve_from_spec(payload["sigma2"])
    return TvARModel(
        payload.get("p", len(alpha)),
        alpha,
        sigma2,
        delta=payload.get("delta", 0.0),
        burn_in=payload.get("burn_in", DEFAULT_BURN_IN),
    )
