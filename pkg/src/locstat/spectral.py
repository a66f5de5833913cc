"""Pre-periodogram and empirical spectral functionals.

The pre-periodogram localizes the periodogram at each time point: for a
series x_1..x_n and 1-based time t,

    J(t/n, lam) = (1/2 pi) sum_k x_i x_j e^{-i lam k},
    i = floor(t + 1/2 + k/2),  j = floor(t + 1/2 - k/2),

where the sum runs over the lags k whose both indices stay in 1..n.  It is
real and even in lam but not nonnegative; averaged over t it reproduces the
ordinary periodogram, and integrated over lam it returns x_t^2.

Weight functions phi(u, lam) carry their lag coefficients in the unnormalized
convention

    c_phi(u, j) = int_{-pi}^{pi} phi(u, lam) e^{i lam j} dlam,

so that phi(u, lam) = (1/2 pi) sum_j c_phi(u, j) e^{-i lam j}.  All matrix
and norm bounds in this module are stated for that convention.
"""

import numpy as np

__all__ = [
    "FrequencyGrid",
    "PrePeriodogram",
    "TestFunction",
    "NormReport",
    "ResourceLimitError",
    "preperiodogram",
    "periodogram",
    "spectral_functional",
    "spectral_functional_limit",
    "quadratic_form_matrix",
    "weight_norms",
    "constant_weight",
    "lag_curve_weight",
    "ar_inverse_weight",
]

DEFAULT_GRID_SIZE = 1024
MAX_DENSE_N = 4096
VARIATION_GRID = 2048


class ResourceLimitError(RuntimeError):
    """Raised when a dense matrix would exceed the documented size cap."""


class FrequencyGrid:
    """Symmetric midpoint grid on [-pi, pi].

    Nodes lam_m = -pi + 2 pi (m + 1/2)/M for m = 0..M-1, all with weight
    2 pi / M.  The grid integrates trigonometric polynomials of degree < M
    exactly and contains -lam for every node lam.
    """

    def __init__(self, size=DEFAULT_GRID_SIZE):
        size = int(size)
        if size < 2 or size % 2:
            raise ValueError("grid size must be an even integer >= 2")
        self.size = size
        self.nodes = -np.pi + 2 * np.pi * (np.arange(size) + 0.5) / size
        self.weight = 2 * np.pi / size

    def integrate(self, values, axis=-1):
        """Riemann sum along the frequency axis."""
        return np.sum(values, axis=axis) * self.weight

    def __repr__(self):
        return f"FrequencyGrid(size={self.size})"


def _series_values(series):
    values = getattr(series, "values", series)
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a nonempty 1-d series")
    if not np.all(np.isfinite(x)):
        raise ValueError("series values must be finite")
    return x


class PrePeriodogram:
    """Lag-product representation of a series' pre-periodogram."""

    def __init__(self, series):
        self.x = _series_values(series)
        self.n = len(self.x)

    def lag_products(self, k):
        """All admissible products at lag k.

        Returns
        -------
        t : ndarray of int
            1-based time points where lag k is admissible.
        products : ndarray
            x_i x_j with i = floor(t + 1/2 + k/2), j = floor(t + 1/2 - k/2).
        """
        n = self.n
        k = int(k)
        t = np.arange(1, n + 1)
        i = (2 * t + 1 + k) // 2
        j = (2 * t + 1 - k) // 2
        ok = (i >= 1) & (i <= n) & (j >= 1) & (j <= n)
        return t[ok], self.x[i[ok] - 1] * self.x[j[ok] - 1]

    def lag_matrix(self, max_lag=None):
        """Dense matrix P[t-1, k] of lag products for k = 0..max_lag.

        Entries at inadmissible (t, k) are zero.  By symmetry the negative
        lags satisfy P_t(-k) = P_t(k).
        """
        n = self.n
        K = n - 1 if max_lag is None else min(int(max_lag), n - 1)
        P = np.zeros((n, K + 1))
        for k in range(K + 1):
            t, prods = self.lag_products(k)
            P[t - 1, k] = prods
        return P

    def evaluate(self, t, lam):
        """J(t/n, lam) for one 1-based t and an array of frequencies."""
        t = int(t)
        if not 1 <= t <= self.n:
            raise ValueError("t must lie in 1..n")
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        for k in range(0, self.n):
            tt, prods = self.lag_products(k)
            pos = np.searchsorted(tt, t)
            if pos >= len(tt) or tt[pos] != t:
                continue
            contrib = prods[pos] * np.cos(lam * k)
            out = out + (contrib if k == 0 else 2 * contrib)
        return out / (2 * np.pi)

    def evaluate_grid(self, grid):
        """Matrix of J(t/n, lam_m) for all t (rows) and grid nodes (columns).

        Uses the cosine representation J = (P_0 + 2 sum_{k>=1} P_k cos(k lam))
        / (2 pi); one dense matrix product, chunked over t for large n.
        """
        n = self.n
        P = self.lag_matrix()
        P[:, 1:] *= 2.0
        k = np.arange(n)
        C = np.cos(np.outer(k, grid.nodes))
        return (P @ C) / (2 * np.pi)

    def squared_values(self):
        """The exact frequency integrals int J(t/n, lam) dlam = x_t^2."""
        return self.x ** 2


def preperiodogram(series):
    """Build the PrePeriodogram of a series."""
    return PrePeriodogram(series)


def periodogram(series, lam):
    """Ordinary periodogram I(lam) = |sum_t x_t e^{-i lam t}|^2 / (2 pi n).

    Parameters
    ----------
    series : TimeSeries or array_like
    lam : FrequencyGrid or array_like
        Evaluation frequencies.
    """
    x = _series_values(series)
    nodes = lam.nodes if isinstance(lam, FrequencyGrid) else np.asarray(lam, dtype=float)
    n = len(x)
    t = np.arange(1, n + 1)
    dft = np.exp(-1j * np.outer(nodes, t)) @ x
    return np.abs(dft) ** 2 / (2 * np.pi * n)


class TestFunction:
    """Weight function phi(u, lam) with known lag coefficients.

    Parameters
    ----------
    values_fn : callable
        values_fn(u, lam) -> phi(u, lam), broadcasting its arguments.
    lag_fn : callable
        lag_fn(u, j) -> int phi(u, lam) e^{i lam j} dlam for integer j,
        vectorized over the array u.
    lag_support : int or None
        Smallest J with lag_fn(u, j) = 0 for all |j| > J; None if unknown.
    label : str
        Free-form description.
    """

    __test__ = False  # not a pytest collection target

    def __init__(self, values_fn, lag_fn, lag_support=None, label=""):
        self._values_fn = values_fn
        self._lag_fn = lag_fn
        if lag_support is not None:
            lag_support = int(lag_support)
            if lag_support < 0:
                raise ValueError("lag support must be nonnegative")
        self.lag_support = lag_support
        self.label = label

    def values(self, u, lam):
        return np.asarray(self._values_fn(np.asarray(u, dtype=float), np.asarray(lam, dtype=float)), dtype=float)

    def lag(self, u, j):
        """Lag coefficient c_phi(u, j), unnormalized convention."""
        u = np.asarray(u, dtype=float)
        if self.lag_support is not None and abs(int(j)) > self.lag_support:
            return np.zeros(u.shape)
        return np.asarray(self._lag_fn(u, int(j)), dtype=float)

    def scaled(self, c):
        c = float(c)
        return TestFunction(
            lambda u, lam: c * self._values_fn(u, lam),
            lambda u, j: c * self._lag_fn(u, j),
            lag_support=self.lag_support,
            label=f"{c} * {self.label}" if self.label else "",
        )

    def __repr__(self):
        return f"TestFunction(lag_support={self.lag_support}, label={self.label!r})"


def constant_weight(value=1.0):
    """phi(u, lam) = value; single lag coefficient 2 pi value at j = 0."""
    value = float(value)

    def values_fn(u, lam):
        ub, lb = np.broadcast_arrays(u, lam)
        return np.full(ub.shape, value)

    def lag_fn(u, j):
        return np.full(np.shape(u), 2 * np.pi * value if j == 0 else 0.0)

    return TestFunction(values_fn, lag_fn, lag_support=0, label=f"constant {value}")


def lag_curve_weight(curves, label=""):
    """Weight built from real, even-in-lag coefficient curves.

    Parameters
    ----------
    curves : dict
        Maps nonnegative lag j to a Curve (or constant) giving the lag
        coefficient c_phi(u, j); negative lags mirror the positive ones.
        The field is phi(u, lam) = (1/2 pi) sum_j c_phi(u, j) e^{-i lam j},
        real and even in lam.
    """
    from .curves import ConstantCurve, Curve

    table = {}
    for j, c in curves.items():
        j = int(j)
        if j < 0:
            raise ValueError("specify nonnegative lags only; negatives mirror")
        table[j] = c if isinstance(c, Curve) else ConstantCurve(float(c))
    if not table:
        raise ValueError("need at least one lag coefficient curve")
    support = max(table)

    def values_fn(u, lam):
        ub, lb = np.broadcast_arrays(np.asarray(u, float), np.asarray(lam, float))
        out = np.zeros(ub.shape)
        for j, c in table.items():
            vals = c.values(ub)
            term = vals * np.cos(lb * j)
            out = out + (term if j == 0 else 2 * term)
        return out / (2 * np.pi)

    def lag_fn(u, j):
        c = table.get(abs(int(j)))
        if c is None:
            return np.zeros(np.shape(u))
        return c.values(np.asarray(u, float))

    return TestFunction(values_fn, lag_fn, lag_support=support, label=label or "lag-curve weight")


def ar_inverse_weight(model, scale=1.0):
    """Inverse-spectrum weight of an AR model: phi = scale / f.

    With scale = 1 this is 2 pi |1 + sum alpha_j(u) e^{i lam j}|^2 / sigma^2(u),
    the weight whose spectral functional drives the quasi-likelihood; with
    scale = 1/(2 pi) it is the normalized version |...|^2 / sigma^2.  Lag
    support equals the model order.
    """
    p = model.p
    scale = float(scale)

    def gamma(u, m):
        # autocorrelation of the coefficient sequence (1, alpha_1(u), ...)
        u = np.asarray(u, dtype=float)
        a = model.alpha_matrix(u)
        coeff = [np.ones(u.shape)] + [a[..., j] for j in range(p)]
        m = abs(int(m))
        acc = np.zeros(u.shape)
        for i in range(0, p - m + 1):
            acc = acc + coeff[i] * coeff[i + m]
        return acc

    def values_fn(u, lam):
        from .process import spectral_density

        return scale / spectral_density(model, u, lam)

    def lag_fn(u, j):
        if abs(int(j)) > p:
            return np.zeros(np.shape(u))
        u = np.asarray(u, dtype=float)
        return scale * (4 * np.pi ** 2) * gamma(u, j) / model.sigma2.values(u)

    return TestFunction(values_fn, lag_fn, lag_support=p, label=f"{scale} / f")


def quadratic_form_matrix(phi, n):
    """Dense kernel matrix with entries c_phi(floor((r+s)/2)/n, r-s).

    For 1-based indices r, s in 1..n.  It represents the spectral functional
    as a quadratic form: mean-over-t of int phi J dlam equals
    x' M x / (2 pi n).  Requires finite lag support and n <= 4096.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_DENSE_N:
        raise ResourceLimitError(f"dense kernel capped at n = {MAX_DENSE_N}")
    if phi.lag_support is None:
        raise ValueError("dense kernel needs a weight with finite lag support")
    U = np.zeros((n, n))
    K = min(phi.lag_support, n - 1)
    for d in range(-K, K + 1):
        r = np.arange(max(1, 1 + d), min(n, n + d) + 1)
        s = r - d
        mids = (r + s) // 2
        U[r - 1, s - 1] = phi.lag(mids / n, d)
    return U


def spectral_functional(series, phi, path="lag", grid=None):
    """Empirical spectral functional mean_t int phi(t/n, lam) J(t/n, lam) dlam.

    Three algebraically equivalent computation paths are provided so they can
    be cross-checked:

    - "lag": exact lag-product sum using the weight's lag coefficients;
    - "quadrature": frequency-grid Riemann sum against the pre-periodogram
      (grid argument required);
    - "matrix": quadratic form x' M x / (2 pi n) with the dense kernel.

    Parameters
    ----------
    series : TimeSeries or array_like
    phi : TestFunction
    path : {"lag", "quadrature", "matrix"}
    grid : FrequencyGrid, required for the quadrature path

    Returns
    -------
    float
    """
    x = _series_values(series)
    n = len(x)
    J = PrePeriodogram(x)

    if path == "lag":
        if phi.lag_support is None:
            raise ValueError("lag path needs a weight with finite lag support")
        K = min(phi.lag_support, n - 1)
        acc = 0.0
        for k in range(-K, K + 1):
            t, prods = J.lag_products(k)
            if len(t) == 0:
                continue
            acc += float(np.dot(phi.lag(t / n, -k), prods))
        return acc / (2 * np.pi * n)

    if path == "quadrature":
        if grid is None:
            raise ValueError("quadrature path requires an explicit FrequencyGrid")
        Jmat = J.evaluate_grid(grid)
        t = np.arange(1, n + 1) / n
        phivals = phi.values(t[:, None], grid.nodes[None, :])
        return float(np.sum(phivals * Jmat) * grid.weight / n)

    if path == "matrix":
        U = quadratic_form_matrix(phi, n)
        return float(x @ U @ x) / (2 * np.pi * n)

    raise ValueError(f"unknown path {path!r}")


def spectral_functional_limit(phi, f, grid=None, u_grid_size=512):
    """Population functional int_0^1 int phi(u, lam) f(u, lam) dlam du.

    Parameters
    ----------
    phi : TestFunction
    f : SpectrumField, TvARModel, or callable f(u, lam)
    grid : FrequencyGrid, optional
    u_grid_size : int
        Midpoint rule resolution in rescaled time.
    """
    if grid is None:
        grid = FrequencyGrid()
    fvals = _field_values(f)
    u = (np.arange(u_grid_size) + 0.5) / u_grid_size
    phiv = phi.values(u[:, None], grid.nodes[None, :])
    fv = fvals(u[:, None], grid.nodes[None, :])
    return float(np.sum(phiv * fv) * grid.weight / u_grid_size)


def _field_values(f):
    if callable(f) and not hasattr(f, "values"):
        return f
    if hasattr(f, "values") and not hasattr(f, "p"):
        return f.values
    # TvARModel
    from .process import spectral_density

    return lambda u, lam: spectral_density(f, u, lam)


class NormReport:
    """Norm summary of a weight function.

    Attributes
    ----------
    l2 : float
        L2 norm of phi on (0,1] x [-pi, pi].
    l2_discrete : float
        Same with the time integral replaced by the mean over t/n.
    lag_sup_sum : float
        Sum over lags of the sup over time of |c_phi(u, j)|.
    variation_sup : float
        Sup over lags of the total variation of c_phi(., j).
    variation_sum : float
        Sum over lags of the same total variations.
    """

    def __init__(self, l2, l2_discrete, lag_sup_sum, variation_sup, variation_sum):
        self.l2 = float(l2)
        self.l2_discrete = float(l2_discrete)
        self.lag_sup_sum = float(lag_sup_sum)
        self.variation_sup = float(variation_sup)
        self.variation_sum = float(variation_sum)

    def __repr__(self):
        return (
            f"NormReport(l2={self.l2:.6g}, l2_discrete={self.l2_discrete:.6g}, "
            f"lag_sup_sum={self.lag_sup_sum:.6g}, variation_sup={self.variation_sup:.6g}, "
            f"variation_sum={self.variation_sum:.6g})"
        )


def weight_norms(phi, n, u_resolution=VARIATION_GRID):
    """Compute the NormReport of a weight with finite lag support.

    Sups and total variations are taken over the union of a uniform
    u_resolution-point grid and the design points t/n, so every value that
    enters the dense kernel for this n is covered.  L2 norms use the lag-space
    Parseval identity int phi(u,.)^2 dlam = (1/2 pi) sum_j c_phi(u, j)^2, the
    time integral a midpoint rule with u_resolution cells.

    Parameters
    ----------
    phi : TestFunction
        Must have finite lag support.
    n : int
        Sample size whose design points are included in the sup grids.
    u_resolution : int
        Grid resolution for sups, variations, and the time integral.
    """
    if phi.lag_support is None:
        raise ValueError("norms need a weight with finite lag support")
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    J = phi.lag_support
    sup_grid = np.union1d(np.arange(1, u_resolution + 1) / u_resolution, np.arange(1, n + 1) / n)
    mid_grid = (np.arange(u_resolution) + 0.5) / u_resolution
    design = np.arange(1, n + 1) / n

    sq_mid = np.zeros(mid_grid.shape)
    sq_design = np.zeros(design.shape)
    lag_sup_sum = 0.0
    variation_sup = 0.0
    variation_sum = 0.0
    for j in range(-J, J + 1):
        on_sup = phi.lag(sup_grid, j)
        lag_sup_sum += float(np.max(np.abs(on_sup)))
        tv = float(np.sum(np.abs(np.diff(on_sup))))
        variation_sup = max(variation_sup, tv)
        variation_sum += tv
        sq_mid += phi.lag(mid_grid, j) ** 2
        sq_design += phi.lag(design, j) ** 2

    l2 = np.sqrt(np.mean(sq_mid) / (2 * np.pi))
    l2_discrete = np.sqrt(np.mean(sq_design) / (2 * np.pi))
    return NormReport(l2, l2_discrete, lag_sup_sum, variation_sup, variation_sum)
