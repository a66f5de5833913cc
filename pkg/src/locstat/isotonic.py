"""Isotonic regression machinery for the sieve variance estimator.

The variance step of the alternating fit minimizes

    sum_t w_t { log y_t + x_t / y_t }

over nondecreasing y.  Because the pooled minimizer of this objective on a
block is the weighted mean of the block's x values, the solution coincides
with weighted least-squares isotonic regression and is computed in linear
time by pool-adjacent-violators, equivalently as the right derivative of the
greatest convex minorant of the cumulative sum diagram.
"""

import numpy as np

from .curves import MonotoneStepCurve

__all__ = [
    "CumulativeSumDiagram",
    "IsotonicFit",
    "gcm_slopes",
    "pava_monotone",
    "sieve_pava",
]


class CumulativeSumDiagram:
    """Points (xi_i, eta_i), i = 0..m, with xi_0 = eta_0 = 0.

    Slopes between consecutive points are the raw values being regressed;
    abscissa increments are their weights (normalized to total 1 by the
    constructor helpers).
    """

    def __init__(self, xi, eta):
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        if xi.ndim != 1 or xi.shape != eta.shape or xi.size < 2:
            raise ValueError("need matching 1-d arrays with at least one segment")
        if xi[0] != 0.0 or eta[0] != 0.0:
            raise ValueError("diagram must start at the origin")
        if np.any(np.diff(xi) <= 0):
            raise ValueError("abscissae must be strictly increasing")
        if not (np.all(np.isfinite(xi)) and np.all(np.isfinite(eta))):
            raise ValueError("diagram points must be finite")
        self.xi = xi
        self.eta = eta

    @classmethod
    def from_values(cls, values, weights=None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("need a nonempty 1-d array of values")
        if weights is None:
            weights = np.ones_like(values)
        else:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != values.shape:
                raise ValueError("weights must match values")
            if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
                raise ValueError("weights must be positive and finite")
        total = float(np.sum(weights))
        xi = np.concatenate([[0.0], np.cumsum(weights) / total])
        eta = np.concatenate([[0.0], np.cumsum(weights * values) / total])
        return cls(xi, eta)

    @property
    def segments(self):
        return len(self.xi) - 1

    def raw_slopes(self):
        return np.diff(self.eta) / np.diff(self.xi)


class IsotonicFit:
    """Result of an isotonic regression.

    Attributes
    ----------
    values : ndarray
        Fitted value for each input position, nondecreasing.
    blocks : list of (start, stop)
        Half-open index ranges of the level sets, in order.
    """

    def __init__(self, values, blocks):
        self.values = np.asarray(values, dtype=float)
        self.blocks = list(blocks)

    @property
    def block_values(self):
        return np.array([self.values[b0] for b0, _ in self.blocks])

    def __repr__(self):
        return f"IsotonicFit(values={self.values.tolist()!r}, blocks={self.blocks!r})"


def _pool(values, weights):
    """Stack-based pool-adjacent-violators; returns (pooled means, blocks)."""
    # stack rows: [weight, weighted sum, count]
    w_stack = []
    s_stack = []
    c_stack = []
    for v, w in zip(values, weights):
        w_stack.append(float(w))
        s_stack.append(float(w) * float(v))
        c_stack.append(1)
        while len(w_stack) > 1 and s_stack[-2] / w_stack[-2] >= s_stack[-1] / w_stack[-1]:
            w_stack[-2] += w_stack[-1]
            s_stack[-2] += s_stack[-1]
            c_stack[-2] += c_stack[-1]
            del w_stack[-1], s_stack[-1], c_stack[-1]
    fitted = np.empty(len(values))
    blocks = []
    pos = 0
    for w, s, c in zip(w_stack, s_stack, c_stack):
        fitted[pos : pos + c] = s / w
        blocks.append((pos, pos + c))
        pos += c
    return fitted, blocks


def gcm_slopes(diagram):
    """Right derivative of the greatest convex minorant of a diagram.

    Returns
    -------
    IsotonicFit
        One fitted slope per diagram segment; slopes are nondecreasing and
        the minorant touches the diagram at every block boundary.
    """
    if not isinstance(diagram, CumulativeSumDiagram):
        raise ValueError("expected a CumulativeSumDiagram")
    dx = np.diff(diagram.xi)
    slopes = np.diff(diagram.eta) / dx
    return IsotonicFit(*_pool(slopes, dx))


def pava_monotone(values, weights=None):
    """Weighted isotonic fit of nonnegative values.

    Minimizes both sum w (y - x)^2 and sum w (log y + x/y) over nondecreasing
    y (the two objectives share their pooled-mean minimizer).  Preserves the
    weighted mean exactly and is idempotent.

    Parameters
    ----------
    values : array_like
        Nonnegative observations.
    weights : array_like, optional
        Positive weights, default all ones.

    Returns
    -------
    IsotonicFit
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("need a nonempty 1-d array of values")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("values must be nonnegative and finite")
    if weights is None:
        weights = np.ones_like(values)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != values.shape:
            raise ValueError("weights must match values")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be positive and finite")
    return IsotonicFit(*_pool(values, weights))


def _mean_preserving_clip(values, weights, lo, hi):
    """Clip a nondecreasing vector to [lo, hi], shifting first to keep the
    weighted mean.  Returns the clipped vector; when the target mean is
    outside [lo, hi] it degenerates to the constant vector at the nearer
    bound (the closest feasible mean)."""
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    total = float(np.sum(w))
    target = float(np.dot(w, v))
    if target <= lo * total:
        return np.full_like(v, lo)
    if target >= hi * total:
        return np.full_like(v, hi)

    def mass(mu):
        return float(np.dot(w, np.clip(v + mu, lo, hi)))

    # piecewise-linear root find on the breakpoints of mu -> mass(mu)
    breaks = np.unique(np.concatenate([lo - v, hi - v]))
    masses = np.array([mass(b) for b in breaks])
    idx = int(np.searchsorted(masses, target))
    if idx == 0:
        mu = breaks[0]
    elif idx >= len(breaks):
        mu = breaks[-1]
    else:
        b0, b1 = breaks[idx - 1], breaks[idx]
        m0, m1 = masses[idx - 1], masses[idx]
        mu = b0 if m1 == m0 else b0 + (target - m0) * (b1 - b0) / (m1 - m0)
    return np.clip(v + mu, lo, hi)


def sieve_pava(squared_residuals, n, p, k_n, eps, bounds="clip"):
    """Monotone variance estimate on a k_n-knot sieve.

    Aggregates the squared residuals e_{p+1}^2, ..., e_n^2 into the chunks
    induced by the knot grid t(j) = floor(n j / k_n), isotonizes the chunk
    means by PAVA (which minimizes the Gaussian likelihood objective over the
    sieve), and applies the bound [eps^2, 1/eps^2].

    Parameters
    ----------
    squared_residuals : array_like
        Nonnegative, length n - p, ordered by t.
    n : int
        Sample size.
    p : int
        AR order (residuals start at t = p + 1).
    k_n : int
        Number of knots, >= 1.
    eps : float
        Bound parameter in (0, 1).
    bounds : {"clip", "mean_preserving"}
        "clip" truncates the fit at the bounds; "mean_preserving" shifts
        before clipping so the weighted mean of the fit over the data-bearing
        knots equals the mean of the squared residuals (when feasible).

    Returns
    -------
    MonotoneStepCurve
        Total on (0, 1]; knots before the first admissible design point copy
        the first fitted value.
    """
    sq = np.asarray(squared_residuals, dtype=float)
    n, p, k_n = int(n), int(p), int(k_n)
    if p < 0 or n <= p:
        raise ValueError("need n > p >= 0")
    if sq.ndim != 1 or sq.size != n - p:
        raise ValueError(f"expected {n - p} squared residuals, got {sq.size}")
    if np.any(sq < 0) or not np.all(np.isfinite(sq)):
        raise ValueError("squared residuals must be nonnegative and finite")
    if k_n < 1:
        raise ValueError("k_n must be at least 1")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    if bounds not in ("clip", "mean_preserving"):
        raise ValueError(f"unknown bounds mode {bounds!r}")

    jmin = (k_n * (p + 1) + n - 1) // n
    if jmin > k_n:
        raise ValueError("sieve has no admissible knots")
    js = np.arange(jmin, k_n + 1)
    # floor, not ceil: chunk j must be exactly {t : t/n in ((j-1)/k_n, j/k_n]},
    # the set of design points the step curve evaluates with knot j's value;
    # otherwise PAVA is not the exact minimizer of the evaluated objective.
    t_of_j = (n * js) // k_n

    cum = np.concatenate([[0.0], np.cumsum(sq)])
    counts = np.diff(np.concatenate([[p], t_of_j]))
    keep = counts > 0
    kept_t = t_of_j[keep]
    kept_counts = counts[keep].astype(float)
    sums = np.diff(np.concatenate([[0.0], cum[kept_t - p]]))
    means = sums / kept_counts

    fit = pava_monotone(means, kept_counts)
    # map fitted chunk values back to every knot j >= jmin
    owner = np.searchsorted(kept_t, t_of_j)
    vals = fit.values[owner]

    lo, hi = eps ** 2, 1.0 / eps ** 2
    if bounds == "mean_preserving":
        kept_vals = _mean_preserving_clip(fit.values, kept_counts, lo, hi)
        vals = kept_vals[owner]
    else:
        vals = np.clip(vals, lo, hi)

    full = np.concatenate([np.full(jmin - 1, vals[0]), vals])
    return MonotoneStepCurve(full, eps)
