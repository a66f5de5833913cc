"""Parameter curves on rescaled time.

Every time-varying quantity in this package (AR coefficients, innovation
variances) is a function of rescaled time u in (0, 1].  The curve classes here
share a single interface: ``values(u)`` evaluates the curve at an array of
rescaled times and raises ``ValueError`` outside the domain.
"""

import numpy as np

__all__ = [
    "Curve",
    "ConstantCurve",
    "FourierCurve",
    "SampledCurve",
    "MonotoneStepCurve",
    "curve_to_spec",
    "curve_from_spec",
]


def _as_unit_time(u):
    u = np.asarray(u, dtype=float)
    if u.size and (np.min(u) <= 0.0 or np.max(u) > 1.0):
        raise ValueError("rescaled time must lie in (0, 1]")
    if u.size and not np.all(np.isfinite(u)):
        raise ValueError("rescaled time must be finite")
    return u


def _step_index(u, k):
    # cell j covers ((j-1)/k, j/k]; the nudge keeps exactly representable
    # boundaries u = j/k inside cell j despite float rounding
    idx = np.ceil(u * k - 1e-9).astype(int)
    return np.clip(idx, 1, k)


class Curve:
    """A real-valued function of rescaled time u in (0, 1]."""

    def values(self, u):
        raise NotImplementedError

    def __call__(self, u):
        return self.values(u)


class ConstantCurve(Curve):
    """Curve that takes a single value everywhere."""

    def __init__(self, value):
        value = float(value)
        if not np.isfinite(value):
            raise ValueError("curve value must be finite")
        self.value = value

    def values(self, u):
        u = _as_unit_time(u)
        return np.full(u.shape, self.value)

    def __repr__(self):
        return f"ConstantCurve({self.value!r})"


class FourierCurve(Curve):
    """Low-order trigonometric polynomial in rescaled time.

    Evaluates a0 + sum_j a_j cos(2 pi j u) + b_j sin(2 pi j u).

    Parameters
    ----------
    a0 : float
        Constant term.
    a, b : sequences of float
        Cosine and sine coefficients for j = 1, ..., order.  The shorter list
        is zero-padded.
    """

    def __init__(self, a0, a=(), b=()):
        self.a0 = float(a0)
        self.a = np.atleast_1d(np.asarray(a, dtype=float))
        self.b = np.atleast_1d(np.asarray(b, dtype=float))
        if self.a.ndim != 1 or self.b.ndim != 1:
            raise ValueError("coefficient lists must be one-dimensional")
        width = max(len(self.a), len(self.b))
        self.a = np.pad(self.a, (0, width - len(self.a)))
        self.b = np.pad(self.b, (0, width - len(self.b)))
        if not (np.isfinite(self.a0) and np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise ValueError("curve coefficients must be finite")

    @property
    def order(self):
        return len(self.a)

    def values(self, u):
        u = _as_unit_time(u)
        out = np.full(u.shape, self.a0)
        for j in range(1, self.order + 1):
            out = out + self.a[j - 1] * np.cos(2 * np.pi * j * u)
            out = out + self.b[j - 1] * np.sin(2 * np.pi * j * u)
        return out

    def __repr__(self):
        return f"FourierCurve({self.a0!r}, a={self.a.tolist()!r}, b={self.b.tolist()!r})"


class SampledCurve(Curve):
    """Piecewise-constant curve from m samples.

    Sample i (1-based) is the value on ((i-1)/m, i/m], so the curve is
    right-continuous at the cell boundaries and total on (0, 1].
    """

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("need a nonempty 1-d array of samples")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve samples must be finite")
        self.samples = v

    def values(self, u):
        u = _as_unit_time(u)
        idx = _step_index(u, len(self.samples))
        return self.samples[idx - 1]

    def __repr__(self):
        return f"SampledCurve({self.samples.tolist()!r})"


class MonotoneStepCurve(Curve):
    """Nondecreasing step curve on a uniform knot grid with hard bounds.

    Knot j (1-based, j = 1..k) is the value on ((j-1)/k, j/k].  Values must be
    nondecreasing and lie in [eps^2, 1/eps^2]; this is the shape produced by
    the sieve variance estimator.

    Parameters
    ----------
    values : sequence of float
        Knot values, nondecreasing.
    eps : float
        Bound parameter in (0, 1); lower bound eps^2, upper bound 1/eps^2.
    """

    def __init__(self, values, eps):
        v = np.asarray(values, dtype=float)
        eps = float(eps)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("need a nonempty 1-d array of knot values")
        if not (0.0 < eps < 1.0):
            raise ValueError("eps must lie in (0, 1)")
        if not np.all(np.isfinite(v)):
            raise ValueError("knot values must be finite")
        if np.any(np.diff(v) < 0):
            raise ValueError("knot values must be nondecreasing")
        lower, upper = eps ** 2, 1.0 / eps ** 2
        slack = 1e-12 * max(1.0, upper)
        if v[0] < lower - slack or v[-1] > upper + slack:
            raise ValueError("knot values must lie within [eps^2, 1/eps^2]")
        self.knot_values = v
        self.eps = eps

    @property
    def knots(self):
        return len(self.knot_values)

    @property
    def lower(self):
        return self.eps ** 2

    @property
    def upper(self):
        return 1.0 / self.eps ** 2

    def values(self, u):
        u = _as_unit_time(u)
        idx = _step_index(u, self.knots)
        return self.knot_values[idx - 1]

    def __repr__(self):
        return f"MonotoneStepCurve({self.knot_values.tolist()!r}, eps={self.eps!r})"


def curve_to_spec(curve):
    """Serialize a curve to a JSON-compatible dict."""
    if isinstance(curve, ConstantCurve):
        return {"type": "constant", "value": curve.value}
    if isinstance(curve, FourierCurve):
        return {"type": "fourier", "a0": curve.a0, "a": curve.a.tolist(), "b": curve.b.tolist()}
    if isinstance(curve, MonotoneStepCurve):
        return {"type": "monotone_step", "values": curve.knot_values.tolist(), "eps": curve.eps}
    if isinstance(curve, SampledCurve):
        return {"type": "sampled", "values": curve.samples.tolist()}
    raise ValueError(f"cannot serialize curve of type {type(curve).__name__}")


def curve_from_spec(spec):
    """Deserialize a curve from the dict produced by :func:`curve_to_spec`."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError("curve spec must be a dict with a 'type' key")
    kind = spec["type"]
    if kind == "constant":
        return ConstantCurve(spec["value"])
    if kind == "fourier":
        return FourierCurve(spec.get("a0", 0.0), spec.get("a", ()), spec.get("b", ()))
    if kind == "monotone_step":
        return MonotoneStepCurve(spec["values"], spec["eps"])
    if kind == "sampled":
        return SampledCurve(spec["values"])
    raise ValueError(f"unknown curve type {kind!r}")
