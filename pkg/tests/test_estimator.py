import math

import numpy as np
import pytest

from locstat.curves import ConstantCurve, SampledCurve
from locstat.estimator import (
    DegenerateDataError,
    FitConfig,
    default_eps,
    default_knots,
    curve_inverse_l2_distance,
    fit_fourier_tvar,
    fit_monotone_tvar,
    inverse_l2_distance,
    wls_ar,
)
from locstat.isotonic import sieve_pava
from locstat.likelihood import SpectrumField, conditional_likelihood, whittle_contrast
from locstat.process import TvARModel, simulate_tvar
from locstat.spectral import FrequencyGrid


def step_model():
    return TvARModel(1, [ConstantCurve(0.5)], SampledCurve([1.0, 2.0]))


def wavy_model():
    from locstat.curves import FourierCurve

    return TvARModel(1, [FourierCurve(0.0, a=[0.5])], ConstantCurve(1.0))


def test_default_knots_and_eps_frozen():
    assert default_knots(256) == 3
    assert default_knots(4096) == 4
    assert default_eps(256) == pytest.approx(math.log(256) ** -0.2)
    with pytest.raises(ValueError):
        default_knots(1)
    with pytest.raises(ValueError):
        default_eps(2)


def test_fit_config_validation():
    FitConfig(p=0, k_n=1, eps=0.5)
    with pytest.raises(ValueError):
        FitConfig(p=-1)
    with pytest.raises(ValueError):
        FitConfig(eps=1.0)
    with pytest.raises(ValueError):
        FitConfig(k_n=0)
    with pytest.raises(ValueError):
        FitConfig(max_iter=0)
    with pytest.raises(ValueError):
        FitConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        FitConfig(bounds="project")
    assert FitConfig(p=1).resolve(256) == (3, pytest.approx(math.log(256) ** -0.2))
    assert FitConfig(p=1, k_n=7, eps=0.3).resolve(256) == (7, 0.3)


def test_wls_alternating_series_frozen():
    # x_t = -x_{t-1} exactly, so the order-1 coefficient is exactly 1
    coef = wls_ar(np.array([1.0, -1.0, 1.0, -1.0]), 1.0, 1)
    assert coef[0] == pytest.approx(1.0, abs=1e-14)


def test_wls_order_zero_and_errors():
    assert wls_ar(np.array([1.0, 2.0]), 1.0, 0).size == 0
    with pytest.raises(ValueError):
        wls_ar(np.array([1.0, 2.0]), 1.0, -1)
    with pytest.raises(ValueError):
        wls_ar(np.array([1.0, 2.0]), 1.0, 2)
    with pytest.raises(ValueError):
        wls_ar(np.array([1.0, 2.0, 3.0]), -1.0, 1)
    with pytest.raises(DegenerateDataError):
        wls_ar(np.zeros(50), 1.0, 1)


def test_wls_residuals_orthogonal_to_weighted_regressors():
    m = step_model()
    for seed in range(5):
        x = simulate_tvar(m, 300, seed=seed).values
        n = len(x)
        p = 2
        sigma2 = SampledCurve([1.0, 2.0])
        coef = wls_ar(x, sigma2, p)
        w = 1.0 / sigma2.values(np.arange(p + 1, n + 1) / n)
        resid = x[p:] + coef[0] * x[p - 1 : n - 1] + coef[1] * x[p - 2 : n - 2]
        scale = float(np.sum(np.abs(x)))
        for j in range(1, p + 1):
            inner = float(np.dot(w * resid, x[p - j : n - j]))
            assert abs(inner) <= 1e-8 * scale


def test_monotone_fit_descent_with_loose_bounds():
    # eps small enough that the variance bounds never bind: every half step
    # is an exact block minimizer, so the trace decreases to round-off
    m = step_model()
    x = simulate_tvar(m, 512, seed=3)
    res = fit_monotone_tvar(x, FitConfig(p=1, eps=0.01))
    full = [res.objective_trace[0]]
    for a, b in zip(res.wls_trace, res.pava_trace):
        full.extend([a, b])
    for prev, nxt in zip(full, full[1:]):
        assert nxt <= prev + 1e-12 * max(1.0, abs(prev))


def test_monotone_fit_descent_with_binding_bounds():
    m = step_model()
    x = simulate_tvar(m, 512, seed=4)
    res = fit_monotone_tvar(x, FitConfig(p=1, eps=0.8))  # bounds [0.64, 1.5625] bind
    full = [res.objective_trace[0]]
    for a, b in zip(res.wls_trace, res.pava_trace):
        full.extend([a, b])
    for prev, nxt in zip(full, full[1:]):
        assert nxt <= prev + 1e-8 * max(1.0, abs(prev))


def test_monotone_fit_fixed_point_rerun():
    m = step_model()
    x = simulate_tvar(m, 512, seed=5)
    cfg = FitConfig(p=1)
    res = fit_monotone_tvar(x, cfg)
    again = fit_monotone_tvar(x, cfg, sigma2_init=res.sigma2_hat)
    assert abs(again.objective - res.objective) <= cfg.rel_tol * max(1.0, abs(res.objective))
    assert abs(again.alpha_hat[0] - res.alpha_hat[0]) < 1e-3


def test_monotone_fit_recovers_step_model():
    m = step_model()
    x = simulate_tvar(m, 2048, seed=6)
    res = fit_monotone_tvar(x, FitConfig(p=1))
    assert res.converged
    assert res.alpha_stable
    assert abs(res.alpha_hat[0] - 0.5) < 0.1
    vals = res.sigma2_hat.knot_values
    assert vals[0] < 1.5 < vals[-1]  # variance step is visible


def test_monotone_fit_near_profile_minimum():
    m = step_model()
    x = simulate_tvar(m, 512, seed=3)
    res = fit_monotone_tvar(x, FitConfig(p=1))
    n = len(x.values)
    a0 = float(res.alpha_hat[0])
    for da in (-0.05, -0.01, 0.01, 0.05):
        r = x.values[1:] + (a0 + da) * x.values[:-1]
        s = sieve_pava(r**2, n, 1, res.k_n, res.eps)
        perturbed = conditional_likelihood(x, np.array([a0 + da]), s)
        assert perturbed >= res.objective - 1e-6


def test_monotone_fit_order_zero_is_variance_only():
    x = simulate_tvar(step_model(), 256, seed=7)
    res = fit_monotone_tvar(x, FitConfig(p=0, k_n=3, eps=0.1))
    assert res.alpha_hat.size == 0
    direct = sieve_pava(x.values**2, 256, 0, 3, 0.1)
    np.testing.assert_array_equal(res.sigma2_hat.knot_values, direct.knot_values)


def test_monotone_fit_deterministic():
    x = simulate_tvar(step_model(), 300, seed=8)
    r1 = fit_monotone_tvar(x, FitConfig(p=1))
    r2 = fit_monotone_tvar(x, FitConfig(p=1))
    np.testing.assert_array_equal(r1.alpha_hat, r2.alpha_hat)
    np.testing.assert_array_equal(r1.sigma2_hat.knot_values, r2.sigma2_hat.knot_values)
    assert r1.objective_trace == r2.objective_trace


def test_monotone_fit_short_series_raises():
    with pytest.raises(ValueError):
        fit_monotone_tvar(np.array([1.0]), FitConfig(p=1))


def test_fourier_objective_is_whittle_contrast_of_fit():
    x = simulate_tvar(wavy_model(), 1024, seed=1)
    for k_n in (0, 1):
        res = fit_fourier_tvar(x, k_n=k_n)
        model_hat = TvARModel(1, [res.alpha_curve], ConstantCurve(res.sigma2))
        w = whittle_contrast(x, SpectrumField.from_model(model_hat))
        assert res.objective == pytest.approx(w, abs=1e-12)


def test_fourier_constant_fit_recovers_ar1():
    m = TvARModel(1, [ConstantCurve(0.5)], ConstantCurve(1.0))
    for seed in range(3):
        x = simulate_tvar(m, 1024, seed=10 + seed)
        res = fit_fourier_tvar(x, k_n=0)
        assert res.converged
        assert abs(res.alpha_curve.a0 - 0.5) < 0.1
        assert abs(res.sigma2 - 1.0) < 0.2
        assert res.alpha_curve.a.size == 0 or np.all(res.alpha_curve.a == 0)


def test_fourier_fit_recovers_wavy_coefficient():
    m = wavy_model()
    for seed in range(3):
        x = simulate_tvar(m, 1024, seed=seed)
        res = fit_fourier_tvar(x, k_n=1)
        assert res.converged
        assert abs(res.alpha_curve.a0) < 0.15
        assert abs(float(res.alpha_curve.a[0]) - 0.5) < 0.15
        assert abs(float(res.alpha_curve.b[0])) < 0.15


def test_fourier_fit_beats_constant_candidate_on_wavy_data():
    x = simulate_tvar(wavy_model(), 1024, seed=2)
    res1 = fit_fourier_tvar(x, k_n=1)
    res0 = fit_fourier_tvar(x, k_n=0)
    assert res1.objective < res0.objective


def test_fourier_fit_validation():
    with pytest.raises(DegenerateDataError):
        fit_fourier_tvar(np.zeros(64), k_n=0)
    with pytest.raises(ValueError):
        fit_fourier_tvar(np.ones(64), k_n=-1)
    with pytest.raises(ValueError):
        fit_fourier_tvar(np.ones(10), k_n=1)  # too short
    with pytest.raises(ValueError):
        fit_fourier_tvar(np.ones(64), k_n=0, eps=2.0)


def test_fourier_fit_deterministic():
    x = simulate_tvar(wavy_model(), 512, seed=9)
    r1 = fit_fourier_tvar(x, k_n=1)
    r2 = fit_fourier_tvar(x, k_n=1)
    assert r1.alpha_curve.a0 == r2.alpha_curve.a0
    np.testing.assert_array_equal(r1.alpha_curve.a, r2.alpha_curve.a)
    assert r1.sigma2 == r2.sigma2
    assert r1.objective == r2.objective


def test_inverse_l2_distance_frozen_constants():
    def f(u, lam):
        return np.full(np.broadcast(np.asarray(u), np.asarray(lam)).shape, 1 / (2 * np.pi))

    def g(u, lam):
        return np.full(np.broadcast(np.asarray(u), np.asarray(lam)).shape, 1 / np.pi)

    # |1/g - 1/f| = pi everywhere, so the distance is pi sqrt(2 pi)
    assert inverse_l2_distance(g, f) == pytest.approx(np.pi * np.sqrt(2 * np.pi), rel=1e-12)
    assert inverse_l2_distance(f, f) == 0.0


def test_inverse_l2_distance_mesh_refinement_stable():
    f = SpectrumField.from_model(step_model())
    g = SpectrumField.from_coefficients(np.array([0.3]), 1.4)
    d1 = inverse_l2_distance(g, f)
    d2 = inverse_l2_distance(g, f, grid=FrequencyGrid(1024), u_grid_size=1024)
    assert d1 == pytest.approx(d2, rel=1e-6)


def test_inverse_l2_distance_rejects_nonpositive():
    f = SpectrumField.from_model(step_model())
    with pytest.raises(ValueError):
        inverse_l2_distance(lambda u, lam: np.cos(lam) * np.ones(np.broadcast(u, lam).shape), f)


def test_curve_inverse_l2_distance_frozen():
    assert curve_inverse_l2_distance(ConstantCurve(1.0), ConstantCurve(2.0)) == pytest.approx(
        0.5 * np.sqrt(2 * np.pi), rel=1e-12
    )
    assert curve_inverse_l2_distance(1.0, 2.0) == pytest.approx(0.5 * np.sqrt(2 * np.pi), rel=1e-12)
    with pytest.raises(ValueError):
        curve_inverse_l2_distance(ConstantCurve(0.0), 1.0)
