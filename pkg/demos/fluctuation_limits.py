"""Gaussian fluctuation limits of the spectral functionals.

The centered functional sqrt(n) (F_n - F_infinity) is asymptotically normal
with covariance 2 pi int int phi(u, lam) {phi(u, lam) + phi(u, -lam)}
f(u, lam)^2 dlam du.  Three cases with closed-form limits are checked
against Monte Carlo variances.  A separate deterministic check computes the
exact finite-n expectation through the trace identity: for a weight with
lag support L, the lag path loses k/n of the mass at lag k, so
n (E F_n - F_infinity) is a constant -- here 4 pi / 3 -- at every n, while
a lag-0 weight has no deficit at all.
"""

import numpy as np

from locstat import (
    ConstantCurve,
    SampledCurve,
    TvARModel,
    ar_inverse_weight,
    constant_weight,
    expected_functional_trace,
    limit_covariance,
    spectral_functional_limit,
    spectral_process_sample,
    white_noise_model,
)


def main(seed=21, n=512, replications=3000):
    flat = constant_weight(1.0)
    ar1 = TvARModel(1, [ConstantCurve(0.5)], ConstantCurve(1.0))
    cases = [
        # phi = 1 on unit noise: 2 pi * 2 * (1/2pi)^2 * 2pi = 2
        ("unit noise, flat weight", white_noise_model(1.0), flat, 2.0),
        # phi = 1, sigma^2 steps 1 -> 2: 2 mean(sigma^4) = (1 + 4) = 5
        ("variance step 1 -> 2, flat weight",
         TvARModel(0, [], SampledCurve([1.0, 2.0])), flat, 5.0),
        # phi = 2 pi (1.25 + cos lam) on unit noise: 4 pi int (1.25+cos)^2 = 16.5 pi^2
        ("unit noise, AR-inverse weight", white_noise_model(1.0),
         ar_inverse_weight(ar1), 16.5 * np.pi**2),
    ]

    print(f"== CLT variance vs limit covariance (n = {n}, {replications} replications) ==")
    for label, model, phi, closed_form in cases:
        limit = limit_covariance(phi, phi, model)
        sample = spectral_process_sample(model, phi, n, replications, seed=seed)
        print(f"{label:36s} limit {limit:9.4f} (closed form {closed_form:9.4f})  "
              f"mc/limit {sample.variance() / limit:.4f}")

    print("\n== exact finite-n expectation via the trace identity ==")
    phi = ar_inverse_weight(ar1)
    limit = spectral_functional_limit(phi, ar1)
    flat_limit = spectral_functional_limit(flat, ar1)
    print(f"{'n':>5} {'flat weight gap':>16} {'AR-inverse n*gap':>17}   (4 pi / 3 = {4 * np.pi / 3:.6f})")
    for size in (32, 64, 128, 256):
        gap0 = expected_functional_trace(ar1, flat, size) - flat_limit
        gap1 = expected_functional_trace(ar1, phi, size) - limit
        print(f"{size:>5} {gap0:>16.2e} {size * gap1:>17.6f}")


if __name__ == "__main__":
    main()
