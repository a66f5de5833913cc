"""Command-line interface.

Every subcommand writes its outputs into --out (created if missing) together
with a metadata.json sidecar recording the command, a hash of the config it
ran with, the seed, and library versions.  Outputs are deterministic in
(config, seed): reruns reproduce files byte for byte.

Subcommands
-----------
simulate        draw a time-varying AR path and write it as CSV
preperiodogram  tabulate the pre-periodogram of a series on a frequency grid
likelihood-eval evaluate Whittle and conditional likelihoods of a candidate
fit             run the monotone-variance fit on a series
rate-study      error decay of the fit across sample sizes
tail-study      exceedance frequencies of quadratic forms vs. tail bounds
clt-study       scaled fluctuations of a spectral mean vs. the limit variance
prop33          sqrt(n)-scaled bias of a spectral mean across sample sizes
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .curves import ConstantCurve, curve_from_spec, curve_to_spec
from .espec import (
    TailStudySpec,
    bias_scaling_study,
    chi2_tail_study,
    limit_covariance,
    spectral_process_sample,
)
from .estimator import FitConfig, fit_monotone_tvar
from .harness import (
    RateStudySpec,
    likelihood_equivalence_decay,
    rate_study,
    write_metadata,
    write_rows_csv,
)
from .likelihood import SpectrumField, conditional_likelihood, whittle_contrast
from .process import TimeSeries, TvARModel, model_from_json, model_to_json, simulate_tvar
from .spectral import FrequencyGrid, PrePeriodogram, ar_inverse_weight, constant_weight, lag_curve_weight

__all__ = ["main", "build_parser"]


def _read_config(args):
    if args.config is None:
        return None, ""
    with open(args.config) as fh:
        text = fh.read()
    return json.loads(text), text


def _ensure_out(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _weight_from_spec(spec, model=None):
    """Build a spectral weight function from its JSON description.

    {"type": "constant", "value": v}
    {"type": "ar_inverse", "scale": s}        -- needs a model in context
    {"type": "lag_curves", "curves": {"0": <curve spec or number>, ...}}
    """
    kind = spec.get("type", "constant")
    if kind == "constant":
        return constant_weight(float(spec.get("value", 1.0)))
    if kind == "ar_inverse":
        if model is None:
            raise ValueError("ar_inverse weight needs a model")
        return ar_inverse_weight(model, scale=float(spec.get("scale", 1.0)))
    if kind == "lag_curves":
        curves = {}
        for key, val in spec["curves"].items():
            curves[int(key)] = val if isinstance(val, (int, float)) else curve_from_spec(val)
        return lag_curve_weight(curves)
    raise ValueError(f"unknown weight type {kind!r}")


def _cmd_simulate(args):
    config, text = _read_config(args)
    model = model_from_json(config) if config is not None else None
    if model is None:
        from .harness import default_rate_model

        model = default_rate_model()
    seed = args.seed if args.seed is not None else 0
    x = simulate_tvar(model, args.n, seed)
    out = _ensure_out(args)
    path = os.path.join(out, "series.csv")
    x.to_csv(path)
    write_metadata(out, "simulate", text, seed, extra={"n": args.n, "model": model.describe()})
    print(f"wrote {path}")
    print(f"n={args.n} seed={seed} mean={float(np.mean(x.values)):.6g} var={float(np.var(x.values)):.6g}")
    return 0


def _cmd_preperiodogram(args):
    x = TimeSeries.from_csv(args.series)
    pre = PrePeriodogram(x)
    grid = FrequencyGrid(args.grid_size)
    values = pre.evaluate_grid(grid)
    if args.times == "all":
        times = list(range(1, x.n + 1))
    else:
        times = sorted({int(tok) for tok in args.times.split(",")})
        if any(t < 1 or t > x.n for t in times):
            raise SystemExit(f"--times entries must lie in 1..{x.n}")
    out = _ensure_out(args)
    path = os.path.join(out, "preperiodogram.csv")
    rows = []
    for t in times:
        for m, lam in enumerate(grid.nodes):
            rows.append({"t": t, "lambda": float(lam), "value": float(values[t - 1, m])})
    write_rows_csv(path, rows, fieldnames=["t", "lambda", "value"])
    config_text = f"series={args.series} grid_size={args.grid_size} times={args.times}"
    write_metadata(out, "preperiodogram", config_text, None, extra={"n": x.n, "grid_size": args.grid_size})
    print(f"wrote {path}")
    print(f"n={x.n} times={len(times)} grid_size={args.grid_size}")
    return 0


def _cmd_likelihood_eval(args):
    x = TimeSeries.from_csv(args.series)
    config, text = _read_config(args)
    if config is None:
        raise SystemExit("likelihood-eval needs --config with a candidate model")
    if "sigma2" not in config and "model" in config:
        config = config["model"]  # accept fit.json output directly
    model = model_from_json(config)
    g = SpectrumField.from_model(model)
    whittle = whittle_contrast(x, g)

    constant_alpha = all(isinstance(c, ConstantCurve) for c in model.alpha)
    conditional = None
    gap = None
    if constant_alpha:
        alpha = np.array([c.value for c in model.alpha])
        conditional = conditional_likelihood(x, alpha, model.sigma2)
        gap = abs(0.5 * (conditional - math.log(2 * math.pi)) - whittle)

    result = {
        "n": x.n,
        "whittle": whittle,
        "conditional": conditional,
        "gap": gap,
        "constant_alpha": constant_alpha,
    }
    out = _ensure_out(args)
    path = os.path.join(out, "likelihood.json")
    with open(path, "w") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_metadata(out, "likelihood-eval", text, None, extra={"series": os.path.basename(args.series)})
    print(f"wrote {path}")
    print(f"whittle={whittle!r} conditional={conditional!r}")
    return 0


def _cmd_fit(args):
    x = TimeSeries.from_csv(args.series)
    config, text = _read_config(args)
    config = config or {}
    cfg = FitConfig(
        p=int(config.get("p", 1)),
        k_n=config.get("k_n"),
        eps=config.get("eps"),
        max_iter=int(config.get("max_iter", 100)),
        rel_tol=float(config.get("rel_tol", 1e-8)),
        bounds=config.get("bounds", "clip"),
    )
    fit = fit_monotone_tvar(x, cfg)
    fitted_model = TvARModel(
        cfg.p,
        [ConstantCurve(a) for a in fit.alpha_hat],
        fit.sigma2_hat,
        validate=False,
    )
    result = {
        "n": x.n,
        "alpha_hat": [float(a) for a in fit.alpha_hat],
        "sigma2_hat": curve_to_spec(fit.sigma2_hat),
        "k_n": fit.k_n,
        "eps": fit.eps,
        "objective": fit.objective,
        "objective_trace": fit.objective_trace,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "alpha_stable": fit.alpha_stable,
        "model": json.loads(model_to_json(fitted_model)),
    }
    out = _ensure_out(args)
    path = os.path.join(out, "fit.json")
    with open(path, "w") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_metadata(out, "fit", text, None, extra={"series": os.path.basename(args.series)})
    print(f"wrote {path}")
    print(
        f"alpha_hat={[round(a, 6) for a in result['alpha_hat']]} "
        f"k_n={fit.k_n} iterations={fit.iterations} converged={fit.converged}"
    )
    return 0


def _cmd_rate_study(args):
    config, text = _read_config(args)
    config = config or {}
    model = model_from_json(config["model"]) if "model" in config else None
    seed = args.seed if args.seed is not None else int(config.get("seed", 2026))
    spec = RateStudySpec(
        n_list=tuple(config.get("n_list", (256, 512, 1024, 2048, 4096))),
        replications=int(config.get("replications", 50)),
        seed=seed,
        model=model,
        p=int(config.get("p", 1)),
    )
    result = rate_study(spec, threads=args.threads)
    out = _ensure_out(args)
    rows_path = os.path.join(out, "rate_rows.csv")
    write_rows_csv(rows_path, result.rows)
    summary = {
        "slope_spectrum": result.slope_spectrum,
        "slope_variance": result.slope_variance,
        "n_list": list(spec.n_list),
        "replications": spec.replications,
    }
    summary_path = os.path.join(out, "rate_summary.json")
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_metadata(out, "rate-study", text, seed)
    print(f"wrote {rows_path}")
    print(f"wrote {summary_path}")
    print(f"slope_spectrum={result.slope_spectrum:.4f} slope_variance={result.slope_variance:.4f}")
    return 0


def _cmd_tail_study(args):
    config, text = _read_config(args)
    config = config or {}
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    design = config.get("design", "unit")
    n = int(config.get("n", 1024))
    replications = int(config.get("replications", 200000))
    etas = config.get("etas")
    if design == "unit":
        spec = TailStudySpec.unit_design(n, replications=replications, etas=etas, seed=seed)
    elif design == "linear":
        spec = TailStudySpec.linear_design(n, replications=replications, etas=etas, seed=seed)
    else:
        raise SystemExit(f"unknown design {design!r}")
    rows = chi2_tail_study(spec)
    out = _ensure_out(args)
    path = os.path.join(out, "tail_rows.csv")
    write_rows_csv(path, rows)
    write_metadata(out, "tail-study", text, seed, extra={"design": design, "n": n})
    print(f"wrote {path}")
    for row in rows:
        print(
            f"eta={row['eta']:g} empirical={row['empirical']:.3e} "
            f"upper99={row['upper99']:.3e} bound_quadratic={row['bound_quadratic']:.3e}"
        )
    return 0


def _cmd_clt_study(args):
    config, text = _read_config(args)
    config = config or {}
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    if "model" in config:
        model = model_from_json(config["model"])
    else:
        from .process import white_noise_model

        model = white_noise_model()
    phi = _weight_from_spec(config.get("phi", {"type": "constant", "value": 1.0}), model)
    n = int(config.get("n", 512))
    replications = int(config.get("replications", 2000))
    sample = spectral_process_sample(
        model,
        phi,
        n,
        replications,
        seed,
        centering=config.get("centering", "analytic"),
    )
    limit = limit_covariance(phi, phi, SpectrumField.from_model(model))
    emp = sample.variance()
    result = {
        "n": n,
        "replications": replications,
        "center": sample.center,
        "empirical_variance": emp,
        "limit_variance": limit,
        "ratio": emp / limit if limit > 0 else float("nan"),
    }
    out = _ensure_out(args)
    path = os.path.join(out, "clt_summary.json")
    with open(path, "w") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    dev_path = os.path.join(out, "clt_deviations.csv")
    write_rows_csv(dev_path, [{"deviation": float(d)} for d in sample.deviations])
    write_metadata(out, "clt-study", text, seed, extra={"n": n})
    print(f"wrote {path}")
    print(f"wrote {dev_path}")
    print(f"empirical_variance={emp:.6g} limit_variance={limit:.6g} ratio={result['ratio']:.4f}")
    return 0


def _cmd_prop33(args):
    config, text = _read_config(args)
    config = config or {}
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    if "model" in config:
        model = model_from_json(config["model"])
    else:
        from .process import white_noise_model

        model = white_noise_model()
    phi = _weight_from_spec(config.get("phi", {"type": "constant", "value": 1.0}), model)
    n_list = tuple(int(n) for n in config.get("n_list", (64, 128, 256, 512)))
    replications = int(config.get("replications", 400))
    rows = bias_scaling_study(model, phi, n_list, replications, seed)
    out = _ensure_out(args)
    path = os.path.join(out, "bias_rows.csv")
    write_rows_csv(path, rows)
    write_metadata(out, "prop33", text, seed, extra={"n_list": list(n_list)})
    print(f"wrote {path}")
    for row in rows:
        print(
            f"n={row['n']} sqrt_n_bias={row['sqrt_n_bias']:.4e} "
            f"n_bias={row['n_bias']:.4e} stderr={row['stderr']:.3e}"
        )
    return 0


def _cmd_equivalence(args):
    config, text = _read_config(args)
    config = config or {}
    seed = args.seed if args.seed is not None else int(config.get("seed", 7))
    rows = likelihood_equivalence_decay(
        n_list=tuple(config.get("n_list", (256, 2048))),
        replications=int(config.get("replications", 20)),
        seed=seed,
    )
    out = _ensure_out(args)
    path = os.path.join(out, "equivalence_rows.csv")
    write_rows_csv(path, rows)
    write_metadata(out, "equivalence", text, seed)
    print(f"wrote {path}")
    for row in rows:
        print(f"n={row['n']} median_gap={row['median_gap']:.6e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="locstat",
        description="Spectral estimation for locally stationary time series.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default per subcommand)")
    common.add_argument("--threads", type=int, default=1, help="worker threads where supported")
    common.add_argument("--out", default=".", help="output directory (created if missing)")
    common.add_argument("--config", default=None, help="path to a JSON config file")

    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[common], help="simulate a time-varying AR path")
    p_sim.add_argument("--n", type=int, required=True, help="series length")
    p_sim.set_defaults(func=_cmd_simulate)

    p_pre = sub.add_parser("preperiodogram", parents=[common], help="tabulate the pre-periodogram")
    p_pre.add_argument("--series", required=True, help="input series CSV")
    p_pre.add_argument("--grid-size", type=int, default=64, help="frequency grid size (even)")
    p_pre.add_argument("--times", default="all", help='comma-separated 1-based times, or "all"')
    p_pre.set_defaults(func=_cmd_preperiodogram)

    p_lik = sub.add_parser(
        "likelihood-eval", parents=[common], help="evaluate likelihoods of a candidate model"
    )
    p_lik.add_argument("--series", required=True, help="input series CSV")
    p_lik.set_defaults(func=_cmd_likelihood_eval)

    p_fit = sub.add_parser("fit", parents=[common], help="monotone-variance fit")
    p_fit.add_argument("--series", required=True, help="input series CSV")
    p_fit.set_defaults(func=_cmd_fit)

    p_rate = sub.add_parser("rate-study", parents=[common], help="fit error decay across sample sizes")
    p_rate.set_defaults(func=_cmd_rate_study)

    p_tail = sub.add_parser("tail-study", parents=[common], help="quadratic-form tail frequencies vs. bounds")
    p_tail.set_defaults(func=_cmd_tail_study)

    p_clt = sub.add_parser("clt-study", parents=[common], help="scaled fluctuations vs. limit variance")
    p_clt.set_defaults(func=_cmd_clt_study)

    p_prop = sub.add_parser(
        "prop33", parents=[common], help="sqrt(n)-scaled bias of a spectral mean across sample sizes"
    )
    p_prop.set_defaults(func=_cmd_prop33)

    p_eq = sub.add_parser(
        "equivalence", parents=[common], help="candidate likelihood gap decay across sample sizes"
    )
    p_eq.set_defaults(func=_cmd_equivalence)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
