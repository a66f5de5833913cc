import json

import numpy as np
import pytest

from locstat.cli import main
from locstat.curves import ConstantCurve
from locstat.harness import read_rows_csv
from locstat.process import TvARModel, model_to_json


def run(*argv):
    assert main(list(argv)) == 0


def simulate_into(tmp_path, n=64, seed=3):
    out = tmp_path / "sim"
    run("simulate", "--n", str(n), "--seed", str(seed), "--out", str(out))
    return out / "series.csv"


def test_simulate_writes_series_and_metadata(tmp_path):
    path = simulate_into(tmp_path)
    values = np.loadtxt(path, skiprows=1)
    assert values.shape == (64,)
    meta = json.loads((path.parent / "metadata.json").read_text())
    assert meta["command"] == "simulate"
    assert meta["seed"] == 3
    assert "timestamp" not in meta


def test_simulate_reruns_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        run("simulate", "--n", "32", "--seed", "11", "--out", str(out))
    assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()
    assert (a / "metadata.json").read_bytes() == (b / "metadata.json").read_bytes()


def test_simulate_with_model_config(tmp_path):
    model = TvARModel(1, [ConstantCurve(-0.8)], ConstantCurve(1.0))
    cfg = tmp_path / "model.json"
    cfg.write_text(model_to_json(model))
    out = tmp_path / "out"
    run("simulate", "--n", "400", "--seed", "1", "--config", str(cfg), "--out", str(out))
    x = np.loadtxt(out / "series.csv", skiprows=1)
    # alpha = -0.8 sits on the LEFT of the recursion, so consecutive values
    # correlate positively
    r = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert r > 0.5


def test_preperiodogram_long_format(tmp_path):
    series = simulate_into(tmp_path, n=16)
    out = tmp_path / "pre"
    run(
        "preperiodogram",
        "--series",
        str(series),
        "--grid-size",
        "8",
        "--times",
        "1,5,5",
        "--out",
        str(out),
    )
    rows = read_rows_csv(out / "preperiodogram.csv")
    assert len(rows) == 2 * 8  # duplicate time collapsed
    assert {r["t"] for r in rows} == {1, 5}
    assert all(np.isfinite(r["value"]) for r in rows)


def test_preperiodogram_rejects_out_of_range_times(tmp_path):
    series = simulate_into(tmp_path, n=16)
    with pytest.raises(SystemExit):
        main(
            [
                "preperiodogram",
                "--series",
                str(series),
                "--times",
                "0,3",
                "--out",
                str(tmp_path / "x"),
            ]
        )


def test_likelihood_eval_requires_config(tmp_path):
    series = simulate_into(tmp_path)
    with pytest.raises(SystemExit):
        main(["likelihood-eval", "--series", str(series), "--out", str(tmp_path / "x")])


def test_likelihood_eval_constant_candidate(tmp_path):
    series = simulate_into(tmp_path, n=256)
    model = TvARModel(1, [ConstantCurve(0.4)], ConstantCurve(1.2))
    cfg = tmp_path / "candidate.json"
    cfg.write_text(model_to_json(model))
    out = tmp_path / "lik"
    run("likelihood-eval", "--series", str(series), "--config", str(cfg), "--out", str(out))
    res = json.loads((out / "likelihood.json").read_text())
    assert res["constant_alpha"] is True
    assert res["conditional"] is not None
    assert res["gap"] < 0.1  # boundary terms only
    assert np.isfinite(res["whittle"])


def test_fit_then_likelihood_eval_pipeline(tmp_path):
    series = simulate_into(tmp_path, n=512)
    fit_out = tmp_path / "fit"
    run("fit", "--series", str(series), "--out", str(fit_out))
    fit = json.loads((fit_out / "fit.json").read_text())
    assert len(fit["alpha_hat"]) == 1
    assert fit["converged"] is True
    trace = fit["objective_trace"]
    assert all(b <= a + 1e-8 for a, b in zip(trace, trace[1:]))
    assert fit["model"]["sigma2"]["type"] == "monotone_step"

    # fit.json doubles as a candidate config for likelihood-eval
    lik_out = tmp_path / "lik"
    run(
        "likelihood-eval",
        "--series",
        str(series),
        "--config",
        str(fit_out / "fit.json"),
        "--out",
        str(lik_out),
    )
    res = json.loads((lik_out / "likelihood.json").read_text())
    assert res["whittle"] == pytest.approx(0.5 * (fit["objective"] - np.log(2 * np.pi)), abs=0.01)


def test_fit_with_config_overrides(tmp_path):
    series = simulate_into(tmp_path, n=256)
    cfg = tmp_path / "fit_cfg.json"
    cfg.write_text(json.dumps({"p": 1, "k_n": 4, "eps": 0.2}))
    out = tmp_path / "fit"
    run("fit", "--series", str(series), "--config", str(cfg), "--out", str(out))
    fit = json.loads((out / "fit.json").read_text())
    assert fit["k_n"] == 4
    assert fit["eps"] == 0.2


def test_rate_study_small_config(tmp_path):
    cfg = tmp_path / "rate.json"
    cfg.write_text(json.dumps({"n_list": [64, 128], "replications": 3}))
    out = tmp_path / "rate"
    run("rate-study", "--config", str(cfg), "--seed", "5", "--threads", "2", "--out", str(out))
    rows = read_rows_csv(out / "rate_rows.csv")
    assert [r["n"] for r in rows] == [64, 128]
    summary = json.loads((out / "rate_summary.json").read_text())
    assert np.isfinite(summary["slope_spectrum"])
    assert summary["replications"] == 3


def test_tail_study_designs(tmp_path):
    cfg = tmp_path / "tail.json"
    cfg.write_text(json.dumps({"design": "linear", "n": 16, "replications": 2000, "etas": [1.0, 3.0]}))
    out = tmp_path / "tail"
    run("tail-study", "--config", str(cfg), "--seed", "1", "--out", str(out))
    rows = read_rows_csv(out / "tail_rows.csv")
    assert [r["eta"] for r in rows] == [1.0, 3.0]
    for r in rows:
        assert r["upper99"] <= r["bound_quadratic"]

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"design": "geometric", "replications": 2000, "etas": [1.0]}))
    with pytest.raises(SystemExit):
        main(["tail-study", "--config", str(bad), "--out", str(tmp_path / "y")])


def test_clt_study_default_model(tmp_path):
    cfg = tmp_path / "clt.json"
    cfg.write_text(json.dumps({"n": 64, "replications": 100}))
    out = tmp_path / "clt"
    run("clt-study", "--config", str(cfg), "--seed", "2", "--out", str(out))
    summary = json.loads((out / "clt_summary.json").read_text())
    assert summary["limit_variance"] == pytest.approx(2.0, rel=1e-10)
    assert 0.5 < summary["ratio"] < 2.0
    devs = read_rows_csv(out / "clt_deviations.csv")
    assert len(devs) == 100


def test_prop33_bias_rows(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"n_list": [32, 64], "replications": 50}))
    out = tmp_path / "p"
    run("prop33", "--config", str(cfg), "--seed", "4", "--out", str(out))
    rows = read_rows_csv(out / "bias_rows.csv")
    assert [r["n"] for r in rows] == [32, 64]
    for r in rows:
        assert r["stderr"] > 0
        assert np.isfinite(r["n_bias"])


def test_equivalence_subcommand(tmp_path):
    cfg = tmp_path / "eq.json"
    cfg.write_text(json.dumps({"n_list": [64, 256], "replications": 3}))
    out = tmp_path / "eq"
    run("equivalence", "--config", str(cfg), "--out", str(out))
    rows = read_rows_csv(out / "equivalence_rows.csv")
    assert rows[1]["median_gap"] < rows[0]["median_gap"]
