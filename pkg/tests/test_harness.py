from __future__ import annotations

import json

import numpy as np
import pytest

from fracpv.acceptance import load_config
from fracpv.errors import ParameterError
from fracpv.harness import REPORT_COLUMNS, ExperimentConfig, ks_distance, run_experiment
from fracpv.kernels import classify
from fracpv.rng import stream

GAUSS = {"name": "small_gauss", "kernel": {"type": "gaussian_fractional", "H": 0.7, "d": 1},
         "levy": {"type": "gaussian", "variance_rate": 1.0}, "n_ladder": [256, 512, 1024], "p_grid": [2.0],
         "reps": 8, "seed": 5, "method": {"type": "gaussian_reference"}}

JUMP = {"kernel": {"type": "h1_radial", "alpha": 0.5, "d": 1, "correction": {"type": "exp", "lam": 0.1}},
        "levy": {"type": "compound_poisson", "rate": 2.0, "jumps": {"type": "two_point", "a": 1.0}},
        "n_ladder": [64], "p_grid": [3.0], "reps": 20, "seed": 3,
        "method": {"type": "shot_noise", "support_radius": 20.0}, "limit": {"draws": 200}}


def test_ks_distance_examples():
    x = stream(1).normal(size=1000)
    assert ks_distance(x, x) == 0.0
    assert ks_distance(np.zeros(5), np.ones(7)) == 1.0
    assert ks_distance(x, stream(2).normal(size=1000)) < 0.086
    with pytest.raises(ParameterError):
        ks_distance([], [1.0])


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({**GAUSS, "reeps": 3})
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({**GAUSS, "n_ladder": [512, 256]})
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({**GAUSS, "d": 2})
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({**GAUSS, "p_grid": [0.0]})


def test_config_hash():
    a = ExperimentConfig.from_dict(GAUSS)
    assert a.config_hash == ExperimentConfig.from_dict(json.loads(json.dumps(GAUSS))).config_hash
    assert a.replace(outputs={"json": "x.json"}).config_hash == a.config_hash
    assert a.replace(seed=6).config_hash != a.config_hash


def test_bundled_configs_load():
    for name in ("lfsm", "gaussian_1d", "gaussian_2d", "jump_1d", "mixed_2d", "derivative_2d"):
        cfg = load_config(name)
        assert all(classify(cfg.build_kernel(), p, cfg.build_levy()).supported for p in cfg.p_grid)


def test_gaussian_experiment_rows():
    rep = run_experiment(ExperimentConfig.from_dict(GAUSS))
    slope = rep.select("slope")[0]
    assert slope["reference"] == pytest.approx(-0.4)
    assert abs(slope["value"] - slope["reference"]) < 0.05
    erg = rep.select("ergodic")[0]
    assert abs(erg["rel_error"]) < 0.1
    assert abs(rep.select("estimate")[0]["value"] - 0.7) < 0.05
    assert np.array(rep.select("pv")[0]["value"]).shape == (8, 3)


def test_runs_are_reproducible_and_thread_independent():
    cfg = ExperimentConfig.from_dict(JUMP)
    a = run_experiment(cfg).to_json()
    b = run_experiment(cfg).to_json()
    c = run_experiment(cfg, workers=3).to_json()
    assert a == b == c
    law = json.loads(a)["rows"]
    assert any(r["kind"] == "jump_law" for r in law)


def test_degenerate_rate_zero():
    cfg = ExperimentConfig.from_dict({**JUMP, "levy": {"type": "compound_poisson", "rate": 0.0,
                                                       "jumps": {"type": "two_point", "a": 1.0}}, "reps": 3})
    rep = run_experiment(cfg)
    assert rep.select("degenerate") and not rep.select("jump_law")


def test_unsupported_combinations_are_skipped():
    cfg = ExperimentConfig.from_dict({"kernel": {"type": "mafsf", "H": 0.7, "beta": 1.5, "d": 1},
                                      "levy": {"type": "stable", "beta": 1.5}, "n_ladder": [64],
                                      "p_grid": [1.5], "reps": 1})
    rep = run_experiment(cfg)
    assert [r["kind"] for r in rep.rows] == ["skip"]
    reg = classify(cfg.build_kernel(), 1.5, cfg.build_levy())
    assert not reg.supported and rep.rows[0]["regime"] == reg.theorem


def test_report_csv_schema():
    rep = run_experiment(ExperimentConfig.from_dict({**GAUSS, "reps": 2}))
    lines = rep.to_csv().splitlines()
    assert lines[0].startswith("#") and lines[1] == ",".join(REPORT_COLUMNS)
    assert len(lines) == 2 + len(rep.rows)
