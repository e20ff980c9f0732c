from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpv.errors import DegenerateSampleError, ParameterError
from fracpv.grids import FieldGrid, IncrementGrid
from fracpv.kernels import GaussianFractional
from fracpv.levy import Gaussian
from fracpv.rng import stream
from fracpv.simulator import GaussianReference, simulate_grid
from fracpv.statistics import (CSV_COLUMNS, csv_rows, estimate_H, power_variation, ratio_statistic,
                               rect_increments, rect_increments_step, scaling_exponent)


def _linear_field(n, d=1):
    t = np.arange(n + 1) / n
    vals = np.ones(())
    for _ in range(d):
        vals = np.multiply.outer(vals, t)
    return FieldGrid(d, n, vals)


def test_corner_increment_example():
    grid = FieldGrid(2, 1, np.array([[0.0, 1.0], [2.0, 4.0]]))
    assert rect_increments(grid).values[0, 0] == 1.0


def test_additive_field_has_zero_increments():
    t = np.arange(9) / 8
    vals = np.sin(t)[:, None] + np.exp(t)[None, :]
    assert np.max(np.abs(rect_increments(FieldGrid(2, 8, vals)).values)) < 1e-15


def test_three_dimensional_corners_by_brute_force():
    rng = stream(1)
    vals = rng.normal(size=(5, 5, 5))
    inc = rect_increments(vals)
    want = np.zeros((4, 4, 4))
    for i in itertools.product(range(4), repeat=3):
        for eps in itertools.product((0, 1), repeat=3):
            idx = tuple(a + e for a, e in zip(i, eps))
            want[i] += (-1.0) ** (3 - sum(eps)) * vals[idx]
    np.testing.assert_allclose(inc, want, atol=1e-13)


def test_step_increments_are_block_sums():
    vals = stream(2).normal(size=(9, 9))
    fine = rect_increments_step(vals, 1)
    coarse = rect_increments_step(vals, 2)
    sums = fine[:-1, :-1] + fine[1:, :-1] + fine[:-1, 1:] + fine[1:, 1:]
    np.testing.assert_allclose(coarse, sums, atol=1e-13)


def test_power_variation_examples():
    assert power_variation(rect_increments(FieldGrid(1, 4, np.zeros(5))), 2.0).V == 0.0
    for p in (0.5, 1.0, 2.0, 3.0):
        n = 64
        V = power_variation(rect_increments(_linear_field(n)), p).V
        assert V == pytest.approx(n ** (1 - p), rel=1e-13)
    assert power_variation(IncrementGrid(1, 4, np.array([1.0, -1.0, 2.0, 0.0])), 2.0).V == 6.0


def test_power_variation_rejects_bad_power():
    with pytest.raises(ParameterError):
        power_variation(np.ones(3), 0.0)


def test_normalized_value():
    r = power_variation(IncrementGrid(1, 4, np.full(4, 0.25)), 2.0, rate=1.0)
    assert r.normalized == pytest.approx(1.0)


@given(c=st.floats(-100, 100).filter(lambda c: abs(c) > 1e-3), p=st.floats(0.2, 5.0), seed=st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_homogeneity_and_permutation_invariance(c, p, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=50)
    v = power_variation(x, p).V
    assert power_variation(c * x, p).V == pytest.approx(abs(c) ** p * v, rel=1e-10)
    assert power_variation(rng.permutation(x), p).V == pytest.approx(v, rel=1e-13)


def test_power_variation_monotone_in_magnitudes():
    x = stream(3).normal(size=100)
    y = x.copy()
    y[10] *= 2.0
    assert power_variation(y, 1.5).V > power_variation(x, 1.5).V


def test_ratio_of_linear_field():
    for n in (4, 16, 128):
        for p in (1.0, 2.0, 3.0):
            R = ratio_statistic(_linear_field(n), p)
            assert R == pytest.approx((n - 1) * 2 ** p / n, rel=1e-13)


def test_ratio_conventions_and_increment_input():
    field = FieldGrid(2, 8, stream(4).normal(size=(9, 9)))
    r_sum = ratio_statistic(field, 2.0)
    r_mean = ratio_statistic(field, 2.0, convention="mean")
    assert r_mean == pytest.approx(r_sum * 64 / 49, rel=1e-13)
    assert ratio_statistic(rect_increments(field), 2.0) == pytest.approx(r_sum, rel=1e-13)
    with pytest.raises(ParameterError):
        ratio_statistic(field, 2.0, convention="median")


def test_ratio_scale_invariance():
    field = FieldGrid(2, 8, stream(5).normal(size=(9, 9)))
    assert ratio_statistic(field.scaled(-37.0), 1.5) == pytest.approx(ratio_statistic(field, 1.5), rel=1e-13)


def test_ratio_degenerate():
    with pytest.raises(DegenerateSampleError):
        ratio_statistic(FieldGrid(1, 4, np.ones(5)), 2.0)


def test_estimate_inverts_ratio():
    field = FieldGrid(2, 16, stream(6).normal(size=(17, 17)))
    est = estimate_H(field, 2.0)
    assert est.d == 2
    assert 2 ** (est.d * est.p * est.H_hat) == pytest.approx(est.R_n, rel=1e-13)


def test_estimate_on_gaussian_reference():
    k, s = GaussianFractional(0.3, 1), Gaussian()
    H = [estimate_H(simulate_grid(k, s, 4096, GaussianReference(), stream(7, r)), 2.0).H_hat for r in range(50)]
    assert abs(np.mean(H) - 0.3) < 0.02


def test_scaling_exponent_of_linear_field():
    for p in (1.0, 2.5):
        res = scaling_exponent([_linear_field(n) for n in (16, 64, 256, 1024)], p)
        assert res.slope == pytest.approx(1 - p, abs=1e-12)
        assert res.S_n[-1] == pytest.approx((1 - p), rel=1e-12)


def test_scaling_exponent_validation():
    with pytest.raises(ParameterError):
        scaling_exponent([_linear_field(8), _linear_field(16)], 1.0)
    with pytest.raises(ParameterError):
        scaling_exponent([_linear_field(16), _linear_field(8), _linear_field(32)], 1.0)


def test_csv_rows():
    row = dict(zip(CSV_COLUMNS, ["h1", "stable", 1, 8, 2.0, 0.5, -0.3, 3.0, 0.79, 1]))
    lines = csv_rows([row]).splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert lines[2].split(",")[3] == "8"
    assert math.isfinite(float(lines[2].split(",")[5]))
