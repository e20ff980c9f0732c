from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate

from fracpv.errors import ParameterError, SizeError, UnsupportedRegimeError
from fracpv.grids import FieldGrid, IncrementGrid, coarsen_increments, read_grid
from fracpv.harness import ks_distance
from fracpv.kernels import LFSS, ExpTemper, GaussianFractional, H1Radial, H2Product, delta_g
from fracpv.levy import CompoundPoisson, Gaussian, PointConfiguration, SymmetricStable, TwoPoint
from fracpv.rng import stream
from fracpv.simulator import (Discretized, GaussianReference, ShotNoise, default_support_radius,
                              direct_increment_field, draw_lattice, fft_increment_field,
                              gaussian_increment_variance, method_from_record, simulate_grid,
                              simulate_increments)
from fracpv.statistics import rect_increments

FAST = Discretized(oversample=1, support_radius=0.25)


def test_same_seed_same_field():
    k, s = H1Radial(0.3, 2), SymmetricStable(1.5)
    a = simulate_increments(k, s, 32, FAST, stream(1))
    b = simulate_increments(k, s, 32, FAST, stream(1))
    c = simulate_increments(k, s, 32, FAST, stream(2))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_rate_zero_gives_zero_field():
    k, s = H1Radial(0.5, 1, ExpTemper(0.1)), CompoundPoisson(0.0, TwoPoint(1.0))
    inc = simulate_increments(k, s, 64, ShotNoise(support_radius=5.0), stream(3))
    assert np.all(inc.values == 0.0)
    grid = simulate_grid(k, s, 16, FAST, stream(3))
    assert np.all(grid.values == 0.0)


def test_single_jump_shot_noise():
    k = H1Radial(0.5, 1, ExpTemper(0.1))
    cfg = PointConfiguration(np.array([[0.3141]]), np.array([2.0]), np.array([[0.0, 1.0]]))
    n = 50
    inc = simulate_increments(k, CompoundPoisson(1.0, TwoPoint(1.0)), n, ShotNoise(configuration=cfg))
    t = np.arange(n) / n
    want = 2.0 * delta_g(k, (t - 0.3141)[:, None], 1.0 / n)
    np.testing.assert_allclose(inc.values, want, rtol=1e-13, atol=1e-15)


def test_single_jump_product_kernel_field_and_increments_agree():
    k = H2Product((0.5, 1.8), ExpTemper(1.0))
    cfg = PointConfiguration(np.array([[0.21, 0.77]]), np.array([-1.0]), np.array([[0.0, 1.0], [0.0, 1.0]]))
    spec = CompoundPoisson(1.0, TwoPoint(1.0))
    method = ShotNoise(configuration=cfg)
    inc = simulate_increments(k, spec, 16, method)
    grid = simulate_grid(k, spec, 16, method)
    np.testing.assert_allclose(rect_increments(grid).values, inc.values, atol=1e-13)


def test_fft_matches_direct_on_lattice_of_ones():
    k, s = H1Radial(0.3, 1), SymmetricStable(1.5)
    lat = draw_lattice(1, 8, 1, 0.25, s, stream(4))
    lat = dataclasses.replace(lat, noise=np.ones_like(lat.noise))
    a = fft_increment_field(k, s, 8, lattice=lat).values
    b = direct_increment_field(k, lat).values
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kernel", [H1Radial(0.3, 2), H2Product((0.5, 1.8)), LFSS((0.4, 0.7), 1.5)], ids=str)
def test_fft_matches_direct_2d(kernel):
    s = SymmetricStable(1.5)
    lat = draw_lattice(2, 32, 1, 0.25, s, stream(5))
    a = fft_increment_field(kernel, s, 32, lattice=lat).values
    b = direct_increment_field(kernel, lat).values
    assert np.max(np.abs(a - b)) <= 1e-9 * max(1.0, np.max(np.abs(b)))


def test_field_route_matches_increment_route():
    k, s = H1Radial(0.3, 2), SymmetricStable(1.5)
    grid = simulate_grid(k, s, 16, FAST, stream(6))
    inc = simulate_increments(k, s, 16, FAST, stream(6))
    np.testing.assert_allclose(rect_increments(grid).values, inc.values, atol=1e-10 * np.max(np.abs(inc.values)))


def test_anchored_field_vanishes_on_axes():
    grid = simulate_grid(LFSS((0.4, 0.7), 1.5), SymmetricStable(1.5), 16, FAST, stream(7))
    assert np.max(np.abs(grid.values[0, :])) < 1e-10 and np.max(np.abs(grid.values[:, 0])) < 1e-10


def test_memory_budget_guard():
    with pytest.raises(SizeError):
        simulate_increments(H1Radial(0.3, 2), SymmetricStable(1.5), 256,
                            Discretized(oversample=4, support_radius=1.0, memory_budget=2 ** 20), stream(0))


def test_grid_binary_roundtrip(tmp_path):
    inc = simulate_increments(H1Radial(0.3, 2), SymmetricStable(1.5), 8, FAST, stream(8))
    path = tmp_path / "x.grid"
    inc.save(path)
    back = read_grid(path)
    assert isinstance(back, IncrementGrid) and back.n == 8 and back.d == 2
    assert np.array_equal(back.values, inc.values)
    assert back.meta["method"] == "discretized-fft"
    field = FieldGrid(1, 3, np.arange(4.0), {"note": "x"})
    again = read_grid(field.to_bytes())
    assert isinstance(again, FieldGrid) and np.array_equal(again.values, field.values)
    with pytest.raises(ParameterError):
        read_grid(b"NOTAGRID" + bytes(16))


def test_grid_csv_and_validation():
    text = FieldGrid(1, 1, np.array([0.0, 0.5])).to_csv()
    assert text.splitlines() == ["i1,value", "0,0.0", "1,0.5"]
    with pytest.raises(ParameterError):
        IncrementGrid(1, 4, np.zeros(5))
    with pytest.raises(ParameterError):
        IncrementGrid(1, 2, np.array([0.0, np.nan]))


def test_coarsening_is_exact_block_sum():
    k, s = H1Radial(0.3, 2), SymmetricStable(1.5)
    fine = simulate_grid(k, s, 16, FAST, stream(9))
    inc = rect_increments(fine)
    coarse = coarsen_increments(inc, 4)
    direct = rect_increments(FieldGrid(2, 4, fine.values[::4, ::4]))
    np.testing.assert_allclose(coarse.values, direct.values, atol=1e-12)
    with pytest.raises(ParameterError):
        coarsen_increments(inc, 3)


def test_gaussian_increment_variance_by_quadrature():
    for H in (0.3, 0.7):
        a = H - 0.5
        f = lambda s: (abs(s + 1) ** a - abs(s) ** a) ** 2  # noqa: E731
        parts = [integrate.quad(f, lo, hi, limit=400)[0] for lo, hi in
                 [(-np.inf, -2), (-2, -1), (-1, -0.5), (-0.5, 0), (0, 1), (1, np.inf)]]
        assert gaussian_increment_variance(H) == pytest.approx(sum(parts), rel=1e-7)


def test_gaussian_reference_variance():
    k, s, n, H = GaussianFractional(0.7, 1), Gaussian(), 4096, 0.7
    x = np.concatenate([simulate_increments(k, s, n, GaussianReference(), stream(10, r)).values for r in range(20)])
    want = gaussian_increment_variance(H) * n ** (-2 * H)
    assert abs(np.mean(x ** 2) / want - 1) < 0.03


def test_discretized_gaussian_variance():
    k, s, n = GaussianFractional(0.7, 1), Gaussian(), 1024
    x = np.concatenate([simulate_increments(k, s, n, Discretized(), stream(11, r)).values for r in range(20)])
    want = gaussian_increment_variance(0.7) * n ** -1.4
    assert abs(np.mean(x ** 2) / want - 1) < 0.05


def test_gaussian_reference_rejects_other_fields():
    with pytest.raises(UnsupportedRegimeError):
        simulate_increments(H1Radial(0.3, 2), Gaussian(), 16, GaussianReference(), stream(0))
    with pytest.raises(UnsupportedRegimeError):
        simulate_increments(GaussianFractional(0.7, 1), SymmetricStable(1.5), 16, GaussianReference(), stream(0))


def test_stationary_increments():
    # the increment at the left edge and in the middle share one law
    k, s = H1Radial(0.3, 1), SymmetricStable(1.5)
    reps = [simulate_increments(k, s, 16, Discretized(oversample=2, support_radius=1.0), stream(12, r)).values
            for r in range(2000)]
    reps = np.array(reps)
    assert ks_distance(reps[:, 0], reps[:, 8]) < 0.06


def test_self_similarity():
    # LFSS with one index: n^H Delta_{1/n} X(0) and Delta_1 X(0) agree in law
    H = 0.7
    k, s = LFSS((H,), 1.5), SymmetricStable(1.5)
    a = np.array([simulate_increments(k, s, 1, Discretized(oversample=16, support_radius=4.0),
                                      stream(13, r)).values[0] for r in range(2000)])
    b = np.array([8 ** H * simulate_increments(k, s, 8, Discretized(oversample=16, support_radius=4.0),
                                               stream(14, r)).values[0] for r in range(2000)])
    assert ks_distance(a, b) < 0.06


def test_oversample_doubling_is_stable():
    # first absolute moment within 5%; the median, free of the heavy tail, within 2%
    k, s, n = LFSS((0.7,), 1.5), SymmetricStable(1.5), 256
    x = {o: np.concatenate([np.abs(simulate_increments(k, s, n, Discretized(oversample=o), stream(15, o, r)).values)
                            for r in range(200)]) for o in (4, 8)}
    assert abs(np.mean(x[8]) / np.mean(x[4]) - 1) < 0.05
    assert abs(np.median(x[8]) / np.median(x[4]) - 1) < 0.02


def test_default_support_radius():
    k = H1Radial(0.5, 1, ExpTemper(0.1))
    r_small = default_support_radius(k, CompoundPoisson(1.0, TwoPoint(1.0)), 64)
    assert 0 < r_small <= 8.0
    r = default_support_radius(H1Radial(0.3, 2), SymmetricStable(1.5), 64)
    assert math.isfinite(r) and r > 0


def test_method_records():
    for m in (Discretized(oversample=2, support_radius=0.5), ShotNoise(support_radius=3.0, jump_floor=0.1),
              GaussianReference()):
        assert method_from_record(m.to_record()) == m
    with pytest.raises(ParameterError):
        method_from_record({"type": "bogus"})
