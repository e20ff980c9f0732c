from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from fracpv.errors import DivergenceError, ParameterError, UnsupportedRegimeError
from fracpv.kernels import ExpTemper, GaussianFractional, H1Radial, H2Product
from fracpv.levy import CompoundPoisson, Gaussian, PointConfiguration, SymmetricStable, TwoPoint, sample_sas
from fracpv.levy import stable_abs_moment_exact
from fracpv.limits import (draw_limit_Z_thm1i, ergodic_limit, expected_Z_thm1i, lattice_mean, lattice_sum_H,
                           sample_derivative_pv_limit, sample_limit_Z_thm1i, sample_limit_Z_thm2i,
                           stable_abs_moment)
from fracpv.rng import stream
from fracpv.simulator import gaussian_increment_variance

CP = CompoundPoisson(1.0, TwoPoint(1.0))


def _brute_H(alpha, u, p, N):
    y = np.arange(-N, N + 1) - u
    return math.fsum(np.abs(np.abs(y + 1) ** alpha - np.abs(y) ** alpha) ** p)


@pytest.mark.parametrize("alpha,p", [(0.5, 3.0), (0.3, 2.0), (-0.3, 2.0)])
def test_lattice_sum_brackets_brute_force(alpha, p):
    # the two-sided remainder past N is at most 2 alpha^p (N-1)^(1-gamma)/(gamma-1)
    N = 10 ** 6
    gamma = (1 - alpha) * p
    tail = 2 * abs(alpha) ** p * (N - 1) ** (1 - gamma) / (gamma - 1)
    for u in (0.1, 0.5, 0.9):
        res = lattice_sum_H(H1Radial(alpha, 1), u, p, tol=1e-9)
        brute = _brute_H(alpha, u, p, N)
        assert res.value + res.tail_bound >= brute - 1e-12
        assert res.value <= brute + tail + 1e-12


def test_lattice_sum_tolerance_refinement():
    k = H1Radial(0.5, 1)
    coarse = lattice_sum_H(k, 0.3, 3.0, tol=1e-4)
    fine = lattice_sum_H(k, 0.3, 3.0, tol=1e-10)
    assert fine.tail_bound <= coarse.tail_bound and fine.tail_bound <= 1e-10
    assert coarse.value - 1e-13 <= fine.value <= coarse.value + coarse.tail_bound + 1e-13


def test_lattice_sum_rejects_divergent_exponent():
    with pytest.raises(UnsupportedRegimeError):
        lattice_sum_H(H1Radial(0.5, 1), 0.3, 2.0)
    with pytest.raises(ParameterError):
        lattice_sum_H(H1Radial(0.5, 1), 1.0, 3.0)


def test_lattice_mean_two_routes():
    k = H1Radial(0.5, 1)
    line = lattice_mean(k, 3.0, tol=1e-8, route="line")
    cell = lattice_mean(k, 3.0, tol=1e-8, route="cell")
    assert abs(line.value - cell.value) <= line.error_bound + cell.error_bound + 1e-9
    prod = H2Product((0.5, 0.3))
    whole = lattice_mean(prod, 3.0, tol=1e-7).value
    parts = lattice_mean(H1Radial(0.5, 1), 3.0, tol=1e-7).value * lattice_mean(H1Radial(0.3, 1), 3.0, tol=1e-7).value
    assert whole == pytest.approx(parts, rel=1e-5)


def test_limit_without_jumps_is_zero():
    k = H1Radial(0.5, 1, ExpTemper(0.1))
    Z = draw_limit_Z_thm1i(k, CompoundPoisson(0.0, TwoPoint(1.0)), 3.0, 50, rng=stream(1))
    assert np.all(Z.values == 0.0)


def test_single_jump_thm1i():
    k = H1Radial(0.5, 1, ExpTemper(0.1))
    cfg = PointConfiguration(np.array([[0.3]]), np.array([-2.0]), np.array([[0.0, 1.0]]))
    z = sample_limit_Z_thm1i(k, CP, 3.0, tol=1e-10, config=cfg)
    H = lattice_sum_H(k, 0.3, 3.0, tol=1e-10).value
    assert z.value == pytest.approx(8.0 * H, rel=1e-9)


def test_single_jump_thm2i():
    # fractional axis: lattice sum at the offset; smooth axis: int_0^1 |g'(t - x)|^p dt
    k, p = H2Product((0.5, 1.8), ExpTemper(1.0)), 3.0
    cfg = PointConfiguration(np.array([[0.3, 0.4]]), np.array([1.0]), np.array([[0.0, 1.0], [-8.0, 9.0]]))
    z = sample_limit_Z_thm2i(k, CP, p, config=cfg, tol=1e-10)
    H = lattice_sum_H(H1Radial(0.5, 1), 0.3, p, tol=1e-11).value

    def dg(s):
        return np.sign(s) * (1.8 * abs(s) ** 0.8 - abs(s) ** 1.8) * math.exp(-abs(s))

    smooth = sum(integrate.quad(lambda t: abs(dg(t - 0.4)) ** p, lo, hi, epsabs=1e-13)[0]
                 for lo, hi in [(0.0, 0.4), (0.4, 1.0)])
    assert z.value == pytest.approx(H * smooth, rel=1e-7)


def test_campbell_mean_thm1i():
    k = H1Radial(0.5, 1, ExpTemper(0.1))
    spec = CompoundPoisson(2.0, TwoPoint(1.0))
    Z = draw_limit_Z_thm1i(k, spec, 3.0, 4000, rng=stream(2))
    mean = expected_Z_thm1i(k, spec, 3.0).value
    se = Z.values.std() / math.sqrt(Z.values.size)
    assert abs(Z.values.mean() - mean) < 4 * se


def test_ergodic_gaussian_constant_two_routes():
    # E|N|^2 times int |Delta_1 h|^2 (quadrature) against the spectral closed form
    lim = ergodic_limit(GaussianFractional(0.75, 1), Gaussian(), 2.0)
    assert lim.m_p == pytest.approx(gaussian_increment_variance(0.75), rel=1e-6)


def test_ergodic_undefined_outside_regime():
    with pytest.raises(UnsupportedRegimeError):
        ergodic_limit(H1Radial(0.5, 1), CompoundPoisson(2.0, TwoPoint(1.0)), 3.0)


def test_stable_moment_gaussian_case():
    assert stable_abs_moment(2.0, 2.0).value == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("beta,p", [(1.5, 1.0), (0.8, 0.5), (1.8, 1.2)])
def test_stable_moment_against_closed_form(beta, p):
    sm = stable_abs_moment(beta, p, N=10 ** 6, rng=stream(3))
    exact = stable_abs_moment_exact(beta, p)
    assert sm.stderr < 0.01 * exact
    assert abs(sm.value - exact) < 4 * sm.stderr


def test_stable_moment_against_sampling():
    sm = stable_abs_moment(1.5, 1.0, N=10 ** 6, rng=stream(4))
    x = np.abs(sample_sas(1.5, 1.0, stream(5), 10 ** 6))
    assert abs(x.mean() - sm.value) < 0.02 * sm.value


def test_stable_moment_divergence():
    with pytest.raises(DivergenceError):
        stable_abs_moment(1.5, 1.5)


def test_ergodic_stable_constant_scales_with_moment():
    lim = ergodic_limit(H1Radial(-0.2, 1), SymmetricStable(1.5), 1.0, rng=stream(6))
    assert lim.m_p == pytest.approx(lim.stable_moment * lim.increment_integrals[0] ** (1 / 1.5), rel=1e-12)


def test_derivative_limit_without_jumps():
    cfg = PointConfiguration(np.zeros((0, 1)), np.zeros(0), np.array([[-8.0, 9.0]]))
    assert sample_derivative_pv_limit(H1Radial(0.8, 1), CP, 2.0, config=cfg).value == 0.0


def test_derivative_limit_single_jump_radial():
    a, p, v = 0.8, 2.0, 0.5
    cfg = PointConfiguration(np.array([[v]]), np.array([1.0]), np.array([[-8.0, 9.0]]))
    got = sample_derivative_pv_limit(H1Radial(a, 1), CP, p, quad_tol=1e-10, config=cfg).value
    e = (a - 1) * p + 1
    want = a ** p * 2 * 0.5 ** e / e
    assert got == pytest.approx(want, rel=1e-6)


def test_derivative_limit_single_jump_product():
    cfg = PointConfiguration(np.array([[0.3, 0.6]]), np.array([-1.0]), np.array([[-8.0, 9.0]] * 2))
    got = sample_derivative_pv_limit(H2Product((1.6, 1.6)), CP, 1.0, quad_tol=1e-7, config=cfg).value
    want = (0.3 ** 1.6 + 0.7 ** 1.6) * (0.6 ** 1.6 + 0.4 ** 1.6)
    assert got == pytest.approx(want, rel=1e-5)


def test_derivative_limit_wrong_regime():
    with pytest.raises(UnsupportedRegimeError):
        sample_derivative_pv_limit(H1Radial(0.5, 1), CP, 3.0, rng=stream(7))
