from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpv.errors import ParameterError, SingularityError
from fracpv.kernels import (LFSS, MAFSF, ExpTemper, GaussianFractional, H1Radial, H2Product,
                            MaternBessel, RectHomogeneous, classify, delta1_h, iterated_difference,
                            kernel_from_record, rect_increment_fn)
from fracpv.levy import CompoundPoisson, Gaussian, SymmetricStable, TwoPoint
from fracpv.rng import stream

KERNELS = [H1Radial(0.3, 2), H1Radial(0.5, 1, ExpTemper(0.5)), H2Product((0.5, 1.8)),
           H2Product((1.6, 1.6), ExpTemper(1.0)), MAFSF(0.7, 1.5, 2), GaussianFractional(0.6, 2),
           LFSS((0.4, 0.7), 1.5), RectHomogeneous(0.6, 1.5, 2), MaternBessel(0.7, 1.0, 2)]


def test_radial_homogeneity_value():
    assert H1Radial(0.3, 2).g(np.array([2.0, 0.0])) == pytest.approx(2 ** 0.6, rel=1e-14)


@pytest.mark.parametrize("kernel", [H1Radial(0.3, 2), H1Radial(-0.2, 3), H2Product((0.5, 1.8)),
                                    MAFSF(0.7, 1.5, 2), LFSS((0.4, 0.7), 1.5)], ids=str)
def test_homogeneity(kernel):
    rng = stream(1)
    s = rng.uniform(-2, 2, size=(50, kernel.d))
    for a in (-3.0, 0.5, 7.0):
        lhs = kernel.h(a * s)
        rhs = abs(a) ** kernel.degree * kernel.h(s)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12)


def test_matern_origin_behaviour():
    # g(s) ~ ||s||^(gamma - d/2); the relative correction is O(||s||^(d/2 - gamma))
    m = MaternBessel(0.1, 1.0, 2)
    r = 1e-3
    assert m.g(np.array([r, 0.0])) / r ** (0.1 - 1.0) == pytest.approx(1.0, rel=0.01)
    m = MaternBessel(0.7, 1.0, 2)
    ratios = [m.g(np.array([r, 0.0]))[()] / r ** (0.7 - 1.0) for r in (1e-4, 1e-8, 1e-12)]
    assert abs(ratios[2] - 1) < abs(ratios[1] - 1) < abs(ratios[0] - 1) and abs(ratios[2] - 1) < 0.01


def test_lfss_unit_point():
    assert LFSS((0.4, 0.7), 1.5).g(np.array([1.0, 1.0])) == pytest.approx(1.0)


def test_mafsf_full_kernel_on_diagonal():
    k = MAFSF(0.9, 1.5, 1)
    assert k.g_full(np.array([0.5]), np.array([0.5])) == pytest.approx(-(0.5 ** (0.9 - 1 / 1.5)))


@pytest.mark.parametrize("kernel", [MAFSF(0.7, 1.5, 2), GaussianFractional(0.6, 2), LFSS((0.4, 0.7), 1.5),
                                    RectHomogeneous(0.6, 1.5, 2)], ids=str)
def test_anchored_at_zero(kernel):
    s = stream(2).uniform(-2, 2, size=(20, 2))
    assert kernel.anchored
    assert np.all(kernel.g_full(np.zeros(2), s) == 0.0)


def test_rect_homogeneous_full_kernel():
    k = RectHomogeneous(0.6, 1.5, 2)
    t, s = np.array([0.4, 0.9]), np.array([0.1, -0.3])
    h = k.h
    want = h(t - s) - h(np.array([t[0] - s[0], -s[1]])) - h(np.array([-s[0], t[1] - s[1]])) + h(-s)
    assert k.g_full(t, s) == pytest.approx(want, rel=1e-14)


def test_corner_formula_small_cases():
    f = lambda x: np.sin(x[..., 0]) * np.exp(x[..., -1]) + x[..., 0] ** 3  # noqa: E731
    assert rect_increment_fn(f, [0.2], [0.9]) == pytest.approx(f(np.array([0.9])) - f(np.array([0.2])))
    lo, hi = np.array([0.1, 0.3]), np.array([0.7, 1.2])
    want = (f(np.array([0.7, 1.2])) - f(np.array([0.7, 0.3])) - f(np.array([0.1, 1.2]))
            + f(np.array([0.1, 0.3])))
    assert rect_increment_fn(f, lo, hi) == pytest.approx(want, abs=1e-14)
    assert rect_increment_fn(lambda x: x.sum(axis=-1), lo, hi) == 0.0


def test_corner_rejects_empty_box():
    with pytest.raises(ParameterError):
        rect_increment_fn(lambda x: x[..., 0], [0.5], [0.5])


@given(d=st.integers(1, 3), seed=st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_corner_equals_iterated(d, seed):
    rng = np.random.default_rng(seed)
    w = rng.normal(size=d)
    f = lambda x: np.cos(x @ w) + np.prod(x, axis=-1) ** 2  # noqa: E731
    lo = rng.uniform(-2, 1, size=(5, d))
    hi = lo + rng.uniform(0.01, 2, size=(5, d))
    np.testing.assert_allclose(rect_increment_fn(f, lo, hi), iterated_difference(f, lo, hi), atol=1e-12)


@pytest.mark.parametrize("kernel", [MAFSF(0.7, 1.5, 2), LFSS((0.4, 0.7), 1.5), RectHomogeneous(0.6, 1.5, 2)],
                         ids=str)
def test_lower_pieces_vanish_under_increments(kernel):
    rng = stream(3)
    for _ in range(20):
        s = rng.uniform(-2, 2, size=2)
        lo = rng.uniform(0, 1, size=2)
        hi = lo + rng.uniform(0.05, 1, size=2)
        full = rect_increment_fn(lambda t: kernel.g_full(t, s), lo, hi)
        trans = rect_increment_fn(lambda t: kernel.g(t - s), lo, hi)
        assert full == pytest.approx(trans, rel=1e-12, abs=1e-12)


def test_delta1_h_values():
    k = H1Radial(0.5, 1)
    assert delta1_h(k, np.array([0.0])) == pytest.approx(1.0)
    assert delta1_h(k, np.array([1.0])) == pytest.approx(math.sqrt(2) - 1, rel=1e-14)


def test_delta1_h_far_field_decay():
    # |Delta_1 h(y)| <= C ||y||^(d(alpha - 1)) for radial h
    k = H1Radial(0.3, 2)
    rng = stream(4)
    dirs = rng.normal(size=(200, 2))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    ratios = []
    for r in (10.0, 100.0, 1000.0):
        y = r * dirs
        ratios.append(np.max(np.abs(delta1_h(k, y)) / r ** (2 * (0.3 - 1))))
    assert max(ratios) < 2 * min(ratios) + 1e-12
    # the unit increment approximates the mixed partial far away
    y = 1000.0 * dirs
    np.testing.assert_allclose(delta1_h(k, y), k.partial_d(y + 0.5), rtol=1e-3)


def test_partial_d_closed_forms():
    assert H2Product((0.5,)).partial_d(np.array([[2.0]])) == pytest.approx(0.5 * 2 ** -0.5)
    k, a = H1Radial(0.4, 2), 0.4
    s = np.array([[0.3, 0.7]])
    want = 2 * a * (2 * a - 2) * 0.21 * np.sum(s ** 2) ** (a - 2)
    assert k.partial_d(s)[0] == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("kernel", KERNELS, ids=str)
def test_partial_d_on_axes_is_zero(kernel):
    s = np.array([[0.0] + [0.7] * (kernel.d - 1)])
    assert kernel.partial_d(s)[0] == 0.0


@pytest.mark.parametrize("kernel", [k for k in KERNELS if k.d == 2], ids=str)
def test_partial_d_finite_differences(kernel):
    rng = stream(5)
    s = rng.uniform(0.2, 2.0, size=(100, 2)) * rng.choice([-1, 1], size=(100, 2))
    e = 1e-4
    fd = (kernel.g(s + [e, e]) - kernel.g(s + [e, -e]) - kernel.g(s + [-e, e]) + kernel.g(s - [e, e])) / (4 * e * e)
    np.testing.assert_allclose(kernel.partial_d(s), fd, rtol=1e-5, atol=1e-7)


def test_singular_evaluation_guard():
    with pytest.raises(SingularityError):
        H1Radial(-0.2, 2).g(np.zeros(2))
    assert np.isinf(H1Radial(-0.2, 2).g(np.zeros(2), singular_ok=True))


def test_classify_examples():
    reg = classify(MAFSF(0.7, 1.5, 2), 1.0, SymmetricStable(1.5))
    # h(s) = ||s||^(H - d/beta) gives alpha = H/d - 1/beta and an effective index
    # alpha + 1/beta = 0.35, so the rate is d(0.35 p - 1) = -1.3 at p = 1
    assert reg.theorem == "T1ii" and reg.rate_exponent == pytest.approx(-1.3)
    reg = classify(LFSS((0.3, 0.8), 1.5), 1.8, SymmetricStable(1.5))
    assert reg.theorem == "T2i"
    alphas = [0.3 - 1 / 1.5, 0.8 - 1 / 1.5]
    assert reg.k == sum(a + 1 / 1.8 < 1 for a in alphas)


def test_matern_never_derivative_regime():
    for gamma in (0.2, 0.5, 0.9):
        for p in (1.0, 1.5, 2.0, 4.0):
            for spec in (CompoundPoisson(1.0, TwoPoint(1.0)), SymmetricStable(1.5)):
                assert classify(MaternBessel(gamma, 1.0, 2), p, spec).theorem != "T1iii"


def test_classify_gaussian_and_unsupported():
    assert classify(GaussianFractional(0.7, 1), 1.0, Gaussian()).theorem == "T1ii"
    reg = classify(GaussianFractional(0.7, 1), 3.0, Gaussian())
    assert reg.theorem == "T1ii"
    reg = classify(MAFSF(0.7, 1.5, 1), 1.5, SymmetricStable(1.5))
    assert not reg.supported


def test_classify_product_regimes():
    spec = CompoundPoisson(1.0, TwoPoint(1.0))
    assert classify(H2Product((1.6, 1.6)), 1.0, spec).theorem == "T2iii"
    reg = classify(H2Product((0.5, 1.8)), 3.0, spec)
    assert reg.theorem == "T2i" and reg.k == 1


@pytest.mark.parametrize("kernel", KERNELS, ids=str)
def test_record_roundtrip(kernel):
    assert kernel_from_record(kernel.to_record()) == kernel


def test_parameter_validation():
    with pytest.raises(ParameterError):
        MaternBessel(1.3, 1.0, 2)
    with pytest.raises(ParameterError):
        MAFSF(1.0 / 1.5, 1.5, 1)
