from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpv.errors import ParameterError, UnsupportedRegimeError
from fracpv.harness import ks_distance
from fracpv.levy import (CompoundPoisson, Gaussian, SymmetricStable, TruncatedStable, TwoPoint,
                         cell_increments, levy_from_record, sample_jump_configuration, sample_sas,
                         series_thinning_stream, stable_abs_moment_exact, validate_assumptions)
from fracpv.rng import stream

N = 10 ** 5


def test_indices():
    s = SymmetricStable(1.5)
    assert s.beta_index == s.theta_index == 1.5
    cp = CompoundPoisson(2.0, TwoPoint(1.0))
    assert cp.beta_index == 0.0 and cp.total_mass == 2.0
    ts = TruncatedStable(1.2, 1.0)
    assert ts.beta_index == 1.2 and ts.theta_index == 2.0


def test_sas_zero_scale():
    assert np.all(sample_sas(1.5, scale=0.0, rng=stream(0), size=10) == 0.0)


def test_sas_cauchy_median():
    x = sample_sas(1.0, rng=stream(1), size=N)
    assert abs(np.median(x)) < 0.02


def test_sas_cf_at_one():
    x = sample_sas(1.2, rng=stream(2), size=N)
    c = np.cos(x)
    assert abs(c.mean() - math.exp(-1.0)) < 3 * c.std() / math.sqrt(N)


def test_sas_rejects_bad_index():
    with pytest.raises(ParameterError):
        sample_sas(2.5, rng=stream(0))


@pytest.mark.parametrize("spec", [SymmetricStable(1.5), CompoundPoisson(4.0, TwoPoint(1.0)), Gaussian(),
                                  TruncatedStable(1.2, 1.0)], ids=lambda s: s.kind)
def test_cell_cf_matches_cumulant(spec):
    vol = 0.25
    x = spec.sample_cell(vol, N, stream(3))
    ts = np.array([0.5, 1.0, 2.0])
    ecf = np.mean(np.exp(1j * ts[:, None] * x[None, :]), axis=1)
    assert np.max(np.abs(ecf - spec.cf(ts, vol))) < 4 / math.sqrt(N)


@pytest.mark.parametrize("spec", [SymmetricStable(1.5), CompoundPoisson(4.0, TwoPoint(1.0)),
                                  TruncatedStable(1.2, 1.0)], ids=lambda s: s.kind)
def test_cell_symmetry(spec):
    x = spec.sample_cell(0.5, N, stream(4))
    assert ks_distance(x, -x) < 0.02


def test_gaussian_unit_cell_variance():
    x = cell_increments(1, 1, [[0.0, 1.0]], Gaussian(), stream(5)).ravel()
    assert x.size == 1
    x = Gaussian().sample_cell(1.0, N, stream(5))
    assert abs(x.var() - 1.0) < 0.02


def test_stable_cell_scaling():
    # L of a cell of volume 2^-3 is SaS with scale 2^(-3/1.5) = 0.25
    x = SymmetricStable(1.5).sample_cell(2.0 ** -3, N, stream(6))
    y = sample_sas(1.5, 0.25, stream(7), N)
    assert ks_distance(x, y) < 0.01


def test_compound_poisson_nonzero_count():
    # Poisson(1) jumps of +-1 per cell: the sum vanishes with probability
    # e^-1 sum_m C(2m, m) / (4^m (2m)!) = e^-1 I_0(1); cells with a jump: 1 - e^-1
    from scipy.special import i0
    x = CompoundPoisson(4.0, TwoPoint(1.0)).sample_cell(0.25, N, stream(8))
    expected = N * (1 - math.exp(-1.0) * i0(1.0))
    assert abs(np.count_nonzero(x) - expected) < 4 * math.sqrt(expected)


def test_cell_increments_shape_and_independence():
    x = cell_increments(16, 2, [[0.0, 1.0], [-0.5, 1.5]], SymmetricStable(1.8), stream(9))
    assert x.shape == (32, 64)
    y = CompoundPoisson(3.0, TwoPoint(1.0)).sample_cell(0.3, 2 * N, stream(10)).reshape(N, 2)
    r = np.corrcoef(y[:, 0], y[:, 1])[0, 1]
    assert abs(r) < 4 / math.sqrt(N)


def test_jump_configuration_counts():
    spec = CompoundPoisson(3.0, TwoPoint(1.0))
    counts = [sample_jump_configuration([[0, 1], [0, 1]], spec, stream(11, r)).count for r in range(4000)]
    assert abs(np.mean(counts) - 3.0) < 3 * math.sqrt(3.0 / 4000)
    counts = [sample_jump_configuration([[0, 2], [0, 1]], spec, stream(12, r)).count for r in range(4000)]
    assert abs(np.mean(counts) - 6.0) < 3 * math.sqrt(6.0 / 4000)


def test_jump_configuration_rate_zero_and_errors():
    cfg = sample_jump_configuration([[0, 1]], CompoundPoisson(0.0, TwoPoint(1.0)), stream(0))
    assert cfg.count == 0
    with pytest.raises(UnsupportedRegimeError):
        sample_jump_configuration([[0, 1]], SymmetricStable(1.5), stream(0))
    with pytest.raises(UnsupportedRegimeError):
        sample_jump_configuration([[0, 1]], Gaussian(), stream(0))


def test_jump_floor_for_stable():
    spec = SymmetricStable(1.2)
    cfg = sample_jump_configuration([[0, 1]], spec, stream(13), jump_floor=0.5)
    assert np.all(np.abs(cfg.jumps) > 0.5)


def test_thinning_empty_and_constant_rho():
    assert series_thinning_stream(CompoundPoisson(2.0, TwoPoint(1.0)), 0, stream(0)).count == 0
    nz = [np.count_nonzero(series_thinning_stream(CompoundPoisson(2.5, TwoPoint(1.0)), 40,
                                                  stream(14, r)).jumps) for r in range(4000)]
    assert abs(np.mean(nz) - 2.5) < 4 * math.sqrt(2.5 / 4000)


def test_thinning_matches_direct_sampling():
    # count law and jump-size law agree between the two constructions
    from fracpv.levy import SymmetricUniform
    spec = CompoundPoisson(2.0, SymmetricUniform(1.0))
    a = [series_thinning_stream(spec, 60, stream(15, r)).nonzero()[1] for r in range(4000)]
    b = [sample_jump_configuration([[0, 1]], spec, stream(16, r)).jumps for r in range(4000)]
    ca, cb = np.bincount([x.size for x in a], minlength=12)[:8], np.bincount([x.size for x in b], minlength=12)[:8]
    pooled = (ca + cb) / 2
    chi2 = np.sum((ca - pooled) ** 2 / np.maximum(pooled, 1) + (cb - pooled) ** 2 / np.maximum(pooled, 1))
    assert chi2 < 24.3  # 99.9% point of chi-square with 7 degrees of freedom
    assert ks_distance(np.concatenate(a), np.concatenate(b)) < 0.03


def test_thinning_truncated_stable_tail_count():
    spec = TruncatedStable(1.2, 1.0)
    counts = []
    for r in range(1000):
        s = series_thinning_stream(spec, 400, stream(17, r))
        counts.append(np.count_nonzero(np.abs(s.jumps) > 0.5))
    expected = spec.tail(0.5)
    assert abs(np.mean(counts) - expected) < 4 * math.sqrt(expected / 1000)


def test_validate_assumptions():
    rep = validate_assumptions(SymmetricStable(1.5))
    assert rep.ok and rep.beta_index == 1.5 and rep.theta_index == 1.5
    rep = validate_assumptions(CompoundPoisson(2.0, TwoPoint(1.0)))
    assert rep.ok and rep.beta_index == 0.0 and rep.theta_index == 2.0
    rep = validate_assumptions(TruncatedStable(1.2, 1.0))
    assert rep.ok and rep.beta_index == 1.2 and rep.theta_index == 2.0


def test_stable_tail_probe_is_flat():
    rep = validate_assumptions(SymmetricStable(1.3))
    vals = [v for _, v in rep.small_probe]
    assert max(vals) == pytest.approx(min(vals), rel=1e-12)


@given(beta=st.floats(0.3, 1.95), p=st.floats(0.05, 0.9))
@settings(max_examples=30, deadline=None)
def test_stable_moment_closed_form_positive(beta, p):
    q = p * beta
    assert stable_abs_moment_exact(beta, q) > 0


def test_record_roundtrip():
    for spec in (SymmetricStable(1.5), CompoundPoisson(2.0, TwoPoint(1.0)), Gaussian(2.0), TruncatedStable(1.2, 1.0)):
        assert levy_from_record(spec.to_record()) == spec
