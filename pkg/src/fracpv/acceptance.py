"""Acceptance criteria C1-C10 as runnable checks.

Each ``cN`` function returns a :class:`CriterionResult`.  Simulation criteria
read their setup from the JSON configs bundled in ``fracpv/configs`` so the
same runs can be reproduced with ``fracpv verify --config``.  Thresholds are
fixed here and never adapted to the measured values.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import TruncationError
from .grids import coarsen_increments
from .harness import ExperimentConfig, ks_distance
from .kernels import (MAFSF, H1Radial, H2Product, LFSS, classify, delta_g, iterated_difference,
                      rect_increment_fn)
from .levy import SymmetricStable, sample_sas
from .limits import (draw_limit_Z_thm1i, draw_limit_Z_thm2i, ergodic_limit, expected_Z_thm1i,
                     expected_Z_thm2i, lattice_sum_H, sample_derivative_pv_limit)
from .quadrature import (cube_exterior_integral, integrate_box, integrate_power_tail,
                         integrate_rd_tail, line_abs_power)
from .rng import stream
from .simulator import (GaussianReference, direct_increment_field, draw_lattice,
                        fft_increment_field, simulate_increments)
from .statistics import (_coarse_from_fine, estimate_H, power_variation, rect_increments_step,
                         scaling_exponent)

__all__ = ["CriterionResult", "CRITERIA", "run_all", "load_config"] + [f"c{i}" for i in range(1, 11)]


@dataclass
class CriterionResult:
    id: str
    name: str
    passed: bool
    measured: dict
    threshold: str
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"{self.id} {status} {self.name}: {shown} [{self.threshold}] ({self.seconds:.1f}s)"

    def to_record(self):
        return {"id": self.id, "name": self.name, "passed": bool(self.passed), "measured": self.measured,
                "threshold": self.threshold, "detail": self.detail, "seconds": self.seconds}


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def load_config(name):
    """Bundled acceptance config by stem, e.g. ``load_config("lfsm")``."""
    text = resources.files("fracpv").joinpath("configs").joinpath(f"{name}.json").read_text()
    return ExperimentConfig.from_dict(json.loads(text))


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --------------------------------------------------------------------------
# C1  exact algebra
# --------------------------------------------------------------------------

@_timed
def c1():
    """Corner formula, additive annihilation, piece cancellation, PV equivariance."""
    rng = stream(101)
    errs = {}

    def smooth(x):
        return np.sin(x @ w1) * np.exp(0.3 * np.cos(x @ w2)) + np.prod(x, axis=-1) ** 2

    worst = 0.0
    for d in (1, 2, 3):
        w1, w2 = rng.normal(size=d), rng.normal(size=d)
        lo = rng.uniform(-2, 1, size=(200, d))
        hi = lo + rng.uniform(0.01, 1.5, size=(200, d))
        a = rect_increment_fn(smooth, lo, hi)
        b = iterated_difference(smooth, lo, hi)
        worst = max(worst, float(np.max(np.abs(a - b))))
    errs["corner_vs_iterated"] = worst

    worst = 0.0
    for d in (2, 3):
        coefs = rng.normal(size=(d, 3))

        def additive(x):
            # sum of functions each missing one coordinate
            out = np.zeros(x.shape[:-1])
            for i in range(d):
                rest = np.delete(x, i, axis=-1)
                out = out + np.cos(rest @ coefs[i, :d - 1]) + np.sum(rest, axis=-1) ** 3
            return out

        lo = rng.uniform(-2, 1, size=(200, d))
        hi = lo + rng.uniform(0.01, 1.5, size=(200, d))
        worst = max(worst, float(np.max(np.abs(rect_increment_fn(additive, lo, hi)))))
    errs["additive_annihilation"] = worst

    worst = 0.0
    for kernel in (MAFSF(0.7, 1.5, 2), LFSS((0.7, 0.6), 1.5), H1Radial(0.4, 2), H2Product((0.5, 1.8))):
        d = kernel.d
        s = rng.uniform(-3, 3, size=(100, d))
        lo = rng.uniform(0.05, 0.5, size=(100, d))
        hi = lo + rng.uniform(0.05, 0.5, size=(100, d))
        full = rect_increment_fn(lambda t: kernel.g_full(t, s), lo, hi)
        trans = rect_increment_fn(lambda t: kernel.g(t - s), lo, hi)
        scale = max(1.0, float(np.max(np.abs(trans))))
        worst = max(worst, float(np.max(np.abs(full - trans))) / scale)
        # the unit-step increments of g agree with the corner sum
        x = rng.uniform(-2, 2, size=(100, d))
        a = delta_g(kernel, x, 0.25)
        b = rect_increment_fn(kernel.g, x, x + 0.25)
        worst = max(worst, float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(b)))))
    errs["piece_cancellation"] = worst

    worst = 0.0
    for d in (1, 2):
        field_vals = rng.normal(size=(33,) * d).cumsum(axis=0)
        inc = rect_increments_step(field_vals, 1)
        for p in (0.5, 1.0, 2.0, 3.0):
            for c in (-3.0, 0.25, 7.0):
                v = power_variation(inc, p).V
                vc = power_variation(c * inc, p).V
                worst = max(worst, abs(vc - abs(c) ** p * v) / (abs(c) ** p * v))
        # coarse increments from the field equal block sums of fine ones
        coarse = rect_increments_step(field_vals, 2)
        worst = max(worst, float(np.max(np.abs(coarse - _coarse_from_fine(inc)))))
    errs["pv_equivariance"] = worst

    tol = 1e-12
    return CriterionResult("C1", "exact algebra", all(v < tol for v in errs.values()), errs,
                           f"each < {tol:g}")


# --------------------------------------------------------------------------
# C2  stable sampler
# --------------------------------------------------------------------------

@_timed
def c2():
    """Empirical CF of the stable sampler against exp(-|t|^beta)."""
    N = 10 ** 5
    tol = 4.0 / math.sqrt(N)
    ts = np.array([0.5, 1.0, 2.0])
    worst = {}
    for beta in (0.8, 1.2, 1.8):
        x = sample_sas(beta, rng=stream(102, int(beta * 10)), size=N)
        ecf = np.mean(np.exp(1j * ts[:, None] * x[None, :]), axis=1)
        worst[f"beta={beta}"] = float(np.max(np.abs(ecf - np.exp(-np.abs(ts) ** beta))))
    return CriterionResult("C2", "stable sampler CF", all(v < tol for v in worst.values()), worst,
                           f"each < 4/sqrt(N) = {tol:.4g}")


# --------------------------------------------------------------------------
# C3  FFT vs direct synthesis
# --------------------------------------------------------------------------

def _timeit(fn, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


@_timed
def c3(speed_sizes=(2 ** 10, 2 ** 14)):
    """Same lattice noise through both routes; speedup growth with n^d."""
    spec = SymmetricStable(1.5)
    dev = {}
    for d in (1, 2):
        kernel = MAFSF(0.7, 1.5, d)
        for n in (32, 64):
            lat = draw_lattice(d, n, 1, 0.25, spec, stream(103, d, n))
            a = fft_increment_field(kernel, spec, n, lattice=lat).values
            b = direct_increment_field(kernel, lat).values
            dev[f"d={d},n={n}"] = float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
    kernel = MAFSF(0.7, 1.5, 1)
    speed = {}
    for n in speed_sizes:
        lat = draw_lattice(1, n, 1, 0.25, spec, stream(103, 9, n))
        t_fft = _timeit(lambda: fft_increment_field(kernel, spec, n, lattice=lat))
        t_dir = _timeit(lambda: direct_increment_field(kernel, lat), repeat=1)
        speed[n] = t_dir / t_fft
    lo, hi = speed_sizes
    growth = speed[hi] / speed[lo]
    ok_dev = all(v < 1e-9 for v in dev.values())
    # super-linear: the speedup itself must grow with the point count
    ok_speed = speed[hi] > 1.0 and growth >= 4.0
    measured = {"max_rel_dev": max(dev.values()), f"speedup@{hi}": speed[hi], "speedup_growth": growth}
    return CriterionResult("C3", "FFT/direct equivalence", ok_dev and ok_speed, measured,
                           "rel dev < 1e-9; speedup > 1 at 2^14 points and grows >= 4x from 2^10",
                           {"deviation": dev, "speedup": {str(k): v for k, v in speed.items()}})


# --------------------------------------------------------------------------
# LFSM runs shared by C4, C5, C9
# --------------------------------------------------------------------------

_CACHE = {}


def _lfsm_runs():
    if "lfsm" in _CACHE:
        return _CACHE["lfsm"]
    cfg = load_config("lfsm")
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    ladder, n = cfg.n_ladder, cfg.n_ladder[-1]
    out = {"V1": [], "H": [], "slope": {p: [] for p in cfg.p_grid}}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in range(cfg.reps):
            inc = simulate_increments(kernel, spec, n, method, stream(cfg.seed, r))
            grids = [inc if m == n else coarsen_increments(inc, n // m) for m in ladder]
            out["V1"].append(power_variation(inc, 1.0).V)
            out["H"].append(estimate_H(inc, 1.0).H_hat)
            for p in cfg.p_grid:
                out["slope"][p].append(scaling_exponent(grids, p).slope)
    out.update(cfg=cfg, kernel=kernel, spec=spec)
    _CACHE["lfsm"] = out
    return out


def _theorem_H(kernel, spec, p):
    """H implied by the ergodic rate d(Hp - 1)."""
    reg = classify(kernel, p, spec)
    return (reg.rate_exponent / kernel.d + 1.0) / p


# --------------------------------------------------------------------------
# C4  ergodic regime
# --------------------------------------------------------------------------

def _gaussian_runs():
    if "gauss" in _CACHE:
        return _CACHE["gauss"]
    cfg = load_config("gaussian_1d")
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    n = cfg.n_ladder[-1]
    p = cfg.p_grid[0]
    rate = classify(kernel, p, spec).rate_exponent
    res = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for meth in (method, GaussianReference()):
            res[meth.kind] = [n ** rate * power_variation(
                simulate_increments(kernel, spec, n, meth, stream(cfg.seed, r)), p).V
                for r in range(cfg.reps)]
    out = {"cfg": cfg, "kernel": kernel, "spec": spec, "p": p, "norm": res}
    _CACHE["gauss"] = out
    return out


@_timed
def c4():
    """Mean normalized V_n against the ergodic constant (LFSM and Gaussian)."""
    runs = _lfsm_runs()
    kernel, spec, cfg = runs["kernel"], runs["spec"], runs["cfg"]
    n = cfg.n_ladder[-1]
    rate = classify(kernel, 1.0, spec).rate_exponent
    lim = ergodic_limit(kernel, spec, 1.0, rng=stream(104))
    norm = n ** rate * np.asarray(runs["V1"])
    rel_lfsm = float(np.mean(norm) / lim.m_p - 1.0)

    g = _gaussian_runs()
    glim = ergodic_limit(g["kernel"], g["spec"], g["p"])
    gnorm = np.asarray(g["norm"]["discretized"])
    rel_gauss = float(np.mean(gnorm) / glim.m_p - 1.0)
    rel_ref = float(np.mean(g["norm"]["gaussian_reference"]) / glim.m_p - 1.0)
    measured = {"lfsm_rel": rel_lfsm, "gauss_rel": rel_gauss}
    detail = {"lfsm_m_p": lim.m_p, "lfsm_stable_stderr": lim.stable_stderr,
              "lfsm_rel_stderr": float(np.std(norm, ddof=1) / math.sqrt(norm.size) / lim.m_p),
              "gauss_m_p": glim.m_p,
              "gauss_rel_stderr": float(np.std(gnorm, ddof=1) / math.sqrt(gnorm.size) / glim.m_p),
              "gauss_reference_rel": rel_ref}
    ok = abs(rel_lfsm) < 0.05 and abs(rel_gauss) < 0.03
    return CriterionResult("C4", "ergodic constant", ok, measured, "|lfsm| < 5%, |gauss| < 3%", detail)


# --------------------------------------------------------------------------
# C5  estimator consistency
# --------------------------------------------------------------------------

@_timed
def c5():
    """Mean |H_n - H| for LFSM (p = 1) and the d = 2 Gaussian field (p = 2)."""
    runs = _lfsm_runs()
    H_lfsm = _theorem_H(runs["kernel"], runs["spec"], 1.0)
    err_lfsm = float(np.mean(np.abs(np.asarray(runs["H"]) - H_lfsm)))

    cfg = load_config("gaussian_2d")
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    p, n = cfg.p_grid[0], cfg.n_ladder[-1]
    H2 = _theorem_H(kernel, spec, p)
    est = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in range(cfg.reps):
            est.append(estimate_H(simulate_increments(kernel, spec, n, method, stream(cfg.seed, r)), p).H_hat)
    err_2d = float(np.mean(np.abs(np.asarray(est) - H2)))
    measured = {"lfsm_mean_abs": err_lfsm, "gauss2d_mean_abs": err_2d}
    detail = {"H_lfsm": H_lfsm, "H_gauss2d": H2, "mean_H_lfsm": float(np.mean(runs["H"])),
              "mean_H_gauss2d": float(np.mean(est))}
    return CriterionResult("C5", "H estimator", err_lfsm < 0.05 and err_2d < 0.05, measured,
                           "each < 0.05", detail)


# --------------------------------------------------------------------------
# C6, C7  jump-regime laws
# --------------------------------------------------------------------------

def _jump_law(cfg_name, draw):
    cfg = load_config(cfg_name)
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    p, n = cfg.p_grid[0], cfg.n_ladder[-1]
    reg = classify(kernel, p, spec)
    vals = np.array([n ** reg.rate_exponent *
                     power_variation(simulate_increments(kernel, spec, n, method, stream(cfg.seed, r)), p).V
                     for r in range(cfg.reps)])
    Z = draw(kernel, spec, p, int(cfg.limit["draws"]), cfg, stream(cfg.seed, 10 ** 6 + 1))
    return vals, Z, reg


@_timed
def c6():
    """KS distance between n^(alpha p) V_n(p) and the limit law, d = 1."""
    vals, Z, reg = _jump_law("jump_1d", lambda k, s, p, m, cfg, rng: draw_limit_Z_thm1i(k, s, p, m, rng=rng))
    ks = ks_distance(vals, Z.values)
    # diagnostic only: with an atom at 0 in the limit and none at finite n the
    # distance is at least the atom mass; compare the parts above the atom too
    atom = float(np.mean(Z.values == 0))
    upper = np.sort(vals)[int(round(atom * vals.size)):]
    detail = {"regime": reg.theorem, "mean_normalized": float(np.mean(vals)), "mean_Z": float(np.mean(Z.values)),
              "zero_mass_sim": float(np.mean(vals == 0)), "zero_mass_Z": atom,
              "ks_above_atom": ks_distance(upper, Z.values[Z.values > 0]), "remainder": Z.remainder}
    return CriterionResult("C6", "jump regime law (d=1)", ks < 0.08, {"ks": ks}, "KS < 0.08", detail)


@_timed
def c7():
    """KS distance between the normalized V_n and the mixed-regime limit law, d = 2."""
    def draw(k, s, p, m, cfg, rng):
        return draw_limit_Z_thm2i(k, s, p, m, spatial_box=float(cfg.limit["spatial_box"]), rng=rng)
    vals, Z, reg = _jump_law("mixed_2d", draw)
    ks = ks_distance(vals, Z.values)
    detail = {"regime": reg.theorem, "k": reg.k, "mean_normalized": float(np.mean(vals)),
              "mean_Z": float(np.mean(Z.values)), "remainder": Z.remainder}
    return CriterionResult("C7", "mixed regime law (d=2)", ks < 0.12, {"ks": ks}, "KS < 0.12", detail)


# --------------------------------------------------------------------------
# C8  derivative regime
# --------------------------------------------------------------------------

@_timed
def c8():
    """Same-realization gap between n^(d(p-1)) V_n(p) and int |Y|^p."""
    cfg = load_config("derivative_2d")
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    p = cfg.p_grid[0]
    lo_n, hi_n = cfg.n_ladder
    reg = classify(kernel, p, spec)
    ratios, gaps_hi, gaps_lo = [], [], []
    for r in range(cfg.reps):
        inc, jc = simulate_increments(kernel, spec, hi_n, method, stream(cfg.seed, r), return_config=True)
        lim = sample_derivative_pv_limit(kernel, spec, p, quad_tol=float(cfg.limit["quad_tol"]), config=jc)
        coarse = coarsen_increments(inc, hi_n // lo_n)
        g_hi = hi_n ** reg.rate_exponent * power_variation(inc, p).V / lim.value - 1.0
        g_lo = lo_n ** reg.rate_exponent * power_variation(coarse, p).V / lim.value - 1.0
        gaps_hi.append(g_hi)
        gaps_lo.append(g_lo)
        ratios.append(g_lo / g_hi)
    halving = all(1.4 <= q <= 2.6 for q in ratios)
    small = all(abs(g) < 0.02 for g in gaps_hi)
    measured = {"max_gap@256": float(max(np.abs(gaps_hi))), "gap_ratios": [float(q) for q in ratios]}
    detail = {"gaps_128": gaps_lo, "gaps_256": gaps_hi, "halving_ok": halving, "small_ok": small}
    return CriterionResult("C8", "derivative regime", halving and small, measured,
                           "gap ratio in 2 +- 30% and |gap| < 2% at n=256", detail)


# --------------------------------------------------------------------------
# C9  rate identification
# --------------------------------------------------------------------------

@_timed
def c9():
    """Least-squares slopes of log V_n against log n for p = 1 and p = 3."""
    runs = _lfsm_runs()
    kernel, spec = runs["kernel"], runs["spec"]
    s1 = float(np.mean(runs["slope"][1.0]))
    s3 = float(np.mean(runs["slope"][3.0]))
    e1 = -classify(kernel, 1.0, spec).rate_exponent
    e3 = -classify(kernel, 3.0, spec).rate_exponent
    measured = {"slope_p1": s1, "slope_p3": s3}
    detail = {"predicted_p1": e1, "predicted_p3": e3,
              "regimes": [classify(kernel, q, spec).theorem for q in (1.0, 3.0)]}
    ok = abs(s1 - e1) < 0.05 and abs(s3 - e3) < 0.1
    return CriterionResult("C9", "rate identification", ok, measured,
                           f"|slope1 - {e1:.3g}| < 0.05, |slope3 - {e3:.3g}| < 0.1", detail)


# --------------------------------------------------------------------------
# C10  oracle self-consistency
# --------------------------------------------------------------------------

def quadrature_battery():
    """(name, computed value, error bound, exact value) for 20 closed forms."""
    rows = []

    def add(name, res, exact):
        value, bound = res
        rows.append((name, float(value), float(bound), float(exact)))

    tol = 1e-10
    add("int_0^1 x^-1/2", integrate_box(lambda x: x[:, 0] ** -0.5, [(0, 1)], tol), 2.0)
    add("int_0^1 log x", integrate_box(lambda x: np.log(x[:, 0]), [(0, 1)], tol), -1.0)
    add("int_0^pi sin", integrate_box(lambda x: np.sin(x[:, 0]), [(0, math.pi)], tol), 2.0)
    add("int_0^1 |x-1/3|^0.3", integrate_box(lambda x: np.abs(x[:, 0] - 1 / 3) ** 0.3, [(0, 1)], tol,
                                            breakpoints=[[1 / 3]]),
        ((1 / 3) ** 1.3 + (2 / 3) ** 1.3) / 1.3)
    add("int_[0,1]^2 1/(1+x+y)", integrate_box(lambda x: 1 / (1 + x[:, 0] + x[:, 1]), [(0, 1)] * 2, tol),
        3 * math.log(3) - 4 * math.log(2))
    add("int_[0,1]^2 1/r", integrate_box(lambda x: 1 / np.hypot(x[:, 0], x[:, 1]), [(0, 1)] * 2, 1e-8),
        2 * math.log(1 + math.sqrt(2)))
    add("int_[0,1]^3 xyz", integrate_box(lambda x: np.prod(x, axis=1), [(0, 1)] * 3, tol), 0.125)
    add("int_[-1,1]^2 |xy|^-1/2", integrate_box(lambda x: np.abs(x[:, 0] * x[:, 1]) ** -0.5, [(-1, 1)] * 2,
                                                1e-8, breakpoints=[[0.0], [0.0]]), 16.0)
    add("int_[0,1]^2 e^(x+y)", integrate_box(lambda x: np.exp(x[:, 0] + x[:, 1]), [(0, 1)] * 2, tol),
        (math.e - 1) ** 2)
    add("int_[0,1]^3 e^-(x+y+z)", integrate_box(lambda x: np.exp(-x.sum(axis=1)), [(0, 1)] * 3, tol),
        (1 - math.exp(-1)) ** 3)
    add("int_1^inf y^-2", integrate_power_tail(lambda y: y ** -2.0, 1.0, 2.0), 1.0)
    add("int_1^inf 1/(1+y^2)", integrate_power_tail(lambda y: 1 / (1 + y * y), 1.0, 2.0), math.pi / 4)
    add("int_2^inf y^-1.5", integrate_power_tail(lambda y: y ** -1.5, 2.0, 1.5), math.sqrt(2))
    add("int_R 1/(1+x^2)", integrate_rd_tail(lambda s: 1 / (1 + s[:, 0] ** 2), 1, 4.0, -2.0, tol=1e-7),
        math.pi)
    add("int_R2 (1+r^2)^-2", integrate_rd_tail(lambda s: (1 + np.sum(s * s, axis=1)) ** -2, 2, 4.0, -4.0,
                                               tol=1e-6), math.pi)
    add("int_R3 (1+r^2)^-2", integrate_rd_tail(lambda s: (1 + np.sum(s * s, axis=1)) ** -2, 3, 4.0, -4.0,
                                               tol=1e-4), math.pi ** 2)
    add("int_R2 (1+r^2)^-3/2", integrate_rd_tail(lambda s: (1 + np.sum(s * s, axis=1)) ** -1.5, 2, 4.0, -3.0,
                                                 tol=1e-5), 2 * math.pi)
    add("int_{|x|>=1} x^-2", (cube_exterior_integral(1, -2.0), 1e-14), 2.0)
    add("int_{|s|_inf>=1} r^-3", (cube_exterior_integral(2, -3.0), 1e-11), 4 * math.sqrt(2))
    v, b = line_abs_power(lambda y: np.abs(y) ** -0.25, [0.3], 2.0, tol=1e-5)
    add("int_0^1 |t-0.3|^-1/2", (v[0], b[0]), 2 * (math.sqrt(0.3) + math.sqrt(0.7)))
    return rows


def lattice_extension_checks():
    """Certified lattice sums against a 4x wider brute-force window.

    For ``y > 0`` the summand lies between ``|alpha|^p (y+1)^(-gamma)`` and
    ``|alpha|^p y^(-gamma)``, ``gamma = p (1 - alpha)``; comparing sums with
    integrals brackets the terms outside the wider window independently of
    the library.  The certified interval must meet that bracket.
    """
    out = []
    for alpha, p in ((0.5, 3.0), (0.3, 2.0), (-0.3, 2.0), (0.8, 6.0)):
        kernel = H1Radial(alpha, 1)
        gamma = p * (1 - alpha)
        c = abs(alpha) ** p
        for u in (0.1, 0.5, 0.9):
            L = lattice_sum_H(kernel, u, p, tol=1e-6)
            R = 4 * int(L.radius)
            y = np.arange(-R, R + 1, dtype=float) - u
            brute = math.fsum(np.abs(np.abs(y + 1) ** alpha - np.abs(y) ** alpha) ** p)
            rest_lo = rest_hi = 0.0
            # right side starts at y = R + 1 - u, the left side mirrors to R + u
            for a in (R + 1.0 - u, R + u):
                rest_lo += c * (a + 1.0) ** (1 - gamma) / (gamma - 1)
                rest_hi += c * (a ** -gamma + a ** (1 - gamma) / (gamma - 1))
            lo, hi = float(L.value), float(L.value + L.tail_bound)
            ok = lo <= brute + rest_hi + 1e-12 and hi >= brute + rest_lo - 1e-12
            out.append({"alpha": alpha, "p": p, "u": u, "value": lo, "bound": float(L.tail_bound),
                        "window": int(L.radius), "brute": brute, "rest": (rest_lo, rest_hi), "ok": bool(ok)})
    return out


@_timed
def c10():
    """Campbell means, quadrature closed forms and lattice certificates."""
    measured, detail = {}, {}
    cfg = load_config("jump_1d")
    kernel, spec = cfg.build_kernel(), cfg.build_levy()
    p = cfg.p_grid[0]
    Z = draw_limit_Z_thm1i(kernel, spec, p, 10 ** 4, rng=stream(110))
    mean = expected_Z_thm1i(kernel, spec, p).value
    se = float(np.std(Z.values, ddof=1) / math.sqrt(Z.values.size))
    z1 = abs(float(np.mean(Z.values)) - mean) / se

    cfg = load_config("mixed_2d")
    kernel, spec = cfg.build_kernel(), cfg.build_levy()
    box = float(cfg.limit["spatial_box"])
    Z2 = draw_limit_Z_thm2i(kernel, spec, cfg.p_grid[0], 10 ** 4, spatial_box=box, rng=stream(111))
    mean2, rem2 = expected_Z_thm2i(kernel, spec, cfg.p_grid[0], box)
    se2 = float(np.std(Z2.values, ddof=1) / math.sqrt(Z2.values.size))
    z2 = abs(float(np.mean(Z2.values)) - mean2) / se2
    measured["campbell_z"] = [z1, z2]
    detail["campbell"] = {"d1": (float(np.mean(Z.values)), mean, se), "d2": (float(np.mean(Z2.values)), mean2, se2)}

    rows = quadrature_battery()
    bad = [r[0] for r in rows if not abs(r[1] - r[3]) <= r[2] + 1e-12 * max(1.0, abs(r[3]))]
    measured["quad_failures"] = len(bad)
    detail["quadrature"] = [{"name": r[0], "value": r[1], "bound": r[2], "exact": r[3]} for r in rows]
    detail["quad_failed"] = bad

    try:
        checks = lattice_extension_checks()
        lat_bad = sum(not c["ok"] for c in checks)
        detail["lattice"] = checks
    except TruncationError as exc:
        lat_bad = -1
        detail["lattice_error"] = str(exc)
    measured["lattice_failures"] = lat_bad
    ok = z1 < 3 and z2 < 3 and not bad and lat_bad == 0 and len(rows) == 20
    return CriterionResult("C10", "oracle self-consistency", ok, measured,
                           "Campbell |z| < 3, 20/20 closed forms inside bounds, lattice certificates valid",
                           detail)


CRITERIA = {f"C{i}": fn for i, fn in enumerate((c1, c2, c3, c4, c5, c6, c7, c8, c9, c10), start=1)}


def run_all(only=None):
    """Run the selected criteria (all by default) in order."""
    ids = list(CRITERIA) if only is None else [c.strip().upper() for c in only]
    return [CRITERIA[i]() for i in ids]
