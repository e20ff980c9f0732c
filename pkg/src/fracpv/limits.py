"""Independent computation of the limit objects of normalized power variations.

Jump regimes
    ``H(u) = sum_j |Delta_1 h(j - u)|^p`` is summed on a finite window with a
    certified remainder, and the Poisson-integral limits are sampled from a
    jump configuration on the unit cube (or on ``[0,1]^k x box`` for product
    kernels).
Ergodic regimes
    The constant ``E|L([0,1]^d)|^p (int |Delta_1 h|^beta)^(p/beta)`` is built
    from a Monte Carlo stable moment and deterministic quadrature.
Derivative regimes
    ``int_[0,1]^d |Y(t)|^p dt`` with ``Y = sum_k J_k partial^d g(t - V_k)`` for a
    given or sampled jump configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DivergenceError, NonConvergenceError, ParameterError,
                     TruncationError, UnsupportedRegimeError)
from .kernels import classify, delta1_h
from .levy import Gaussian, PointConfiguration, sample_jump_configuration
from .quadrature import (NODES, W_GAUSS, W_KRONROD, QuadResult, integrate_box,
                         integrate_power_tail, integrate_rd_tail, line_abs_power)

__all__ = [
    "LatticeSum",
    "LimitSample",
    "LimitDraws",
    "LimitConstant",
    "StableMoment",
    "lattice_sum_H",
    "lattice_mean",
    "axis_line_integral",
    "sample_limit_Z_thm1i",
    "draw_limit_Z_thm1i",
    "sample_limit_Z_thm2i",
    "draw_limit_Z_thm2i",
    "expected_Z_thm1i",
    "expected_Z_thm2i",
    "ergodic_limit",
    "stable_abs_moment",
    "increment_integral",
    "derivative_integral",
    "sample_derivative_pv_limit",
    "derivative_field",
]

_CHUNK = 4_000_000


@dataclass(frozen=True)
class LatticeSum:
    """H(u) for one or many u.  ``value <= H(u) <= value + tail_bound``."""

    u: np.ndarray
    p: float
    value: np.ndarray
    tail_bound: np.ndarray
    radius: int


@dataclass(frozen=True)
class LimitSample:
    value: float
    truncation: dict
    regime: str
    remainder: float = 0.0


@dataclass(frozen=True)
class LimitDraws:
    """Independent draws of a limit variable with shared truncation data."""

    values: np.ndarray
    truncation: dict
    regime: str
    remainder: float = 0.0

    def __len__(self):
        return int(self.values.size)


@dataclass(frozen=True)
class StableMoment:
    value: float
    stderr: float
    n: int


@dataclass(frozen=True)
class LimitConstant:
    m_p: float
    stable_moment: float
    stable_stderr: float
    increment_integrals: tuple = ()
    derivative_integrals: tuple = ()
    certificates: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# lattice sums
# --------------------------------------------------------------------------

def _f1(alpha, p, y):
    """|(y+1)^a - y^a|^p with |.| inside the powers (the one-dimensional summand).

    Off (-1, 0) the symmetry y -> -1 - y maps y to z >= 0, where the
    difference is evaluated as ``z^a expm1(a log1p(1/z))`` to avoid
    cancellation for large z.
    """
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        z = np.where(y >= 0.0, y, -1.0 - y)
        far = z ** alpha * np.expm1(alpha * np.log1p(1.0 / z))
        near = np.abs(y + 1.0) ** alpha - np.abs(y) ** alpha
        diff = np.where(z > 0.0, far, near)
        return np.abs(diff) ** p


def _k15(fn, a, b):
    """Kronrod value and |K - G| of int_a^b fn for arrays of endpoints."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    y = fn(mid[..., None] + half[..., None] * NODES)
    k = half * (y @ W_KRONROD)
    g = half * (y @ W_GAUSS)
    return k, np.abs(k - g)


def _lattice_sum_1d(alpha, u, p, tol):
    """H(u) for h(x) = |x|^alpha, d = 1, with a two-sided certified tail.

    The summand is log-convex and decreasing on (0, inf) (a power of a
    completely monotone function) and symmetric under y -> -1 - y.  For such
    f and a > 1/2, ``int_a^inf f + f(a)/2 <= sum_k f(a + k) <= int_{a-1/2}^inf f``.
    The returned value adds the lower end; the bracket width is the bound.
    """
    gamma = (1.0 - alpha) * p
    u = np.asarray(u, dtype=float)
    # width of the bracket ~ |f'(r)|/8 ~ gamma |alpha|^p r^(-gamma-1) / 8
    coef = max(abs(alpha) ** p * gamma / 8.0, 1e-300)
    r = int(max(16, math.ceil((2.0 * coef / tol) ** (1.0 / (gamma + 1.0)))))
    max_r = 2 ** 24
    while True:
        if r > max_r:
            raise TruncationError(f"lattice window {r} too large for tolerance {tol:g}")
        A = float(r + 1)
        f = lambda y: _f1(alpha, p, y)  # noqa: E731
        tail_A = integrate_power_tail(f, A, gamma, tol=tol * 1e-2).value
        vals = np.empty(u.size)
        bounds = np.empty(u.size)
        flat = u.ravel()
        j = np.arange(-r, r + 1, dtype=float)
        step = max(1, _CHUNK // j.size)
        for lo in range(0, flat.size, step):
            uu = flat[lo:lo + step]
            part = _f1(alpha, p, j[None, :] - uu[:, None]).sum(axis=1)
            a_pos = r + 1.0 - uu     # positive side: sum_k f(a_pos + k)
            a_neg = r + uu           # negative side mirrored: sum_k f(a_neg + k)
            total = part.copy()
            width = np.zeros(uu.size)
            for a in (a_pos, a_neg):
                ia, ea = _k15(f, a, np.full_like(a, A))
                ih, eh = _k15(f, a - 0.5, a)
                fa = f(a)
                total += tail_A + ia + 0.5 * fa
                width += (ih - 0.5 * fa) + ea + 2.0 * eh
            vals[lo:lo + step] = total
            bounds[lo:lo + step] = width + 2e-2 * tol
        if np.all(bounds <= tol):
            return vals.reshape(u.shape), bounds.reshape(u.shape), r
        r *= 2


def _radial_tail_bound(kernel, p, r):
    """Bound on sum_{||j||_inf > r} |Delta_1 h(j - u)|^p for radial h, d >= 2."""
    d = kernel.d
    B = kernel.h_partial_bound()
    gamma = d * (1.0 - kernel.alpha) * p
    sd = math.sqrt(d)
    x0 = r - 3.0 * sd
    if x0 <= 0 or gamma <= d:
        return math.inf
    omega = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    c = 2.5 * sd
    total = 0.0
    for k in range(d):
        total += math.comb(d - 1, k) * c ** (d - 1 - k) * x0 ** (k + 1 - gamma) / (gamma - k - 1)
    return omega * B ** p * total


def _lattice_sum_radial(kernel, u, p, tol):
    d = kernel.d
    u = np.atleast_2d(np.asarray(u, dtype=float))
    r = 8
    while _radial_tail_bound(kernel, p, r) > tol:
        r *= 2
        if r > 4096:
            raise TruncationError("lattice sum tail not certifiable at this tolerance")
    bound = _radial_tail_bound(kernel, p, r)
    grid = np.stack(np.meshgrid(*[np.arange(-r, r + 1, dtype=float)] * d, indexing="ij"), -1).reshape(-1, d)
    vals = np.empty(u.shape[0])
    for i, uu in enumerate(u):
        vals[i] = math.fsum(np.abs(delta1_h(kernel, grid - uu)) ** p)
    return vals, np.full(u.shape[0], bound), r


def _check_jump_exponent(alpha, p):
    if not 0.0 < alpha + 1.0 / p < 1.0:
        raise UnsupportedRegimeError(
            f"lattice sum diverges: alpha + 1/p = {alpha + 1.0 / p:.6g} outside (0, 1)")


def lattice_sum_H(kernel, u, p, tol=1e-8, axes=None):
    """H(u) = sum_j |Delta_1 h(j - u)|^p with a certified remainder.

    Parameters
    ----------
    kernel : Kernel
    u : array_like
        Points of ``(0,1)^d``: shape ``(d,)`` or ``(m, d)``; for d = 1 a scalar
        or a 1-D array.  For product kernels with ``axes`` given, the trailing
        dimension runs over those axes only.
    p : float
    tol : float
        Target for the remainder bound of each value.
    axes : sequence of int, optional
        Product kernels only: the axes entering the product (default all).
    """
    if kernel.family == "H1":
        _check_jump_exponent(kernel.alpha, p)
        if kernel.d == 1:
            uu = np.asarray(u, dtype=float)
            if uu.ndim and uu.shape[-1:] == (1,):
                uu = uu[..., 0]
            _check_unit(uu)
            v, b, r = _lattice_sum_1d(kernel.alpha, uu, p, tol)
            return LatticeSum(np.asarray(u), p, v, b, r)
        uu = np.atleast_2d(np.asarray(u, dtype=float))
        _check_unit(uu)
        v, b, r = _lattice_sum_radial(kernel, uu, p, tol)
        if np.asarray(u).ndim == 1:
            v, b = v[0], b[0]
        return LatticeSum(np.asarray(u), p, v, b, r)
    axes = tuple(range(kernel.d)) if axes is None else tuple(axes)
    uu = np.asarray(u, dtype=float)
    if uu.ndim == 0:
        uu = uu[None]
    if uu.shape[-1] != len(axes):
        if len(axes) == 1:
            uu = uu[..., None]
        else:
            raise ParameterError("u must have one coordinate per selected axis")
    _check_unit(uu)
    lo = np.ones(uu.shape[:-1])
    hi = np.ones(uu.shape[:-1])
    r_max = 0
    per_axis_tol = tol / (2.0 * len(axes))
    for col, i in enumerate(axes):
        a = kernel.alphas[i]
        _check_jump_exponent(a, p)
        v, b, r = _lattice_sum_1d(a, uu[..., col], p, per_axis_tol)
        lo = lo * v
        hi = hi * (v + b)
        r_max = max(r_max, r)
    bound = hi - lo
    if np.any(bound > tol):
        # relative widths compound in the product; tighten once more
        return lattice_sum_H(kernel, u, p, tol * tol / max(float(np.max(bound)), tol), axes)
    return LatticeSum(np.asarray(u), p, lo, bound, r_max)


def _check_unit(u):
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ParameterError("lattice offsets must lie in the open unit cube")


def _line_integral_1d(alpha, p, tol):
    """int_R |Delta_1 |y|^alpha|^p dy = int_0^1 H(u) du (d = 1)."""
    gamma = (1.0 - alpha) * p

    def fn(y):
        return _f1(alpha, p, y[:, 0])

    def model(y):
        return abs(alpha) ** p * np.abs(y[:, 0]) ** (-gamma)

    return integrate_rd_tail(fn, 1, 4.0, -gamma, tol=tol, breakpoints=[[-1.0, -0.5, 0.0]],
                             tail_model=model)


def lattice_mean(kernel, p, tol=1e-8, axes=None, route="line"):
    """int_{(0,1)^d} H(u) du.

    ``route="line"`` integrates ``|Delta_1 h|^p`` over the whole space (one
    route, valid by periodization); ``route="cell"`` integrates the lattice
    sums themselves over the unit cell (d = 1 or one axis at a time).
    """
    if kernel.family == "H1":
        _check_jump_exponent(kernel.alpha, p)
        if kernel.d != 1:
            def fn(s):
                return np.abs(delta1_h(kernel, s)) ** p
            gamma = kernel.d * (1.0 - kernel.alpha) * p
            return integrate_rd_tail(fn, kernel.d, 4.0, -gamma, tol=tol,
                                     breakpoints=[[-1.0, 0.0]] * kernel.d)
        alphas = (kernel.alpha,)
    else:
        axes = tuple(range(kernel.d)) if axes is None else tuple(axes)
        alphas = tuple(kernel.alphas[i] for i in axes)
    value, err_hi = 1.0, 1.0
    evals = 0
    for a in alphas:
        _check_jump_exponent(a, p)
        if route == "line":
            res = _line_integral_1d(a, p, tol / (2 * len(alphas)))
        elif route == "cell":
            def cell(x, a=a):
                return _lattice_sum_1d(a, x[:, 0], p, tol * 1e-2)[0]
            res = integrate_box(cell, [(0.0, 1.0)], tol=tol / (2 * len(alphas)))
        else:
            raise ParameterError("route must be 'line' or 'cell'")
        value *= res.value
        err_hi *= res.value + res.error_bound
        evals += res.evaluations
    return QuadResult(value, err_hi - value, evals, 0)


# --------------------------------------------------------------------------
# jump-regime limits
# --------------------------------------------------------------------------

def _band_jumps(spec, lo, hi, region, rng):
    """Poisson points with lo < |y| <= hi (hi = None means no upper limit)."""
    box = np.atleast_2d(np.asarray(region, dtype=float))
    vol = float(np.prod(box[:, 1] - box[:, 0]))
    mass = spec.jump_mass(lo) - (0.0 if hi is None else spec.jump_mass(hi))
    count = int(rng.poisson(max(mass, 0.0) * vol))
    d = box.shape[0]
    locs = box[:, 0] + rng.random((count, d)) * (box[:, 1] - box[:, 0])
    jumps = np.empty(0)
    while jumps.size < count:
        j = spec.sample_jumps(count, rng, floor=lo)
        if hi is not None:
            j = j[np.abs(j) <= hi]
        jumps = np.concatenate([jumps, j])
    return PointConfiguration(locs, jumps[:count], box)


def _default_floor(spec, p):
    if math.isfinite(spec.total_mass):
        return None
    if not hasattr(spec, "small_jump_moment"):
        raise UnsupportedRegimeError(f"{spec.kind} needs an explicit jump floor")
    # remainder E-bound int_{|y|<=eps}|y|^p nu(dy) below 1e-3 of the unit-jump scale
    eps = 1.0
    while spec.small_jump_moment(p, eps) > 1e-3 * min(1.0, spec.jump_mass(1.0) or 1.0):
        eps *= 0.5
    return eps


def _check_regime(kernel, spec, p, allowed):
    reg = classify(kernel, p, spec)
    if reg.theorem not in allowed:
        raise UnsupportedRegimeError(f"regime {reg.theorem} is not one of {allowed}: {reg.reason}")
    return reg


def _draw_configs(spec, region, size, rng, floor):
    configs = []
    for _ in range(size):
        if floor is None:
            configs.append(sample_jump_configuration(region, spec, rng))
        else:
            configs.append(_band_jumps(spec, floor, None, region, rng))
    return configs


def expected_Z_thm1i(kernel, spec, p, tol=1e-8):
    """E[Z] = int|y|^p nu(dy) int_(0,1)^d H(u) du for a finite-activity measure."""
    _check_regime(kernel, spec, p, ("T1i",))
    if not math.isfinite(spec.total_mass):
        raise UnsupportedRegimeError("Campbell mean needs a finite Levy measure")
    m = lattice_mean(kernel, p, tol)
    moment = spec.abs_jump_moment(p)
    return QuadResult(moment * m.value, moment * m.error_bound, m.evaluations, 0)


def draw_limit_Z_thm1i(kernel, spec, p, size, tol=1e-8, rng=None, jump_floor=None, configs=None):
    """Independent draws of Z = sum_k |J_k|^p H(U_k).

    Points are those of the jump measure on ``[0,1]^d``; for infinite-activity
    measures only jumps with ``|y| > jump_floor`` enter and the mean remainder
    ``int_{|y|<=eps}|y|^p nu(dy) int H`` is reported.
    """
    _check_regime(kernel, spec, p, ("T1i",))
    rng = np.random.default_rng(rng)
    d = kernel.d
    region = np.array([[0.0, 1.0]] * d)
    floor = jump_floor if jump_floor is not None else _default_floor(spec, p)
    if configs is None:
        configs = _draw_configs(spec, region, size, rng, floor)
    counts = np.array([c.count for c in configs], dtype=int)
    values = np.zeros(len(configs))
    remainder = 0.0
    if counts.sum():
        locs = np.concatenate([c.locations for c in configs])
        jumps = np.concatenate([c.jumps for c in configs])
        owner = np.repeat(np.arange(len(configs)), counts)
        u = locs[:, 0] if d == 1 else locs
        H = lattice_sum_H(kernel, u, p, tol)
        w = np.abs(jumps) ** p
        values = np.bincount(owner, weights=w * H.value, minlength=len(configs))
        lattice_err = float(np.max(np.bincount(owner, weights=w * H.tail_bound, minlength=len(configs))))
    else:
        lattice_err = 0.0
    if floor is not None:
        remainder = spec.small_jump_moment(p, floor) * lattice_mean(kernel, p, 1e-6).value
    trunc = {"jump_floor": floor, "lattice_tol": tol, "lattice_error": lattice_err}
    return LimitDraws(values, trunc, "T1i", remainder)


def sample_limit_Z_thm1i(kernel, spec, p, tol=1e-8, rng=None, jump_floor=None, config=None):
    """One draw of the Poisson-integral limit in the radial jump regime."""
    draws = draw_limit_Z_thm1i(kernel, spec, p, 1, tol, rng, jump_floor,
                               None if config is None else [config])
    return LimitSample(float(draws.values[0]), draws.truncation, draws.regime, draws.remainder)


def axis_line_integral(kernel, i, xs, p, tol=1e-9):
    """G_i(x) = int_0^1 |g_i'(t - x)|^p dt for every x in ``xs``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.empty(xs.size)
    for lo in range(0, xs.size, 512):
        out[lo:lo + 512], _ = line_abs_power(lambda y: kernel.axis_dg(i, y), xs[lo:lo + 512], p, tol=tol)
    return out


def _axis_line_total(kernel, i, p, lo, hi, tol):
    """int_lo^hi G_i(x) dx by quadrature over x."""
    def fn(x):
        return axis_line_integral(kernel, i, x[:, 0], p, tol * 1e-2)
    bp = [[b for b in (0.0, 1.0) if lo < b < hi]]
    return integrate_box(fn, [(lo, hi)], tol=tol, breakpoints=bp)


def _smooth_tail(kernel, i, p, radius, tol):
    """int_{|y| >= radius} |g_i'(y)|^p dy; with tempering the tail is exponential."""
    lam = kernel.lams[i]
    if not lam > 0:
        raise ParameterError("smooth axes need a decaying correction for the spatial box")
    # |g'(y)| <= e^{-lam y} y^{a-1}(a + lam y); integrate the exact function far out
    span = 80.0 / (lam * p)
    res = integrate_box(lambda y: np.abs(kernel.axis_dg(i, y[:, 0])) ** p,
                        [(radius, radius + span)], tol=tol)
    return 2.0 * (res.value + res.error_bound) + 1e-300


def _split_axes(kernel, spec, p, k=None):
    reg = _check_regime(kernel, spec, p, ("T2i",))
    k = reg.k if k is None else k
    frac = tuple(reg.perm[:k])
    smooth = tuple(reg.perm[k:])
    return reg, frac, smooth


def _thm2_region(kernel, frac, spatial_box):
    return np.array([[0.0, 1.0] if i in frac else [-spatial_box, 1.0 + spatial_box]
                     for i in range(kernel.d)])


def expected_Z_thm2i(kernel, spec, p, spatial_box, tol=1e-7, k=None):
    """Mean of the mixed limit restricted to ``[0,1]^k x [-R, 1+R]^(d-k)``.

    Returns ``(mean, remainder)``: the remainder bounds the mean contribution
    of points outside the spatial box.
    """
    _, frac, smooth = _split_axes(kernel, spec, p, k)
    if not math.isfinite(spec.total_mass):
        raise UnsupportedRegimeError("mean of the mixed limit needs a finite Levy measure")
    moment = spec.abs_jump_moment(p)
    H = lattice_mean(kernel, p, tol, axes=frac).value
    inside, total = 1.0, 1.0
    for i in smooth:
        inner = _axis_line_total(kernel, i, p, -spatial_box, 1.0 + spatial_box, tol).value
        inside *= inner
        total *= inner + _smooth_tail(kernel, i, p, spatial_box, tol)
    return moment * H * inside, moment * H * (total - inside)


def draw_limit_Z_thm2i(kernel, spec, p, size, spatial_box=8.0, tol=1e-8, rng=None, k=None,
                       jump_floor=None, configs=None):
    """Independent draws of the mixed limit for product kernels.

    The fractional axes (the ``k`` smallest alpha_i) carry lattice sums of the
    offset ``u_i``; the remaining axes carry ``int_0^1 |g_i'(t - x_i)|^p dt``
    and their coordinates are drawn from ``[-R, 1 + R]``.
    """
    if kernel.family != "H2":
        raise UnsupportedRegimeError("the mixed limit is defined for product kernels")
    reg, frac, smooth = _split_axes(kernel, spec, p, k)
    rng = np.random.default_rng(rng)
    region = _thm2_region(kernel, frac, spatial_box)
    floor = jump_floor if jump_floor is not None else _default_floor(spec, p)
    if configs is None:
        configs = _draw_configs(spec, region, size, rng, floor)
    counts = np.array([c.count for c in configs], dtype=int)
    values = np.zeros(len(configs))
    if counts.sum():
        locs = np.concatenate([c.locations for c in configs])
        jumps = np.concatenate([c.jumps for c in configs])
        owner = np.repeat(np.arange(len(configs)), counts)
        w = np.abs(jumps) ** p
        if frac:
            w = w * lattice_sum_H(kernel, locs[:, list(frac)], p, tol, axes=frac).value
        for i in smooth:
            w = w * axis_line_integral(kernel, i, locs[:, i], p, tol)
        values = np.bincount(owner, weights=w, minlength=len(configs))
    remainder = 0.0
    if math.isfinite(spec.total_mass) and smooth:
        remainder = expected_Z_thm2i(kernel, spec, p, spatial_box, 1e-6, k)[1]
    trunc = {"spatial_box": spatial_box, "k": len(frac), "jump_floor": floor, "lattice_tol": tol}
    return LimitDraws(values, trunc, "T2i", remainder)


def sample_limit_Z_thm2i(kernel, spec, p, k=None, spatial_box=8.0, tol=1e-8, rng=None, config=None):
    """One draw of the mixed limit for product kernels."""
    draws = draw_limit_Z_thm2i(kernel, spec, p, 1, spatial_box, tol, rng, k,
                               configs=None if config is None else [config])
    return LimitSample(float(draws.values[0]), draws.truncation, draws.regime, draws.remainder)


# --------------------------------------------------------------------------
# ergodic constants
# --------------------------------------------------------------------------

def _cms_amplitude(beta, w):
    """A(V) of the Chambers-Mallows-Stuck representation at V = pi/2 - w.

    ``|S| = |A(V)| W^(-(1-beta)/beta)``; passing the complement ``w`` keeps
    ``cos V = sin w`` accurate near the singular endpoint.
    """
    v = 0.5 * math.pi - w
    if beta == 1.0:
        return np.cos(w) / np.sin(w)
    return (np.sin(beta * v) / np.sin(w) ** (1.0 / beta)
            * np.cos((1.0 - beta) * v) ** ((1.0 - beta) / beta))


def stable_abs_moment(beta, p, N=10 ** 6, rng=None):
    """E|L([0,1]^d)|^p for the unit symmetric stable measure, with standard error.

    The CMS representation factors ``|S|^p = |A(V)|^p W^(-p(1-beta)/beta)``;
    the W factor integrates exactly to ``Gamma(1 - p(1-beta)/beta)`` and the
    angular factor is estimated by Monte Carlo with the substitution
    ``V = pi/2 (1 - y^k)``, ``k = 1/(1 - p/beta)``, which makes the integrand
    bounded.  ``beta = 2`` is read as the unit Gaussian measure and uses the
    closed form ``E|N(0,1)|^p``.
    """
    if not p > 0:
        raise ParameterError("p must be positive")
    if beta == 2.0:
        return StableMoment(2.0 ** (p / 2.0) * math.gamma((p + 1.0) / 2.0) / math.sqrt(math.pi), 0.0, 0)
    if not 0.0 < beta < 2.0:
        raise ParameterError("stable index must lie in (0, 2]")
    if p >= beta:
        raise DivergenceError(f"E|S|^p is infinite for p = {p} >= beta = {beta}")
    rng = np.random.default_rng(rng)
    k = 1.0 / (1.0 - p / beta)
    y = rng.random(N)
    y = np.where(y == 0.0, 0.5, y)
    w = 0.5 * math.pi * y ** k
    # density of V on (0, pi/2) is 2/pi; the map has dv/dy = (pi/2) k y^(k-1)
    vals = np.abs(_cms_amplitude(beta, w)) ** p * k * y ** (k - 1.0)
    w_factor = math.gamma(1.0 - p * (1.0 - beta) / beta)
    mean = float(np.mean(vals)) * w_factor
    err = float(np.std(vals, ddof=1) / math.sqrt(N)) * w_factor
    return StableMoment(mean, err, N)


def increment_integral(kernel, power, tol=1e-8, axis=None):
    """int |Delta_1 h|^power over R^d (or over R for one axis of a product kernel)."""
    if axis is not None or kernel.family == "H2":
        a = kernel.alphas[axis if axis is not None else 0]
        if kernel.family == "H2" and axis is None and kernel.d > 1:
            raise ParameterError("give an axis for product kernels")
        if not 0.0 < a + 1.0 / power < 1.0:
            raise DivergenceError(f"alpha + 1/power = {a + 1.0 / power:.6g} outside (0, 1)")
        return _line_integral_1d(a, power, tol)
    a = kernel.alpha
    if not 0.0 < a + 1.0 / power < 1.0:
        raise DivergenceError(f"alpha + 1/power = {a + 1.0 / power:.6g} outside (0, 1)")
    if kernel.d == 1:
        return _line_integral_1d(a, power, tol)
    gamma = kernel.d * (1.0 - a) * power

    def fn(s):
        return np.abs(delta1_h(kernel, s)) ** power

    # |Delta_1 h(s)| ~ |partial^d h(s)|, homogeneous of degree d(alpha - 1)
    def model(s):
        return np.abs(kernel.h_partial_d(s)) ** power

    return integrate_rd_tail(fn, kernel.d, 4.0, -gamma, tol=tol,
                             breakpoints=[[-1.0, 0.0]] * kernel.d, tail_model=model)


def derivative_integral(kernel, axis, power, tol=1e-8):
    """int_R |g_i'(x)|^power dx for one axis of a product kernel."""
    lam = kernel.lams[axis]
    if not lam > 0:
        raise DivergenceError("int |g_i'|^power needs a decaying correction")
    span = 80.0 / (lam * power)

    def fn(x):
        return np.abs(kernel.axis_dg(axis, x[:, 0])) ** power

    res = integrate_box(fn, [(0.0, span)], tol=tol / 2)
    return QuadResult(2.0 * res.value, 2.0 * res.error_bound, res.evaluations, res.cells)


def ergodic_limit(kernel, spec, p, k=None, tol=1e-7, N=10 ** 6, rng=None):
    """Limit constant of ``n^rate V_n(p)`` in the ergodic regimes.

    Stable ``L``: ``E|S_beta|^p`` times ``(int |Delta_1 h|^beta)^(p/beta)``;
    product kernels add ``(int |g_i'|^beta)^(p/beta)`` for the smooth axes.
    Gaussian ``L`` uses ``beta = 2`` and the moment of ``N(0, variance_rate)``.
    """
    reg = classify(kernel, p, spec)
    if reg.theorem not in ("T1ii", "T2ii"):
        raise UnsupportedRegimeError(f"ergodic constant undefined in regime {reg.theorem}: {reg.reason}")
    if isinstance(spec, Gaussian):
        beta = 2.0
        sm = stable_abs_moment(2.0, p)
        moment, stderr = sm.value * spec.variance_rate ** (p / 2.0), 0.0
    else:
        beta = spec.beta
        sm = stable_abs_moment(beta, p, N, rng)
        moment, stderr = sm.value, sm.stderr
    certs = {"regime": reg.theorem, "rate_exponent": reg.rate_exponent}
    if reg.theorem == "T1ii":
        I = increment_integral(kernel, beta, tol)
        m_p = moment * I.value ** (p / beta)
        certs["increment_error"] = (I.error_bound,)
        return LimitConstant(m_p, moment, stderr, (I.value,), (), certs)
    k = reg.k if k is None else k
    frac, smooth = reg.perm[:k], reg.perm[k:]
    incs, ders, ierr, derr = [], [], [], []
    m_p = moment
    for i in frac:
        I = increment_integral(kernel, beta, tol, axis=i)
        incs.append(I.value)
        ierr.append(I.error_bound)
        m_p *= I.value ** (p / beta)
    for i in smooth:
        D = derivative_integral(kernel, i, beta, tol)
        ders.append(D.value)
        derr.append(D.error_bound)
        m_p *= D.value ** (p / beta)
    certs["increment_error"] = tuple(ierr)
    certs["derivative_error"] = tuple(derr)
    certs["k"] = k
    return LimitConstant(m_p, moment, stderr, tuple(incs), tuple(ders), certs)


# --------------------------------------------------------------------------
# derivative-regime limit
# --------------------------------------------------------------------------

def derivative_field(kernel, config):
    """Vectorised ``Y(t) = sum_k J_k partial^d g(t - V_k)`` for points of shape (m, d)."""
    locs = np.asarray(config.locations, dtype=float)
    jumps = np.asarray(config.jumps, dtype=float)
    d = kernel.d

    def Y(t):
        t = np.asarray(t, dtype=float).reshape(-1, d)
        out = np.zeros(t.shape[0])
        if jumps.size == 0:
            return out
        step = max(1, _CHUNK // max(jumps.size, 1))
        for lo in range(0, t.shape[0], step):
            tt = t[lo:lo + step]
            if kernel.family == "H2":
                acc = np.broadcast_to(jumps, (tt.shape[0], jumps.size)).copy()
                for i in range(d):
                    acc *= kernel.axis_dg(i, tt[:, i, None] - locs[None, :, i])
                out[lo:lo + step] = acc.sum(axis=1)
            else:
                diff = tt[:, None, :] - locs[None, :, :]
                out[lo:lo + step] = kernel.partial_d(diff) @ jumps
        return out

    return Y


def sample_derivative_pv_limit(kernel, spec, p, quad_tol=1e-8, rng=None, config=None,
                               support_radius=None, rtol=0.0):
    """int_{[0,1]^d} |Y(t)|^p dt for a finite jump configuration.

    Parameters
    ----------
    config : PointConfiguration, optional
        Jumps defining ``Y``; by default one is drawn on ``[-R, 1 + R]^d``
        with ``R = support_radius`` (default 8).
    quad_tol, rtol : float
        Absolute and relative targets of the adaptive quadrature.  Cell faces
        are placed on the jump coordinates inside the unit cube, where
        ``partial^d g`` is singular or kinked.
    """
    reg = classify(kernel, p, spec)
    if reg.theorem not in ("T1iii", "T2iii"):
        raise UnsupportedRegimeError(f"derivative limit undefined in regime {reg.theorem}: {reg.reason}")
    if config is None:
        if not math.isfinite(spec.total_mass):
            raise UnsupportedRegimeError("derivative limit sampling needs a finite Levy measure")
        R = 8.0 if support_radius is None else float(support_radius)
        rng = np.random.default_rng(rng)
        config = sample_jump_configuration(np.array([[-R, 1.0 + R]] * kernel.d), spec, rng)
    d = kernel.d
    if config.count == 0:
        return LimitSample(0.0, {"jumps": 0, "quad_error": 0.0}, reg.theorem)
    bps = []
    for i in range(d):
        c = config.locations[:, i]
        bps.append(np.unique(c[(c > 0.0) & (c < 1.0)]))
    if kernel.family == "H2":
        value, err, evals = _tensor_abs_integral(kernel, config, p, bps, quad_tol, rtol)
    else:
        Y = derivative_field(kernel, config)
        res = integrate_box(lambda t: np.abs(Y(t)) ** p, [(0.0, 1.0)] * d, tol=quad_tol,
                            breakpoints=[b.tolist() for b in bps], rtol=rtol)
        value, err, evals = res.value, res.error_bound, res.evaluations
    return LimitSample(value, {"jumps": config.count, "quad_error": err, "evaluations": evals},
                       reg.theorem)


def _axis_mesh(bps, m):
    edges = np.concatenate([[0.0], bps, [1.0]])
    a, b = edges[:-1], edges[1:]
    frac = np.arange(m + 1) / m
    cuts = a[:, None] + (b - a)[:, None] * frac[None, :]
    lo, hi = cuts[:, :-1].ravel(), cuts[:, 1:].ravel()
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * NODES
    return nodes.ravel(), half


def _tensor_abs_integral(kernel, config, p, bps, tol, rtol, max_nodes=24000):
    """int_[0,1]^d |Y|^p for product kernels on tensor Gauss-Kronrod meshes.

    Y factors over axes jump by jump, so on a tensor grid it is a product of
    per-axis matrices.  Every axis is cut at the jump coordinates and each
    piece is split uniformly into ``m`` cells; ``m`` doubles until the
    Kronrod and embedded Gauss tensor rules agree within the target.
    """
    d = kernel.d
    J = np.asarray(config.jumps, dtype=float)
    V = np.asarray(config.locations, dtype=float)
    m = 2
    evals = 0
    while True:
        mats, halves = [], []
        for i in range(d):
            nodes, half = _axis_mesh(bps[i], m)
            mats.append(kernel.axis_dg(i, nodes[:, None] - V[None, :, i]))
            halves.append(half)
        wk = [(h[:, None] * W_KRONROD).ravel() for h in halves]
        wg = [(h[:, None] * W_GAUSS).ravel() for h in halves]
        if d == 1:
            F = np.abs(mats[0] @ J) ** p
            FK, FG = wk[0] @ F, wg[0] @ F
        elif d == 2:
            # row blocks keep the tensor grid out of memory
            FK = FG = 0.0
            right = (mats[1] * J).T
            for lo in range(0, mats[0].shape[0], 1024):
                F = np.abs(mats[0][lo:lo + 1024] @ right) ** p
                FK += wk[0][lo:lo + 1024] @ F @ wk[1]
                FG += wg[0][lo:lo + 1024] @ F @ wg[1]
        else:
            F = np.abs(np.einsum("ak,bk,ck,k->abc", mats[0], mats[1], mats[2], J)) ** p
            FK = np.einsum("abc,a,b,c->", F, *wk)
            FG = np.einsum("abc,a,b,c->", F, *wg)
        evals += int(np.prod([m_.shape[0] for m_ in mats]))
        value, err = float(FK), abs(float(FK) - float(FG))
        if err <= max(tol, rtol * abs(value)):
            return value, err, evals
        m *= 2
        if any((b.size + 1) * m * 15 > max_nodes for b in bps):
            raise NonConvergenceError("tensor quadrature budget exhausted",
                                      {"value": value, "error_estimate": err, "cells_per_piece": m // 2})
