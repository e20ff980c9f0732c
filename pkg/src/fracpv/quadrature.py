"""Adaptive Gauss-Kronrod quadrature on boxes in dimension 1 to 3.

Each cell carries the tensor 15-point Kronrod rule and its embedded 7-point
Gauss rule; the error estimate of a cell is ``|K - G|``.  Refinement bisects
every axis of the cells that carry the largest share of the error.  Since the
refinement path does not depend on the tolerance, the best state seen so far
is returned, which makes the reported bound monotone in ``tol``.

Integrable singularities are expected on cell faces (the caller passes
``breakpoints`` so that singular hyperplanes are faces of the initial grid).
Nodes are interior, so a singular face is never evaluated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, NonConvergenceError, ParameterError

__all__ = [
    "QuadResult",
    "integrate_box",
    "integrate_rd_tail",
    "integrate_power_tail",
    "cube_exterior_power_integral",
    "cube_exterior_integral",
    "line_abs_power",
]

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes on [-1, 1] in increasing order
NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
W_KRONROD = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
W_GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (x1, x3, x5, x7=0)
for j, w in zip((1, 3, 5), _WG[:3]):
    W_GAUSS[j] = w
    W_GAUSS[14 - j] = w
W_GAUSS[7] = _WG[3]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_bound: float
    evaluations: int
    cells: int = 0

    def __iter__(self):
        return iter((self.value, self.error_bound))


class _TensorRule:
    def __init__(self, d):
        self.d = d
        grids = np.meshgrid(*([NODES] * d), indexing="ij")
        self.nodes = np.stack([g.ravel() for g in grids], axis=-1)  # (15^d, d) on [-1,1]^d
        idx = [np.indices((15,) * d)[axis].ravel() for axis in range(d)]
        self.wk = np.ones(15 ** d)
        self.wg = np.ones(15 ** d)
        for axis in range(d):
            self.wk *= W_KRONROD[idx[axis]]
            self.wg *= W_GAUSS[idx[axis]]
        # Gauss along one axis, Kronrod along the others: per-axis error indicators
        self.w_axis = np.ones((15 ** d, d))
        for a in range(d):
            for axis in range(d):
                self.w_axis[:, a] *= (W_GAUSS if axis == a else W_KRONROD)[idx[axis]]

    def apply(self, fn, lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = mid[:, None, :] + half[:, None, :] * self.nodes[None, :, :]
        vals = np.asarray(fn(pts.reshape(-1, self.d)), dtype=float).reshape(lo.shape[0], -1)
        vol = np.prod(half, axis=1)
        k = vol * (vals @ self.wk)
        g = vol * (vals @ self.wg)
        ax = np.abs(k[:, None] - vol[:, None] * (vals @ self.w_axis))
        return k, np.abs(k - g), ax


_RULES = {}


def _rule(d):
    if d not in _RULES:
        _RULES[d] = _TensorRule(d)
    return _RULES[d]


def _initial_cells(box, breakpoints):
    d = box.shape[0]
    edges = []
    for axis in range(d):
        lo, hi = box[axis]
        pts = [lo, hi]
        if breakpoints is not None and breakpoints[axis] is not None:
            pts += [float(b) for b in np.atleast_1d(breakpoints[axis]) if lo < b < hi]
        edges.append(np.unique(np.asarray(pts, dtype=float)))
    los, his = [], []
    for idx in itertools.product(*[range(len(e) - 1) for e in edges]):
        los.append([edges[a][i] for a, i in enumerate(idx)])
        his.append([edges[a][i + 1] for a, i in enumerate(idx)])
    return np.array(los, dtype=float), np.array(his, dtype=float)


def integrate_box(fn, box, tol=1e-8, breakpoints=None, rtol=0.0, max_evals=20_000_000):
    """Integrate a vectorised ``fn`` over a box.

    Parameters
    ----------
    fn : callable
        Maps an ``(m, d)`` array of points to ``m`` values.
    box : array_like
        ``(d, 2)`` array of ``[lo, hi]`` rows; a pair ``(a, b)`` is accepted for d = 1.
    tol : float
        Absolute target for the error bound.
    breakpoints : sequence, optional
        Per-axis coordinates of hyperplanes where ``fn`` is singular or kinked.
    rtol : float
        Relative target; the run stops when the bound is below ``max(tol, rtol*|value|)``.
    max_evals : int
        Budget of function evaluations.

    Returns
    -------
    QuadResult
    """
    box = np.atleast_2d(np.asarray(box, dtype=float))
    d = box.shape[0]
    if d > 3:
        raise ParameterError("quadrature supports d <= 3")
    if np.any(box[:, 1] < box[:, 0]):
        raise ParameterError("box must have lo <= hi")
    if np.any(box[:, 1] == box[:, 0]):
        return QuadResult(0.0, 0.0, 0, 0)
    rule = _rule(d)
    npts = 15 ** d
    lo, hi = _initial_cells(box, breakpoints)
    k, err, ax = rule.apply(fn, lo, hi)
    evals = npts * lo.shape[0]
    best = None
    while True:
        total = float(math.fsum(k))
        # K - G plus a floor for the rounding of the summation itself
        bound = float(math.fsum(err)) + 64 * np.finfo(float).eps * float(np.sum(np.abs(k)))
        if not np.isfinite(total) or not np.isfinite(bound):
            raise NonConvergenceError("integrand produced non-finite values",
                                      {"worst_cell": _worst(lo, hi, err)})
        if best is None or bound <= best.error_bound:
            best = QuadResult(total, bound, evals, lo.shape[0])
        if best.error_bound <= max(tol, rtol * abs(best.value)):
            return QuadResult(best.value, best.error_bound, evals, best.cells)
        order = np.argsort(err)[::-1]
        cum = np.cumsum(err[order])
        n_split = int(np.searchsorted(cum, 0.5 * cum[-1]) + 1)
        if evals + n_split * (2 ** d) * npts > max_evals:
            raise NonConvergenceError(
                f"quadrature budget exhausted: bound {best.error_bound:.3g} > tol {tol:.3g}",
                {"value": best.value, "error_bound": best.error_bound, "evaluations": evals,
                 "worst_cell": _worst(lo, hi, err)})
        split = order[:n_split]
        keep = order[n_split:]
        slo, shi, sax = lo[split], hi[split], ax[split]
        # bisect the axes carrying most of the error; a line singularity is
        # then refined across the line only
        cut = sax >= 0.25 * np.max(sax, axis=1, keepdims=True)
        mid = 0.5 * (slo + shi)
        new_lo, new_hi = [], []
        for eps in itertools.product((0, 1), repeat=d):
            e = np.asarray(eps, dtype=bool)
            # children that would split an uncut axis duplicate a sibling; drop them
            valid = ~np.any(e[None, :] & ~cut, axis=1)
            new_lo.append(np.where(e & cut, mid, slo)[valid])
            new_hi.append(np.where(e | ~cut, shi, mid)[valid])
        new_lo = np.concatenate(new_lo)
        new_hi = np.concatenate(new_hi)
        nk, nerr, nax = rule.apply(fn, new_lo, new_hi)
        evals += npts * new_lo.shape[0]
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        k = np.concatenate([k[keep], nk])
        err = np.concatenate([err[keep], nerr])
        ax = np.concatenate([ax[keep], nax])


def _worst(lo, hi, err):
    i = int(np.argmax(err))
    return {"lo": lo[i].tolist(), "hi": hi[i].tolist(), "error": float(err[i])}


def integrate_power_tail(fn, a, gamma, tol=1e-10, max_evals=2_000_000):
    """int_a^inf fn(y) dy for fn(y) ~ C y^(-gamma), gamma > 1.

    Uses y = a w^(-k), k = 1/(gamma - 1), which maps the tail to a bounded,
    non-singular integrand on (0, 1].
    """
    if not gamma > 1:
        raise DivergenceError("tail exponent must exceed 1")
    if not a > 0:
        raise ParameterError("lower limit must be positive")
    k = 1.0 / (gamma - 1.0)

    def integrand(w):
        w = w[:, 0]
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            y = a * w ** (-k)
            out = np.asarray(fn(y), dtype=float) * a * k * w ** (-k - 1.0)
        return np.where(np.isfinite(out), out, 0.0)

    return integrate_box(integrand, [(0.0, 1.0)], tol=tol, max_evals=max_evals)


def cube_exterior_integral(d, tau, fn=None, tol=1e-12):
    """int over ||s||_inf >= 1 of F(s) ds for F homogeneous of degree tau < -d.

    ``F`` defaults to ``||s||^tau``.  Each of the 2d pyramids beyond a face
    contributes ``int_{[-1,1]^(d-1)} F(y, +-1) dy / (-tau - d)``.
    """
    if not tau < -d:
        raise DivergenceError(f"exterior integral of a degree {tau} function diverges in dimension {d}")
    if fn is None:
        def fn(s):
            return np.sum(s * s, axis=-1) ** (tau / 2.0)
    total = 0.0
    for axis in range(d):
        for sign in (-1.0, 1.0):
            if d == 1:
                total += float(np.asarray(fn(np.array([[sign]])))[0])
                continue

            def face(y, axis=axis, sign=sign):
                pts = np.insert(y, axis, sign, axis=1)
                return fn(pts)
            total += integrate_box(face, [(-1.0, 1.0)] * (d - 1), tol=tol,
                                   breakpoints=[[0.0]] * (d - 1)).value
    return total / (-tau - d)


def cube_exterior_power_integral(d, tau, tol=1e-12):
    """int over ||s||_inf >= 1 of ||s||^tau ds."""
    return cube_exterior_integral(d, tau, None, tol)


def integrate_rd_tail(fn, d, bulk_radius, tail_exponent, tol=1e-7, breakpoints=None,
                      tail_model=None, max_radius=1e6, n_shell=4000, seed=12345):
    """Integrate ``fn`` over R^d: adaptive bulk on a cube plus a certified tail.

    Beyond the cube ``[-R, R]^d`` the integrand is compared with a model
    ``F`` homogeneous of degree ``tail_exponent`` (default ``||s||^tau``).
    The ratio ``fn/F`` is sampled on the shell ``R <= ||s||_inf <= 8R`` to get
    constants ``c <= C``.  The tail is the midpoint ``(c + C)/2 * I`` with
    ``I`` the exterior integral of ``F``, and ``(C - c)/2 * I`` enters the
    certificate.  The radius doubles until the certificate meets ``tol``.
    """
    if not tail_exponent < -d:
        raise DivergenceError(f"tail exponent {tail_exponent} >= -d = {-d}: integral diverges")
    R = float(bulk_radius)
    rng = np.random.default_rng(seed)
    if tail_model is None:
        def tail_model(s):
            return np.sum(s * s, axis=-1) ** (tail_exponent / 2.0)
    base = cube_exterior_integral(d, tail_exponent, tail_model)
    evals = 0
    while True:
        bp = None
        if breakpoints is not None:
            bp = [[b for b in np.atleast_1d(axis_bp) if -R < b < R] for axis_bp in breakpoints]
        bulk = integrate_box(fn, [(-R, R)] * d, tol=tol / 4, breakpoints=bp)
        evals += bulk.evaluations
        dirs = rng.uniform(-1.0, 1.0, size=(n_shell, d))
        face = rng.integers(0, d, size=n_shell)
        dirs[np.arange(n_shell), face] = rng.choice([-1.0, 1.0], size=n_shell)
        rad = R * 8.0 ** rng.random(n_shell)
        pts = dirs * rad[:, None]
        model = np.asarray(tail_model(pts), dtype=float)
        ok = model > 0
        ratio = np.asarray(fn(pts[ok]), dtype=float) / model[ok]
        evals += n_shell
        c, C = float(np.min(ratio)), float(np.max(ratio))
        I = R ** (tail_exponent + d) * base
        value = bulk.value + 0.5 * (c + C) * I
        bound = bulk.error_bound + 0.5 * (C - c) * I
        if bound <= tol or 2 * R > max_radius:
            if bound > tol:
                raise NonConvergenceError(
                    f"tail certificate {bound:.3g} above tol {tol:.3g} at radius {R}",
                    {"value": value, "error_bound": bound, "radius": R})
            return QuadResult(value, bound, evals, bulk.cells)
        R *= 2.0


def line_abs_power(dfn, xs, p, tol=1e-9, grade_levels=40, max_rounds=6):
    """int_0^1 |dfn(t - x)|^p dt for every x in ``xs``.

    The interval is split at the projection of ``x`` onto [0, 1] and each
    piece is meshed geometrically towards that point, where ``dfn`` may be
    singular or kinked.  Each sub-interval carries a 15/7 Gauss-Kronrod pair;
    sub-intervals are halved until the summed estimate meets ``tol`` for
    every ``x``.

    Returns
    -------
    values, bounds : ndarray
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    c = np.clip(xs, 0.0, 1.0)
    # geometric breakpoints measured from the singular point: 0, 2^-L, ..., 1/2, 1
    frac = np.concatenate([[0.0], 2.0 ** -np.arange(grade_levels, -1, -1)])
    subdiv = 1
    for _ in range(max_rounds):
        steps = np.diff(frac)[:, None] * np.arange(subdiv)[None, :] / subdiv
        f = np.unique(np.append((frac[:-1, None] + steps).ravel(), 1.0))
        a_rel, b_rel = f[:-1], f[1:]
        vals = np.zeros(xs.size)
        errs = np.zeros(xs.size)
        for side in (-1.0, 1.0):
            length = c if side < 0 else 1.0 - c
            lo = c[:, None] + side * length[:, None] * a_rel[None, :]
            hi = c[:, None] + side * length[:, None] * b_rel[None, :]
            half = 0.5 * (hi - lo)
            mid = 0.5 * (hi + lo)
            t = mid[..., None] + half[..., None] * NODES
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                y = np.abs(dfn(t - xs[:, None, None])) ** p
            y = np.where(np.isfinite(y), y, 0.0)
            k = np.abs(half) * (y @ W_KRONROD)
            g = np.abs(half) * (y @ W_GAUSS)
            vals += k.sum(axis=1)
            errs += np.abs(k - g).sum(axis=1)
        # the innermost cell [0, 2^-L] is included in the rule; near-singular
        # remainders show up in the K-G difference
        if np.all(errs <= tol):
            return vals, errs
        subdiv *= 2
    raise NonConvergenceError("line integral did not reach tolerance",
                              {"max_error": float(errs.max()), "x_worst": float(xs[np.argmax(errs)])})
