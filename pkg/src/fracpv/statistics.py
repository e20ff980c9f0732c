"""Power variations of rectangular increments and the statistics built on them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateSampleError, ParameterError
from .grids import FieldGrid, IncrementGrid

__all__ = [
    "PVResult",
    "EstimateResult",
    "ScalingResult",
    "rect_increments",
    "rect_increments_step",
    "power_variation",
    "ratio_statistic",
    "estimate_H",
    "scaling_exponent",
    "csv_rows",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("kernel", "levy", "d", "n", "p", "V", "S_n", "R_n", "H_hat", "seed")


@dataclass(frozen=True)
class PVResult:
    p: float
    V: float
    n: int
    rate_applied: float | None = None

    @property
    def normalized(self):
        if self.rate_applied is None:
            return self.V
        return self.n ** self.rate_applied * self.V


@dataclass(frozen=True)
class EstimateResult:
    R_n: float
    H_hat: float
    p: float
    d: int


@dataclass(frozen=True)
class ScalingResult:
    slope: float
    intercept: float
    ns: tuple
    V: tuple
    S_n: tuple


def _values(x):
    if isinstance(x, (FieldGrid, IncrementGrid)):
        return x.values
    return np.asarray(x, dtype=float)


def rect_increments_step(values, step):
    """Rectangular increments with corner span ``step`` lattice units, by axis differencing."""
    out = np.asarray(values, dtype=float)
    for axis in range(out.ndim):
        n_ax = out.shape[axis]
        out = np.take(out, np.arange(step, n_ax), axis=axis) - np.take(out, np.arange(n_ax - step), axis=axis)
    return out


def rect_increments(field):
    """Delta_{1/n} X(i/n) for i in {0..n-1}^d from field values on {0..n}^d."""
    if isinstance(field, FieldGrid):
        vals = rect_increments_step(field.values, 1)
        return IncrementGrid(field.d, field.n, vals, dict(field.meta))
    arr = np.asarray(field, dtype=float)
    return rect_increments_step(arr, 1)


def _abs_power_sum(x, p):
    a = np.abs(np.ravel(x))
    if p == 2.0:
        terms = a * a
    elif p == 1.0:
        terms = a
    else:
        terms = a ** p
    # exact-rounded sum: independent of ordering and robust to huge dynamic range
    return math.fsum(terms.tolist()) if terms.size <= 4_000_000 else _fsum_blocks(terms)


def _fsum_blocks(terms):
    # sort-free compensated blocks; the final combination is exact-rounded
    parts = [math.fsum(terms[i:i + 1_000_000].tolist()) for i in range(0, terms.size, 1_000_000)]
    return math.fsum(parts)


def power_variation(inc, p, rate=None):
    """V_n(p) = sum |Delta_{1/n} X(i/n)|^p."""
    if not p > 0:
        raise ParameterError("power must be positive")
    vals = _values(inc)
    n = inc.n if isinstance(inc, IncrementGrid) else vals.shape[0]
    return PVResult(float(p), _abs_power_sum(vals, p), int(n), rate)


def _coarse_from_fine(fine):
    """Step-2 increments over i in {0..n-2}^d as sums of 2^d adjacent fine ones."""
    out = fine
    for axis in range(fine.ndim):
        n_ax = out.shape[axis]
        out = np.take(out, np.arange(n_ax - 1), axis=axis) + np.take(out, np.arange(1, n_ax), axis=axis)
    return out


def _fine_and_coarse(x):
    if isinstance(x, IncrementGrid):
        fine = x.values
        return fine, _coarse_from_fine(fine)
    vals = x.values if isinstance(x, FieldGrid) else np.asarray(x, dtype=float)
    if vals.shape[0] < 3:
        raise ParameterError("ratio statistic needs n >= 2")
    return rect_increments_step(vals, 1), rect_increments_step(vals, 2)


def ratio_statistic(field, p, convention="sum"):
    """Change-of-frequency ratio R_n.

    Numerator: coarse increments with corner span 2/n over i in {0..n-2}^d;
    denominator: V_n(p).  ``field`` is a FieldGrid (or raw field values) or an
    IncrementGrid; rectangular increments are additive, so the coarse
    increments are sums of adjacent fine ones.  ``convention="mean"`` divides
    each sum by its number of terms instead.
    """
    if not p > 0:
        raise ParameterError("power must be positive")
    fine, coarse = _fine_and_coarse(field)
    if fine.shape[0] < 2:
        raise ParameterError("ratio statistic needs n >= 2")
    d = fine.ndim
    n = fine.shape[0]
    den = _abs_power_sum(fine, p)
    if den == 0:
        raise DegenerateSampleError("all increments vanish")
    num = _abs_power_sum(coarse, p)
    if convention == "mean":
        num /= (n - 1) ** d
        den /= n ** d
    elif convention != "sum":
        raise ParameterError("convention must be 'sum' or 'mean'")
    return num / den


def estimate_H(field, p, convention="sum"):
    """H_n = log R_n / (d p log 2), not clamped to (0, 1)."""
    if isinstance(field, (FieldGrid, IncrementGrid)):
        d = field.d
    else:
        d = np.ndim(field)
    R = ratio_statistic(field, p, convention)
    return EstimateResult(R, math.log(R) / (d * p * math.log(2.0)), float(p), d)


def _as_increments(x):
    if isinstance(x, IncrementGrid):
        return x
    if isinstance(x, FieldGrid):
        return rect_increments(x)
    raise ParameterError("expected FieldGrid or IncrementGrid")


def scaling_exponent(grids, p):
    """Least-squares slope of log V_n(p) against log n over a ladder.

    ``grids`` holds FieldGrid or IncrementGrid objects of increasing n.  The
    per-n values ``S_n(p) = log V_n(p) / log n`` are returned alongside.
    """
    incs = [_as_increments(g) for g in grids]
    if len(incs) < 3:
        raise ParameterError("a ladder needs at least three levels")
    ns = np.array([g.n for g in incs], dtype=float)
    if np.any(np.diff(ns) <= 0):
        raise ParameterError("ladder must be strictly increasing in n")
    V = np.array([power_variation(g, p).V for g in incs])
    if np.any(V <= 0):
        raise DegenerateSampleError("V_n(p) vanishes on the ladder")
    x, y = np.log(ns), np.log(V)
    slope, intercept = np.polyfit(x, y, 1)
    with np.errstate(divide="ignore"):
        S = tuple(float(v) for v in y / x)
    return ScalingResult(float(slope), float(intercept), tuple(int(n) for n in ns), tuple(V.tolist()), S)


def csv_rows(rows, path=None):
    """Write rows (dicts keyed by CSV_COLUMNS) with a schema comment line."""
    buf = io.StringIO()
    buf.write("# fracpv statistics schema v1\n")
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r) if hasattr(r, "__dataclass_fields__") else r)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
