"""Synthesis of X(t) = int g(t, s) L(ds) on the lattice {i/n}.

Three methods are available:

``Discretized``
    The window ``[-R, 1 + R]^d`` is cut into cells of side ``1/(n m)``; each
    cell contributes ``g(t, s_c) L(cell)`` where ``s_c`` sits at a common
    random offset inside every cell.  Because the offset is shared, the
    increment field is a discrete convolution of the table
    ``K[q] = Delta_{1/n} g((q - u) / (n m))`` with the noise lattice and is
    computed by FFT.
``ShotNoise``
    Exact superposition ``sum_k J_k g(t, V_k)`` over a finite jump
    configuration.
``GaussianReference``
    Circulant-embedding sampler of the d = 1 Gaussian fractional field,
    used as an independent cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy import special

from . import kernels as K
from .errors import (ParameterError, SizeError, TruncationError,
                     UnsupportedRegimeError)
from .grids import FieldGrid, IncrementGrid
from .levy import PointConfiguration, sample_jump_configuration, series_thinning_stream

__all__ = [
    "Discretized",
    "ShotNoise",
    "GaussianReference",
    "LatticeNoise",
    "simulate_grid",
    "simulate_increments",
    "fft_increment_field",
    "direct_increment_field",
    "draw_lattice",
    "shot_noise_increments",
    "shot_noise_field",
    "default_support_radius",
    "gaussian_increment_variance",
    "method_from_record",
]

DEFAULT_MEMORY_BUDGET = 3 * 2 ** 30


@dataclass(frozen=True)
class Discretized:
    oversample: int = 4
    support_radius: float | None = None
    max_radius: float = 8.0
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    kind = "discretized"

    def to_record(self):
        return {"type": self.kind, "oversample": self.oversample,
                "support_radius": self.support_radius, "max_radius": self.max_radius}


@dataclass(frozen=True)
class ShotNoise:
    """Exact superposition over jumps in ``[-R, 1 + R]^d``.

    ``series_len`` switches from direct Poisson sampling to the thinned
    series with that many terms; ``jump_floor`` keeps only jumps above it
    for infinite-activity measures; ``configuration`` fixes the jumps.
    """

    support_radius: float | None = None
    series_len: int | None = None
    jump_floor: float | None = None
    configuration: PointConfiguration | None = None
    max_radius: float = 32.0
    kind = "shot_noise"

    def to_record(self):
        return {"type": self.kind, "support_radius": self.support_radius,
                "series_len": self.series_len, "jump_floor": self.jump_floor}


@dataclass(frozen=True)
class GaussianReference:
    kind = "gaussian_reference"

    def to_record(self):
        return {"type": self.kind}


def method_from_record(rec):
    rec = dict(rec or {"type": "discretized"})
    kind = rec.pop("type")
    if kind == "discretized":
        return Discretized(**rec)
    if kind == "shot_noise":
        return ShotNoise(**rec)
    if kind == "gaussian_reference":
        return GaussianReference()
    raise ParameterError(f"unknown simulation method {kind!r}")


# --------------------------------------------------------------------------
# support truncation
# --------------------------------------------------------------------------

def _radial_profile(kernel, n, theta, radii, n_dir, rng):
    d = kernel.d
    dirs = rng.normal(size=(n_dir, d))
    dirs /= np.sqrt(np.sum(dirs ** 2, axis=1))[:, None]
    # shift by half a step so the probe sees the increment centred on the ray
    pts = radii[:, None, None] * dirs[None, :, :] - 0.5 / n
    vals = np.abs(K.delta_g(kernel, pts, 1.0 / n, singular_ok=True)) ** theta
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return vals.mean(axis=1)


def default_support_radius(kernel, spec, n, threshold=1e-3, max_radius=8.0, strict=False, seed=7):
    """Radius R with excluded share of int |Delta_{1/n} g|^theta below ``threshold``.

    The integrand is probed along random rays; the cumulative radial integral
    is compared with a power-law extrapolation of its tail.  If the required
    radius exceeds ``max_radius`` the cap is used with a warning, or a
    ``TruncationError`` is raised when ``strict``.
    """
    theta = spec.theta_index
    d = kernel.d
    rng = np.random.default_rng(seed)
    r_far = 4096.0 * max(max_radius, 1.0)
    radii = np.geomspace(1e-3 / n, r_far, 1200)
    prof = _radial_profile(kernel, n, theta, radii, 64, rng)
    dens = prof * radii ** (d - 1)
    lr = np.log(radii)
    # trapezoid in log r of r * dens
    piece = 0.5 * (dens[1:] * radii[1:] + dens[:-1] * radii[:-1]) * np.diff(lr)
    cum = np.concatenate([[0.0], np.cumsum(piece)])
    # extrapolate beyond r_far from the last decade
    tail_idx = radii > r_far / 10
    with np.errstate(divide="ignore"):
        good = tail_idx & (dens > 0)
    extra = 0.0
    if np.count_nonzero(good) > 3:
        slope = np.polyfit(lr[good], np.log(dens[good]), 1)[0]
        if slope >= -1.0:
            extra = math.inf
        else:
            extra = dens[-1] * radii[-1] / (-slope - 1.0)
    total = cum[-1] + extra
    if not math.isfinite(total) or total <= 0:
        msg = "kernel increments are not theta-integrable; truncation is uncontrolled"
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg)
        return float(max_radius)
    tail = total - cum
    ok = np.nonzero(tail / total < threshold)[0]
    R = float(radii[ok[0]]) if ok.size else math.inf
    R = max(R, 2.0 / n)
    if R > max_radius:
        msg = (f"support radius {R:.3g} needed for tail share {threshold:g} exceeds cap {max_radius:g}; "
               f"tail share at cap is {float(np.interp(np.log(max_radius), lr, tail)) / total:.3g}")
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg)
        R = float(max_radius)
    return R


def tail_share(kernel, spec, n, radius, seed=7):
    """Estimated share of int |Delta_{1/n} g|^theta outside distance ``radius``."""
    rng = np.random.default_rng(seed)
    r_far = 4096.0 * max(radius, 1.0)
    radii = np.geomspace(1e-3 / n, r_far, 1200)
    prof = _radial_profile(kernel, n, spec.theta_index, radii, 64, rng)
    dens = prof * radii ** (kernel.d - 1)
    lr = np.log(radii)
    piece = 0.5 * (dens[1:] * radii[1:] + dens[:-1] * radii[:-1]) * np.diff(lr)
    cum = np.concatenate([[0.0], np.cumsum(piece)])
    return float(1.0 - np.interp(np.log(radius), lr, cum) / cum[-1])


# --------------------------------------------------------------------------
# discretized synthesis
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeNoise:
    """Noise lattice of one discretized run."""

    n: int
    oversample: int
    pad: int  # cells beyond [0, 1] on each side
    offset: np.ndarray  # common interior offset in (0,1)^d
    noise: np.ndarray

    @property
    def d(self):
        return self.noise.ndim

    @property
    def mesh(self):
        return 1.0 / (self.n * self.oversample)

    def cell_points(self, axis):
        """Evaluation coordinates of the cells along one axis."""
        c = np.arange(self.noise.shape[axis])
        return (c - self.pad + self.offset[axis]) * self.mesh


def draw_lattice(d, n, oversample, radius, spec, rng):
    """Draw the offset and the i.i.d. cell values (offset first, then noise)."""
    if n < 1 or oversample < 1:
        raise ParameterError("n and oversample must be at least 1")
    if not radius > 0:
        raise ParameterError("support radius must be positive")
    nm = n * oversample
    pad = int(math.ceil(radius * nm - 1e-9))
    cells = 2 * pad + nm
    u = rng.random(d)
    u = np.where(u == 0.0, 0.5, u)
    noise = spec.sample_cell((1.0 / nm) ** d, (cells,) * d, rng)
    return LatticeNoise(n, oversample, pad, u, np.asarray(noise, dtype=float))


def _check_budget(shape, budget):
    size = int(np.prod(shape))
    need = size * 8 * 5  # real input, table, complex spectra
    if need > budget:
        raise SizeError(f"FFT lattice {shape} needs about {need / 2**30:.2f} GiB (budget {budget / 2**30:.2f} GiB)")


def _convolve_read(table, lat, q_lo, read_idx, workers, budget):
    """Full convolution of ``table`` (index q - q_lo) with the noise, read at given positions.

    ``read_idx`` is a list (per axis) of output indices ``j`` in the full
    convolution; the circular length is chosen so none of them aliases.
    """
    d = lat.d
    shape = []
    for axis in range(d):
        full = table.shape[axis] + lat.noise.shape[axis] - 1
        jmin, jmax = int(read_idx[axis].min()), int(read_idx[axis].max())
        # circular output j equals the full one when M > full - 1 - jmin and M > jmax
        shape.append(sfft.next_fast_len(max(full - jmin, jmax + 1), real=True))
    _check_budget(shape, budget)
    axes = tuple(range(d))
    ft = sfft.rfftn(table, s=shape, axes=axes, workers=workers)
    fn = sfft.rfftn(lat.noise, s=shape, axes=axes, workers=workers)
    ft *= fn
    del fn
    conv = sfft.irfftn(ft, s=shape, axes=axes, workers=workers)
    return conv[np.ix_(*read_idx)]


def _table_points(lat, q_lo, q_hi):
    """Grid of points (q - u) * mesh for q in [q_lo, q_hi]^d, shape (..., d)."""
    axes = [(np.arange(q_lo, q_hi + 1) - lat.offset[a]) * lat.mesh for a in range(lat.d)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack(grids, axis=-1)


def fft_increment_field(kernel, spec, n, oversample=4, support_radius=None, rng=None, *,
                        lattice=None, workers=None, memory_budget=DEFAULT_MEMORY_BUDGET,
                        strict=False):
    """Rectangular increments of the discretized field by FFT convolution."""
    if lattice is None:
        if support_radius is None:
            support_radius = default_support_radius(kernel, spec, n, strict=strict)
        lattice = draw_lattice(kernel.d, n, oversample, support_radius, spec, rng)
    lat = lattice
    m, pad, nm = lat.oversample, lat.pad, lat.n * lat.oversample
    q_lo = -(pad + nm - 1)
    q_hi = pad + (lat.n - 1) * m
    tab_size = (q_hi - q_lo + 1) ** lat.d
    if tab_size * 8 * 6 > memory_budget:
        raise SizeError("increment kernel table exceeds the memory budget")
    table = K.delta_g(kernel, _table_points(lat, q_lo, q_hi), 1.0 / lat.n)
    read = [np.arange(lat.n) * m + pad - q_lo for _ in range(lat.d)]
    vals = _convolve_read(table, lat, q_lo, read, workers, memory_budget)
    meta = {"kernel": kernel.label, "levy": spec.kind, "method": "discretized-fft",
            "oversample": m, "pad_cells": pad}
    return IncrementGrid(lat.d, lat.n, vals, meta)


def direct_increment_field(kernel, lat, chunk=2 ** 22):
    """Reference path: explicit sum over cells for every lattice site."""
    d = lat.d
    cells = np.stack(np.meshgrid(*[lat.cell_points(a) for a in range(d)], indexing="ij"), -1).reshape(-1, d)
    noise = lat.noise.ravel()
    sites = np.stack(np.meshgrid(*[np.arange(lat.n) / lat.n] * d, indexing="ij"), -1).reshape(-1, d)
    out = np.empty(sites.shape[0])
    per = max(1, chunk // cells.shape[0])
    for start in range(0, sites.shape[0], per):
        blk = sites[start:start + per]
        x = blk[:, None, :] - cells[None, :, :]
        out[start:start + per] = K.delta_g(kernel, x, 1.0 / lat.n) @ noise
    return IncrementGrid(d, lat.n, out.reshape((lat.n,) * d), {"method": "discretized-direct"})


def _discretized_field(kernel, lat, workers, budget):
    d, m, pad, nm = lat.d, lat.oversample, lat.pad, lat.n * lat.oversample
    q_lo = -(pad + nm - 1)
    q_hi = pad + nm
    pts = None
    total = np.zeros((lat.n + 1,) * d)
    for eps, piece in kernel.pieces().items():
        sign = (-1.0) ** (d + sum(eps))
        if not any(eps):
            # t enters nowhere: a plain dot product with g_0(-s_c)
            cells = np.stack(np.meshgrid(*[lat.cell_points(a) for a in range(d)], indexing="ij"), -1)
            total += sign * float(np.sum(piece(-cells) * lat.noise))
            continue
        if pts is None:
            pts = _table_points(lat, q_lo, q_hi)
        table = piece(pts)
        read = [np.arange(lat.n + 1) * m + pad - q_lo if e else np.array([pad - q_lo]) for e in eps]
        vals = _convolve_read(table, lat, q_lo, read, workers, budget)
        total += sign * vals  # broadcasts along the eps = 0 axes
    return total


# --------------------------------------------------------------------------
# shot noise
# --------------------------------------------------------------------------

def _configuration(kernel, spec, method, rng, radius):
    if method.configuration is not None:
        return method.configuration
    d = kernel.d
    region = np.array([[-radius, 1.0 + radius]] * d)
    if method.series_len is not None:
        mass = spec.jump_mass(method.jump_floor)
        if not math.isfinite(mass):
            raise UnsupportedRegimeError("shot noise needs a finite-activity measure")
        st = series_thinning_stream(spec, method.series_len, rng, region=region)
        locs, jumps = st.nonzero()
        return PointConfiguration(locs, jumps, region)
    if not math.isfinite(spec.jump_mass(method.jump_floor)) or spec.is_gaussian:
        raise UnsupportedRegimeError("shot noise needs a finite-activity measure or a jump floor")
    return sample_jump_configuration(region, spec, rng, jump_floor=method.jump_floor)


def shot_noise_increments(kernel, config, n):
    """Delta_{1/n} X(i/n) = sum_k J_k Delta_{1/n} g(i/n - V_k), computed exactly."""
    d = kernel.d
    J = np.asarray(config.jumps, dtype=float)
    V = np.asarray(config.locations, dtype=float).reshape(-1, d)
    if J.size == 0:
        return np.zeros((n,) * d)
    t = np.arange(n + 1) / n
    if kernel.family == "H2":
        facs = []
        for i in range(d):
            G = kernel.axis_g(i, t[:, None] - V[None, :, i])
            facs.append(np.diff(G, axis=0))
        if d == 1:
            return facs[0] @ J
        if d == 2:
            return (facs[0] * J) @ facs[1].T
        letters = "abcdefgh"[:d]
        expr = ",".join(f"{c}k" for c in letters) + ",k->" + letters
        return np.einsum(expr, *facs, J)
    pts = np.stack(np.meshgrid(*[t] * d, indexing="ij"), -1)
    out = np.zeros((n + 1,) * d)
    for k in range(J.size):
        out += J[k] * kernel.g(pts - V[k])
    return _rect_diff(out)


def shot_noise_field(kernel, config, n):
    """X(i/n) = sum_k J_k g(i/n, V_k) with the full kernel."""
    d = kernel.d
    J = np.asarray(config.jumps, dtype=float)
    V = np.asarray(config.locations, dtype=float).reshape(-1, d)
    t = np.arange(n + 1) / n
    if J.size == 0:
        return np.zeros((n + 1,) * d)
    if kernel.family == "H2":
        facs = [kernel.axis_full(i, t[:, None], V[None, :, i]) for i in range(d)]
        if d == 1:
            return facs[0] @ J
        letters = "abcdefgh"[:d]
        expr = ",".join(f"{c}k" for c in letters) + ",k->" + letters
        return np.einsum(expr, *facs, J)
    pts = np.stack(np.meshgrid(*[t] * d, indexing="ij"), -1)
    out = np.zeros((n + 1,) * d)
    for k in range(J.size):
        out += J[k] * kernel.g_full(pts, np.broadcast_to(V[k], pts.shape))
    return out


def _rect_diff(values):
    out = values
    for axis in range(values.ndim):
        out = np.diff(out, axis=axis)
    return out


# --------------------------------------------------------------------------
# Gaussian reference (d = 1)
# --------------------------------------------------------------------------

def gaussian_increment_variance(H):
    """int_R (|s + 1|^a - |s|^a)^2 ds for a = H - 1/2, from the spectral representation."""
    a = H - 0.5
    if a == 0:
        raise ParameterError("H = 1/2 gives a constant kernel")
    ft = 2.0 * special.gamma(a + 1.0) * math.sin(math.pi * abs(a) / 2.0)
    g2 = 2.0 * H
    # int_0^inf (1 - cos w) w^(-1 - 2H) dw
    if abs(g2 - 1.0) < 1e-12:
        osc = math.pi / 2.0
    else:
        osc = special.gamma(1.0 - g2) * math.cos(math.pi * g2 / 2.0) / g2
    return ft ** 2 * 4.0 * osc / (2.0 * math.pi)


def _fgn_davies_harte(N, H, rng):
    k = np.arange(N + 1, dtype=float)
    gam = 0.5 * (np.abs(k + 1) ** (2 * H) - 2 * k ** (2 * H) + np.abs(k - 1) ** (2 * H))
    row = np.concatenate([gam, gam[-2:0:-1]])
    lam = np.fft.fft(row).real
    if np.min(lam) < -1e-10 * np.max(lam):
        raise ParameterError("circulant embedding is not non-negative definite")
    lam = np.clip(lam, 0.0, None)
    M = row.size
    z = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    y = np.fft.fft(np.sqrt(lam / M) * z)
    return y.real[:N]


def _gaussian_reference(kernel, spec, n, rng):
    if kernel.d != 1 or not spec.is_gaussian:
        raise UnsupportedRegimeError("the Gaussian reference sampler is for d = 1 Gaussian fields")
    if kernel.family != "H1" or kernel.lam:
        raise UnsupportedRegimeError("the Gaussian reference needs an untempered power kernel")
    H = kernel.alpha + 0.5
    if not 0 < H < 1:
        raise UnsupportedRegimeError("alpha + 1/2 must lie in (0, 1)")
    scale = math.sqrt(spec.variance_rate * gaussian_increment_variance(H)) * n ** (-H)
    inc = scale * _fgn_davies_harte(n, H, rng)
    return inc


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------

def _resolve_radius(kernel, spec, n, method, strict):
    if method.support_radius is not None:
        return float(method.support_radius)
    return default_support_radius(kernel, spec, n, max_radius=method.max_radius, strict=strict)


def simulate_grid(kernel, spec, n, method=None, rng=None, *, workers=None, strict=False):
    """Field samples X(i/n), i in {0..n}^d."""
    method = method or Discretized()
    if rng is None:
        rng = np.random.default_rng()
    meta = {"kernel": kernel.label, "levy": spec.kind, "method": method.kind}
    if isinstance(method, Discretized):
        R = _resolve_radius(kernel, spec, n, method, strict)
        lat = draw_lattice(kernel.d, n, method.oversample, R, spec, rng)
        vals = _discretized_field(kernel, lat, workers, method.memory_budget)
        meta.update(oversample=method.oversample, support_radius=R)
    elif isinstance(method, ShotNoise):
        R = _resolve_radius(kernel, spec, n, method, strict) if method.configuration is None else 0.0
        cfg = _configuration(kernel, spec, method, rng, R)
        vals = shot_noise_field(kernel, cfg, n)
        meta.update(support_radius=R, jumps=cfg.count)
    elif isinstance(method, GaussianReference):
        inc = _gaussian_reference(kernel, spec, n, rng)
        vals = np.concatenate([[0.0], np.cumsum(inc)])
    else:
        raise ParameterError(f"unknown method {method!r}")
    return FieldGrid(kernel.d, n, vals, meta)


def simulate_increments(kernel, spec, n, method=None, rng=None, *, workers=None, strict=False,
                        return_config=False):
    """Increment lattice Delta_{1/n} X(i/n) by the fastest exact route of ``method``."""
    method = method or Discretized()
    if rng is None:
        rng = np.random.default_rng()
    if isinstance(method, Discretized):
        R = _resolve_radius(kernel, spec, n, method, strict)
        inc = fft_increment_field(kernel, spec, n, method.oversample, R, rng, workers=workers,
                                  memory_budget=method.memory_budget)
        return (inc, None) if return_config else inc
    if isinstance(method, ShotNoise):
        R = _resolve_radius(kernel, spec, n, method, strict) if method.configuration is None else 0.0
        cfg = _configuration(kernel, spec, method, rng, R)
        vals = shot_noise_increments(kernel, cfg, n)
        inc = IncrementGrid(kernel.d, n, vals, {"kernel": kernel.label, "levy": spec.kind,
                                                "method": "shot_noise", "jumps": cfg.count})
        return (inc, cfg) if return_config else inc
    if isinstance(method, GaussianReference):
        inc = IncrementGrid(1, n, _gaussian_reference(kernel, spec, n, rng),
                            {"kernel": kernel.label, "levy": spec.kind, "method": "gaussian_reference"})
        return (inc, None) if return_config else inc
    raise ParameterError(f"unknown method {method!r}")

