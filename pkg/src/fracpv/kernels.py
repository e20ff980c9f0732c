"""Kernels of fractional-type fields and their regime classification.

A kernel is stored through its pieces ``g_eps``, ``eps in {0,1}^d``:

    g(t, s) = sum_eps (-1)^(d + |eps|) g_eps(eps * t - s).

Only the translation part ``g = g_(1,...,1)`` survives rectangular
increments, so most computations use ``g`` alone.  Near the origin every
kernel behaves like a homogeneous function ``h``:

* radial kernels: ``h(s) = ||s||^(d alpha)``,
* product kernels: ``h(s) = prod |s_i|^(alpha_i)``.

All evaluation functions are vectorised over a leading batch of points; a
point array has shape ``(..., d)``.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, ClassVar

import numpy as np
from scipy import special

from .errors import ParameterError, SingularityError

__all__ = [
    "One",
    "ExpTemper",
    "H1Radial",
    "H2Product",
    "MaternBessel",
    "MAFSF",
    "GaussianFractional",
    "LFSS",
    "RectHomogeneous",
    "Regime",
    "BOUNDARY_TOL",
    "as_points",
    "rect_increment_fn",
    "iterated_difference",
    "delta1_h",
    "eval_g_translation",
    "eval_g_full",
    "partial_d_g",
    "delta_g",
    "monotone_radius",
    "classify",
    "kernel_from_record",
    "correction_from_record",
]

BOUNDARY_TOL = 1e-9


def as_points(s, d):
    """Coerce ``s`` to an array of points of shape ``(..., d)``."""
    a = np.asarray(s, dtype=float)
    if d == 1 and (a.ndim == 0 or a.shape[-1] != 1):
        a = a[..., None]
    if a.shape[-1] != d:
        raise ParameterError(f"expected points of dimension {d}, got shape {a.shape}")
    return a


def _norm(s):
    return np.sqrt(np.sum(s * s, axis=-1))


def _safe_power(x, a, singular_ok=False):
    """|x|^a elementwise; zero base with negative exponent is a singularity."""
    x = np.abs(x)
    if a < 0 and np.any(x == 0):
        if not singular_ok:
            raise SingularityError("kernel evaluated at its singular point")
    with np.errstate(divide="ignore"):
        return x ** a


# --------------------------------------------------------------------------
# corrections f
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    """f == 1."""

    lam: ClassVar[float] = 0.0
    kind: ClassVar[str] = "one"

    def to_record(self):
        return {"type": self.kind}


@dataclass(frozen=True)
class ExpTemper:
    """f(s) = exp(-lam ||s||) for radial kernels, exp(-lam |s_i|) per axis for products."""

    lam: float = 1.0
    kind: ClassVar[str] = "exp"

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError("tempering rate must be positive")

    def to_record(self):
        return {"type": self.kind, "lam": self.lam}


def correction_from_record(rec):
    if rec is None:
        return One()
    kind = rec.get("type", "one")
    if kind == "one":
        return One()
    if kind == "exp":
        return ExpTemper(float(rec["lam"]))
    raise ParameterError(f"unknown correction {kind!r}")


# --------------------------------------------------------------------------
# radial profile r^a exp(-lam r) and its (1/r d/dr) derivatives
# --------------------------------------------------------------------------

def _apply_D(terms, lam):
    """(1/r) d/dr applied to sum_j c_j r^e_j exp(-lam r)."""
    out = {}
    for c, e in terms:
        if e != 0:
            out[e - 2] = out.get(e - 2, 0.0) + c * e
        if lam:
            out[e - 1] = out.get(e - 1, 0.0) - c * lam
    return [(c, e) for e, c in sorted(out.items()) if c != 0.0]


def _radial_D_terms(a, lam, m):
    terms = [(1.0, float(a))]
    for _ in range(m):
        terms = _apply_D(terms, lam)
    return terms


def _eval_terms(terms, r, lam):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        tot = np.zeros_like(r)
        for c, e in terms:
            tot = tot + c * r ** e
        return tot * np.exp(-lam * r)


# --------------------------------------------------------------------------
# kernel families
# --------------------------------------------------------------------------

class Kernel:
    """Shared behaviour.  Subclasses set ``family`` to "H1" or "H2"."""

    family: ClassVar[str] = ""
    kind: ClassVar[str] = ""
    anchored: ClassVar[bool] = False
    d: int

    # translation part g = g_(1..1)
    def g(self, s, singular_ok=False):
        raise NotImplementedError

    def h(self, s, singular_ok=False):
        raise NotImplementedError

    def partial_d(self, s):
        raise NotImplementedError

    @property
    def degree(self):
        """Homogeneity degree of h."""
        raise NotImplementedError

    def pieces(self):
        """Mapping eps -> callable g_eps (only non-zero pieces are listed)."""
        return {(1,) * self.d: self.g}

    def g_full(self, t, s, singular_ok=False):
        t = as_points(t, self.d)
        s = as_points(s, self.d)
        t, s = np.broadcast_arrays(t, s)
        out = np.zeros(t.shape[:-1])
        for eps, fn in self.pieces().items():
            e = np.asarray(eps, dtype=float)
            sign = (-1.0) ** (self.d + int(sum(eps)))
            out = out + sign * fn(e * t - s, singular_ok=singular_ok)
        return out

    def to_record(self):
        raise NotImplementedError

    @property
    def label(self):
        rec = self.to_record()
        rest = ",".join(f"{k}={v}" for k, v in rec.items() if k != "type")
        return f"{rec['type']}({rest})"


class _RadialKernel(Kernel):
    """g(s) = ||s||^a exp(-lam ||s||) with a = d alpha."""

    family: ClassVar[str] = "H1"

    @property
    def radial_exponent(self):
        return self.d * self.alpha

    @property
    def lam(self):
        return 0.0

    @property
    def degree(self):
        return self.radial_exponent

    def g(self, s, singular_ok=False):
        s = as_points(s, self.d)
        r = _norm(s)
        out = _safe_power(r, self.radial_exponent, singular_ok)
        if self.lam:
            out = out * np.exp(-self.lam * r)
        return out

    def h(self, s, singular_ok=False):
        s = as_points(s, self.d)
        return _safe_power(_norm(s), self.radial_exponent, singular_ok)

    def partial_d(self, s):
        s = as_points(s, self.d)
        terms = _radial_D_terms(self.radial_exponent, self.lam, self.d)
        prod = np.prod(s, axis=-1)
        r = _norm(s)
        val = prod * _eval_terms(terms, np.where(prod == 0, 1.0, r), self.lam)
        return np.where(prod == 0, 0.0, val)

    def h_partial_d(self, s):
        """Mixed partial of the homogeneous part."""
        s = as_points(s, self.d)
        terms = _radial_D_terms(self.radial_exponent, 0.0, self.d)
        prod = np.prod(s, axis=-1)
        val = prod * _eval_terms(terms, np.where(prod == 0, 1.0, _norm(s)), 0.0)
        return np.where(prod == 0, 0.0, val)

    def h_partial_bound(self):
        """max over the unit sphere of |partial^d h| (exact for pure powers)."""
        terms = _radial_D_terms(self.radial_exponent, 0.0, self.d)
        coef = sum(c for c, _ in terms)
        return abs(coef) * self.d ** (-self.d / 2.0)


@dataclass(frozen=True)
class H1Radial(_RadialKernel):
    """Moving-average kernel g(s) = f(s) ||s||^(d alpha)."""

    alpha: float
    d: int = 1
    correction: object = field(default_factory=One)
    kind: ClassVar[str] = "h1_radial"

    def __post_init__(self):
        if self.alpha == 0:
            raise ParameterError("alpha must be non-zero")
        if self.d < 1:
            raise ParameterError("dimension must be at least 1")
        if isinstance(self.correction, ExpTemper):
            rho = monotone_radius(self)
            if not math.isfinite(rho):
                warnings.warn("|partial^d g| not found radially non-increasing on the probed range")

    @property
    def lam(self):
        return self.correction.lam

    def to_record(self):
        return {"type": self.kind, "alpha": self.alpha, "d": self.d,
                "correction": self.correction.to_record()}


@dataclass(frozen=True)
class MAFSF(_RadialKernel):
    """g(t, s) = ||t - s||^(H - d/beta) - ||s||^(H - d/beta)."""

    H: float
    beta: float
    d: int = 1
    kind: ClassVar[str] = "mafsf"
    anchored: ClassVar[bool] = True

    def __post_init__(self):
        if not 0 < self.H < 1:
            raise ParameterError("H must lie in (0, 1)")
        if not 0 < self.beta <= 2:
            raise ParameterError("beta must lie in (0, 2]")
        if abs(self.H - self.d / self.beta) < BOUNDARY_TOL:
            raise ParameterError("H = d/beta gives a constant kernel")

    @property
    def alpha(self):
        return self.H / self.d - 1.0 / self.beta

    def pieces(self):
        sign = (-1.0) ** (self.d + 1)
        return {(1,) * self.d: self.g,
                (0,) * self.d: lambda x, singular_ok=False: sign * self.g(x, singular_ok)}

    def to_record(self):
        return {"type": self.kind, "H": self.H, "beta": self.beta, "d": self.d}


@dataclass(frozen=True)
class GaussianFractional(_RadialKernel):
    """g(t, s) = ||t - s||^(H - d/2) - ||s||^(H - d/2), for a Gaussian measure."""

    H: float
    d: int = 1
    kind: ClassVar[str] = "gaussian_fractional"
    anchored: ClassVar[bool] = True

    def __post_init__(self):
        if not 0 < self.H < 1:
            raise ParameterError("H must lie in (0, 1)")
        if abs(self.H - self.d / 2.0) < BOUNDARY_TOL:
            raise ParameterError("H = d/2 gives a constant kernel")

    @property
    def alpha(self):
        return self.H / self.d - 0.5

    def pieces(self):
        sign = (-1.0) ** (self.d + 1)
        return {(1,) * self.d: self.g,
                (0,) * self.d: lambda x, singular_ok=False: sign * self.g(x, singular_ok)}

    def to_record(self):
        return {"type": self.kind, "H": self.H, "d": self.d}


@dataclass(frozen=True)
class RectHomogeneous(_RadialKernel):
    """g(t, s) = rectangular increment of h over [-s, t - s], h(s) = ||s||^(d(H - 1/beta))."""

    H: float
    beta: float
    d: int = 1
    kind: ClassVar[str] = "rect_homogeneous"
    anchored: ClassVar[bool] = True

    def __post_init__(self):
        if not 0 < self.H < 1:
            raise ParameterError("H must lie in (0, 1)")
        if abs(self.H - 1.0 / self.beta) < BOUNDARY_TOL:
            raise ParameterError("H = 1/beta gives a constant kernel")

    @property
    def alpha(self):
        return self.H - 1.0 / self.beta

    def pieces(self):
        return {eps: self.g for eps in itertools.product((0, 1), repeat=self.d)}

    def to_record(self):
        return {"type": self.kind, "H": self.H, "beta": self.beta, "d": self.d}


@dataclass(frozen=True)
class MaternBessel(_RadialKernel):
    """Bessel-K moving-average kernel whose field has Matern covariance.

    g(s) = 2 / Gamma(d/4 - gamma/2) ||2 s / sigma||^(gamma/2 - d/4) K_(gamma/2 - d/4)(sigma ||s||),
    which behaves like ||s||^(gamma - d/2) at the origin.
    """

    gamma: float
    sigma: float = 1.0
    d: int = 1
    kind: ClassVar[str] = "matern"

    def __post_init__(self):
        if not 0 < self.gamma < self.d / 2.0:
            raise ParameterError("gamma must lie in (0, d/2)")
        if not self.sigma > 0:
            raise ParameterError("sigma must be positive")

    @property
    def alpha(self):
        return self.gamma / self.d - 0.5

    @property
    def _mu(self):
        return self.d / 4.0 - self.gamma / 2.0

    def _scaled_D(self, r, m):
        # D^m [C (2/sigma)^-mu r^-mu K_mu(sigma r)], D = (1/r) d/dr
        mu, sig = self._mu, self.sigma
        const = 2.0 / math.gamma(mu) * (2.0 / sig) ** (-mu) * sig ** mu * sig ** (2 * m) * (-1.0) ** m
        z = sig * np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return const * z ** (-mu - m) * special.kv(mu + m, z)

    def g(self, s, singular_ok=False):
        s = as_points(s, self.d)
        r = _norm(s)
        if np.any(r == 0) and not singular_ok:
            raise SingularityError("Bessel kernel evaluated at the origin")
        return self._scaled_D(r, 0)

    def partial_d(self, s):
        s = as_points(s, self.d)
        prod = np.prod(s, axis=-1)
        r = np.where(prod == 0, 1.0, _norm(s))
        return np.where(prod == 0, 0.0, prod * self._scaled_D(r, self.d))

    def to_record(self):
        return {"type": self.kind, "gamma": self.gamma, "sigma": self.sigma, "d": self.d}


class _ProductKernel(Kernel):
    """g(s) = prod_i |s_i|^(alpha_i) exp(-lam_i |s_i|)."""

    family: ClassVar[str] = "H2"

    @property
    def lams(self):
        return (0.0,) * self.d

    @property
    def degree(self):
        return float(sum(self.alphas))

    def axis_g(self, i, x, singular_ok=False):
        x = np.asarray(x, dtype=float)
        out = _safe_power(x, self.alphas[i], singular_ok)
        lam = self.lams[i]
        return out * np.exp(-lam * np.abs(x)) if lam else out

    def axis_h(self, i, x, singular_ok=False):
        return _safe_power(np.asarray(x, dtype=float), self.alphas[i], singular_ok)

    def axis_dg(self, i, x):
        """g_i'(x), set to 0 at x = 0."""
        x = np.asarray(x, dtype=float)
        a, lam = self.alphas[i], self.lams[i]
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.sign(x) * np.exp(-lam * ax) * ax ** (a - 1.0) * (a - lam * ax)
        return np.where(x == 0, 0.0, val)

    def axis_full(self, i, t, s, singular_ok=False):
        """Axis factor of the full kernel (product kernels factor over axes)."""
        return self.axis_g(i, np.asarray(t) - np.asarray(s), singular_ok)

    def g(self, s, singular_ok=False):
        s = as_points(s, self.d)
        out = np.ones(s.shape[:-1])
        for i in range(self.d):
            out = out * self.axis_g(i, s[..., i], singular_ok)
        return out

    def h(self, s, singular_ok=False):
        s = as_points(s, self.d)
        out = np.ones(s.shape[:-1])
        for i in range(self.d):
            out = out * self.axis_h(i, s[..., i], singular_ok)
        return out

    def partial_d(self, s):
        s = as_points(s, self.d)
        out = np.ones(s.shape[:-1])
        for i in range(self.d):
            out = out * self.axis_dg(i, s[..., i])
        return out

    def sorted_axes(self):
        """Permutation putting alpha in ascending order (stable)."""
        return tuple(int(i) for i in np.argsort(np.asarray(self.alphas), kind="stable"))


@dataclass(frozen=True)
class H2Product(_ProductKernel):
    """Product kernel g(s) = prod_i f_i(s_i) |s_i|^(alpha_i)."""

    alphas: tuple
    corrections: tuple = None
    kind: ClassVar[str] = "h2_product"

    def __post_init__(self):
        alphas = tuple(float(a) for a in np.atleast_1d(self.alphas))
        object.__setattr__(self, "alphas", alphas)
        if any(a == 0 for a in alphas):
            raise ParameterError("every alpha_i must be non-zero")
        corr = self.corrections
        if corr is None:
            corr = tuple(One() for _ in alphas)
        elif not isinstance(corr, (tuple, list)):
            corr = tuple(corr for _ in alphas)
        corr = tuple(corr)
        if len(corr) != len(alphas):
            raise ParameterError("one correction per axis is required")
        object.__setattr__(self, "corrections", corr)

    @property
    def d(self):
        return len(self.alphas)

    @property
    def lams(self):
        return tuple(c.lam for c in self.corrections)

    def to_record(self):
        return {"type": self.kind, "alphas": list(self.alphas),
                "corrections": [c.to_record() for c in self.corrections]}


@dataclass(frozen=True)
class LFSS(_ProductKernel):
    """Well-balanced linear fractional stable sheet: prod_i (|t_i - s_i|^a_i - |s_i|^a_i)."""

    Hs: tuple
    beta: float
    kind: ClassVar[str] = "lfss"
    anchored: ClassVar[bool] = True

    def __post_init__(self):
        Hs = tuple(float(h) for h in np.atleast_1d(self.Hs))
        object.__setattr__(self, "Hs", Hs)
        if not all(0 < h < 1 for h in Hs):
            raise ParameterError("every H_i must lie in (0, 1)")
        if any(abs(h - 1.0 / self.beta) < BOUNDARY_TOL for h in Hs):
            raise ParameterError("H_i = 1/beta gives a constant kernel")

    @property
    def d(self):
        return len(self.Hs)

    @property
    def alphas(self):
        return tuple(h - 1.0 / self.beta for h in self.Hs)

    def pieces(self):
        return {eps: self.g for eps in itertools.product((0, 1), repeat=self.d)}

    def axis_full(self, i, t, s, singular_ok=False):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        return self.axis_g(i, t - s, singular_ok) - self.axis_g(i, -s, singular_ok)

    def to_record(self):
        return {"type": self.kind, "Hs": list(self.Hs), "beta": self.beta}


KERNEL_TYPES = {cls.kind: cls for cls in
                (H1Radial, H2Product, MaternBessel, MAFSF, GaussianFractional, LFSS, RectHomogeneous)}


def kernel_from_record(rec):
    rec = dict(rec)
    kind = rec.pop("type")
    if kind not in KERNEL_TYPES:
        raise ParameterError(f"unknown kernel type {kind!r}")
    if kind == "h1_radial":
        rec["correction"] = correction_from_record(rec.get("correction"))
    if kind == "h2_product":
        corr = rec.get("corrections")
        if isinstance(corr, list):
            rec["corrections"] = tuple(correction_from_record(c) for c in corr)
        elif isinstance(corr, dict):
            rec["corrections"] = correction_from_record(corr)
        rec["alphas"] = tuple(rec["alphas"])
    if kind == "lfss":
        rec["Hs"] = tuple(rec["Hs"])
    return KERNEL_TYPES[kind](**rec)


# --------------------------------------------------------------------------
# increments of deterministic functions
# --------------------------------------------------------------------------

def _check_box(lo, hi):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.ndim == 0:
        lo, hi = lo[None], hi[None]
    if np.any(hi <= lo):
        raise ParameterError("rectangle requires lo < hi in every coordinate")
    return lo, hi


def rect_increment_fn(fn: Callable, lo, hi):
    """Signed-corner sum of ``fn`` over the rectangle [lo, hi].

    ``fn`` takes points of shape ``(..., d)``.  ``lo`` and ``hi`` may carry a
    leading batch dimension.
    """
    lo, hi = _check_box(lo, hi)
    d = lo.shape[-1]
    total = 0.0
    for eps in itertools.product((0, 1), repeat=d):
        e = np.asarray(eps, dtype=float)
        sign = (-1.0) ** (d - int(sum(eps)))
        total = total + sign * np.asarray(fn(lo + e * (hi - lo)))
    return total


def iterated_difference(fn: Callable, lo, hi):
    """Same rectangle increment computed by differencing one axis at a time."""
    lo, hi = _check_box(lo, hi)
    d = lo.shape[-1]

    def diff_axis(f, axis):
        def g(x):
            x_hi = np.array(x, dtype=float, copy=True)
            x_lo = np.array(x, dtype=float, copy=True)
            x_hi[..., axis] = hi[..., axis]
            x_lo[..., axis] = lo[..., axis]
            return np.asarray(f(x_hi)) - np.asarray(f(x_lo))
        return g

    f = fn
    for axis in range(d):
        f = diff_axis(f, axis)
    return f(np.array(lo, dtype=float, copy=True))


def delta1_h(kernel, y, singular_ok=False):
    """Unit rectangular increment of the homogeneous part over [y, y + 1]."""
    y = as_points(y, kernel.d)
    d = kernel.d
    total = np.zeros(y.shape[:-1])
    for eps in itertools.product((0, 1), repeat=d):
        sign = (-1.0) ** (d - int(sum(eps)))
        total = total + sign * kernel.h(y + np.asarray(eps, dtype=float), singular_ok)
    return total


def delta_g(kernel, x, step, singular_ok=False):
    """Rectangular increment of the translation part over [x, x + step * 1]."""
    x = as_points(x, kernel.d)
    d = kernel.d
    total = np.zeros(x.shape[:-1])
    for eps in itertools.product((0, 1), repeat=d):
        sign = (-1.0) ** (d - int(sum(eps)))
        total = total + sign * kernel.g(x + step * np.asarray(eps, dtype=float), singular_ok)
    return total


def eval_g_translation(kernel, s):
    return kernel.g(s)


def eval_g_full(kernel, t, s):
    return kernel.g_full(t, s)


def partial_d_g(kernel, s):
    return kernel.partial_d(s)


def monotone_radius(kernel, rmax=60.0, n_dir=24, n_rad=600, seed=0):
    """Smallest probed radius beyond which |partial^d g| is radially non-increasing.

    Radial kernels are probed along random directions, product kernels along
    each axis of g_i'.  Returns ``inf`` when no such radius is found.
    """
    radii = np.geomspace(1e-3, rmax, n_rad)
    if kernel.family == "H1":
        rng = np.random.default_rng(seed)
        dirs = rng.normal(size=(n_dir, kernel.d))
        dirs /= _norm(dirs)[:, None]
        vals = np.abs(kernel.partial_d(radii[:, None, None] * dirs[None, :, :]))
        profiles = vals.T
    else:
        profiles = np.stack([np.abs(kernel.axis_dg(i, radii)) for i in range(kernel.d)]
                            + [np.abs(kernel.axis_dg(i, -radii)) for i in range(kernel.d)])
    rho = 0.0
    for prof in profiles:
        inc = np.nonzero(np.diff(prof) > 1e-12 * np.maximum(prof[:-1], 1e-300))[0]
        if inc.size:
            last = inc[-1] + 1
            if last >= n_rad - 1:
                return math.inf
            rho = max(rho, radii[last])
    return float(rho)


# --------------------------------------------------------------------------
# regime classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Regime:
    theorem: str
    k: int = 0
    rate_exponent: float = math.nan
    perm: tuple = ()
    reason: str = ""

    @property
    def supported(self):
        return self.theorem not in ("Boundary", "Unsupported")

    def to_record(self):
        return {"theorem": self.theorem, "k": self.k, "rate_exponent": self.rate_exponent,
                "perm": list(self.perm), "reason": self.reason}


def _near(a, b):
    return abs(a - b) < BOUNDARY_TOL


def _inside01(x):
    return BOUNDARY_TOL < x < 1 - BOUNDARY_TOL


def classify(kernel, p, spec):
    """Regime of the power-variation limit theory for (kernel, p, L)."""
    if not p > 0:
        return Regime("Unsupported", reason="p must be positive")
    beta = spec.beta_index
    theta = spec.theta_index
    d = kernel.d
    gauss = spec.is_gaussian
    stable = spec.is_stable

    if kernel.family == "H1":
        a = kernel.alpha
        if gauss:
            H = a + 0.5
            if _near(H, 0.0) or _near(H, 1.0):
                return Regime("Boundary", reason="alpha + 1/2 on the boundary of (0,1)")
            if 0 < H < 1:
                return Regime("T1ii", rate_exponent=d * (H * p - 1), reason="Gaussian ergodic")
            return Regime("Unsupported", reason="Gaussian measure only in the ergodic regime")
        m = max(beta, p)
        if _near(p, beta):
            return Regime("Boundary", reason="p = beta")
        if _near(a, 1 - 1 / m):
            return Regime("Boundary", reason="alpha = 1 - 1/max(beta, p)")
        if a + 1 / m <= 0:
            return Regime("Unsupported", reason="alpha <= -1/max(beta, p)")
        if p > beta and 0 < a + 1 / p < 1:
            return Regime("T1i", rate_exponent=d * a * p)
        if p < beta and 0 < a + 1 / beta < 1:
            if stable:
                H = a + 1 / beta
                return Regime("T1ii", rate_exponent=d * (H * p - 1))
            return Regime("Unsupported", reason="ergodic regime requires a stable measure")
        if a + 1 / m > 1:
            if p >= 1:
                return Regime("T1iii", rate_exponent=d * (p - 1))
            return Regime("Unsupported", reason="derivative regime requires p >= 1")
        return Regime("Unsupported", reason="no theorem applies")

    # product kernels
    perm = kernel.sorted_axes()
    alphas = [kernel.alphas[i] for i in perm]
    if gauss:
        Hs = [a + 0.5 for a in alphas]
        if any(_near(h, 1.0) or _near(h, 0.0) for h in Hs):
            return Regime("Boundary", perm=perm, reason="alpha_i + 1/2 on a boundary")
        if any(h <= 0 for h in Hs):
            return Regime("Unsupported", perm=perm, reason="alpha_1 <= -1/2")
        k = sum(1 for h in Hs if h < 1)
        if k == 0:
            return Regime("Unsupported", perm=perm, reason="Gaussian measure only in the ergodic regime")
        rate = (d - k) * (p - 1) + sum(h * p - 1 for h in Hs[:k])
        return Regime("T2ii", k=k, rate_exponent=rate, perm=perm, reason="Gaussian ergodic")
    if theta < 2 and _near(p, theta):
        return Regime("Boundary", perm=perm, reason="p = theta")
    m = max(beta, p)
    if _near(p, beta):
        return Regime("Boundary", perm=perm, reason="p = beta")
    if any(_near(a, 1 - 1 / m) for a in alphas):
        return Regime("Boundary", perm=perm, reason="alpha_i = 1 - 1/max(beta, p)")
    if alphas[0] + 1 / m <= 0:
        return Regime("Unsupported", perm=perm, reason="alpha_1 <= -1/max(beta, p)")
    if p > beta:
        k = sum(1 for a in alphas if a + 1 / p < 1)
        if k >= 1:
            rate = (d - k) * (p - 1) + sum(a * p for a in alphas[:k])
            return Regime("T2i", k=k, rate_exponent=rate, perm=perm)
    else:
        k = sum(1 for a in alphas if a + 1 / beta < 1)
        if k >= 1:
            if not stable:
                return Regime("Unsupported", k=k, perm=perm, reason="ergodic regime requires a stable measure")
            rate = (d - k) * (p - 1) + sum((a + 1 / beta) * p - 1 for a in alphas[:k])
            return Regime("T2ii", k=k, rate_exponent=rate, perm=perm)
    if p >= 1:
        return Regime("T2iii", k=0, rate_exponent=d * (p - 1), perm=perm)
    return Regime("Unsupported", perm=perm, reason="derivative regime requires p >= 1")
