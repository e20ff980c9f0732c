"""Config-driven experiments: simulate ladders, compute statistics, compare with limits.

A config is a JSON object::

    {
      "name": "lfsm",
      "kernel": {"type": "lfss", "Hs": [0.7], "beta": 1.5},
      "levy": {"type": "stable", "beta": 1.5},
      "n_ladder": [1024, 2048, 4096, 8192, 16384],
      "p_grid": [1.0, 3.0],
      "reps": 20,
      "seed": 1,
      "method": {"type": "discretized", "oversample": 4},
      "limit": {"draws": 2000, "spatial_box": 8.0},
      "outputs": {"json": "report.json", "csv": "report.csv"},
      "strict": false
    }

Replication ``r`` draws from ``stream(seed, r)``; the finest lattice is
simulated once and coarser ladder levels are block sums of the same path.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateSampleError, ParameterError
from .grids import coarsen_increments
from .kernels import classify, kernel_from_record
from .levy import levy_from_record
from .limits import (draw_limit_Z_thm1i, draw_limit_Z_thm2i, ergodic_limit,
                     sample_derivative_pv_limit)
from .rng import stream
from .simulator import ShotNoise, method_from_record, simulate_increments
from .statistics import estimate_H, power_variation

__all__ = [
    "ExperimentConfig",
    "Report",
    "run_experiment",
    "ks_distance",
    "ladder_increments",
    "REPORT_COLUMNS",
]

log = logging.getLogger("fracpv")

REPORT_COLUMNS = ("kind", "kernel", "levy", "d", "p", "regime", "n", "value", "reference",
                  "rel_error", "detail", "seed", "config_hash")


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: dict
    levy: dict
    n_ladder: tuple
    p_grid: tuple
    reps: int = 1
    seed: int = 0
    method: dict = field(default_factory=lambda: {"type": "discretized"})
    limit: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    strict: bool = False
    name: str = "experiment"
    d: int | None = None

    def __post_init__(self):
        ladder = tuple(int(n) for n in self.n_ladder)
        object.__setattr__(self, "n_ladder", ladder)
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        if not ladder:
            raise ParameterError("n_ladder must not be empty")
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ParameterError("n_ladder must be strictly increasing")
        if self.reps < 1:
            raise ParameterError("reps must be at least 1")
        if not self.p_grid or any(p <= 0 for p in self.p_grid):
            raise ParameterError("p_grid must hold positive powers")
        k = self.build_kernel()
        if self.d is not None and int(self.d) != k.d:
            raise ParameterError(f"config d={self.d} disagrees with kernel dimension {k.d}")
        object.__setattr__(self, "d", k.d)

    @classmethod
    def from_dict(cls, rec):
        rec = dict(rec)
        known = set(cls.__dataclass_fields__)
        unknown = set(rec) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**rec)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        out = asdict(self)
        out["n_ladder"] = list(self.n_ladder)
        out["p_grid"] = list(self.p_grid)
        return out

    def replace(self, **changes):
        rec = self.to_dict()
        rec.update(changes)
        return type(self).from_dict(rec)

    @property
    def config_hash(self):
        """SHA-256 of the canonical JSON (output paths excluded)."""
        rec = self.to_dict()
        rec.pop("outputs", None)
        blob = json.dumps(rec, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def build_kernel(self):
        return kernel_from_record(self.kernel)

    def build_levy(self):
        return levy_from_record(self.levy)

    def build_method(self):
        return method_from_record(self.method)


@dataclass
class Report:
    config_hash: str
    seed: int
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, **row):
        row.setdefault("seed", self.seed)
        row.setdefault("config_hash", self.config_hash)
        self.rows.append(row)
        return row

    def select(self, kind):
        return [r for r in self.rows if r.get("kind") == kind]

    def to_json(self, path=None):
        text = json.dumps({"config_hash": self.config_hash, "seed": self.seed,
                           "meta": self.meta, "rows": self.rows}, indent=2, sort_keys=True,
                          default=_json_default)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write("# fracpv report schema v1\n")
        w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: (json.dumps(v, default=_json_default) if isinstance(v, (dict, list)) else v)
                        for k, v in row.items()})
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def ks_distance(a, b):
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ParameterError("KS distance needs two non-empty samples")
    xs = np.concatenate([a, b])
    fa = np.searchsorted(a, xs, side="right") / a.size
    fb = np.searchsorted(b, xs, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ladder_increments(kernel, spec, ladder, method, rng, workers=None, strict=False):
    """Increment grids over a ladder, coarsened from one path when possible.

    Returns the list of IncrementGrid objects and the jump configuration of
    the finest level (shot noise only).
    """
    top = ladder[-1]
    if all(top % n == 0 for n in ladder):
        inc, cfg = simulate_increments(kernel, spec, top, method, rng, workers=workers,
                                       strict=strict, return_config=True)
        return [inc if n == top else coarsen_increments(inc, top // n) for n in ladder], cfg
    grids, cfg = [], None
    for n in ladder:
        inc, cfg = simulate_increments(kernel, spec, n, method, rng, workers=workers,
                                       strict=strict, return_config=True)
        grids.append(inc)
    return grids, cfg


def _one_rep(cfg, kernel, spec, method, r, workers):
    rng = stream(cfg.seed, r)
    grids, jc = ladder_increments(kernel, spec, cfg.n_ladder, method, rng, workers, cfg.strict)
    V = {p: [power_variation(g, p).V for g in grids] for p in cfg.p_grid}
    H = {}
    for p in cfg.p_grid:
        try:
            H[p] = estimate_H(grids[-1], p).H_hat
        except DegenerateSampleError:
            H[p] = math.nan
    return V, H, jc


def run_experiment(config, workers=None):
    """Run one config and collect every comparison into a Report.

    Row kinds: ``skip`` (unsupported or boundary combination), ``degenerate``,
    ``slope`` (measured log-log slope vs the predicted one), ``ergodic``
    (mean normalized V_n vs the limit constant), ``jump_law`` (KS distance to
    limit draws), ``derivative`` (same-realization gap), ``estimate`` (mean
    H_n) and ``pv`` (per-replication V_n tables).
    """
    cfg = config
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    report = Report(cfg.config_hash, cfg.seed, meta={"name": cfg.name, "config": cfg.to_dict()})
    base = {"kernel": kernel.label, "levy": spec.kind, "d": kernel.d}

    regimes = {}
    for p in cfg.p_grid:
        reg = classify(kernel, p, spec)
        if not reg.supported:
            log.info("skipping p=%g: %s (%s)", p, reg.theorem, reg.reason)
            report.add(kind="skip", p=p, regime=reg.theorem, detail=reg.reason, **base)
        else:
            regimes[p] = reg
    if not regimes:
        return report

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(lambda r: _one_rep(cfg, kernel, spec, method, r, 1), range(cfg.reps)))
    else:
        reps = [_one_rep(cfg, kernel, spec, method, r, workers) for r in range(cfg.reps)]

    ladder = np.asarray(cfg.n_ladder, dtype=float)
    n_top = cfg.n_ladder[-1]
    for p, reg in regimes.items():
        table = np.array([rep[0][p] for rep in reps])  # reps x ladder
        report.add(kind="pv", p=p, regime=reg.theorem, n=list(cfg.n_ladder), value=table.tolist(), **base)
        if np.all(table == 0):
            report.add(kind="degenerate", p=p, regime=reg.theorem, detail="all V_n(p) vanish", **base)
            continue
        predicted = -reg.rate_exponent
        if len(ladder) >= 3 and np.all(table > 0):
            slopes = [np.polyfit(np.log(ladder), np.log(row), 1)[0] for row in table]
            s = float(np.mean(slopes))
            report.add(kind="slope", p=p, regime=reg.theorem, value=s, reference=predicted,
                       rel_error=s - predicted, detail={"stderr": _stderr(slopes)}, **base)
        normalized = n_top ** reg.rate_exponent * table[:, -1]
        H_hat = np.array([rep[1][p] for rep in reps])
        report.add(kind="estimate", p=p, regime=reg.theorem, n=n_top, value=float(np.nanmean(H_hat)),
                   detail={"out_of_range": int(np.sum((H_hat <= 0) | (H_hat >= 1)))}, **base)
        if reg.theorem in ("T1ii", "T2ii"):
            lim = ergodic_limit(kernel, spec, p, rng=stream(cfg.seed, 10 ** 6))
            m = float(np.mean(normalized))
            report.add(kind="ergodic", p=p, regime=reg.theorem, n=n_top, value=m, reference=lim.m_p,
                       rel_error=m / lim.m_p - 1.0,
                       detail={"stderr": _stderr(normalized), "stable_stderr": lim.stable_stderr}, **base)
        elif reg.theorem in ("T1i", "T2i"):
            draws = int(cfg.limit.get("draws", max(cfg.reps, 200)))
            zrng = stream(cfg.seed, 10 ** 6 + 1)
            if reg.theorem == "T1i":
                Z = draw_limit_Z_thm1i(kernel, spec, p, draws, rng=zrng,
                                       jump_floor=cfg.limit.get("jump_floor"))
            else:
                Z = draw_limit_Z_thm2i(kernel, spec, p, draws, rng=zrng,
                                       spatial_box=float(cfg.limit.get("spatial_box", 8.0)),
                                       jump_floor=cfg.limit.get("jump_floor"))
            report.add(kind="jump_law", p=p, regime=reg.theorem, n=n_top, value=ks_distance(normalized, Z.values),
                       reference=float(np.mean(Z.values)),
                       detail={"mean_normalized": float(np.mean(normalized)), "remainder": Z.remainder,
                               "draws": draws}, **base)
        elif reg.theorem in ("T1iii", "T2iii") and isinstance(method, ShotNoise):
            gaps = []
            tol = float(cfg.limit.get("quad_tol", 1e-7))
            for rep, v in zip(reps, normalized):
                jc = rep[2]
                lim = sample_derivative_pv_limit(kernel, spec, p, quad_tol=tol, config=jc)
                if lim.value > 0:
                    gaps.append(v / lim.value - 1.0)
            if gaps:
                report.add(kind="derivative", p=p, regime=reg.theorem, n=n_top,
                           value=float(np.mean(np.abs(gaps))), detail={"gaps": gaps}, **base)
    return report


def _stderr(x):
    x = np.asarray(x, dtype=float)
    return float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else math.nan
