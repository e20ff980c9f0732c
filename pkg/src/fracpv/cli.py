"""Command line interface: ``fracpv {simulate,pv,estimate,limit,verify,bench}``.

Exit codes: 0 success, 2 regime or validation error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from .errors import FracPVError, ParameterError
from .harness import ExperimentConfig, run_experiment
from .kernels import classify
from .limits import draw_limit_Z_thm1i, draw_limit_Z_thm2i, ergodic_limit
from .rng import stream
from .simulator import (direct_increment_field, draw_lattice,
                        fft_increment_field, simulate_grid, simulate_increments)
from .statistics import csv_rows, estimate_H, power_variation

log = logging.getLogger("fracpv")


def _load(args):
    if args.config is None:
        raise ParameterError("--config is required for this command")
    cfg = ExperimentConfig.load(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.strict:
        changes["strict"] = True
    return cfg.replace(**changes) if changes else cfg


def _emit(text, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_simulate(args):
    cfg = _load(args)
    n = args.n or cfg.n_ladder[-1]
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    rng = stream(cfg.seed, args.rep)
    if args.increments:
        grid = simulate_increments(kernel, spec, n, method, rng, workers=args.threads, strict=cfg.strict)
    else:
        grid = simulate_grid(kernel, spec, n, method, rng, workers=args.threads, strict=cfg.strict)
    grid.meta.update(seed=cfg.seed, rep=args.rep, config_hash=cfg.config_hash)
    out = args.out or "field.grid"
    if out.endswith(".csv"):
        grid.to_csv(out)
    else:
        grid.save(out)
    log.info("wrote %s", out)


def _ladder_rows(cfg, threads):
    from .harness import ladder_increments
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    rows = []
    for r in range(cfg.reps):
        grids, _ = ladder_increments(kernel, spec, cfg.n_ladder, method, stream(cfg.seed, r), threads, cfg.strict)
        for p in cfg.p_grid:
            for g in grids:
                V = power_variation(g, p).V
                est = estimate_H(g, p) if V > 0 else None
                rows.append({"kernel": kernel.label, "levy": spec.kind, "d": kernel.d, "n": g.n, "p": p,
                             "V": V, "S_n": float(np.log(V) / np.log(g.n)) if V > 0 else "",
                             "R_n": est.R_n if est else "", "H_hat": est.H_hat if est else "",
                             "seed": f"{cfg.seed}:{r}"})
    return rows


def cmd_pv(args):
    cfg = _load(args)
    _emit(csv_rows(_ladder_rows(cfg, args.threads)), args.out)


def cmd_estimate(args):
    cfg = _load(args)
    kernel, spec, method = cfg.build_kernel(), cfg.build_levy(), cfg.build_method()
    n = cfg.n_ladder[-1]
    out = []
    for r in range(cfg.reps):
        inc = simulate_increments(kernel, spec, n, method, stream(cfg.seed, r), workers=args.threads,
                                  strict=cfg.strict)
        for p in cfg.p_grid:
            row = {"rep": r, "n": n, "p": p, "H_hat": estimate_H(inc, p).H_hat}
            if n <= 64:
                row["H_hat_mean_convention"] = estimate_H(inc, p, convention="mean").H_hat
            out.append(row)
    _emit(json.dumps({"config_hash": cfg.config_hash, "seed": cfg.seed, "rows": out}, indent=2), args.out)


def cmd_limit(args):
    cfg = _load(args)
    kernel, spec = cfg.build_kernel(), cfg.build_levy()
    rows = []
    for p in cfg.p_grid:
        reg = classify(kernel, p, spec)
        row = {"p": p, "regime": reg.to_record()}
        if reg.theorem in ("T1ii", "T2ii"):
            lim = ergodic_limit(kernel, spec, p, rng=stream(cfg.seed, 10 ** 6))
            row.update(m_p=lim.m_p, stable_moment=lim.stable_moment, stable_stderr=lim.stable_stderr,
                       increment_integrals=list(lim.increment_integrals),
                       derivative_integrals=list(lim.derivative_integrals))
        elif reg.theorem in ("T1i", "T2i"):
            draws = int(cfg.limit.get("draws", 1000))
            rng = stream(cfg.seed, 10 ** 6 + 1)
            if reg.theorem == "T1i":
                Z = draw_limit_Z_thm1i(kernel, spec, p, draws, rng=rng)
            else:
                Z = draw_limit_Z_thm2i(kernel, spec, p, draws, rng=rng,
                                       spatial_box=float(cfg.limit.get("spatial_box", 8.0)))
            row.update(draws=draws, mean=float(np.mean(Z.values)),
                       quantiles=np.quantile(Z.values, [0.1, 0.25, 0.5, 0.75, 0.9]).tolist(),
                       remainder=Z.remainder)
        rows.append(row)
    _emit(json.dumps({"config_hash": cfg.config_hash, "rows": rows}, indent=2, default=float), args.out)


def cmd_verify(args):
    if args.acceptance:
        from .acceptance import run_all
        only = args.only.split(",") if args.only else None
        results = run_all(only=only)
        for res in results:
            print(res.line())
        _emit(json.dumps([res.to_record() for res in results], indent=2, default=float), args.out)
        return 0 if all(r.passed for r in results) else 1
    cfg = _load(args)
    report = run_experiment(cfg, workers=args.threads)
    out = args.out or cfg.outputs.get("json")
    _emit(report.to_json(), out)
    if cfg.outputs.get("csv"):
        report.to_csv(cfg.outputs["csv"])
    return 0


def cmd_bench(args):
    cfg = _load(args) if args.config else None
    from .kernels import MAFSF
    from .levy import SymmetricStable
    kernel = cfg.build_kernel() if cfg else MAFSF(0.7, 1.5, 1)
    spec = cfg.build_levy() if cfg else SymmetricStable(1.5)
    rows = []
    for n in args.sizes:
        lat = draw_lattice(kernel.d, n, 1, 0.25, spec, stream(0, n))
        t0 = time.perf_counter()
        fft_increment_field(kernel, spec, n, lattice=lat, workers=args.threads)
        t_fft = time.perf_counter() - t0
        row = {"n": n, "points": n ** kernel.d, "fft_seconds": t_fft}
        if n ** kernel.d <= args.direct_limit:
            t0 = time.perf_counter()
            direct_increment_field(kernel, lat)
            row["direct_seconds"] = time.perf_counter() - t0
            row["speedup"] = row["direct_seconds"] / t_fft
        rows.append(row)
    _emit(json.dumps(rows, indent=2), args.out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (JSON)")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (never changes values)")
    common.add_argument("--strict", action="store_true", help="escalate truncation warnings to errors")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fracpv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate one field or increment grid")
    p.add_argument("--n", type=int, default=None, help="grid size (default: top of the ladder)")
    p.add_argument("--rep", type=int, default=0, help="replication index")
    p.add_argument("--increments", action="store_true", help="write increments instead of the field")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pv", parents=[common], help="power variations over the ladder (CSV)")
    p.set_defaults(func=cmd_pv)

    p = sub.add_parser("estimate", parents=[common], help="change-of-frequency estimates of H")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("limit", parents=[common], help="limit constants and limit-law summaries")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("verify", parents=[common], help="run an experiment or the acceptance suite")
    p.add_argument("--acceptance", action="store_true", help="run the bundled acceptance criteria")
    p.add_argument("--only", default=None, help="comma separated criterion ids, e.g. C1,C3")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="time the FFT and direct synthesis routes")
    p.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    p.add_argument("--direct-limit", type=int, default=2 ** 14)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code = args.func(args)
    except FracPVError as exc:
        print(f"fracpv: error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    except OSError as exc:
        print(f"fracpv: I/O error: {exc}", file=sys.stderr)
        return 1
    return int(code or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
