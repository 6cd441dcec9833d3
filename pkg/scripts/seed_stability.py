#!/usr/bin/env python3
"""Fitted-slope stability across seeds for a given preset.

Runs a preset under several seed offsets, reports per-seed slopes, the median,
and the slope of the seed-averaged error curve. Useful for choosing how many
seeds a rate comparison needs before the truncation-level sawtooth averages
out.

Usage: seed_stability.py PRESET [--seeds N] [--n-min X] [--n-max X]
"""

import argparse
from dataclasses import replace

import numpy as np

from tksgd.experiment import PRESETS, preset_config, run_experiment
from tksgd.risk import RiskCurve, fit_slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("preset", choices=sorted(PRESETS))
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--n-min", type=float, default=None)
    ap.add_argument("--n-max", type=float, default=None)
    args = ap.parse_args()

    cfg = preset_config(args.preset)
    n_min = args.n_min if args.n_min is not None else cfg.slope_n_min
    n_max = args.n_max if args.n_max is not None else cfg.n_max

    records = []
    for i in range(args.seeds):
        run = run_experiment(
            replace(cfg, seed_train=20240 + 10 * i, seed_noise=20241 + 10 * i)
        )
        records.append(run)
        slope = fit_slope(run.curve, n_min, n_max).slope
        print(f"seed offset {i}: slope {slope:+.4f}  ({run.wall_time_s:.1f}s)")

    slopes = [fit_slope(r.curve, n_min, n_max).slope for r in records]
    ns = records[0].curve.ns()
    errs = np.mean([r.curve.errs() for r in records], axis=0)
    mean_curve = RiskCurve([(int(n), float(e), 0, 0) for n, e in zip(ns, errs)])
    print(f"median slope      {np.median(slopes):+.4f}")
    print(f"mean-curve slope  {fit_slope(mean_curve, n_min, n_max).slope:+.4f}")


if __name__ == "__main__":
    main()
