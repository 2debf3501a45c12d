#!/usr/bin/env python3
"""Witness sweep for the sigma_min ceiling: a tight pair plus random fillers.

Alphas stay below (M+1)^(-1/2); the fitted exponent should be lam - 1 = 1.
"""

import argparse

import numpy as np

from srmusic.harness import ExperimentConfig, run_experiment, save_records, summarize
from srmusic.torus import ClumpSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=400)
    ap.add_argument("--S", type=int, default=4)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/upper-bound-sweep")
    args = ap.parse_args()

    amax = (args.M + 1) ** -0.5
    alphas = tuple(float(a) for a in np.geomspace(amax, amax / 8.0, 6))
    config = ExperimentConfig(
        kind="upper-bound-sweep",
        clump_spec=ClumpSpec(1, (2,), alpha=alphas[0], beta=1.0, M=args.M),
        alphas=alphas,
        S=args.S,
        trials_per_cell=args.trials,
        base_seed=args.seed,
    )
    records = run_experiment(config)
    paths = save_records(records, config, args.out)
    stats = summarize(records, config)
    print(
        f"slope {stats['slope']:.3f} (expect 1), r2 {stats['r_squared']:.5f}, "
        f"fitted ceiling constant {stats['fitted_ceiling_constant']:.4f} "
        f"-> {paths['csv']}"
    )


if __name__ == "__main__":
    main()
