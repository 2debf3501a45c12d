#!/usr/bin/env python3
"""Sweep sigma_min over the spacing factor for single clumps of size 2..4.

Writes one CSV per clump size under the output directory and prints the
fitted log-log slopes, which track lam - 1.
"""

import argparse

from srmusic.harness import ExperimentConfig, run_experiment, save_records, summarize
from srmusic.torus import ClumpSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=1000)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/sigma-min-sweeps")
    args = ap.parse_args()

    alphas_for = {
        2: (0.5, 0.35, 0.25, 0.18, 0.12, 0.08),
        3: (0.45, 0.35, 0.25, 0.18, 0.12, 0.08),
        4: (0.3, 0.25, 0.2, 0.15, 0.12, 0.08),
    }
    for lam, alphas in alphas_for.items():
        config = ExperimentConfig(
            kind="sigma-min-sweep",
            clump_spec=ClumpSpec(1, (lam,), alpha=alphas[0], beta=1.0, M=args.M),
            alphas=alphas,
            trials_per_cell=args.trials,
            base_seed=args.seed,
        )
        records = run_experiment(config)
        paths = save_records(records, config, args.out)
        stats = summarize(records, config)
        print(
            f"lam={lam}: slope {stats['slope']:.3f} "
            f"(expect {stats['expected_slope']}), r2 {stats['r_squared']:.5f} "
            f"-> {paths['csv']}"
        )


if __name__ == "__main__":
    main()
