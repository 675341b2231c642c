#!/usr/bin/env python3
"""Drift/bracket checks of the rescaled Stieltjes SDE over a beta sweep.

For each beta we evolve stationary configurations, accumulate the residual
of the predicted drift at w, and compare realized vs predicted quadratic
variation. The second stage fits how the uncorrected residual decays in n.

    python3 scripts/sde_structure_sweep.py --n 500 --replicas 50
"""

import argparse

from betaedge.ensembles import gaussian_spec
from betaedge.experiments import residual_scaling_in_n, sde_residual_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--betas", type=float, nargs="+",
                    default=[0.5, 1.0, 2.0, 4.0])
    ap.add_argument("--replicas", type=int, default=50)
    ap.add_argument("--T", type=float, default=0.5)
    ap.add_argument("--dt", type=float, default=5e-4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-scaling", action="store_true")
    args = ap.parse_args()

    for beta in args.betas:
        rep = sde_residual_check(gaussian_spec(args.n, beta), 1j,
                                 replicas=args.replicas,
                                 master_seed=args.seed, T=args.T,
                                 dt_rescaled=args.dt,
                                 include_transport_correction=True)
        s = rep.statistics
        print(f"beta={beta:4g}  residual mean "
              f"{s['residual_mean_re']:+.2e}{s['residual_mean_im']:+.2e}i "
              f"(se {s['residual_mean_se']:.2e})  qv ratio "
              f"{s['qv_ratio_re']:.3f}{s['qv_ratio_im']:+.3f}i  "
              f"{'ok' if rep.passed else 'CHECK FAILED'}")

    if not args.skip_scaling:
        rep = residual_scaling_in_n([args.n // 4, args.n // 2, args.n,
                                     2 * args.n], 2.0, 2j,
                                    replicas=max(10, args.replicas // 5),
                                    master_seed=args.seed, T=args.T)
        print("residual decay exponent in n:",
              f"{rep.statistics['decay_exponent']:.3f}")
        for k, v in rep.statistics["residual_magnitudes"].items():
            print(f"  n={k:>5}: |mean residual| = {v:.3e}")


if __name__ == "__main__":
    main()
