"""Regularization study for the frozen-coefficient flow: integrate with a
sequence of mollifier radii and report the L2 distance to the eps = 0 run.

Usage: python3 scripts/epsilon_sweep.py [--n 128] [--t-end 0.05] [--eps 0.4 0.2 0.1]
"""

import argparse

import numpy as np

from fpme import (
    FieldGenerator,
    Grid,
    LinearProblem,
    RealField,
    TimeStepPolicy,
    lp_norm,
    solve_linear,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--s", type=float, default=0.75)
    ap.add_argument("--t-end", type=float, default=0.05)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.4, 0.2, 0.1])
    args = ap.parse_args()

    grid = Grid(1, args.n, 2 * np.pi)
    u0 = FieldGenerator("gaussian_bump", seed=1, amplitude=0.5, width=0.8).generate(grid)
    v = FieldGenerator("multi_bump", seed=2, amplitude=0.5, width=0.9).generate(grid)
    policy = TimeStepPolicy(dt_max=args.t_end / 200)

    def final(eps):
        problem = LinearProblem(v=v, u0=u0, s=args.s, epsilon=eps, t_end=args.t_end)
        return solve_linear(problem, policy, alpha=1.6).final

    baseline = final(0.0)
    print(f"{'epsilon':>8} {'L2 diff to eps=0':>18}")
    prev = None
    for eps in sorted(args.eps, reverse=True):
        diff = lp_norm(RealField(grid, final(eps).values - baseline.values), 2)
        marker = "" if prev is None or diff < prev else "  (not decreasing)"
        print(f"{eps:>8.3f} {diff:>18.6e}{marker}")
        prev = diff


if __name__ == "__main__":
    main()
