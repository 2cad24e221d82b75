"""Command-line entry point.

    fpme <mode> --config <path> [--set key=value]...

Modes: linear, picard, sweep_epsilon, properties.  Exit codes: 0 ok,
2 validation problem, 3 Picard failed to converge, 4 solution blew up,
5 a property check failed.  FPME_THREADS bounds the worker pool used by
sweep_epsilon and properties; results are collected in submission order,
so the thread count never changes the output bytes.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import MODES, RunSpec, parse_config
from .diagnostics import run_property_suite
from .errors import BlowUp, FpmeError, NoConvergence, ParseError, ValidationError
from .grid import RealField
from .linear import LinearProblem, TimeStepPolicy, solve_linear
from .norms import lp_norm
from .picard import PicardConfig, run_picard
from .reporting import (
    format_float,
    write_manifest,
    write_picard_summary_csv,
    write_property_report_csv,
    write_records_csv,
    write_sweep_summary_csv,
)
from .snapshots import write_snapshot

__all__ = ["main", "execute"]


def _pool_size(n_tasks: int) -> int:
    env = os.environ.get("FPME_THREADS", "").strip()
    if env:
        try:
            requested = int(env)
        except ValueError:
            raise ValidationError(f"FPME_THREADS must be an integer, got {env!r}")
        if requested < 1:
            raise ValidationError(f"FPME_THREADS must be >= 1, got {requested}")
    else:
        requested = min(4, os.cpu_count() or 1)
    return max(1, min(requested, n_tasks))


def _dt_max(spec: RunSpec) -> float:
    if spec.dt_max is not None:
        return spec.dt_max
    return spec.t_end / spec.samples


def _write_field_snapshots(out: Path, snapshots) -> None:
    for idx, (t, fld) in enumerate(snapshots):
        write_snapshot(out / f"snapshot_{idx:03d}.fpm1", fld, t)


def _linear_solution(spec: RunSpec, epsilon: float, snapshot_times=()):
    g = spec.grid
    u0 = spec.initial.generate(g)
    v = spec.coefficient.generate(g)
    problem = LinearProblem(v=v, u0=u0, s=spec.s, epsilon=epsilon, t_end=spec.t_end)
    policy = TimeStepPolicy(dt_max=_dt_max(spec), safety=spec.safety)
    return solve_linear(
        problem, policy, spec.alpha, spec.sample_every, snapshot_times
    )


def _run_linear(spec: RunSpec, config_text: str) -> int:
    out = Path(spec.output_dir)
    write_manifest(out, config_text, spec.echo, {"mode": "linear"})
    sol = _linear_solution(spec, spec.epsilon, spec.snapshot_times)
    write_records_csv(sol.records, out / "diagnostics.csv")
    write_snapshot(out / "final.fpm1", sol.final, spec.t_end)
    _write_field_snapshots(out, sol.snapshots)
    last = sol.records[-1]
    print(f"linear: t={format_float(last.t)} l2={format_float(last.l2)} "
          f"min_u={format_float(last.min_u)}")
    return 0


def _run_picard(spec: RunSpec, config_text: str) -> int:
    out = Path(spec.output_dir)
    write_manifest(out, config_text, spec.echo, {"mode": "picard"})
    u0 = spec.initial.generate(spec.grid)
    config = PicardConfig(
        s=spec.s,
        alpha=spec.alpha,
        epsilon_moll=spec.epsilon,
        c_gronwall=spec.c_gronwall,
        tol_picard=spec.tol_picard,
        max_outer=spec.max_outer,
        t0_override=spec.t0_override,
        samples=spec.samples,
        safety=spec.safety,
        mollify_initial=spec.mollify_initial,
    )
    result = run_picard(u0, config)
    state = result.state
    write_picard_summary_csv(
        state.sup_halpha, state.deltas, state.c_meas, state.min_u, out / "iterates.csv"
    )
    write_records_csv(result.records, out / "diagnostics.csv")
    write_snapshot(out / "final.fpm1", result.trajectory[-1], result.horizon)
    snaps = []
    for ts in sorted(set(spec.snapshot_times)):
        if ts > result.horizon:
            continue
        idx = int(np.argmin(np.abs(result.times - ts)))
        snaps.append((float(result.times[idx]), result.trajectory[idx]))
    _write_field_snapshots(out, snaps)
    n_iter = len(state.sup_halpha)
    print(f"picard: converged in {n_iter} iterates, horizon={format_float(result.horizon)} "
          f"delta={format_float(state.deltas[-1]) if state.deltas else '0.0'}")
    return 0


def _run_sweep(spec: RunSpec, config_text: str) -> int:
    out = Path(spec.output_dir)
    write_manifest(out, config_text, spec.echo, {"mode": "sweep_epsilon"})
    eps_list = sorted(set(spec.epsilons), reverse=True)
    jobs = eps_list + [0.0]

    def one(eps: float):
        sol = _linear_solution(spec, eps)
        sub = out / f"eps_{format_float(eps)}"
        write_records_csv(sol.records, sub / "diagnostics.csv")
        write_snapshot(sub / "final.fpm1", sol.final, spec.t_end)
        return sol.final

    with ThreadPoolExecutor(max_workers=_pool_size(len(jobs))) as pool:
        finals = list(pool.map(one, jobs))

    baseline = finals[-1]
    entries = []
    for eps, final in zip(eps_list, finals[:-1]):
        diff = lp_norm(
            RealField(spec.grid, final.values - baseline.values), 2
        )
        entries.append((eps, diff))
    write_sweep_summary_csv(entries, out / "summary.csv")
    for eps, diff in entries:
        print(f"sweep_epsilon: eps={format_float(eps)} l2_diff={format_float(diff)}")
    return 0


def _run_properties(spec: RunSpec, config_text: str) -> int:
    out = Path(spec.output_dir)
    write_manifest(out, config_text, spec.echo, {"mode": "properties"})
    with ThreadPoolExecutor(max_workers=_pool_size(8)) as pool:
        rows, ok = run_property_suite(
            spec.grid,
            seed=spec.properties_seed,
            count=spec.properties_count,
            map_fn=pool.map,
        )
    write_property_report_csv(rows, out / "report.csv")
    n_fail = sum(1 for r in rows if not r[3])
    print(f"properties: {len(rows)} checks, {n_fail} failed")
    return 0 if ok else 5


_RUNNERS = {
    "linear": _run_linear,
    "picard": _run_picard,
    "sweep_epsilon": _run_sweep,
    "properties": _run_properties,
}


def execute(spec: RunSpec, config_text: str = "") -> int:
    try:
        return _RUNNERS[spec.mode](spec, config_text)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BlowUp as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (FpmeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fpme", description="Spectral tooling for a nonlocal porous medium flow."
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="path to a key=value config file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )
    args = parser.parse_args(argv)

    try:
        config_text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            print(f"error: --set needs KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()

    try:
        spec = parse_config(config_text, mode=args.mode, overrides=overrides)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    return execute(spec, config_text)


if __name__ == "__main__":
    sys.exit(main())
