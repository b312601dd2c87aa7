"""Command line harness.

Subcommands: verify-brudno, verify-ar, entropy, range, simulate.  Exit
codes: 0 on success, 1 when an asserted inequality or tolerance fails
(reports are still written), 2 on configuration or resource errors.
Reports are deterministic functions of (config, seeds); the env var
FIBERLAB_MAX_CELLS > 1 runs independent grid cells in worker processes
without changing any output byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .actions import range_ratio_curve
from .coding import ArDecompositionReport, BlockCodebookFamily, ar_decomposition_check, conditional_rate
from .config import ConfigError, ExperimentConfig, load_config, load_config_file
from .driving import sample_trajectory
from .errors import ResourceLimitError
from .fiber import emit_name, exact_averaged_entropy

UNDERSHOOT_MIN_N = 1000

BRUDNO_COLUMNS = ("n", "k", "code_rate", "H_hat_over_k", "exact_h_k", "residual", "seed")
AR_COLUMNS = (
    "n",
    "k",
    "joint_rate",
    "plain_rate",
    "conditional_rate",
    "residual",
    "joint_ideal_rate",
    "plain_ideal_rate",
    "conditional_cross_rate",
    "seed",
)


def _write_rows(config: ExperimentConfig, stem: str, columns, rows) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    if config.format == "json":
        path = config.out / f"{stem}.json"
        payload = {"schema": f"fiberlab.{stem}.v1", "columns": list(columns), "rows": rows}
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
    path = config.out / f"{stem}.csv"
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(f"# fiberlab.{stem}.v1\n")
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


def _write_summary(config: ExperimentConfig, stem: str, summary: dict) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    path = config.out / f"{stem}_summary.json"
    payload = {"schema": f"fiberlab.{stem}_summary.v1", **summary}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _max_cells() -> int:
    try:
        return max(1, int(os.environ.get("FIBERLAB_MAX_CELLS", "1")))
    except ValueError:
        return 1


def _map_cells(worker, cells):
    workers = min(_max_cells(), len(cells))
    if workers <= 1 or len(cells) <= 1:
        return [worker(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, cells))


def _brudno_cell(cell):
    config, seed, k, n, exact_rate = cell
    trajectory = sample_trajectory(config.driving, n, seed)
    name = emit_name(config.fiber, trajectory, seed)
    family = BlockCodebookFamily(k, config.fiber, config.driving)
    return conditional_rate(name, family, exact=exact_rate)


def cmd_verify_brudno(config: ExperimentConfig) -> int:
    exact_by_k = {}
    for k in config.block_lengths:
        try:
            exact_by_k[k] = exact_averaged_entropy(config.fiber, config.driving, k).rate
        except ResourceLimitError:
            exact_by_k[k] = None
    cells = [
        (config, seed, k, n, exact_by_k[k])
        for n in config.horizons
        for k in config.block_lengths
        for seed in config.seeds
    ]
    reports = _map_cells(_brudno_cell, cells)
    rows = [report.to_csv_row() for report in reports]
    ok = True
    max_code_gap = 0.0
    max_cross_gap = 0.0
    for report in reports:
        ok &= report.length_bound_ok
        if report.eq15_ok is not None:
            ok &= report.eq15_ok
        if report.no_undershoot_ok is not None and report.n >= UNDERSHOOT_MIN_N:
            ok &= report.no_undershoot_ok
        if report.exact_rate is not None:
            max_code_gap = max(max_code_gap, abs(report.code_rate - report.exact_rate))
            if report.cross_entropy_rate is not None:
                max_cross_gap = max(max_cross_gap, abs(report.cross_entropy_rate - report.exact_rate))
    _write_rows(config, "brudno", BRUDNO_COLUMNS, rows)
    _write_summary(
        config,
        "brudno",
        {
            "cells": len(cells),
            "max_gap_code_vs_exact": max_code_gap,
            "max_gap_cross_vs_exact": max_cross_gap,
            "all_bounds_hold": bool(ok),
        },
    )
    print(f"verify-brudno: {len(cells)} cells, max |code - exact| = {max_code_gap:.6g}, "
          f"bounds {'hold' if ok else 'VIOLATED'}")
    return 0 if ok else 1


def _ar_cell(cell):
    config, seed, k, n = cell
    return ar_decomposition_check(config.driving, config.fiber, n, k, seed)


def cmd_verify_ar(config: ExperimentConfig) -> int:
    cells = [
        (config, seed, k, n)
        for n in config.horizons
        for k in config.block_lengths
        for seed in config.seeds
    ]
    reports = _map_cells(_ar_cell, cells)
    rows = [report.to_csv_row() for report in reports]
    worst = max((abs(r.residual) for r in reports), default=0.0)
    ok = worst <= config.tolerance
    _write_rows(config, "ar", AR_COLUMNS, rows)
    _write_summary(
        config,
        "ar",
        {"cells": len(cells), "max_abs_residual": worst, "tolerance": config.tolerance, "pass": bool(ok)},
    )
    print(f"verify-ar: {len(cells)} cells, max |residual| = {worst:.6g} "
          f"({'<=' if ok else '>'} tolerance {config.tolerance})")
    return 0 if ok else 1


def cmd_entropy(config: ExperimentConfig) -> int:
    rows = []
    for k in config.block_lengths:
        result = exact_averaged_entropy(config.fiber, config.driving, k)
        rows.append({"k": k, "H_k": result.bits, "h_k": result.rate})
    _write_rows(config, "entropy", ("k", "H_k", "h_k"), rows)
    print(f"entropy: {len(rows)} block lengths written")
    return 0


def cmd_range(config: ExperimentConfig) -> int:
    n = config.horizons[-1]
    checkpoints = [h for h in config.horizons if h >= 1] or None
    curve = range_ratio_curve(config.fiber.action_kind, config.driving, n, config.seeds, checkpoints)
    rows = [{"n": c, "mean_ratio": ratio} for c, ratio in curve]
    _write_rows(config, "range", ("n", "mean_ratio"), rows)
    print(f"range: {len(rows)} checkpoints written")
    return 0


def cmd_simulate(config: ExperimentConfig) -> int:
    n = config.horizons[-1]
    for seed in config.seeds:
        trajectory = sample_trajectory(config.driving, n, seed)
        name = emit_name(config.fiber, trajectory, seed)
        rows = [
            {
                "i": i,
                "alpha": config.driving.alphabet.symbols[int(a)],
                "omega": config.fiber.fiber_alphabet.symbols[int(w)],
            }
            for i, (a, w) in enumerate(zip(trajectory.letters, name.letters))
        ]
        _write_rows(config, f"simulate_seed{seed}", ("i", "alpha", "omega"), rows)
    print(f"simulate: {len(config.seeds)} dump(s) of {n} steps written")
    return 0


COMMANDS = {
    "verify-brudno": cmd_verify_brudno,
    "verify-ar": cmd_verify_ar,
    "entropy": cmd_entropy,
    "range": cmd_range,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fiberlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--preset", type=str, default=None,
                       help="free-monoid-uniform | z2-uniform | f2-markov")
        p.add_argument("--seed", type=int, action="append", default=None, help="repeatable")
        p.add_argument("--n", type=int, default=None, help="horizon override")
        p.add_argument("--k", type=int, default=None, help="block length override")
        p.add_argument("--out", type=str, default=None, help="report directory")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--tolerance", type=float, default=None, help="bits")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    overrides = {
        "preset": args.preset,
        "seeds": args.seed,
        "horizons": [args.n] if args.n is not None else None,
        "block_lengths": [args.k] if args.k is not None else None,
        "out": args.out,
        "format": args.format,
        "tolerance": args.tolerance,
    }
    if args.config is not None:
        return load_config_file(args.config, overrides)
    if args.preset is None:
        raise ConfigError("either --config or --preset is required")
    return load_config({}, overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ConfigError as exc:
        print(f"fiberlab: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](config)
    except (ConfigError, ResourceLimitError) as exc:
        print(f"fiberlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
