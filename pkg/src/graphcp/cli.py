"""Command line front end.

Exit codes: 0 success, 1 bad configuration, 2 bad or missing data,
3 every cell failed during training.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .experiments import (
    ConfigError,
    dump_json,
    emit_outputs,
    load_config,
    read_results_csv,
    run_experiment,
    sanitize_json,
    sweep_report,
)
from .graph import BundleError, load_bundle

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_ALL_FAILED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphcp",
        description="Conformal prediction experiments on graph networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment described by a JSON config")
    run.add_argument("--config", required=True, help="path to the experiment JSON")
    run.add_argument("--out", required=True, help="output directory for artifacts")
    run.add_argument("--seed", type=int, default=None,
                     help="override the config's base seed")
    run.add_argument("--parallel", type=int, default=1,
                     help="worker processes for independent cells")

    rep = sub.add_parser("sweep-report",
                         help="recompute the summary from a results.csv")
    rep.add_argument("--in", dest="indir", required=True,
                     help="directory holding results.csv")
    rep.add_argument("--out", default=None,
                     help="write the report here instead of stdout only")

    chk = sub.add_parser("convert-check", help="validate a dataset bundle directory")
    chk.add_argument("--bundle", required=True, help="bundle directory to inspect")
    return parser


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        if args.parallel < 1:
            raise ConfigError("--parallel must be >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run_experiment(config, parallel=args.parallel)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BundleError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    paths = emit_outputs(table, args.out)
    for failure in table.failures:
        print(f"cell {failure.label} failed: {failure.error}", file=sys.stderr)
    print(f"wrote {len(paths)} files to {Path(args.out)}")
    print(f"trials: {len(table.rows)}, failed cells: {len(table.failures)}")
    if not table.rows and table.failures:
        return EXIT_ALL_FAILED
    return EXIT_OK


def _cmd_sweep_report(args) -> int:
    try:
        rows = read_results_csv(Path(args.indir) / "results.csv")
    except BundleError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    report = sweep_report(rows)
    text = json.dumps(sanitize_json(report), sort_keys=True, indent=2)
    print(text)
    if args.out is not None:
        dump_json(report, args.out)
    return EXIT_OK


def _cmd_convert_check(args) -> int:
    try:
        bundle = load_bundle(args.bundle)
        bundle.validate()
    except BundleError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    info = {
        "name": bundle.name,
        "task": bundle.task,
        "num_nodes": bundle.num_nodes,
        "num_edges": int(bundle.edges.shape[0]),
        "feature_dim": bundle.feature_dim,
        "num_classes": bundle.num_classes,
        "num_items": bundle.num_items,
    }
    if bundle.graph_ids is not None:
        info["num_graphs"] = bundle.num_graphs
    print(json.dumps(info, sort_keys=True, indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "sweep-report":
        return _cmd_sweep_report(args)
    if args.command == "convert-check":
        return _cmd_convert_check(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
