"""Command-line entry point: run one experiment, write CSV + manifest.

Exit codes: 0 all rows passed, 1 at least one row failed, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .experiments import (EXPERIMENTS, ConfigError, config_from_dict,
                          config_to_dict, default_config, run_experiment,
                          write_manifest, write_records_csv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlslab",
        description="Numerical experiments for the cubic dispersive model "
                    "on L^p data.")
    parser.add_argument("experiment", choices=EXPERIMENTS,
                        help="which experiment to run")
    parser.add_argument("--config", type=str, default=None,
                        help="JSON config file (defaults used when omitted)")
    parser.add_argument("--out", type=str, default="results",
                        help="output directory for CSV and manifest")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for independent parameter tuples")
    return parser


def load_config(args) -> "ExperimentConfig":
    if args.config is None:
        config = default_config(args.experiment)
    else:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data.setdefault("experiment", args.experiment)
        if data["experiment"] != args.experiment:
            raise ConfigError(
                f"config names experiment {data['experiment']!r} but the "
                f"command line asked for {args.experiment!r}")
        config = config_from_dict(data)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.threads is not None and args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        out_dir = Path(config.output_path or args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        records = run_experiment(config, threads=args.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    csv_path = out_dir / f"{config.experiment}.csv"
    write_records_csv(records, csv_path)

    manifest_path = out_dir / "manifest.json"
    runs = []
    if manifest_path.exists():
        try:
            runs = json.loads(manifest_path.read_text()).get("runs", [])
        except (json.JSONDecodeError, AttributeError):
            runs = []
    runs = [r for r in runs if r.get("experiment") != config.experiment]
    runs.append({"experiment": config.experiment,
                 "config": config_to_dict(config),
                 "seed": config.seed,
                 "csv": csv_path.name,
                 "n_records": len(records),
                 "n_failed": sum(1 for r in records if not r.passed)})
    write_manifest(manifest_path, runs)

    n_failed = sum(1 for r in records if not r.passed)
    status = "ok" if n_failed == 0 else f"{n_failed} failing"
    print(f"{config.experiment}: {len(records)} records ({status}) "
          f"-> {csv_path}")
    return 0 if n_failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
