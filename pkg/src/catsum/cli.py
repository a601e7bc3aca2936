"""Command-line interface.

Subcommands: ``sweep-kappa``, ``sweep-delta``, ``report``, ``validate``.
Exit code 0 on success; on failure a single machine-readable JSON line is
written to stderr and the exit code is nonzero (2 for configuration errors,
1 for runtime failures).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import experiments
from .dynamics import IntegrationError
from .experiments import (
    ConfigError,
    DELTA_COLUMNS,
    KAPPA_COLUMNS,
    load_config,
    report_scalars,
    sweep_delta,
    sweep_kappa,
    validate_setup,
    write_csv,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=None, help="output path (overrides the config)")
        p.add_argument("--mode", default=None, help="evolution model override")
        p.add_argument("--cutoff", type=int, default=None, help="Fock cutoff override")
        p.add_argument("--dt-scale", type=float, default=None, help="time-step scale factor")
        p.add_argument("--fast", action="store_true", help="use the rotating-wave model")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep points")

    add_common(sub.add_parser("sweep-kappa", help="fidelity vs cavity decay time per T"))
    add_common(sub.add_parser("sweep-delta", help="fidelity vs preparation error per kappa_inv"))

    rep = sub.add_parser("report", help="derived device scalars")
    rep.add_argument("--config", required=True)
    rep.add_argument("--out", default=None, help="also write the report to this file")

    val = sub.add_parser("validate", help="run the configuration invariant suite")
    val.add_argument("--config", required=True)
    return parser


def _apply_overrides(cfg, args):
    if getattr(args, "mode", None):
        cfg = replace(cfg, mode=args.mode)
    if getattr(args, "cutoff", None):
        cfg = replace(cfg, fock_cutoff=args.cutoff)
    if getattr(args, "dt_scale", None):
        cfg = replace(cfg, dt_scale=args.dt_scale)
    if getattr(args, "out", None):
        cfg = replace(cfg, output_path=args.out)
    return cfg.validate()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command in ("sweep-kappa", "sweep-delta"):
            cfg = _apply_overrides(cfg, args)
            if args.command == "sweep-kappa":
                rows = sweep_kappa(cfg, jobs=args.jobs, fast=args.fast)
                write_csv(rows, KAPPA_COLUMNS, cfg.output_path)
            else:
                rows = sweep_delta(cfg, jobs=args.jobs, fast=args.fast)
                write_csv(rows, DELTA_COLUMNS, cfg.output_path)
            elapsed = sum(r["runtime_s"] for r in rows)
            print(f"wrote {len(rows)} records to {cfg.output_path} ({elapsed:.1f}s of solver time)")
        elif args.command == "report":
            text = report_scalars(cfg)
            print(text)
            if args.out:
                with open(args.out, "w", newline="\n") as fh:
                    fh.write(text + "\n")
        elif args.command == "validate":
            checks = validate_setup(cfg)
            for name, value in checks.items():
                print(f"{name}: {value:.6g}")
            print("configuration valid")
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except (IntegrationError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
