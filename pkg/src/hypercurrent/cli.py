"""Command-line interface.

    hypercurrent sweep CONFIG   [--format csv|json] [--out FILE]
    hypercurrent verify CONFIG  [--grid-nodes N] [--seed N]
    hypercurrent point CONFIG   [--at VALUE]
    hypercurrent preset fig2a|fig2b [--points N] [--out FILE]

CONFIG is a TOML file or the name of a compiled-in preset. Exit codes:
0 success, 1 configuration error, 2 quadrature convergence failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import __version__
from .config import PRESETS, load_config, preset
from .errors import ConfigError, ConvergenceError, DomainError
from .sweep import (OrderingViolation, _jsonable, format_csv, format_json,
                    point_report, run_sweep, verify)

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3

log = logging.getLogger("hypercurrent")


def _with_overrides(config, args):
    if getattr(args, "rel_tol", None) is not None:
        try:
            quad = config.quadrature.replace(rel_tol=args.rel_tol)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        config = replace(config, quadrature=quad)
    return config


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sweep_output(config, args):
    columns, rows = run_sweep(config)
    if args.format == "json":
        return format_json(columns, rows, config)
    return format_csv(columns, rows)


def cmd_sweep(args):
    config = _with_overrides(load_config(args.config), args)
    _emit(_sweep_output(config, args), args.out)
    return EXIT_OK


def cmd_preset(args):
    if args.points is not None and args.points < 2:
        raise ConfigError("--points must be >= 2")
    config = _with_overrides(preset(args.name, args.points), args)
    _emit(_sweep_output(config, args), args.out)
    return EXIT_OK


def _parse_tamper(items):
    tamper = {}
    for item in items or ():
        name, _, offset = item.partition(":")
        try:
            tamper[name] = float(offset)
        except ValueError:
            raise ConfigError(f"bad --inject-fault {item!r}; use CHECK:OFFSET")
    return tamper


def cmd_verify(args):
    config = _with_overrides(load_config(args.config), args)
    report = verify(config, grid_nodes=args.grid_nodes, seed=args.seed,
                    tamper=_parse_tamper(args.inject_fault))
    if args.format == "json" or args.out:
        _emit(json.dumps(_jsonable(report), indent=2) + "\n", args.out)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        worst = check["worst"] if check["worst"] is not None else float("nan")
        if check["kind"] == "min":
            what = f"min slack={worst:.3e} (>= -{check['tolerance']:.1e})"
        else:
            what = f"max error={worst:.3e} (<= {check['tolerance']:.1e})"
        log.info("%s %-22s %s points=%d", status, check["name"], what,
                 check["points_checked"])
    if not report["passed"]:
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        log.error("verification failed: %s", ", ".join(failed))
        if args.format != "json" and not args.out:
            json.dump(_jsonable({"passed": False, "failed_checks": failed,
                                 "checks": [c for c in report["checks"]
                                            if not c["passed"]]}),
                      sys.stdout, indent=2)
            sys.stdout.write("\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_point(args):
    config = _with_overrides(load_config(args.config), args)
    if args.at is None and config.sweep is not None:
        raise ConfigError("config has a [sweep] table; choose a point with --at")
    if args.at is not None and config.sweep is None:
        raise ConfigError("--at needs a config with a [sweep] table")
    try:
        report = point_report(config, args.at)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(json.dumps(_jsonable(report), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--rel-tol", type=float, default=None,
                        help="quadrature relative tolerance override")
    common.add_argument("--grid-nodes", type=int, default=None,
                        help="grid-oracle resolution (verify)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for random dominance weights (verify)")
    common.add_argument("--out", default=None, help="write output to FILE")
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="hypercurrent",
        description="SNR bounds for Landauer-Buttiker thermoelectric currents")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common],
                       help="check the SNR bounds along a sweep")
    p.add_argument("config")
    p.add_argument("--inject-fault", action="append", metavar="CHECK:OFFSET",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("point", parents=[common],
                       help="full diagnostic record at one point (JSON)")
    p.add_argument("config")
    p.add_argument("--at", type=float, default=None,
                   help="sweep value at which to evaluate")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("preset", parents=[common],
                       help="run a compiled-in sweep")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--points", type=int, default=None)
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        log.error("convergence failure: %s", exc)
        return EXIT_CONVERGENCE
    except OrderingViolation as exc:
        log.error("ordering violated: %s", exc)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
