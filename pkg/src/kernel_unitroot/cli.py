"""Command-line interface.

Exit codes: 0 success, 2 degenerate statistic, 3 no admissible bandwidth,
4 I/O, 5 configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from .bootstrap import BootstrapSpec, select_bandwidth
from .errors import ConfigError, OutputError, UnitRootTestError
from .experiments import (
    EXTENSIONS,
    build_config,
    data_grid,
    emit_outputs,
    read_config_file,
    render,
    run_data_analysis,
    run_power_table,
    run_size_table,
)
from .kernels import get_kernel
from .series import RngStream, parse_dgp, series_to_csv, simulate

log = logging.getLogger("kernel_unitroot")

# flags shared with the config file; None means "not given on the command line"
EXPERIMENT_FLAGS = [
    ("--T", str, "sample sizes, comma separated"),
    ("--beta", str, "alternative slopes, comma separated"),
    ("--gamma", float, None),
    ("--sigma2", float, "innovation variance"),
    ("--alpha", float, None),
    ("--h-test", str, "per-T bandwidths, e.g. 250:0.160,750:0.097"),
    ("--kernel", str, None),
    ("--B", int, "bootstrap resamples per test"),
    ("--M", int, "Monte Carlo replications"),
    ("--seed", int, None),
    ("--workers", int, None),
    ("--innovation", str, "normal or resampled"),
    ("--scheme", str, "recursive or literal"),
    ("--df-critical", str, "bootstrap or asymptotic"),
    ("--out", str, "output directory"),
]


def _add_experiment_flags(p, skip=()):
    p.add_argument("--config", help="flat key = value file; flags override it")
    for flag, typ, helptext in EXPERIMENT_FLAGS:
        if flag not in skip:
            p.add_argument(flag, type=typ, default=None, help=helptext)


def _config_from(args, **overrides):
    raw = read_config_file(args.config) if getattr(args, "config", None) else {}
    for flag, _, _ in EXPERIMENT_FLAGS:
        key = flag.lstrip("-").replace("-", "_")
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(raw)


def _write(text, out):
    if out:
        try:
            parent = os.path.dirname(out)
            if parent:
                os.makedirs(parent, exist_ok=True)
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------


def cmd_test(args):
    if args.h is not None and args.calibrate:
        raise ConfigError("give either --h or --calibrate, not both")
    config = _config_from(args)
    if not os.path.exists(args.input):
        raise OutputError(f"input file not found: {args.input}")
    report = run_data_analysis(args.input, config, h=args.h, alternative=args.alt)
    _write(render(report, args.format), args.report)
    return 0


def cmd_simulate(args):
    sigma = math.sqrt(args.sigma2)
    spec = {"rw": "rw", "linear": f"linear:beta={args.beta}", "nonlinear": f"nonlinear:beta={args.beta},gamma={args.gamma}"}
    if args.dgp != "rw" and args.beta is None:
        raise ConfigError(f"--beta is required for --dgp {args.dgp}")
    dgp = parse_dgp(spec[args.dgp], sigma)
    series = simulate(dgp, args.T, RngStream(args.seed, (3,)))
    _write(series_to_csv(series), args.out)
    return 0


def _parse_grid(text, T):
    if text is None or text == "auto":
        return data_grid(T)
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ConfigError(f"--grid must be lo:hi:n or auto, got {text!r}") from None
    if not (0 < lo <= hi and n >= 1):
        raise ConfigError(f"invalid grid {text!r}")
    return [float(h) for h in np.geomspace(lo, hi, n)]


def cmd_calibrate(args):
    sigma = math.sqrt(args.sigma2)
    null = parse_dgp(args.null, sigma)
    alt = parse_dgp(args.alt, sigma)
    spec = BootstrapSpec(
        B=args.B, M=args.M, alpha=args.alpha, master_seed=args.seed, workers=args.workers,
        innovation=args.innovation,
    )
    grid = _parse_grid(args.grid, args.T)
    h_test, curve = select_bandwidth(null, alt, args.T, get_kernel(args.kernel), grid, spec)
    if args.out:
        emit_outputs(curve, "csv", args.out)
    if args.format == "json":
        sys.stdout.write(json.dumps({"h_test": h_test, "T": args.T, "seed": args.seed,
                                     "curve": json.loads(render(curve, "json"))}, indent=2) + "\n")
    else:
        sys.stdout.write(render(curve, args.format))
        sys.stdout.write(f"h_test,{h_test!r}\n" if args.format == "csv" else f"\nh_test = {h_test:.4g}\n")
    return 0


def _emit_all(artifact, stem, out_dir, formats):
    paths = []
    for fmt in formats:
        paths.append(emit_outputs(artifact, fmt, os.path.join(out_dir, stem + EXTENSIONS[fmt])))
    return paths


def cmd_power_table(args):
    config = _config_from(args)
    if args.scale:
        config.with_scale(args.scale)
        # explicit --M/--B still win over the scale preset
        config.M = args.M or config.M
        config.B = args.B or config.B
    tables = run_power_table(config, args.alt)
    for t in tables:
        paths = _emit_all(t, f"power_T{t.T}_{t.alternative}", config.out, ("csv", "markdown", "plotdata"))
        sys.stdout.write(render(t, "markdown") + "\n")
        log.info("wrote %s", ", ".join(paths))
    return 0


def cmd_size_table(args):
    config = _config_from(args)
    table = run_size_table(config)
    _emit_all(table, "size", config.out, ("csv", "markdown", "plotdata"))
    sys.stdout.write(render(table, "markdown"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kernel-unitroot",
        description="Nonparametric kernel test of the random-walk null with bootstrap calibration.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test an observed series (CSV) for a unit root")
    p.add_argument("--input", required=True)
    p.add_argument("--h", type=float, default=None, help="fixed bandwidth")
    p.add_argument("--calibrate", action="store_true", help="choose h by the size/power search (default)")
    p.add_argument("--alt", default=None, help="alternative for calibration, e.g. linear:beta=-0.1")
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    p.add_argument("--report", default=None, help="write the report here instead of stdout")
    _add_experiment_flags(p, skip=("--T", "--beta", "--h-test", "--gamma", "--sigma2", "--out"))
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="simulate a path and write it as CSV")
    p.add_argument("--dgp", choices=["rw", "linear", "nonlinear"], default="rw")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--sigma2", type=float, default=0.05)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="size/power curve and power-maximizing bandwidth")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--null", default="rw")
    p.add_argument("--alt", required=True, help="e.g. nonlinear:beta=-0.05,gamma=0.5")
    p.add_argument("--grid", default="auto", help="lo:hi:n (geometric) or auto")
    p.add_argument("--sigma2", type=float, default=0.05)
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--B", type=int, default=99)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernel", default="uniform")
    p.add_argument("--innovation", default="normal")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    p.add_argument("--out", default=None, help="also write the curve CSV here")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("power-table", help="power of L1..L5 and L0 over beta")
    p.add_argument("--alt", choices=["linear", "nonlinear"], default="nonlinear")
    p.add_argument("--scale", choices=["desk", "full", "paper"], default=None)
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_power_table)

    p = sub.add_parser("size-table", help="size of L1..L5 and L0 under the null")
    _add_experiment_flags(p, skip=("--beta", "--gamma"))
    p.set_defaults(func=cmd_size_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UnitRootTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
