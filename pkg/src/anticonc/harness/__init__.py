"""Command-line experiment harness.

``anticonc <command> [--config FILE] [--seed N] [--out DIR] [--KEY VALUE ...]``
writes ``report.csv``, ``summary.json`` and (for curve-producing commands)
``plot.dat`` into the output directory.

Exit status: 0 success, 2 invalid configuration, 3 capacity exceeded,
4 output directory not writable.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import time

from .. import __version__
from ..errors import ArgumentError, CapacityError
from .commands import RUNNERS, Result
from .config import COMMANDS, KEYS, ConfigError, ExperimentConfig, parse_config

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "run", "main", "format_value"]

NA = "NA"
EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_OUTPUT = 0, 2, 3, 4


def format_value(v):
    """CSV cell: 17 significant digits for reals, NA for missing values."""
    if v is None:
        return NA
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) or hasattr(v, "dtype"):
        v = float(v)
        if math.isnan(v):
            return NA
        return f"{v:.17g}"
    return str(v)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def render_csv(result):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_plot(result, echo):
    lines = [f"# {json.dumps(echo, sort_keys=True)}", "# " + " ".join(result.plot_columns)]
    lines += [" ".join(format_value(v) for v in row) for row in result.plot_rows]
    return "\n".join(lines) + "\n"


def execute(cfg):
    """Run a validated config in memory; returns (Result, wall seconds)."""
    start = time.perf_counter()
    result = RUNNERS[cfg.command](cfg)
    return result, time.perf_counter() - start


def run(cfg):
    """Execute ``cfg`` and write its output files; returns an exit status."""
    try:
        os.makedirs(cfg.output, exist_ok=True)
        if not os.access(cfg.output, os.W_OK):
            raise PermissionError(cfg.output)
    except OSError as exc:
        print(f"error: output directory not writable: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    try:
        result, wall = execute(cfg)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    echo = cfg.echo()
    summary = {"config": echo, "version": __version__, "wall_time_s": wall,
               "rows": len(result.rows), "columns": result.columns, "summary": result.summary}
    try:
        with open(os.path.join(cfg.output, "report.csv"), "w", newline="") as fh:
            fh.write(render_csv(result))
        with open(os.path.join(cfg.output, "summary.json"), "w") as fh:
            json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
            fh.write("\n")
        if result.plot_columns:
            with open(os.path.join(cfg.output, "plot.dat"), "w") as fh:
                fh.write(render_plot(result, echo))
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="anticonc", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config; keys match the flag names")
    for key, (_, default, _, help_) in KEYS.items():
        flag = "--" + key.replace("_", "-")
        names = [flag] if flag == "--" + key else [flag, "--" + key]
        parser.add_argument(*names, dest=key, default=None,
                            help=f"{help_} (default {default})" if default is not None else help_)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    text = None
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        cfg = parse_config(text, args.command, flags)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)
