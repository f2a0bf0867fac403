"""Command-line runner: ``nlaprobe run|list|describe``.

Exit codes: 0 success, 2 unknown experiment, 3 bad parameter, 4 unwritable
output path.
"""

import argparse
import csv
import io
import os
import sys
from pathlib import Path

from .config import (
    BAD_PARAMETER,
    FORMAT_VERSION,
    UNKNOWN_EXPERIMENT,
    UNWRITABLE_OUTPUT,
    ConfigError,
    ExperimentConfig,
    format_value,
    parse_lines,
    resolve,
)
from .experiments import REGISTRY, Experiment, Table
from .output import table_csv, table_svg


def build_config(pairs, name=None) -> ExperimentConfig:
    """Resolve ``(key, value)`` pairs (last wins) into a validated config."""
    names = [v for k, v in pairs if k == "experiment"]
    name = names[-1] if names else name
    if not name:
        raise ConfigError("no experiment given", UNKNOWN_EXPERIMENT)
    if name not in REGISTRY:
        raise ConfigError(f"unknown experiment {name!r}", UNKNOWN_EXPERIMENT)
    return resolve(pairs, REGISTRY[name].params, name)


def execute(cfg: ExperimentConfig) -> Table:
    """Run an experiment and return its table; nothing is written."""
    try:
        return REGISTRY[cfg.experiment].run(cfg)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{cfg.experiment}: {exc}", BAD_PARAMETER) from exc


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run ``cfg`` and write ``<out>/<experiment>.csv`` (and ``.svg`` with plot).

    Returns a mapping of artifact kind to path.
    """
    table = execute(cfg)
    out = Path(cfg.out)
    paths = {"csv": out / f"{cfg.experiment}.csv"}
    if cfg.plot and table.plot:
        paths["svg"] = out / f"{cfg.experiment}.svg"
    texts = {"csv": table_csv(cfg, table)}
    if "svg" in paths:
        texts["svg"] = table_svg(cfg, table)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for kind, p in paths.items():
            with open(p, "w", newline="\n", encoding="utf-8") as f:
                f.write(texts[kind])
    except OSError as exc:
        raise ConfigError(f"cannot write to {out}: {exc}", UNWRITABLE_OUTPUT) from exc
    return paths


def list_experiments(machine=False) -> str:
    if machine:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "key", "type", "required", "default", "help"])
        for name in sorted(REGISTRY):
            for p in REGISTRY[name].params:
                w.writerow([name, p.name, p.type, "true" if p.required else "false",
                            "" if p.required else format_value(p.default), p.help])
        return buf.getvalue()
    lines = []
    for name in sorted(REGISTRY):
        e = REGISTRY[name]
        req = [p.name for p in e.params if p.required]
        opt = [p.name for p in e.params if not p.required]
        lines.append(f"{name}: {e.summary} | required: {','.join(req) or '-'} | optional: {','.join(opt) or '-'}")
    return "\n".join(lines) + "\n"


def describe(name) -> str:
    if name not in REGISTRY:
        raise ConfigError(f"unknown experiment {name!r}", UNKNOWN_EXPERIMENT)
    e = REGISTRY[name]
    lines = [f"{e.name}: {e.summary}", "keys (plus experiment, seed, out, plot):"]
    for p in e.params:
        d = "required" if p.required else f"default {format_value(p.default)}"
        lines.append(f"  {p.name} ({p.type}, {d}){': ' + p.help if p.help else ''}")
    return "\n".join(lines) + "\n"


def _parser():
    ap = argparse.ArgumentParser(prog="nlaprobe", description="Run numerical linear algebra experiments.")
    sub = ap.add_subparsers(dest="verb", required=True)
    r = sub.add_parser("run", help="run an experiment")
    r.add_argument("experiment", nargs="?", help="experiment name (or experiment= in the config)")
    r.add_argument("--config", help="key=value config file")
    r.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override, last wins")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", help="output directory")
    r.add_argument("--plot", action="store_true", help="also write an SVG plot")
    ls = sub.add_parser("list", help="list experiments")
    ls.add_argument("--csv", action="store_true", help="emit the parameter schema as CSV")
    d = sub.add_parser("describe", help="show an experiment's keys")
    d.add_argument("experiment")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "list":
            sys.stdout.write(list_experiments(args.csv))
            return 0
        if args.verb == "describe":
            sys.stdout.write(describe(args.experiment))
            return 0
        pairs = []
        if args.experiment:
            pairs.append(("experiment", args.experiment))
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}", BAD_PARAMETER) from exc
            pairs += parse_lines(text)
        for s in args.set:
            if "=" not in s:
                raise ConfigError(f"--set expects key=value, got {s!r}", BAD_PARAMETER)
            k, v = s.split("=", 1)
            pairs.append((k.strip(), v.strip()))
        if args.seed is not None:
            pairs.append(("seed", str(args.seed)))
        if args.out is not None:
            pairs.append(("out", args.out))
        if args.plot:
            pairs.append(("plot", "true"))
        cfg = build_config(pairs)
        paths = run_experiment(cfg)
        for p in paths.values():
            print(os.fspath(p))
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


__all__ = [
    "BAD_PARAMETER",
    "FORMAT_VERSION",
    "REGISTRY",
    "UNKNOWN_EXPERIMENT",
    "UNWRITABLE_OUTPUT",
    "ConfigError",
    "Experiment",
    "ExperimentConfig",
    "Table",
    "build_config",
    "describe",
    "execute",
    "list_experiments",
    "main",
    "run_experiment",
]
