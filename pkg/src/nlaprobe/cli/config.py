"""Experiment configuration: ``key=value`` text plus command-line overrides."""

from dataclasses import dataclass, field

import numpy as np

FORMAT_VERSION = "1"
# keys accepted for every experiment; everything else must be in its schema
GLOBAL_KEYS = ("experiment", "seed", "out", "plot")


class ConfigError(Exception):
    """Bad configuration; ``code`` is the process exit status."""

    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


UNKNOWN_EXPERIMENT = 2
BAD_PARAMETER = 3
UNWRITABLE_OUTPUT = 4


def parse_bool(s):
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _list_of(conv):
    def parse(s):
        if isinstance(s, (list, tuple)):
            return tuple(conv(v) for v in s)
        items = [t for t in str(s).replace(";", ",").split(",") if t.strip()]
        if not items:
            raise ValueError("empty list")
        return tuple(conv(t.strip()) for t in items)
    return parse


def _int(s):
    if isinstance(s, bool):
        raise ValueError("boolean is not an integer")
    if isinstance(s, int):
        return s
    f = float(s)
    if not f.is_integer():
        raise ValueError(f"not an integer: {s!r}")
    return int(f)


TYPES = {
    "int": _int,
    "float": float,
    "str": str,
    "bool": parse_bool,
    "ints": _list_of(_int),
    "floats": _list_of(float),
}


@dataclass(frozen=True)
class Param:
    name: str
    type: str
    default: object = None  # None means required
    help: str = ""

    @property
    def required(self):
        return self.default is None


def parse_lines(text) -> list:
    """``key=value`` pairs from config text; ``#`` starts a comment line."""
    pairs = []
    for lineno, raw in enumerate(str(text).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}", BAD_PARAMETER)
        k, v = line.split("=", 1)
        pairs.append((k.strip(), v.strip()))
    return pairs


@dataclass
class ExperimentConfig:
    """A fully resolved run: experiment name, typed parameters, seed, output dir."""

    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "."
    plot: bool = False

    @property
    def trials(self):
        return self.params.get("trials")

    def echo(self) -> list:
        """Config echo lines (without the ``#`` prefix), in a fixed order."""
        lines = [f"format_version={FORMAT_VERSION}", f"experiment={self.experiment}", f"seed={self.seed}"]
        for k in sorted(self.params):
            lines.append(f"{k}={format_value(self.params[k])}")
        return lines


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    if isinstance(v, (list, tuple)):
        return ",".join(format_value(x) for x in v)
    return str(v)


def resolve(pairs, schema, name) -> ExperimentConfig:
    """Apply ``pairs`` (last wins) over the schema defaults and type-check them."""
    params = {p.name: p.default for p in schema}
    byname = {p.name: p for p in schema}
    cfg = ExperimentConfig(name)
    for k, v in pairs:
        if k == "experiment":
            continue
        try:
            if k == "seed":
                cfg.seed = _int(v)
                if cfg.seed < 0:
                    raise ValueError("seed must be nonnegative")
            elif k == "out":
                cfg.out = str(v)
            elif k == "plot":
                cfg.plot = parse_bool(v)
            elif k in byname:
                params[k] = TYPES[byname[k].type](v)
            else:
                raise ConfigError(f"unknown key {k!r} for experiment {name!r}", BAD_PARAMETER)
        except ValueError as exc:
            raise ConfigError(f"bad value for {k!r}: {exc}", BAD_PARAMETER) from exc
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}", BAD_PARAMETER)
    cfg.params = params
    return cfg
