"""Command-line entry point: ``ionent {evolve,sweep,figure,selftest}``.

Configuration is a flat ``key = value`` file (``#`` starts a comment);
command-line flags override file values. Sweep axes take comma-separated
lists or ``linspace(start, stop, count)``; numbers may use ``pi``.
"""

import argparse
import ast
import math
import operator
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidParameter, NumericalFailure, UnknownPreset
from .model import ModelParams
from .sweeper import SweepGrid, preset_grid, run_sweep

EVOLVE_HEADER = ("lambda_t", "beta1", "beta2", "gamma", "theta", "phi",
                 "negativity", "concurrence", "purity", "trace_error")

AXIS_KEYS = ("beta1", "beta2", "gamma", "theta", "phi", "zeta_ratio")
SCALAR_FLOAT_KEYS = ("zeta1", "zeta2", "tmax")
INT_KEYS = ("nmax", "n0", "samples")
STR_KEYS = ("out", "preset")
KEYS = AXIS_KEYS + SCALAR_FLOAT_KEYS + INT_KEYS + STR_KEYS

DEFAULTS = {"tmax": 25.0, "samples": 501, "nmax": 6, "n0": 0}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _eval_number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval_number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    raise ValueError("not a number")


def _eval_values(node):
    if isinstance(node, ast.Tuple):
        return [v for elt in node.elts for v in _eval_values(elt)]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "linspace":
        if len(node.args) != 3 or node.keywords:
            raise ValueError("linspace takes (start, stop, count)")
        start, stop, count = (_eval_number(a) for a in node.args)
        if count != int(count) or count < 1:
            raise ValueError("linspace count must be a positive integer")
        return [float(v) for v in np.linspace(start, stop, int(count))]
    return [_eval_number(node)]


def parse_values(key, raw):
    try:
        values = _eval_values(ast.parse(raw.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ConfigError(key, f"cannot parse {raw!r} ({exc})") from None
    if not values:
        raise ConfigError(key, "no values given")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(key, "values must be finite")
    return values


@dataclass
class RunConfig:
    params: ModelParams
    axes: dict
    t_max: float = 25.0
    samples: int = 501
    out: str | None = None
    preset: str | None = None
    explicit: frozenset = field(default_factory=frozenset)

    def grid(self):
        return SweepGrid(axes=dict(self.axes), base=self.params, t_max=self.t_max,
                         samples=self.samples, preset=self.preset)


def read_config_text(text):
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        entries[key] = value
    return entries


def parse_config(text="", flags=None):
    """Merge file entries and flag values (flags win) into a validated RunConfig."""
    raw = read_config_text(text)
    raw.update({k: v for k, v in (flags or {}).items() if v is not None})
    for key in raw:
        if key not in KEYS:
            raise ConfigError(key, "unknown key")

    axes, scalars = {}, dict(DEFAULTS)
    for key, value in raw.items():
        value = str(value)
        if key in AXIS_KEYS:
            axes[key] = parse_values(key, value)
        elif key in SCALAR_FLOAT_KEYS:
            vals = parse_values(key, value)
            if len(vals) != 1:
                raise ConfigError(key, "expects a single value")
            scalars[key] = vals[0]
        elif key in INT_KEYS:
            try:
                scalars[key] = int(value)
            except ValueError:
                raise ConfigError(key, f"expects an integer, got {value!r}") from None
        else:
            scalars[key] = value

    base = {k: v[0] for k, v in axes.items() if k != "zeta_ratio"}
    zeta1 = scalars.get("zeta1", 1.0)
    zeta2 = scalars.get("zeta2", 1.0)
    if "zeta_ratio" in axes:
        zeta2 = axes["zeta_ratio"][0] * zeta1
    try:
        params = ModelParams(zeta1=zeta1, zeta2=zeta2, n_max=scalars["nmax"], n0=scalars["n0"], **base)
    except InvalidParameter as exc:
        raise ConfigError(_offending_key(str(exc)), str(exc)) from None
    for key, values in axes.items():
        for v in values:
            if key == "gamma" and v < 0:
                raise ConfigError("gamma", f"must be >= 0, got {v}")
    if not scalars["tmax"] > 0:
        raise ConfigError("tmax", "must be positive")
    if scalars["samples"] < 2:
        raise ConfigError("samples", "must be >= 2")
    return RunConfig(params, axes, float(scalars["tmax"]), int(scalars["samples"]),
                     scalars.get("out"), scalars.get("preset"), frozenset(raw))


def _offending_key(message):
    name = message.split(" ", 1)[0]
    return {"n_max": "nmax"}.get(name, name)


def _fmt(v):
    return format(float(v), ".17g")


def write_csv(stream, header, rows):
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(x if isinstance(x, str) else _fmt(x) for x in row) + "\n")


def cmd_evolve(cfg, stream):
    multi = [k for k, v in cfg.axes.items() if len(v) > 1]
    if multi:
        raise ConfigError(multi[0], "evolve takes a single value; use 'sweep' for lists")
    result = run_sweep(SweepGrid(base=cfg.params, t_max=cfg.t_max, samples=cfg.samples), threads=1)
    idx = [result.columns.index(c) for c in EVOLVE_HEADER]
    write_csv(stream, EVOLVE_HEADER, ([row[i] for i in idx] for row in result.rows))


def cmd_sweep(cfg, stream):
    result = run_sweep(cfg.grid())
    write_csv(stream, result.columns, result.rows)


def figure_grid(name, cfg):
    """Preset grid with any explicitly configured keys layered on top."""
    grid = preset_grid(name)
    changes = {}
    for key in ("beta1", "beta2", "gamma", "theta", "phi"):
        if key in cfg.explicit and key not in grid.axes:
            changes[key] = cfg.axes[key][0]
    for key, attr in (("zeta1", "zeta1"), ("zeta2", "zeta2"), ("nmax", "n_max"), ("n0", "n0")):
        if key in cfg.explicit:
            changes[attr] = getattr(cfg.params, attr)
    try:
        base = grid.base.with_(**changes)
    except InvalidParameter as exc:
        raise ConfigError(_offending_key(str(exc)), str(exc)) from None
    axes = dict(grid.axes)
    for key in grid.axes:
        if key in cfg.explicit:
            axes[key] = cfg.axes[key]
    return SweepGrid(
        axes=axes,
        base=base,
        t_max=cfg.t_max if "tmax" in cfg.explicit else grid.t_max,
        samples=cfg.samples if "samples" in cfg.explicit else grid.samples,
        preset=name,
    )


def cmd_figure(name, cfg, stream):
    result = run_sweep(figure_grid(name, cfg))
    write_csv(stream, ("preset",) + result.columns, ((name,) + tuple(r) for r in result.rows))


def cmd_selftest(stream, tolerance=None):
    from .selftest import run_selftest

    results = run_selftest(tolerance=tolerance)
    for r in results:
        stream.write(r.line() + "\n")
    ok = all(r.passed for r in results)
    stream.write(("selftest passed" if ok else "selftest FAILED") + "\n")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="ionent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_options(p):
        p.add_argument("--config", help="key = value configuration file")
        for key in KEYS:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None, metavar="VALUE")

    add_run_options(sub.add_parser("evolve", help="single trajectory as CSV"))
    add_run_options(sub.add_parser("sweep", help="Cartesian parameter sweep as CSV"))
    fig = sub.add_parser("figure", help="figure preset as CSV (fig1, fig2a, fig2b, fig3)")
    fig.add_argument("name", nargs="?", help="preset name (or --preset)")
    add_run_options(fig)
    st = sub.add_parser("selftest", help="run the cross-oracle checks")
    st.add_argument("--tolerance", type=float, default=None, help="override every check tolerance")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return cmd_selftest(sys.stdout, args.tolerance)

    try:
        text = ""
        if args.config:
            with open(args.config) as fh:
                text = fh.read()
        flags = {k: getattr(args, k) for k in KEYS}
        cfg = parse_config(text, flags)
        stream = open(cfg.out, "w", newline="\n") if cfg.out else sys.stdout
        try:
            if args.command == "evolve":
                cmd_evolve(cfg, stream)
            elif args.command == "sweep":
                cmd_sweep(cfg, stream)
            else:
                name = args.name or cfg.preset
                if name is None:
                    raise ConfigError("preset", "figure needs a preset name")
                cmd_figure(name, cfg, stream)
        finally:
            if stream is not sys.stdout:
                stream.close()
    except (ConfigError, UnknownPreset, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
