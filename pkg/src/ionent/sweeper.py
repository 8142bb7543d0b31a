"""Cartesian parameter sweeps and the figure presets."""

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySeries, IonEntError, NumericalFailure, UnknownPreset
from .evolution import evolve_series
from .model import ModelParams

AXES = ("beta1", "beta2", "gamma", "theta", "phi", "zeta_ratio")
PARAM_COLUMNS = ("beta1", "beta2", "gamma", "theta", "phi", "zeta1", "zeta2")
RECORD_COLUMNS = ("negativity", "concurrence", "purity", "trace_error")
ZERO_THRESHOLD = 1e-9


@dataclass(frozen=True)
class SweepGrid:
    """Axis values to combine, the shared base parameters and the time grid.

    ``zeta_ratio`` scales ``zeta2 = zeta_ratio * zeta1``; axes left out of
    ``axes`` take the value in ``base``.
    """

    axes: dict = field(default_factory=dict)
    base: ModelParams = field(default_factory=ModelParams)
    t_max: float = 25.0
    samples: int = 501
    preset: str | None = None

    def __post_init__(self):
        for name, values in self.axes.items():
            if name not in AXES:
                raise ValueError(f"unknown sweep axis {name!r}")
            if len(values) == 0:
                raise ValueError(f"axis {name!r} is empty")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")

    @property
    def times(self):
        return np.linspace(0.0, self.t_max, self.samples)

    def points(self):
        names = [a for a in AXES if a in self.axes]
        for combo in itertools.product(*(self.axes[a] for a in names)):
            changes = dict(zip(names, (float(v) for v in combo)))
            ratio = changes.pop("zeta_ratio", None)
            if ratio is not None:
                changes["zeta2"] = ratio * self.base.zeta1
            yield self.base.with_(**changes)

    def __len__(self):
        return math.prod(len(v) for v in self.axes.values())


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    preset: str | None = None


def thread_count():
    raw = os.environ.get("ESD_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"ESD_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def _evaluate(p, times):
    try:
        records = evolve_series(p, times)
    except (IonEntError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalFailure(f"{type(exc).__name__} at {p}: {exc}") from exc
    head = tuple(getattr(p, c) for c in PARAM_COLUMNS)
    return [(r.scaled_time,) + head + (r.negativity, r.concurrence, r.purity, r.trace_error) for r in records]


def run_sweep(grid, threads=None):
    """Evaluate every grid point; rows are grid-major, time-minor."""
    times = grid.times
    points = list(grid.points())
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(points) == 1:
        blocks = [_evaluate(p, times) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda p: _evaluate(p, times), points))
    rows = [row for block in blocks for row in block]
    return SweepResult(("lambda_t",) + PARAM_COLUMNS + RECORD_COLUMNS, rows, grid.preset)


def detect_zero_intervals(series, threshold=ZERO_THRESHOLD):
    """Maximal intervals where negativity <= threshold.

    Endpoints are placed where the linear interpolant between neighbouring
    samples crosses the threshold; runs touching the ends of the series
    start/stop at the first/last sample time.
    """
    if len(series) == 0:
        raise EmptySeries("series is empty")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    t = np.array([s[0] for s in series], dtype=float)
    y = np.array([s[1] for s in series], dtype=float)
    below = y <= threshold

    def crossing(i, j):
        if y[i] == y[j]:
            return t[i]
        return t[i] + (threshold - y[i]) * (t[j] - t[i]) / (y[j] - y[i])

    out = []
    i, n = 0, len(t)
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        lo = t[0] if i == 0 else crossing(i - 1, i)
        hi = t[-1] if j == n - 1 else crossing(j, j + 1)
        out.append((float(lo), float(hi)))
        i = j + 1
    return out


def _fig1():
    return SweepGrid(
        axes={"beta1": list(np.linspace(0.0, 20.0, 41))},
        base=ModelParams(theta=0.0, gamma=0.0),
        preset="fig1",
    )


def _fig2(theta, name):
    return SweepGrid(axes={"beta1": [2.0, 5.0, 15.0]}, base=ModelParams(theta=theta, gamma=0.0), preset=name)


def _fig3():
    return SweepGrid(
        axes={"gamma": [0.01, 0.1, 0.7]},
        base=ModelParams(theta=math.pi / 2, beta1=1.0, beta2=1.0),
        preset="fig3",
    )


PRESETS = {
    "fig1": _fig1,
    "fig2a": lambda: _fig2(math.pi / 2, "fig2a"),
    "fig2b": lambda: _fig2(math.pi / 4, "fig2b"),
    "fig3": _fig3,
}


def preset_grid(name):
    try:
        return PRESETS[name]()
    except KeyError:
        raise UnknownPreset(name) from None
