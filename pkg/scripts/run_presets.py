"""Write every figure preset to CSV and summarise its zero-negativity intervals.

    python3 scripts/run_presets.py [outdir]
"""

import sys
from pathlib import Path

from ionent import cli
from ionent.sweeper import PRESETS, detect_zero_intervals, preset_grid, run_sweep


def summarise(name):
    result = run_sweep(preset_grid(name))
    cols = result.columns
    t, n = cols.index("lambda_t"), cols.index("negativity")
    keys = [cols.index(c) for c in ("beta1", "beta2", "gamma", "theta")]
    curves = {}
    for row in result.rows:
        curves.setdefault(tuple(row[k] for k in keys), []).append((row[t], row[n]))
    for key, series in curves.items():
        zeros = detect_zero_intervals(series)
        widest = max((hi - lo for lo, hi in zeros), default=0.0)
        mean = sum(v for _, v in series) / len(series)
        label = " ".join(f"{c}={v:.4g}" for c, v in zip(("beta1", "beta2", "gamma", "theta"), key))
        print(f"  {label}: mean N {mean:.4f}, max N {max(v for _, v in series):.4f}, "
              f"{len(zeros)} zero interval(s), widest {widest:.3g}")


def main(outdir="preset_csv"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(PRESETS):
        path = out / f"{name}.csv"
        code = cli.main(["figure", name, "--out", str(path)])
        if code:
            return code
        print(f"{name} -> {path}")
        summarise(name)
    return 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
