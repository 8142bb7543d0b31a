"""Compare negativity curves for small and large beta1 at theta = 0, gamma = 0.

Uses the three-level oracle and prints the quantities the acceptance check
relies on: the near-zero fraction, the first time negativity exceeds 0.1,
the late-time minimum, and the first dip time over a beta1 scan.

    python3 scripts/inspect_stark_direction.py
"""

import numpy as np

from ionent.model import ModelParams
from ionent.subspace import oracle_negativity_series


def series(beta1, times):
    return np.array([n for _, n in oracle_negativity_series(ModelParams(beta1=beta1), times)])


def first_dip(times, y):
    i = np.where((y[1:-1] < y[:-2]) & (y[1:-1] <= y[2:]))[0]
    return (float(times[i[0] + 1]), float(y[i[0] + 1])) if len(i) else (float("nan"), float("nan"))


def main():
    times = np.linspace(0.0, 25.0, 5001)
    late = times >= 12.5
    print("beta1  zero_frac  first_N>0.1  late_min  global_min(t>0)")
    for b in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        y = series(b, times)
        above = np.nonzero(y > 0.1)[0]
        rise = times[above[0]] if len(above) else float("inf")
        print(f"{b:5g}  {np.mean(y <= 1e-9):9.4f}  {rise:11.3f}  {y[late].min():8.4f}  {y[1:].min():.3e}")
    dense = np.linspace(0.0, 25.0, 25001)
    print("\nbeta1  first_dip_time  dip_value")
    for b in np.round(np.arange(0.0, 2.01, 0.1), 2):
        t, v = first_dip(dense, series(b, dense))
        print(f"{b:5.2f}  {t:14.4f}  {v:.3e}")


if __name__ == "__main__":
    main()
