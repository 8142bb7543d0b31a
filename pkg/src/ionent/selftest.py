"""Cross-oracle checks run by ``ionent selftest``."""

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import negativity, xstate_matrix, xstate_negativity
from .evolution import Propagator, evolve_series, evolve_states, kraus_trajectory
from .hilbert import partial_trace_fock
from .model import ModelParams, build_effective_hamiltonian, initial_density
from .numerics import frobenius_distance
from .subspace import analytic_negativity, oracle_negativity_series
from .sweeper import detect_zero_intervals


@dataclass
class CheckResult:
    name: str
    tolerance: float
    observed: float
    passed: bool
    note: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        tail = f"  {self.note}" if self.note else ""
        return f"{status}  {self.name:<28} tol={self.tolerance:.1e}  observed={self.observed:.3e}{tail}"


def _grid(beta1s=(0.0, 1.0, 20.0), gammas=(0.0, 0.1, 0.7), thetas=(0.0, math.pi / 4, math.pi / 2)):
    for b in beta1s:
        for g in gammas:
            for th in thetas:
                yield ModelParams(beta1=b, gamma=g, theta=th)


def check_kraus(tol, hamiltonian=build_effective_hamiltonian, t_max=2.0):
    times = np.linspace(0.0, t_max, 5)
    worst = 0.0
    for p in _grid(thetas=(math.pi / 4,)):
        closed = Propagator.from_params(p, hamiltonian).evolve(initial_density(p), times)
        kraus = kraus_trajectory(initial_density(p), build_effective_hamiltonian(p), p.gamma, times)
        worst = max(worst, max(frobenius_distance(a, b) for a, b in zip(closed, kraus)))
    return CheckResult("kraus_vs_closed_form", tol, worst, worst <= tol)


def check_oracle(tol, hamiltonian=build_effective_hamiltonian):
    times = np.linspace(0.0, 25.0, 101)
    worst = 0.0
    for p in _grid():
        full = [r.negativity for r in evolve_series(p, times, hamiltonian)]
        three = [n for _, n in oracle_negativity_series(p, times)]
        worst = max(worst, float(np.max(np.abs(np.subtract(full, three)))))
    return CheckResult("full_space_vs_3level", tol, worst, worst <= tol)


def check_analytic(tol, hamiltonian=build_effective_hamiltonian):
    times = np.linspace(0.0, 25.0, 501)
    full = np.array([r.negativity for r in evolve_series(ModelParams(), times, hamiltonian)])
    err = float(np.max(np.abs(full - analytic_negativity(times))))
    return CheckResult("analytic_benchmark", tol, err, err <= tol)


def check_beta2(tol, hamiltonian=build_effective_hamiltonian):
    times = np.linspace(0.0, 25.0, 51)
    worst = 0.0
    for p in _grid(thetas=(0.0, math.pi / 4)):
        lay = p.layout
        a = partial_trace_fock(evolve_states(p.with_(beta2=0.0), times, hamiltonian), lay)
        b = partial_trace_fock(evolve_states(p.with_(beta2=100.0), times, hamiltonian), lay)
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("beta2_invariance", tol, worst, worst <= tol)


def check_xstate(tol, n=2000, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        pops = rng.dirichlet(np.ones(4))
        c = math.sqrt(pops[1] * pops[2]) * rng.uniform() * np.exp(2j * math.pi * rng.uniform())
        worst = max(worst, abs(xstate_negativity(pops, c) - negativity(xstate_matrix(pops, c))))
    return CheckResult("xstate_shortcut", tol, worst, worst <= tol)


def record_fig3_esd(hamiltonian=build_effective_hamiltonian):
    """Informational: zero-negativity intervals at gamma = 0.7 (fig3 preset setting)."""
    times = np.linspace(0.0, 25.0, 501)
    p = ModelParams(theta=math.pi / 2, beta1=1.0, beta2=1.0, gamma=0.7)
    series = [(r.scaled_time, r.negativity) for r in evolve_series(p, times, hamiltonian)]
    widths = [hi - lo for lo, hi in detect_zero_intervals(series)]
    widest = max(widths, default=0.0)
    note = f"{len(widths)} zero interval(s); widest {widest:.3g}; width >= 0.5 present: {widest >= 0.5}"
    return CheckResult("fig3_gamma0.7_zero_intervals", 0.5, widest, True, note)


def run_selftest(tolerance=None, hamiltonian=build_effective_hamiltonian):
    """Run every check; ``tolerance`` overrides all per-check tolerances.

    ``hamiltonian`` replaces the builder on the closed-form side only, which
    lets tests confirm that a corrupted Hamiltonian is caught.
    """
    def tol(default):
        return default if tolerance is None else tolerance

    return [
        check_kraus(tol(1e-8), hamiltonian),
        check_oracle(tol(1e-9), hamiltonian),
        check_analytic(tol(1e-9), hamiltonian),
        check_beta2(tol(1e-12), hamiltonian),
        check_xstate(tol(1e-10)),
        record_fig3_esd(hamiltonian),
    ]
