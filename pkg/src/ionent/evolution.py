"""Density-operator propagation under intrinsic (Milburn) decoherence.

    d rho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]]

Two routes are provided. :func:`propagate_closed_form` is the production
path: in the eigenbasis of H each element evolves independently as

    rho~_jk(t) = exp(-i (E_j - E_k) t) exp(-(gamma t / 2)(E_j - E_k)^2) rho~_jk(0).

:func:`propagate_kraus_series` sums the Kraus representation term by term
and is kept only as an independent check (see docs/derivations.md for the
resummation linking the two).
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .entanglement import EntanglementRecord, concurrence, negativity, purity
from .errors import DimensionMismatch, SeriesNotConverged
from .hilbert import partial_trace_fock
from .model import build_effective_hamiltonian, initial_density
from .numerics import HermitianEigen, as_matrix, hermitian_eigen

KRAUS_TOL = 1e-12
KRAUS_MAX_TERMS = 200
# Largest gamma*dt*E^2 per Kraus step. Round-off in exp(-gamma dt H^2 / 2) is
# amplified by roughly exp(gamma dt E^2) when the series re-grows it; above
# ~12 the agreement with the closed form degrades past 1e-10.
KRAUS_STEP_EXPONENT = 8.0


@dataclass(frozen=True)
class Propagator:
    eigen: HermitianEigen
    gamma: float
    gaps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        e = self.eigen.eigenvalues
        object.__setattr__(self, "gaps", e[:, None] - e[None, :])

    @classmethod
    def from_hamiltonian(cls, h, gamma):
        return cls(hermitian_eigen(h), float(gamma))

    @classmethod
    def from_params(cls, p, hamiltonian=build_effective_hamiltonian):
        """Propagator in scaled units: H / lambda, time lambda*t."""
        return cls.from_hamiltonian(hamiltonian(p) / p.time_scale, p.gamma)

    @property
    def dim(self):
        return self.gaps.shape[0]

    def damping(self, times):
        t = np.asarray(times, dtype=float)[..., None, None]
        g = self.gaps
        return np.exp(-1j * g * t - 0.5 * self.gamma * t * g * g)

    def evolve(self, rho0, times):
        """States at each time in ``times`` (stacked along axis 0 for arrays)."""
        rho0 = as_matrix(rho0)
        if rho0.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"state {rho0.shape} vs propagator dim {self.dim}")
        v = self.eigen.eigenvectors
        rt = v.conj().T @ rho0 @ v
        return v @ (rt * self.damping(times)) @ v.conj().T


def propagate_closed_form(rho0, prop, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return as_matrix(rho0).copy()
    return prop.evolve(rho0, float(t))


def reachable_spectral_radius(h, rho, rtol=1e-9):
    """max |E| over the smallest H-invariant subspace containing range(rho).

    Built from Krylov blocks with SVD-based orthogonalisation, so it does not
    touch the Jacobi eigensolver.
    """
    h, rho = as_matrix(h), as_matrix(rho)
    # A stack of states contributes the union of its ranges.
    rho = np.concatenate(list(rho.reshape(-1, *h.shape)), axis=1)
    scale = max(1.0, np.linalg.norm(h), np.linalg.norm(rho))

    def orth(w, basis):
        if basis is not None:
            for _ in range(2):
                w = w - basis @ (basis.conj().T @ w)
        u, s, _ = np.linalg.svd(w, full_matrices=False)
        return u[:, s > rtol * scale]

    q = orth(rho, None)
    if q.shape[1] == 0:
        return 0.0
    while True:
        new = orth(h @ q, q)
        if new.shape[1] == 0:
            break
        q = np.hstack([q, new])
    return float(np.linalg.norm(q.conj().T @ h @ q, 2))


def propagate_kraus_series(rho0, h, gamma, t, tol=KRAUS_TOL, max_terms=KRAUS_MAX_TERMS):
    """sum_m (gamma t)^m / m! M_m rho0 M_m^dag with M_m = H^m e^{-iHt} e^{-gamma t H^2 / 2}.

    For large gamma*t*E^2 the damping factor underflows, so the interval is
    split into equal sub-steps (the channel is a semigroup) and the series
    is summed on each; ``tol`` bounds the total truncation over all steps.
    No trace renormalisation is applied. ``rho0`` may be a stack of states
    sharing the same Hamiltonian.
    """
    rho = as_matrix(rho0).copy()
    h = as_matrix(h)
    if rho.shape[-2:] != h.shape:
        raise DimensionMismatch(f"state {rho.shape} vs Hamiltonian {h.shape}")
    if t < 0:
        raise ValueError("t must be non-negative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t == 0:
        return rho
    if gamma == 0:
        u = scipy.linalg.expm(-1j * t * h)
        return u @ rho @ u.conj().T

    e_max = reachable_spectral_radius(h, rho)
    n_steps = max(1, math.ceil(gamma * t * e_max**2 / KRAUS_STEP_EXPONENT))
    dt = t / n_steps
    x = gamma * dt
    peak = x * e_max**2
    a = scipy.linalg.expm(-1j * dt * h) @ scipy.linalg.expm(-0.5 * x * (h @ h))
    step_tol = tol / n_steps
    for _ in range(n_steps):
        rho = _sum_series(rho, a, h, x, peak, step_tol, max_terms)
    return rho


def _sum_series(rho, a, h, x, peak, tol, max_terms):
    term = a @ rho @ a.conj().T
    total = term.copy()
    for m in range(1, max_terms + 1):
        term = (x / m) * (h @ term @ h)
        total += term
        # Terms decrease monotonically only past the Poisson peak.
        if m >= peak and np.max(np.linalg.norm(term, axis=(-2, -1))) < tol:
            return total
    raise SeriesNotConverged(
        f"Kraus series not below {tol:.1e} after {max_terms} terms (gamma*dt*E^2 = {peak:.1f})"
    )


def kraus_trajectory(rho0, h, gamma, times, tol=KRAUS_TOL, max_terms=KRAUS_MAX_TERMS):
    """Kraus-series states at ascending ``times``, chaining the semigroup.

    The time axis is prepended to whatever batch shape ``rho0`` has.
    """
    out = []
    rho, t_prev = as_matrix(rho0).copy(), 0.0
    for t in times:
        if t < t_prev:
            raise ValueError("times must be ascending")
        rho = propagate_kraus_series(rho, h, gamma, t - t_prev, tol=tol / len(times), max_terms=max_terms)
        out.append(rho)
        t_prev = t
    return np.array(out)


def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending and non-negative")
    return times


def evolve_states(p, times, hamiltonian=build_effective_hamiltonian):
    """Full-space states at each scaled time, all from one eigendecomposition."""
    times = _check_times(times)
    prop = Propagator.from_params(p, hamiltonian)
    return prop.evolve(initial_density(p), times)


def records_from_states(states, times, layout):
    states = np.asarray(states)
    trace_err = np.abs(np.trace(states, axis1=-2, axis2=-1) - 1.0)
    reduced = partial_trace_fock(states, layout)
    reduced = 0.5 * (reduced + reduced.conj().swapaxes(-1, -2))
    neg = np.atleast_1d(negativity(reduced))
    conc = np.atleast_1d(concurrence(reduced))
    pur = np.atleast_1d(purity(reduced))
    return [
        EntanglementRecord(float(t), float(n), float(c), float(q), float(e))
        for t, n, c, q, e in zip(times, neg, conc, pur, trace_err)
    ]


def evolve_series(p, times, hamiltonian=build_effective_hamiltonian):
    times = _check_times(times)
    states = evolve_states(p, times, hamiltonian)
    return records_from_states(states, times, p.layout)
