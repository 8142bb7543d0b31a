"""Three-level oracle for the vacuum initial family.

Starting from |a,b,0> or |b,a,0>, the conserved excitation number
a^dag a + 2(S_aa^(1) + S_aa^(2)) = 2 confines the dynamics to
span{|a,b,0>, |b,b,2>, |b,a,0>}. Tracing out the mode then leaves an X-state
with a single |ab>-|ba> coherence, whose negativity has a closed form.
"""

import math

import numpy as np

from .entanglement import xstate_negativity
from .errors import UnsupportedInitialState

SUBSPACE_LABELS = (("a", "b", 0), ("b", "b", 2), ("b", "a", 0))


def subspace_hamiltonian(p):
    r2 = math.sqrt(2.0)
    ph = np.exp(1j * p.phi)
    return np.array(
        [
            [0.0, r2 * p.zeta1, 0.0],
            [r2 * p.zeta1, 4.0 * p.beta1, r2 * p.zeta2 * np.conj(ph)],
            [0.0, r2 * p.zeta2 * ph, 0.0],
        ],
        dtype=complex,
    )


def subspace_initial_state(p):
    return np.diag([math.cos(p.theta) ** 2, 0.0, math.sin(p.theta) ** 2]).astype(complex)


def evolve_subspace(p, times):
    """3x3 density matrices at each scaled time (LAPACK eigh, not the Jacobi path)."""
    if p.n0 != 0:
        raise UnsupportedInitialState("the three-level oracle needs the mode in vacuum (n0 = 0)")
    w, v = np.linalg.eigh(subspace_hamiltonian(p) / p.time_scale)
    g = w[:, None] - w[None, :]
    t = np.asarray(times, dtype=float)[:, None, None]
    rho0 = subspace_initial_state(p)
    rt = v.conj().T @ rho0 @ v
    out = v @ (rt * np.exp(-1j * g * t - 0.5 * p.gamma * t * g * g)) @ v.conj().T
    out[t[:, 0, 0] == 0] = rho0
    return out


def reduced_xstate(rho3):
    """(populations aa, ab, ba, bb) and the ab-ba coherence of Tr_mode."""
    pops = (0.0, rho3[0, 0].real, rho3[2, 2].real, rho3[1, 1].real)
    return pops, rho3[0, 2]


def oracle_negativity_series(p, times):
    out = []
    for t, rho3 in zip(times, evolve_subspace(p, times)):
        pops, coh = reduced_xstate(rho3)
        out.append((float(t), xstate_negativity(pops, coh)))
    return out


def analytic_negativity(lambda_t):
    """theta = 0, gamma = 0, beta1 = 0, zeta1 = zeta2, phi = 0."""
    return (math.sqrt(2.0) - 1.0) * np.sin(2.0 * np.asarray(lambda_t)) ** 2 / 2.0
