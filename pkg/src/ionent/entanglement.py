"""Two-qubit entanglement measures on reduced 4x4 states.

All measures accept a single matrix or a stack ``(..., 4, 4)`` and return a
float or an array of the batch shape.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState
from .hilbert import partial_transpose
from .numerics import hermitian_eigen, hermiticity_error

NEG_EIG_THRESHOLD = 1e-12
STATE_TOL = 1e-8
# Eigenvalues of rho below this fraction of the largest are round-off.
RANK_CUTOFF = 1e-14

_SIGMA_Y2 = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class EntanglementRecord:
    scaled_time: float
    negativity: float
    concurrence: float
    purity: float
    trace_error: float


def _validate(rho4):
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape[-2:] != (4, 4):
        raise InvalidState(f"expected 4x4 two-qubit state, got {rho4.shape}")
    if np.any(hermiticity_error(rho4) > STATE_TOL):
        raise InvalidState("state is not Hermitian")
    tr = np.trace(rho4, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1) > STATE_TOL):
        raise InvalidState(f"trace deviates from 1 by {np.max(np.abs(tr - 1)):.3e}")
    rho4 = 0.5 * (rho4 + rho4.conj().swapaxes(-1, -2))
    eig = hermitian_eigen(rho4)
    if np.any(eig.eigenvalues[..., 0] < -STATE_TOL):
        raise InvalidState(f"state has eigenvalue {np.min(eig.eigenvalues):.3e}")
    return rho4, eig


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def pt_spectrum(rho4, subsystem=2):
    return hermitian_eigen(partial_transpose(rho4, subsystem)).eigenvalues


def negativity(rho4, subsystem=2):
    """2 max(0, -sum of negative partial-transpose eigenvalues)."""
    rho4, _ = _validate(rho4)
    w = pt_spectrum(rho4, subsystem)
    neg = np.where(w < -NEG_EIG_THRESHOLD, w, 0.0).sum(axis=-1)
    return _scalar(np.clip(-2.0 * neg, 0.0, 1.0) + 0.0)


def concurrence(rho4):
    """Wootters concurrence max(0, s1 - s2 - s3 - s4).

    With rho = W W^dag (W = V sqrt(Lambda)), the s_i are the singular values
    of tau = W^T (sigma_y x sigma_y) W. They are read off the Hermitian
    dilation [[0, tau], [tau^dag, 0]] so no square root of a near-zero
    eigenvalue of rho rho~ is taken; eigenvalues of rho at round-off level
    are dropped for the same reason.
    """
    rho4, eig = _validate(rho4)
    lam = eig.eigenvalues
    lam = np.where(lam > RANK_CUTOFF * np.max(lam, axis=-1, keepdims=True), lam, 0.0)
    w = eig.eigenvectors * np.sqrt(lam)[..., None, :]
    tau = w.swapaxes(-1, -2) @ _SIGMA_Y2 @ w
    dil = np.zeros(tau.shape[:-2] + (8, 8), dtype=complex)
    dil[..., :4, 4:] = tau
    dil[..., 4:, :4] = tau.conj().swapaxes(-1, -2)
    s = hermitian_eigen(dil).eigenvalues[..., ::-1][..., :4]
    c = s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3]
    return _scalar(np.clip(c, 0.0, 1.0) + 0.0)


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    return _scalar(np.sum(np.abs(rho) ** 2, axis=(-2, -1)))


def xstate_negativity(populations, coherence):
    """Closed-form negativity when the only coherence is between |ab> and |ba>.

    ``populations`` is ordered (aa, ab, ba, bb). After transposing qubit 2 the
    coherence moves into the {|aa>, |bb>} block, whose lower eigenvalue is the
    only one that can go negative.
    """
    p_aa, p_ab, p_ba, p_bb = (float(x) for x in populations)
    c2 = abs(coherence) ** 2
    if min(p_aa, p_ab, p_ba, p_bb) < -STATE_TOL or abs(p_aa + p_ab + p_ba + p_bb - 1) > STATE_TOL:
        raise InvalidState(f"populations {populations} are not a distribution")
    if c2 > p_ab * p_ba + 1e-12:
        raise InvalidState("coherence exceeds the positivity bound")
    return max(0.0, math.sqrt((p_aa - p_bb) ** 2 + 4 * c2) - (p_aa + p_bb))


def xstate_matrix(populations, coherence):
    rho = np.diag(np.asarray(populations, dtype=complex))
    rho[1, 2] = coherence
    rho[2, 1] = np.conj(coherence)
    return rho
