"""Effective two-ion Hamiltonian with ac-Stark shifts and the initial state family."""

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import InvalidParameter, ZeroDetuning
from .hilbert import SpaceLayout, annihilation_op, embed_fock, ion_op, tensor


@dataclass(frozen=True)
class ModelParams:
    """Effective model parameters, hbar = 1.

    Energies are expressed in units of the coupling scale ``lambda = zeta1``
    and ``gamma`` in units of 1/lambda, so time is always the scaled time
    ``lambda * t``. ``theta`` mixes |a,b> (cos^2) and |b,a> (sin^2).
    """

    beta1: float = 0.0
    beta2: float = 0.0
    zeta1: float = 1.0
    zeta2: float = 1.0
    phi: float = 0.0
    gamma: float = 0.0
    theta: float = 0.0
    n_max: int = 6
    n0: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
                raise InvalidParameter(f"{f.name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise InvalidParameter(f"{f.name} must be finite, got {v!r}")
        if self.gamma < 0:
            raise InvalidParameter(f"gamma must be >= 0, got {self.gamma}")
        if int(self.n0) != self.n0 or self.n0 < 0:
            raise InvalidParameter(f"n0 must be a non-negative integer, got {self.n0}")
        if int(self.n_max) != self.n_max or self.n_max < self.n0 + 4:
            raise InvalidParameter(f"n_max must be an integer >= n0 + 4, got {self.n_max}")

    @property
    def layout(self):
        return SpaceLayout(int(self.n_max))

    @property
    def time_scale(self):
        """lambda: zeta1, or 1 when zeta1 vanishes (time is then plain t)."""
        return abs(self.zeta1) if self.zeta1 != 0 else 1.0

    def with_(self, **changes):
        return replace(self, **changes)


def stark_from_physical(zeta, delta):
    """beta = zeta^2 / Delta."""
    if delta == 0:
        raise ZeroDetuning("detuning must be non-zero")
    return zeta**2 / delta


def build_effective_hamiltonian(p):
    lay = p.layout
    a = embed_fock(annihilation_op(lay), lay)
    ad = a.conj().T
    num = ad @ a
    a2, ad2 = a @ a, ad @ ad
    s = {(l, m, i): ion_op(l, m, i, lay) for l in "ab" for m in "ab" for i in (1, 2)}
    ph = np.exp(1j * p.phi)
    h = num @ (p.beta1 * s["b", "b", 1] + p.beta2 * s["a", "a", 1])
    h = h + num @ (p.beta1 * s["b", "b", 2] + p.beta2 * s["a", "a", 2])
    h = h + p.zeta1 * (s["a", "b", 1] @ a2 + s["b", "a", 1] @ ad2)
    h = h + p.zeta2 * (ph * s["a", "b", 2] @ a2 + np.conj(ph) * s["b", "a", 2] @ ad2)
    return h


def excitation_operator(layout):
    """N_exc = a^dag a + 2 (S_aa^(1) + S_aa^(2)); commutes with the Hamiltonian."""
    n = np.diag(np.arange(layout.dim_fock)).astype(complex)
    return embed_fock(n, layout) + 2 * (ion_op("a", "a", 1, layout) + ion_op("a", "a", 2, layout))


def initial_density(p):
    """cos^2(theta)|a,b><a,b| + sin^2(theta)|b,a><b,a|, mode in Fock state n0."""
    c2, s2 = math.cos(p.theta) ** 2, math.sin(p.theta) ** 2
    qubits = np.diag([0.0, c2, s2, 0.0]).astype(complex)
    fock = np.zeros((p.layout.dim_fock,) * 2, dtype=complex)
    fock[p.n0, p.n0] = 1.0
    return tensor(qubits, fock)
