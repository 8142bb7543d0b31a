"""Composite space qubit (x) qubit (x) truncated Fock mode.

Ordering: level ``a`` -> 0, ``b`` -> 1, so the two-qubit block runs
|aa>, |ab>, |ba>, |bb>; the Fock index varies fastest.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidLevel

LEVELS = {"a": 0, "b": 1}


@dataclass(frozen=True)
class SpaceLayout:
    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @property
    def dim_fock(self):
        return self.n_max + 1

    @property
    def dim_total(self):
        return 4 * self.dim_fock

    def index(self, q1, q2, n):
        q1, q2 = LEVELS.get(q1, q1), LEVELS.get(q2, q2)
        if q1 not in (0, 1) or q2 not in (0, 1) or not 0 <= n <= self.n_max:
            raise IndexError(f"({q1}, {q2}, {n}) outside layout with n_max={self.n_max}")
        return (2 * q1 + q2) * self.dim_fock + n

    def basis_vector(self, q1, q2, n):
        v = np.zeros(self.dim_total, dtype=complex)
        v[self.index(q1, q2, n)] = 1.0
        return v


def annihilation_op(layout):
    """Bare Fock-space lowering operator, <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, layout.dim_fock)), k=1).astype(complex)


def tensor(*ops):
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def embed_fock(op, layout):
    return tensor(np.eye(4), op)


def _level(name):
    try:
        return LEVELS[name]
    except (KeyError, TypeError):
        raise InvalidLevel(f"level must be 'a' or 'b', got {name!r}") from None


def ion_op(l, m, ion, layout):
    """|l><m| acting on one ion, identity on the other ion and the mode."""
    s = np.zeros((2, 2), dtype=complex)
    s[_level(l), _level(m)] = 1.0
    eye2, eyef = np.eye(2), np.eye(layout.dim_fock)
    if ion == 1:
        return tensor(s, eye2, eyef)
    if ion == 2:
        return tensor(eye2, s, eyef)
    raise InvalidLevel(f"ion must be 1 or 2, got {ion!r}")


def _check_full(rho, layout):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (layout.dim_total, layout.dim_total):
        raise DimensionMismatch(f"expected {layout.dim_total}x{layout.dim_total}, got {rho.shape}")
    return rho


def partial_trace_fock(rho, layout):
    """Trace out the vibrational mode; accepts a stack of full-space states."""
    rho = _check_full(rho, layout)
    f = layout.dim_fock
    r = rho.reshape(rho.shape[:-2] + (4, f, 4, f))
    return np.einsum("...injn->...ij", r)


def fock_populations(rho, layout):
    """Phonon-number distribution P(n) of a full-space state (or stack)."""
    rho = _check_full(rho, layout)
    f = layout.dim_fock
    diag = np.diagonal(rho, axis1=-2, axis2=-1).real
    return diag.reshape(diag.shape[:-1] + (4, f)).sum(axis=-2)


def partial_transpose(rho4, subsystem=2):
    """Transpose the indices of one qubit of a two-qubit matrix (or stack)."""
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape[-2:] != (4, 4):
        raise DimensionMismatch(f"expected 4x4, got {rho4.shape}")
    r = rho4.reshape(rho4.shape[:-2] + (2, 2, 2, 2))
    if subsystem == 1:
        r = np.swapaxes(r, -4, -2)
    elif subsystem == 2:
        r = np.swapaxes(r, -3, -1)
    else:
        raise ValueError(f"subsystem must be 1 or 2, got {subsystem!r}")
    return r.reshape(rho4.shape)
