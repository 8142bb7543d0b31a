"""Dense complex linear algebra: cyclic Jacobi eigensolver and small helpers.

Every matrix in the package is a ``numpy`` complex array. The eigensolver
accepts a single ``(n, n)`` matrix or a stack ``(..., n, n)`` and rotates the
whole stack at once, which keeps the per-sample cost of the entanglement
measures (thousands of 4x4 problems) low.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonHermitianInput

HERMITIAN_TOL = 1e-10
CONVERGENCE_TOL = 1e-12
MAX_SWEEPS = 100
# Rotating on subnormal entries overflows the phase; they are dropped instead.
_TINY = 1e-280

ComplexMatrix = np.ndarray


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues (ascending, real) and unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues[..., None, :]) @ v.conj().swapaxes(-1, -2)


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {m.shape}")
    return m


def _fro(m):
    return np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))


def hermiticity_error(m):
    """Relative anti-Hermitian part ||M - M^H|| / max(1, ||M||)."""
    m = as_matrix(m)
    return _fro(m - m.conj().swapaxes(-1, -2)) / np.maximum(1.0, _fro(m))


def _off_norm(a):
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[..., mask]) ** 2, axis=-1))


def _sweep(a, v):
    n = a.shape[-1]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[:, p, q]
            b = np.abs(apq)
            b = np.where(b > _TINY, b, 0.0)
            if not b.any():
                continue
            d = (a[:, q, q] - a[:, p, p]).real
            # Smaller root of t^2 + 2 tau t - 1 = 0 keeps |angle| <= pi/4.
            denom = np.abs(d) + np.sqrt(d * d + 4 * b * b)
            safe = np.where(denom > 0, denom, 1.0)
            t = np.where(b > 0, np.where(d >= 0, 1.0, -1.0) * 2 * b / safe, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phase = np.where(b > 0, np.conj(apq) / np.where(b > 0, b, 1.0), 1.0)
            g = np.empty((a.shape[0], 2, 2), dtype=complex)
            g[:, 0, 0] = c
            g[:, 0, 1] = s
            g[:, 1, 0] = -s * phase
            g[:, 1, 1] = c * phase
            idx = [p, q]
            a[:, :, idx] = a[:, :, idx] @ g
            a[:, idx, :] = g.conj().swapaxes(-1, -2) @ a[:, idx, :]
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
            v[:, :, idx] = v[:, :, idx] @ g


def hermitian_eigen(m, max_sweeps=MAX_SWEEPS, tol=CONVERGENCE_TOL):
    """Diagonalise a Hermitian matrix (or stack) with cyclic Jacobi rotations.

    Stops once the off-diagonal Frobenius norm drops below ``tol * ||M||``
    (absolute ``tol`` for a zero matrix), then runs one clean-up sweep.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if np.any(err > HERMITIAN_TOL):
        raise NonHermitianInput(f"relative anti-Hermitian part {np.max(err):.3e}")
    batch_shape = m.shape[:-2]
    n = m.shape[-1]
    a = m.reshape(-1, n, n).copy()
    a = 0.5 * (a + a.conj().swapaxes(-1, -2))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    norm = _fro(a)
    threshold = np.where(norm > 0, tol * norm, tol)

    for _ in range(max_sweeps):
        if np.all(_off_norm(a) < threshold):
            break
        _sweep(a, v)
    else:
        if np.any(_off_norm(a) >= threshold):
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    _sweep(a, v)

    w = np.diagonal(a, axis1=-2, axis2=-1).real
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return HermitianEigen(w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n)))


def eigvalsh(m):
    return hermitian_eigen(m).eigenvalues


def to_eigenbasis(rho, v):
    """Return V^H rho V."""
    rho, v = as_matrix(rho), as_matrix(v)
    if rho.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"{rho.shape} vs {v.shape}")
    return v.conj().swapaxes(-1, -2) @ rho @ v


def from_eigenbasis(rho_tilde, v):
    """Inverse of :func:`to_eigenbasis`: V rho V^H."""
    rho_tilde, v = as_matrix(rho_tilde), as_matrix(v)
    if rho_tilde.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"{rho_tilde.shape} vs {v.shape}")
    return v @ rho_tilde @ v.conj().swapaxes(-1, -2)


def frobenius_distance(a, b):
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))
