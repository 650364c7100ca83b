"""Dense linear-algebra kernels every other module builds on.

Matrices are plain float64 numpy arrays in C (row-major) order.  All
operations validate finiteness and, where relevant, symmetry before touching
LAPACK, and normalize eigen/singular vector signs (first significant entry of
each column nonnegative) so repeated runs produce identical factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotFiniteError,
    NotOrthogonalError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SizeNotPowerOfTwoError,
)

SYMMETRY_RTOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite float64 2-D array."""
    out = np.asarray(a, dtype=np.float64)
    if out.ndim != 2 or out.shape[0] < 1 or out.shape[1] < 1:
        raise DimensionMismatchError(f"{name} must be 2-D with positive shape, got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NotFiniteError(f"{name} contains NaN or Inf entries")
    return out


def as_vector(v, name: str = "vector") -> np.ndarray:
    out = np.asarray(v, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(out)):
        raise NotFiniteError(f"{name} contains NaN or Inf entries")
    return out


def require_symmetric(a, rtol: float = SYMMETRY_RTOL, name: str = "matrix") -> np.ndarray:
    """Validate symmetry to relative tolerance and return (A + A^T)/2."""
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"{name} is not square: {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    gap = float(np.abs(a - a.T).max())
    if gap > rtol * scale:
        raise NotSymmetricError(f"{name} asymmetry {gap:.3e} exceeds {rtol:.1e} * {scale:.3e}")
    return (a + a.T) / 2.0


def _fix_column_signs(q: np.ndarray) -> np.ndarray:
    """Flip columns so the first significant entry of each is positive."""
    q = q.copy()
    flips = np.ones(q.shape[1])
    for j in range(q.shape[1]):
        col = q[:, j]
        tol = 1e-12 * max(1.0, float(np.abs(col).max()))
        for x in col:
            if abs(x) > tol:
                if x < 0.0:
                    flips[j] = -1.0
                    q[:, j] = -col
                break
    return q, flips


@dataclass(frozen=True)
class SymEigen:
    """Eigenpairs of a symmetric matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # orthogonal, one eigenvector per column

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


@dataclass(frozen=True)
class Svd:
    """Thin SVD ``A = U diag(s) V^T`` with singular values descending."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.v.T


def sym_eig(a) -> SymEigen:
    """Eigendecomposition of a symmetric matrix, descending eigenvalues."""
    a = require_symmetric(a)
    w, q = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    q, _ = _fix_column_signs(q[:, order])
    return SymEigen(w[order], q)


def svd(a) -> Svd:
    """Thin SVD with deterministic sign convention on the U columns."""
    a = as_matrix(a)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    u, flips = _fix_column_signs(u)
    vt = vt * flips[:, None]
    return Svd(u, s, vt.T)


def nuclear_norm(a) -> float:
    return float(np.linalg.svd(as_matrix(a), compute_uv=False).sum())


def spd_inverse(a) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via eigendecomposition."""
    eig = sym_eig(a)
    if eig.eigenvalues.min() <= 1e-12:
        raise NotPositiveDefiniteError(
            f"minimum eigenvalue {eig.eigenvalues.min():.3e} is not > 1e-12"
        )
    q = eig.eigenvectors
    inv = (q / eig.eigenvalues) @ q.T
    return (inv + inv.T) / 2.0


def haar_matrix(size: int) -> np.ndarray:
    """Orthonormal Haar transform matrix; ``size`` must be a power of two."""
    if size < 1 or (size & (size - 1)) != 0:
        raise SizeNotPowerOfTwoError(f"haar size must be a power of two, got {size}")
    h = np.array([[1.0]])
    while h.shape[0] < size:
        m = h.shape[0]
        top = np.kron(h, np.array([1.0, 1.0]))
        bottom = np.kron(np.eye(m), np.array([1.0, -1.0]))
        h = np.vstack([top, bottom]) / np.sqrt(2.0)
    return h


def dct_matrix(size: int) -> np.ndarray:
    """Orthonormal DCT-II matrix of the given size."""
    if size < 1:
        raise DimensionMismatchError(f"dct size must be >= 1, got {size}")
    k = np.arange(size)[:, None]
    j = np.arange(size)[None, :]
    t = np.cos(np.pi * (2 * j + 1) * k / (2 * size))
    t[0, :] *= np.sqrt(1.0 / size)
    t[1:, :] *= np.sqrt(2.0 / size)
    return t


def require_orthogonal(a, tol: float = 1e-8, name: str = "matrix") -> np.ndarray:
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise NotOrthogonalError(f"{name} is not square: {a.shape}")
    gap = float(np.abs(a.T @ a - np.eye(a.shape[0])).max())
    if gap > tol:
        raise NotOrthogonalError(f"{name} fails orthogonality: max |Q^T Q - I| = {gap:.3e}")
    return a
