"""Closed-form proximal operators and projections used by the ADMM solvers."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NonPositiveTauError
from .kernels import as_matrix, as_vector, require_orthogonal, require_symmetric, svd, sym_eig


def _require_tau(tau: float) -> float:
    tau = float(tau)
    if not tau > 0.0:
        raise NonPositiveTauError(f"tau must be > 0, got {tau}")
    return tau


def soft_threshold(a, tau: float) -> np.ndarray:
    """Elementwise sign(a) * max(|a| - tau, 0): prox of tau * l1 norm."""
    tau = _require_tau(tau)
    a = as_matrix(np.atleast_2d(a))
    return np.sign(a) * np.maximum(np.abs(a) - tau, 0.0)


def svt(a, tau: float) -> np.ndarray:
    """Singular value thresholding: prox of tau * nuclear norm."""
    tau = _require_tau(tau)
    out, _ = svt_with_values(a, tau)
    return out


def svt_with_values(a, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """SVT plus the thresholded singular values (nuclear norm comes free)."""
    fac = svd(as_matrix(a))
    s = np.maximum(fac.singular_values - tau, 0.0)
    return (fac.u * s) @ fac.v.T, s


def prox_neg_logdet(a, rho: float) -> np.ndarray:
    """Minimizer of ``-logdet X + (rho/2) ||X - A||_F^2`` over symmetric X.

    Eigenvalues map through (g + sqrt(g^2 + 4/rho)) / 2, so the result is
    always positive definite.
    """
    rho = float(rho)
    if not rho > 0.0:
        raise NonPositiveTauError(f"rho must be > 0, got {rho}")
    eig = sym_eig(require_symmetric(a))
    g = eig.eigenvalues
    phi = (g + np.sqrt(g * g + 4.0 / rho)) / 2.0
    q = eig.eigenvectors
    out = (q * phi) @ q.T
    return (out + out.T) / 2.0


def prox_trace_psd(v, tau: float) -> np.ndarray:
    """Prox of tau * trace on the PSD cone: shrink eigenvalues, clamp at zero."""
    tau = _require_tau(tau)
    eig = sym_eig(require_symmetric(v))
    d = np.maximum(eig.eigenvalues - tau, 0.0)
    q = eig.eigenvectors
    out = (q * d) @ q.T
    return (out + out.T) / 2.0


def psd_project(v) -> np.ndarray:
    """Frobenius projection onto the PSD cone (eigenvalue clamp at zero)."""
    eig = sym_eig(require_symmetric(v))
    d = np.maximum(eig.eigenvalues, 0.0)
    q = eig.eigenvectors
    out = (q * d) @ q.T
    return (out + out.T) / 2.0


def l2ball_project(v, center, radius: float) -> np.ndarray:
    """Projection of a vector onto the l2 ball of given center and radius."""
    v = as_vector(v, "v")
    center = as_vector(center, "center")
    if v.shape != center.shape:
        raise DimensionMismatchError(f"v has shape {v.shape}, center {center.shape}")
    radius = float(radius)
    if radius < 0.0:
        raise DimensionMismatchError(f"radius must be >= 0, got {radius}")
    d = v - center
    nrm = float(np.linalg.norm(d))
    if nrm <= radius:
        return v.copy()
    if radius == 0.0:
        return center.copy()
    return center + (radius / nrm) * d


def transform_l1_prox(v, w, f, tau: float) -> np.ndarray:
    """Prox of ``tau * ||W X F||_1`` for orthogonal W, F.

    By orthogonal invariance of the Frobenius norm this is exactly
    ``W^T soft_threshold(W V F, tau) F^T``.
    """
    tau = _require_tau(tau)
    v = as_matrix(v, "v")
    w = require_orthogonal(w, name="w")
    f = require_orthogonal(f, name="f")
    if w.shape[0] != v.shape[0] or f.shape[0] != v.shape[1]:
        raise DimensionMismatchError(
            f"shapes do not conform: W {w.shape}, V {v.shape}, F {f.shape}"
        )
    return w.T @ soft_threshold(w @ v @ f, tau) @ f.T
