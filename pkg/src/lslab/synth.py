"""Seeded generators for every synthetic instance family, with ground truth.

All generators are pure functions of (parameters, Prng): the draw order is
fixed and documented per generator, so repeat calls with the same seed are
bit-identical on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidKError, InvalidRateError, InvalidShapeError, NotPositiveDefiniteError
from .kernels import as_matrix, require_symmetric, sym_eig
from .prng import Prng


@dataclass(frozen=True)
class LatentModel:
    """Ground truth for a latent-variable Gaussian graphical model.

    ``s_star`` is the concentration of the observed block conditioned on the
    hidden variables; ``l_star`` is the PSD marginalization term of rank at
    most ``h``; ``sigma_obs`` is the marginal covariance of the observed
    variables, so ``s_star - l_star = sigma_obs^{-1}``.
    """

    p: int
    h: int
    k_full: np.ndarray
    s_star: np.ndarray
    l_star: np.ndarray
    sigma_obs: np.ndarray


@dataclass(frozen=True)
class SamplingOperator:
    """Entry subsampling composed with an optional orthogonal transform pair.

    ``apply(X)`` returns the masked coefficients of ``G X H^T`` as a vector in
    row-major mask order; ``adjoint`` embeds a vector back.  With ``g``/``h``
    None the transform is the identity (plain entry sampling).
    """

    mask: np.ndarray  # boolean, True = sampled coefficient
    g: np.ndarray | None = None
    h: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    def _forward(self, x: np.ndarray) -> np.ndarray:
        if self.g is None:
            return x
        return self.g @ x @ self.h.T

    def _backward(self, c: np.ndarray) -> np.ndarray:
        if self.g is None:
            return c
        return self.g.T @ c @ self.h

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self._forward(x)[self.mask]

    def adjoint(self, y) -> np.ndarray:
        c = np.zeros(self.mask.shape)
        c[self.mask] = np.asarray(y, dtype=np.float64)
        return self._backward(c)

    def project_ball(self, x, y, eps: float) -> np.ndarray:
        """Projection of x onto {Z : ||apply(Z) - y||_2 <= eps}."""
        c = self._forward(np.asarray(x, dtype=np.float64))
        d = c[self.mask] - y
        nrm = float(np.linalg.norm(d))
        if nrm > eps:
            scale = eps / nrm if nrm > 0.0 else 0.0
            c = c.copy()
            c[self.mask] = y + scale * d
        return self._backward(c)


def gen_latent_model(p: int, h: int, degree: int, strength: float, prng: Prng) -> LatentModel:
    """Latent-variable model: sparse observed block, rank-h marginalization.

    Draw order: edge shuffle, edge signs, observed-hidden couplings.  The full
    precision matrix gets the smallest ridge c in {0, 0.1, 0.2, ...} making
    its minimum eigenvalue at least 1e-3.
    """
    if p < 2 or h < 0 or h > p // 4 or not 1 <= degree <= p - 1:
        raise InvalidShapeError(f"invalid latent model shape p={p}, h={h}, degree={degree}")
    if not 0.0 < strength < 1.0:
        raise InvalidShapeError(f"strength must be in (0,1), got {strength}")

    k_obs = np.eye(p)
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    order = prng.shuffled(pairs)
    degrees = np.zeros(p, dtype=int)
    target = p * degree // 2
    added = 0
    magnitude = strength / degree
    for i, j in order:
        if added >= target:
            break
        if degrees[i] < degree and degrees[j] < degree:
            sign = 1.0 if prng.next_u64() & 1 else -1.0
            k_obs[i, j] = k_obs[j, i] = sign * magnitude
            degrees[i] += 1
            degrees[j] += 1
            added += 1

    total = p + h
    k_full = np.eye(total)
    k_full[:p, :p] = k_obs
    if h > 0:
        coupling = prng.normal_matrix(p, h) * (strength / np.sqrt(h))
        k_full[:p, p:] = coupling
        k_full[p:, :p] = coupling.T

    c = 0.0
    while np.linalg.eigvalsh(k_full + c * np.eye(total)).min() < 1e-3:
        c += 0.1
    k_full = k_full + c * np.eye(total)

    s_star = k_full[:p, :p].copy()
    if h > 0:
        k_h = k_full[p:, p:]
        l_star = k_full[:p, p:] @ np.linalg.solve(k_h, k_full[p:, :p])
        l_star = (l_star + l_star.T) / 2.0
    else:
        l_star = np.zeros((p, p))
    margin = s_star - l_star
    eig = sym_eig(margin)
    q = eig.eigenvectors
    sigma_obs = (q / eig.eigenvalues) @ q.T
    sigma_obs = (sigma_obs + sigma_obs.T) / 2.0
    return LatentModel(p=p, h=h, k_full=k_full, s_star=s_star, l_star=l_star, sigma_obs=sigma_obs)


def sample_empirical_cov(sigma, n: int, prng: Prng) -> np.ndarray:
    """Empirical covariance of n iid zero-mean Gaussians with covariance sigma."""
    sigma = require_symmetric(as_matrix(sigma, "sigma"), name="sigma")
    if n < 1:
        raise InvalidShapeError(f"n must be >= 1, got {n}")
    eig = sym_eig(sigma)
    scale = max(1.0, float(np.abs(eig.eigenvalues).max()))
    if eig.eigenvalues.min() < -1e-10 * scale:
        raise NotPositiveDefiniteError(
            f"sigma has eigenvalue {eig.eigenvalues.min():.3e} < 0"
        )
    root = eig.eigenvectors * np.sqrt(np.maximum(eig.eigenvalues, 0.0))
    p = sigma.shape[0]
    draws = prng.normal_matrix(n, p)  # one row per sample
    x = draws @ root.T
    cov = (x.T @ x) / n
    return (cov + cov.T) / 2.0


def gen_lowrank_sparse(
    n1: int, n2: int, r: int, sparsity: float, prng: Prng
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Low-rank plus sparse instance (L0, S0, M, mask), mask all True.

    L0 is a product of Gaussian factors rescaled to unit spectral norm; S0
    has iid Bernoulli(sparsity) support with +-1 entries scaled to the max
    magnitude of L0, so corruptions are never vanishingly small.  Draw order:
    left factor, right factor, support uniforms, sign bits.
    """
    if n1 < 1 or n2 < 1 or r < 0 or r > min(n1, n2):
        raise InvalidShapeError(f"invalid shape n1={n1}, n2={n2}, r={r}")
    if not 0.0 <= sparsity < 1.0:
        raise InvalidShapeError(f"sparsity must be in [0,1), got {sparsity}")
    if r > 0:
        u = prng.normal_matrix(n1, r)
        v = prng.normal_matrix(n2, r)
        l0 = u @ v.T
        top = float(np.linalg.svd(l0, compute_uv=False)[0])
        if top > 0.0:
            l0 = l0 / top
    else:
        l0 = np.zeros((n1, n2))
    support = prng.uniform_matrix(n1, n2) < sparsity
    signs = np.where(prng.uniform_matrix(n1, n2) < 0.5, -1.0, 1.0)
    amplitude = float(np.abs(l0).max())
    s0 = np.where(support, signs * amplitude, 0.0)
    mask = np.ones((n1, n2), dtype=bool)
    return l0, s0, l0 + s0, mask


def gen_planted_clique(n: int, k: int, prng: Prng) -> tuple[np.ndarray, list[int]]:
    """G(n, 1/2) adjacency with unit diagonal and a planted k-clique.

    Draw order: the clique subset, then one coin per pair (i < j) in row-major
    order; clique pairs are overwritten with 1 afterwards.
    """
    if not 2 <= k <= n:
        raise InvalidKError(f"k must satisfy 2 <= k <= {n}, got {k}")
    clique = prng.subset(n, k)
    m = n * (n - 1) // 2
    coins = (prng.u64_block(m) & np.uint64(1)).astype(np.float64)
    a = np.eye(n)
    iu = np.triu_indices(n, k=1)
    a[iu] = coins
    a = np.maximum(a, a.T)
    idx = np.array(clique)
    a[np.ix_(idx, idx)] = 1.0
    return a, clique


def gen_sampling_operator(
    n1: int, n2: int, rate: float, transform, prng: Prng
) -> SamplingOperator:
    """Bernoulli(rate) coefficient mask, optionally behind an orthogonal pair.

    ``transform`` is None for plain entry sampling or a pair (G, H) of
    orthogonal matrices applied as G X H^T before masking.  If no coefficient
    is selected, the one with the largest draw is forced on.
    """
    if n1 < 1 or n2 < 1:
        raise InvalidShapeError(f"invalid shape n1={n1}, n2={n2}")
    if not 0.0 < rate <= 1.0:
        raise InvalidRateError(f"rate must be in (0,1], got {rate}")
    draws = prng.uniform_matrix(n1, n2)
    mask = draws < rate
    if not mask.any():
        flat = int(np.argmax(draws))
        mask.flat[flat] = True
    if transform is None:
        return SamplingOperator(mask=mask)
    g, h = transform
    from .kernels import require_orthogonal

    return SamplingOperator(
        mask=mask,
        g=require_orthogonal(g, tol=1e-10, name="transform g"),
        h=require_orthogonal(h, tol=1e-10, name="transform h"),
    )
