"""Two-block consensus ADMM solvers for the six convex programs.

Every solver is an instance of the same splitting pattern: one block holds
variables with cheap separable proximal maps (soft thresholding, singular
value thresholding, trace shrinkage), the other block absorbs the coupling
(log-likelihood, data-fit equality, feasibility ball, clique mass) through a
closed-form minimization or Euclidean projection, and a scaled dual enforces
consensus between the two.  Results carry full residual histories, a
constraint-violation report for the returned point, and are bit-reproducible
for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyMaskError,
    InfeasibleRadiusError,
    InvalidKError,
    NotPsdError,
)
from .kernels import as_matrix, as_vector, require_orthogonal, require_symmetric
from .prox import svt_with_values
from . import textio

CONVERGED = "converged"
MAX_ITERS = "max_iters"
DIVERGED = "diverged"

RHO_MIN = 1e-4
RHO_MAX = 1e4

DIAGNOSTIC_FIELDS = ["iter", "objective", "r_primal", "r_dual", "rho"]


@dataclass
class SolverConfig:
    """ADMM knobs: penalty, iteration cap, and stopping tolerances."""

    rho: float = 1.0
    max_iters: int = 2000
    eps_abs: float = 1e-7
    eps_rel: float = 1e-5
    adaptive_rho: bool = True

    def __post_init__(self):
        if self.rho <= 0 or self.eps_abs <= 0 or self.eps_rel <= 0:
            raise ValueError("rho, eps_abs and eps_rel must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class GlassoProblem:
    """l1-penalized Gaussian max likelihood for a sparse concentration matrix."""

    sigma: np.ndarray
    lam: float
    penalize_diagonal: bool = False


@dataclass
class LvglassoProblem:
    """Sparse-minus-low-rank concentration fit, penalty lam*(gamma*||S||_1 + tr L)."""

    sigma: np.ndarray
    lam: float
    gamma: float
    penalize_diagonal: bool = False


@dataclass
class RpcaProblem:
    """Nuclear + l1 decomposition of (partially) observed entries."""

    m: np.ndarray
    mask: np.ndarray | None = None  # boolean, True = observed; None = all observed
    lam: float | None = None  # defaults to 1/sqrt(max dimension)


@dataclass
class RobustRegressionProblem:
    """min ||b||_1 + lam*||e||_1 subject to y = X b + e."""

    x: np.ndarray
    y: np.ndarray
    lam: float


@dataclass
class CsLpsProblem:
    """Undersampled low-rank + transform-sparse recovery.

    mode "single": min ||X||_* + lam*||W X F||_1  s.t. ||A(X) - y||_2 <= eps.
    mode "background": min lam*||L||_* + ||W S F||_1  s.t. ||A(L+S) - y|| <= eps.
    """

    op: object  # synth.SamplingOperator
    y: np.ndarray
    eps: float
    w: np.ndarray
    f: np.ndarray
    lam: float
    mode: str = "single"


@dataclass
class PlantedCliqueProblem:
    """min ||X||_* + lam*||X||_1 over the clique-consistent feasible set."""

    adjacency: np.ndarray
    k: int
    lam: float


@dataclass
class SolveResult:
    """Final iterates plus the full per-iteration diagnostic record."""

    variables: dict[str, np.ndarray]
    objective_value: float
    objective: np.ndarray
    r_primal: np.ndarray
    r_dual: np.ndarray
    rho: np.ndarray
    iterations: int
    status: str
    constraint_report: dict[str, float]
    aux: dict = field(default_factory=dict)


def _norm_all(arrs) -> float:
    return float(np.sqrt(sum(float(np.sum(a * a)) for a in arrs)))


def _run_admm(splitting, config: SolverConfig):
    """Generic x -> z -> u loop; splitting supplies the two block maps."""
    zs = [np.array(z, dtype=np.float64) for z in splitting.initial_z()]
    us = [np.zeros_like(z) for z in zs]
    xs = [np.zeros_like(z) for z in zs]
    rho = float(config.rho)
    sqrt_dim = float(np.sqrt(sum(z.size for z in zs)))
    hist_obj, hist_rp, hist_rd, hist_rho = [], [], [], []
    status = MAX_ITERS
    r0 = None
    last_vs = zs
    for it in range(config.max_iters):
        vs = [z - u for z, u in zip(zs, us)]
        xs = splitting.prox_step(vs, rho)
        ws = [x + u for x, u in zip(xs, us)]
        zs_old = zs
        zs = splitting.project_step(ws, rho)
        us = [u + x - z for u, x, z in zip(us, xs, zs)]
        r_pri = _norm_all([x - z for x, z in zip(xs, zs)])
        r_dual = rho * _norm_all([z - zo for z, zo in zip(zs, zs_old)])
        hist_obj.append(splitting.objective(xs, zs))
        hist_rp.append(r_pri)
        hist_rd.append(r_dual)
        hist_rho.append(rho)
        last_vs = vs
        eps_pri = sqrt_dim * config.eps_abs + config.eps_rel * max(_norm_all(xs), _norm_all(zs))
        eps_dual = sqrt_dim * config.eps_abs + config.eps_rel * rho * _norm_all(us)
        if r_pri <= eps_pri and r_dual <= eps_dual:
            status = CONVERGED
            break
        if it == 0:
            r0 = max(r_pri, r_dual, 1e-12)
        elif max(r_pri, r_dual) > 1e6 * r0:
            status = DIVERGED
            break
        # Residual balancing, at most once per 10 iterations, duals rescaled.
        if config.adaptive_rho and (it + 1) % 10 == 0:
            if r_pri > 10.0 * r_dual and rho * 2.0 <= RHO_MAX:
                rho *= 2.0
                us = [u / 2.0 for u in us]
            elif r_dual > 10.0 * r_pri and rho / 2.0 >= RHO_MIN:
                rho /= 2.0
                us = [u * 2.0 for u in us]
    histories = {
        "objective": np.array(hist_obj),
        "r_primal": np.array(hist_rp),
        "r_dual": np.array(hist_rd),
        "rho": np.array(hist_rho),
        "eps_primal": sqrt_dim * config.eps_abs
        + config.eps_rel * max(_norm_all(xs), _norm_all(zs)),
        "eps_dual": sqrt_dim * config.eps_abs + config.eps_rel * rho * _norm_all(us),
    }
    return xs, zs, us, last_vs, histories, status


def _result(variables, objective_value, histories, status, report, aux=None) -> SolveResult:
    merged = dict(aux or {})
    merged.setdefault("eps_primal", float(histories["eps_primal"]))
    merged.setdefault("eps_dual", float(histories["eps_dual"]))
    return SolveResult(
        variables=variables,
        objective_value=float(objective_value),
        objective=histories["objective"],
        r_primal=histories["r_primal"],
        r_dual=histories["r_dual"],
        rho=histories["rho"],
        iterations=len(histories["objective"]),
        status=status,
        constraint_report=report,
        aux=merged,
    )


def _require_psd_input(sigma, name: str = "sigma") -> np.ndarray:
    sigma = require_symmetric(sigma, name=name)
    min_eig = float(np.linalg.eigvalsh(sigma).min())
    scale = max(1.0, float(np.abs(sigma).max()))
    if min_eig < -1e-8 * scale:
        raise NotPsdError(f"{name} has eigenvalue {min_eig:.3e} < 0")
    return sigma


def _soft_masked(v: np.ndarray, tau: float, pen_mask: np.ndarray) -> np.ndarray:
    """Soft threshold only where pen_mask is True; other entries pass through."""
    out = v.copy()
    if tau > 0.0:
        shrunk = np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)
        out[pen_mask] = shrunk[pen_mask]
    return out


def _penalty_l1(a: np.ndarray, pen_mask: np.ndarray) -> float:
    return float(np.abs(a[pen_mask]).sum())


def _logdet_phi(b: np.ndarray, c: float) -> np.ndarray:
    """Solve D - c * D^{-1} = B on the eigenvalues: d = (e + sqrt(e^2 + 4c))/2."""
    e, q = np.linalg.eigh((b + b.T) / 2.0)
    d = (e + np.sqrt(e * e + 4.0 * c)) / 2.0
    out = (q * d) @ q.T
    return (out + out.T) / 2.0


def _sym_svt(a: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """SVT of a symmetric matrix via eigendecomposition (singular values |eig|)."""
    e, q = np.linalg.eigh((a + a.T) / 2.0)
    shrunk = np.sign(e) * np.maximum(np.abs(e) - tau, 0.0)
    out = (q * shrunk) @ q.T
    return (out + out.T) / 2.0, np.abs(shrunk)


# --------------------------------------------------------------------------
# Graphical lasso
# --------------------------------------------------------------------------


class _GlassoSplitting:
    def __init__(self, sigma, lam, pen_mask):
        self.sigma = sigma
        self.lam = lam
        self.pen_mask = pen_mask

    def initial_z(self):
        return [np.eye(self.sigma.shape[0])]

    def prox_step(self, vs, rho):
        s = _soft_masked(vs[0], self.lam / rho, self.pen_mask)
        return [(s + s.T) / 2.0]

    def project_step(self, ws, rho):
        return [_logdet_phi(ws[0] - self.sigma / rho, 1.0 / rho)]

    def objective(self, xs, zs):
        r = zs[0]
        _, logdet = np.linalg.slogdet(r)
        return float(-logdet + np.sum(r * self.sigma) + self.lam * _penalty_l1(xs[0], self.pen_mask))


def glasso_solve(problem: GlassoProblem, config: SolverConfig | None = None) -> SolveResult:
    """Solve the graphical lasso; see GlassoProblem.

    The returned ``S`` is the sparse consensus copy; the constraint report
    carries the PSD violation and the max-norm KKT stationarity residual
    (computed with the subgradient certificate extracted from the final
    thresholding step).
    """
    config = config or SolverConfig()
    sigma = _require_psd_input(as_matrix(problem.sigma))
    if np.any(np.diag(sigma) <= 0.0):
        raise NotPsdError("sigma must have strictly positive diagonal")
    lam = float(problem.lam)
    if lam < 0.0:
        raise ValueError("lam must be >= 0")
    p = sigma.shape[0]
    pen_mask = np.ones((p, p), dtype=bool)
    if not problem.penalize_diagonal:
        np.fill_diagonal(pen_mask, False)

    split = _GlassoSplitting(sigma, lam, pen_mask)
    xs, zs, us, vs, hist, status = _run_admm(split, config)
    s = xs[0]

    report = {}
    eigvals = np.linalg.eigvalsh(s)
    report["psd"] = float(max(0.0, -eigvals.min()))
    kkt = np.inf
    if eigvals.min() > 0.0:
        s_inv = np.linalg.inv(s)
        s_inv = (s_inv + s_inv.T) / 2.0
        if lam > 0.0:
            # prox optimality: lam * G = rho * (v - x) on penalized entries
            g = np.zeros_like(s)
            g[pen_mask] = (vs[0] - s)[pen_mask] * hist["rho"][-1] / lam
            kkt = float(np.abs(s_inv - sigma - lam * g).max())
        else:
            kkt = float(np.abs(s_inv - sigma).max())
    report["kkt_stationarity"] = kkt

    _, logdet = np.linalg.slogdet(s) if eigvals.min() > 0 else (1.0, -np.inf)
    if np.isfinite(logdet):
        obj = float(-logdet + np.sum(s * sigma) + lam * _penalty_l1(s, pen_mask))
    else:
        obj = float(hist["objective"][-1])
    return _result({"S": s}, obj, hist, status, report)


# --------------------------------------------------------------------------
# Latent-variable graphical lasso
# --------------------------------------------------------------------------


class _LvglassoSplitting:
    def __init__(self, sigma, lam, gamma, pen_mask):
        self.sigma = sigma
        self.lam = lam
        self.gamma = gamma
        self.pen_mask = pen_mask

    def initial_z(self):
        p = self.sigma.shape[0]
        return [np.eye(p), np.zeros((p, p))]

    def prox_step(self, vs, rho):
        s = _soft_masked(vs[0], self.lam * self.gamma / rho, self.pen_mask)
        s = (s + s.T) / 2.0
        e, q = np.linalg.eigh((vs[1] + vs[1].T) / 2.0)
        d = np.maximum(e - self.lam / rho, 0.0)
        l = (q * d) @ q.T
        return [s, (l + l.T) / 2.0]

    def project_step(self, ws, rho):
        a1, a2 = ws
        # joint minimizer of -logdet(S'-L') + tr((S'-L') Sigma) + quadratics
        diff = a1 - a2
        d = _logdet_phi(diff - (2.0 / rho) * self.sigma, 2.0 / rho)
        t = (d - diff) / 2.0
        return [a1 + t, a2 - t]

    def objective(self, xs, zs):
        r = zs[0] - zs[1]
        _, logdet = np.linalg.slogdet(r)
        pen = self.gamma * _penalty_l1(xs[0], self.pen_mask) + float(np.trace(xs[1]))
        return float(-logdet + np.sum(r * self.sigma) + self.lam * pen)


def lvglasso_solve(problem: LvglassoProblem, config: SolverConfig | None = None) -> SolveResult:
    """Solve the latent-variable graphical lasso; see LvglassoProblem.

    Returns sparse ``S`` and PSD ``L`` with ``S - L`` positive definite after
    the final diagonal correction (amount recorded in the constraint report
    under ``pd_correction``).
    """
    config = config or SolverConfig()
    sigma = _require_psd_input(as_matrix(problem.sigma))
    lam = float(problem.lam)
    gamma = float(problem.gamma)
    if lam <= 0.0 or gamma <= 0.0:
        raise ValueError("lam and gamma must be > 0")
    p = sigma.shape[0]
    pen_mask = np.ones((p, p), dtype=bool)
    if not problem.penalize_diagonal:
        np.fill_diagonal(pen_mask, False)

    split = _LvglassoSplitting(sigma, lam, gamma, pen_mask)
    xs, zs, us, vs, hist, status = _run_admm(split, config)
    s, low = xs

    report = {}
    report["consensus"] = float(np.linalg.norm((zs[0] - zs[1]) - (s - low)))
    report["l_psd"] = float(max(0.0, -np.linalg.eigvalsh(low).min()))
    min_eig = float(np.linalg.eigvalsh(s - low).min())
    correction = 0.0
    if min_eig <= 1e-8:
        correction = 1e-8 if min_eig > 0.0 else 1e-8 - min_eig
        s = s + correction * np.eye(p)
    report["pd_correction"] = correction
    report["sl_min_eig"] = float(np.linalg.eigvalsh(s - low).min())

    r = s - low
    sign, logdet = np.linalg.slogdet(r)
    if sign > 0 and np.isfinite(logdet):
        pen = gamma * _penalty_l1(s, pen_mask) + float(np.trace(low))
        obj = float(-logdet + np.sum(r * sigma) + lam * pen)
    else:
        obj = float(hist["objective"][-1])
    return _result({"S": s, "L": low}, obj, hist, status, report)


# --------------------------------------------------------------------------
# Robust PCA / matrix completion
# --------------------------------------------------------------------------


class _RpcaSplitting:
    def __init__(self, m, mask, lam):
        self.m = m
        self.mask = mask
        self.lam = lam
        self._nuc = 0.0

    def initial_z(self):
        return [np.zeros_like(self.m), np.zeros_like(self.m)]

    def prox_step(self, vs, rho):
        low, svals = svt_with_values(vs[0], 1.0 / rho)
        self._nuc = float(svals.sum())
        s = np.sign(vs[1]) * np.maximum(np.abs(vs[1]) - self.lam / rho, 0.0)
        s[~self.mask] = 0.0
        return [low, s]

    def project_step(self, ws, rho):
        a1, a2 = ws
        c = np.where(self.mask, (self.m - a1 - a2) / 2.0, 0.0)
        return [a1 + c, a2 + c]

    def objective(self, xs, zs):
        return float(self._nuc + self.lam * np.abs(xs[1]).sum())


def rpca_solve(problem: RpcaProblem, config: SolverConfig | None = None) -> SolveResult:
    """Solve robust PCA with (optionally) partial observations.

    The sparse component is returned as the exact observed residual
    ``S = P_mask(M - L)``, so the observed-entry equality holds to machine
    precision and unobserved entries of S are exactly zero.
    """
    config = config or SolverConfig()
    m = as_matrix(problem.m, "m")
    if problem.mask is None:
        mask = np.ones(m.shape, dtype=bool)
    else:
        mask = np.asarray(problem.mask, dtype=bool)
        if mask.shape != m.shape:
            raise DimensionMismatchError(f"mask shape {mask.shape} != data shape {m.shape}")
    if not mask.any():
        raise EmptyMaskError("observation mask selects no entries")
    lam = float(problem.lam) if problem.lam is not None else 1.0 / np.sqrt(max(m.shape))

    split = _RpcaSplitting(m, mask, lam)
    xs, zs, us, vs, hist, status = _run_admm(split, config)
    low = xs[0]
    s = np.where(mask, m - low, 0.0)

    report = {
        "observed_equality": float(np.abs(np.where(mask, m - low - s, 0.0)).max()),
        "s_support": float(np.abs(np.where(mask, 0.0, s)).max()),
        "s_correction": float(np.abs(s - xs[1]).max()),
    }
    obj = float(np.linalg.svd(low, compute_uv=False).sum() + lam * np.abs(s).sum())
    return _result({"L": low, "S": s}, obj, hist, status, report, aux={"lam": lam})


# --------------------------------------------------------------------------
# Robust regression
# --------------------------------------------------------------------------


class _RobustRegressionSplitting:
    def __init__(self, x, y, lam):
        self.x = x
        self.y = y
        self.lam = lam
        self.proj = np.linalg.inv(x @ x.T + np.eye(x.shape[0]))

    def initial_z(self):
        return [np.zeros(self.x.shape[1]), np.zeros(self.x.shape[0])]

    def prox_step(self, vs, rho):
        b = np.sign(vs[0]) * np.maximum(np.abs(vs[0]) - 1.0 / rho, 0.0)
        e = np.sign(vs[1]) * np.maximum(np.abs(vs[1]) - self.lam / rho, 0.0)
        return [b, e]

    def project_step(self, ws, rho):
        a1, a2 = ws
        nu = self.proj @ (self.x @ a1 + a2 - self.y)
        return [a1 - self.x.T @ nu, a2 - nu]

    def objective(self, xs, zs):
        # evaluated at the feasible point (b, y - X b) that would be returned
        return float(np.abs(xs[0]).sum() + self.lam * np.abs(self.y - self.x @ xs[0]).sum())


def robust_regression_solve(
    problem: RobustRegressionProblem, config: SolverConfig | None = None
) -> SolveResult:
    """Solve l1 regression with sparse gross errors; see RobustRegressionProblem.

    Returns the sparse coefficient iterate ``b`` and the exact residual
    ``e = y - X b`` so the equality constraint holds to machine precision.
    """
    config = config or SolverConfig()
    x = as_matrix(problem.x, "x")
    y = as_vector(problem.y, "y")
    if y.size != x.shape[0]:
        raise DimensionMismatchError(f"len(y)={y.size} does not match rows of X={x.shape[0]}")
    lam = float(problem.lam)
    if lam <= 0.0:
        raise ValueError("lam must be > 0")

    split = _RobustRegressionSplitting(x, y, lam)
    xs, zs, us, vs, hist, status = _run_admm(split, config)
    b = xs[0]
    e = y - x @ b

    report = {
        "equality": float(np.abs(y - x @ b - e).max()),
        "e_correction": float(np.abs(e - xs[1]).max()),
    }
    obj = float(np.abs(b).sum() + lam * np.abs(e).sum())
    return _result({"b": b, "e": e}, obj, hist, status, report, aux={"lam": lam})


# --------------------------------------------------------------------------
# Compressive low-rank + sparse acquisition
# --------------------------------------------------------------------------


class _CsLpsSplitting:
    def __init__(self, op, y, eps, w, f, lam, mode):
        self.op = op
        self.y = y
        self.eps = eps
        self.w = w
        self.f = f
        self.lam = lam
        self.mode = mode
        self._nuc = 0.0
        self._l1 = 0.0
        self.feas_history = []

    def initial_z(self):
        shape = self.op.shape
        return [np.zeros(shape), np.zeros(shape)]

    def _transform_prox(self, v, tau):
        coeffs = self.w @ v @ self.f
        shrunk = np.sign(coeffs) * np.maximum(np.abs(coeffs) - tau, 0.0)
        self._l1 = float(np.abs(shrunk).sum())
        return self.w.T @ shrunk @ self.f.T

    def prox_step(self, vs, rho):
        if self.mode == "single":
            x1, svals = svt_with_values(vs[0], 1.0 / rho)
            self._nuc = float(svals.sum())
            x2 = self._transform_prox(vs[1], self.lam / rho)
        else:
            x1, svals = svt_with_values(vs[0], self.lam / rho)
            self._nuc = float(svals.sum())
            x2 = self._transform_prox(vs[1], 1.0 / rho)
        return [x1, x2]

    def project_step(self, ws, rho):
        a1, a2 = ws
        if self.mode == "single":
            z = self.op.project_ball((a1 + a2) / 2.0, self.y, self.eps)
            return [z, z]
        t = self.op.project_ball(a1 + a2, self.y, self.eps)
        c = (t - a1 - a2) / 2.0
        return [a1 + c, a2 + c]

    def objective(self, xs, zs):
        if self.mode == "single":
            obj = self._nuc + self.lam * self._l1
            point = (xs[0] + xs[1]) / 2.0
        else:
            obj = self.lam * self._nuc + self._l1
            point = xs[0] + xs[1]
        self.feas_history.append(float(np.linalg.norm(self.op.apply(point) - self.y)))
        return float(obj)


def cs_lps_solve(problem: CsLpsProblem, config: SolverConfig | None = None) -> SolveResult:
    """Solve the compressive L+S acquisition program; see CsLpsProblem.

    The returned variables come from the projected consensus copy, so the
    feasibility ball constraint holds to machine precision.
    """
    config = config or SolverConfig()
    if problem.mode not in ("single", "background"):
        raise ValueError(f"mode must be 'single' or 'background', got {problem.mode!r}")
    w = require_orthogonal(problem.w, name="w")
    f = require_orthogonal(problem.f, name="f")
    y = as_vector(problem.y, "y")
    eps = float(problem.eps)
    if eps < 0.0:
        raise ValueError("eps must be >= 0")
    lam = float(problem.lam)
    if lam <= 0.0:
        raise ValueError("lam must be > 0")
    op = problem.op
    n1, n2 = op.shape
    if w.shape[0] != n1 or f.shape[0] != n2:
        raise DimensionMismatchError(
            f"W {w.shape} / F {f.shape} do not conform with operator shape {op.shape}"
        )
    if y.size != int(np.count_nonzero(op.mask)):
        raise DimensionMismatchError("y length does not match the operator mask")

    split = _CsLpsSplitting(op, y, eps, w, f, lam, problem.mode)
    xs, zs, us, vs, hist, status = _run_admm(split, config)

    if problem.mode == "single":
        xhat = zs[0]
        feas = float(np.linalg.norm(op.apply(xhat) - y))
        obj = float(
            np.linalg.svd(xhat, compute_uv=False).sum() + lam * np.abs(w @ xhat @ f).sum()
        )
        variables = {"X": xhat}
    else:
        lhat, shat = zs
        feas = float(np.linalg.norm(op.apply(lhat + shat) - y))
        obj = float(
            lam * np.linalg.svd(lhat, compute_uv=False).sum() + np.abs(w @ shat @ f).sum()
        )
        variables = {"L": lhat, "S": shat}

    if status != CONVERGED:
        fh = split.feas_history
        stall = len(fh) > 200 and fh[-1] > eps + 0.01 * max(1.0, float(np.linalg.norm(y)))
        if stall and fh[-1] > 0.999 * fh[len(fh) // 2]:
            raise InfeasibleRadiusError(
                f"feasibility residual stalled at {fh[-1]:.3e} > eps={eps:.3e}"
            )
    report = {"feasibility": float(max(0.0, feas - eps))}
    return _result(variables, obj, hist, status, report, aux={"feasibility_norm": feas})


# --------------------------------------------------------------------------
# Planted clique
# --------------------------------------------------------------------------


class _CliqueSplitting:
    def __init__(self, allowed, ksq):
        self.allowed = allowed
        self.ksq = ksq
        self.lam = None  # set by solver
        self._nuc = 0.0

    def initial_z(self):
        n = self.allowed.shape[0]
        z = np.zeros((n, n))
        z[self.allowed] = self.ksq / self.allowed.sum()
        return [z, z]

    def prox_step(self, vs, rho):
        # iterates stay symmetric, so SVT runs on the eigendecomposition
        x1, svals = _sym_svt(vs[0], 1.0 / rho)
        self._nuc = float(svals.sum())
        x2 = np.sign(vs[1]) * np.maximum(np.abs(vs[1]) - self.lam / rho, 0.0)
        return [x1, x2]

    def project_step(self, ws, rho):
        v = (ws[0] + ws[1]) / 2.0
        v = (v + v.T) / 2.0
        v[~self.allowed] = 0.0
        v[self.allowed] += (self.ksq - v[self.allowed].sum()) / self.allowed.sum()
        return [v, v]

    def objective(self, xs, zs):
        return float(self._nuc + self.lam * np.abs(xs[1]).sum())


def planted_clique_solve(
    problem: PlantedCliqueProblem, config: SolverConfig | None = None
) -> SolveResult:
    """Solve the planted-clique relaxation; see PlantedCliqueProblem.

    Feasible set: symmetric X, zero on non-edges, total mass over
    edges-plus-diagonal equal to k^2.  The clique estimate is the index set
    of the k largest row sums of the returned X.
    """
    config = config or SolverConfig()
    a = require_symmetric(as_matrix(problem.adjacency, "adjacency"), name="adjacency")
    n = a.shape[0]
    k = int(problem.k)
    if not 2 <= k <= n:
        raise InvalidKError(f"k must satisfy 2 <= k <= {n}, got {k}")
    lam = float(problem.lam)
    if lam <= 0.0:
        raise ValueError("lam must be > 0")
    allowed = a > 0.5
    np.fill_diagonal(allowed, True)  # unit diagonal adopted

    split = _CliqueSplitting(allowed, float(k) ** 2)
    split.lam = lam
    xs, zs, us, vs, hist, status = _run_admm(split, config)
    xhat = zs[0]

    row_sums = xhat.sum(axis=1)
    estimate = np.sort(np.argsort(-row_sums, kind="stable")[:k])
    report = {
        "off_support": float(np.abs(np.where(allowed, 0.0, xhat)).max()),
        "mass": float(abs(xhat[allowed].sum() - k * k)),
        "symmetry": float(np.abs(xhat - xhat.T).max()),
    }
    obj = float(np.linalg.svd(xhat, compute_uv=False).sum() + lam * np.abs(xhat).sum())
    return _result(
        {"X": xhat}, obj, hist, status, report, aux={"clique_estimate": estimate.tolist()}
    )


# --------------------------------------------------------------------------
# Diagnostics
# --------------------------------------------------------------------------


def admm_step_report(result: SolveResult) -> list[dict]:
    """Per-iteration diagnostic rows (iter, objective, residuals, rho)."""
    rows = []
    for i in range(result.iterations):
        rows.append(
            {
                "iter": i,
                "objective": float(result.objective[i]),
                "r_primal": float(result.r_primal[i]),
                "r_dual": float(result.r_dual[i]),
                "rho": float(result.rho[i]),
            }
        )
    return rows


def write_diagnostics_csv(result: SolveResult, path) -> None:
    textio.write_csv(path, DIAGNOSTIC_FIELDS, admm_step_report(result))


def save_problem(problem, directory, prefix: str) -> list[str]:
    """Serialize a problem spec: matrices as files, scalars in a header block."""
    import os

    header: dict[str, str] = {}
    mats: dict[str, np.ndarray] = {}
    fmt = textio.format_float
    if isinstance(problem, GlassoProblem):
        header = {"kind": "glasso", "lam": fmt(problem.lam),
                  "penalize_diagonal": "1" if problem.penalize_diagonal else "0"}
        mats = {"sigma": problem.sigma}
    elif isinstance(problem, LvglassoProblem):
        header = {"kind": "lvglasso", "lam": fmt(problem.lam), "gamma": fmt(problem.gamma),
                  "penalize_diagonal": "1" if problem.penalize_diagonal else "0"}
        mats = {"sigma": problem.sigma}
    elif isinstance(problem, RpcaProblem):
        header = {"kind": "rpca",
                  "lam": fmt(problem.lam) if problem.lam is not None else ""}
        mats = {"m": problem.m}
        if problem.mask is not None:
            mats["mask"] = np.asarray(problem.mask, dtype=float)
    elif isinstance(problem, RobustRegressionProblem):
        header = {"kind": "robust_regression", "lam": fmt(problem.lam)}
        mats = {"x": problem.x, "y": np.atleast_2d(problem.y).T}
    elif isinstance(problem, CsLpsProblem):
        header = {"kind": "cs_lps", "lam": fmt(problem.lam), "eps": fmt(problem.eps),
                  "mode": problem.mode,
                  "op_transform": "0" if problem.op.g is None else "1"}
        mats = {"y": np.atleast_2d(problem.y).T, "w": problem.w, "f": problem.f,
                "op_mask": np.asarray(problem.op.mask, dtype=float)}
        if problem.op.g is not None:
            mats["op_g"] = problem.op.g
            mats["op_h"] = problem.op.h
    elif isinstance(problem, PlantedCliqueProblem):
        header = {"kind": "clique", "k": str(problem.k), "lam": fmt(problem.lam)}
        mats = {"adjacency": problem.adjacency}
    else:
        raise ValueError(f"unknown problem type {type(problem).__name__}")

    paths = []
    for name, mat in mats.items():
        path = os.path.join(directory, f"{prefix}_{name}.mat")
        textio.write_matrix(path, mat, header={"problem": header["kind"], "field": name})
        paths.append(path)
    head_path = os.path.join(directory, f"{prefix}_problem.txt")
    textio.write_keyvalues(head_path, header)
    paths.append(head_path)
    return paths


def load_problem(directory, prefix: str):
    """Reconstruct a problem spec written by save_problem."""
    import os

    from .synth import SamplingOperator

    header = textio.read_keyvalues(os.path.join(directory, f"{prefix}_problem.txt"))

    def mat(name):
        return textio.read_matrix(os.path.join(directory, f"{prefix}_{name}.mat"))[0]

    kind = header["kind"]
    if kind == "glasso":
        return GlassoProblem(mat("sigma"), float(header["lam"]),
                             header["penalize_diagonal"] == "1")
    if kind == "lvglasso":
        return LvglassoProblem(mat("sigma"), float(header["lam"]), float(header["gamma"]),
                               header["penalize_diagonal"] == "1")
    if kind == "rpca":
        mask_path = os.path.join(directory, f"{prefix}_mask.mat")
        mask = textio.read_matrix(mask_path)[0] > 0.5 if os.path.exists(mask_path) else None
        lam = float(header["lam"]) if header["lam"] else None
        return RpcaProblem(mat("m"), mask, lam)
    if kind == "robust_regression":
        return RobustRegressionProblem(mat("x"), mat("y").reshape(-1), float(header["lam"]))
    if kind == "cs_lps":
        if header["op_transform"] == "1":
            op = SamplingOperator(mask=mat("op_mask") > 0.5, g=mat("op_g"), h=mat("op_h"))
        else:
            op = SamplingOperator(mask=mat("op_mask") > 0.5)
        return CsLpsProblem(op, mat("y").reshape(-1), float(header["eps"]),
                            mat("w"), mat("f"), float(header["lam"]), header["mode"])
    if kind == "clique":
        return PlantedCliqueProblem(mat("adjacency"), int(header["k"]), float(header["lam"]))
    raise ValueError(f"unknown problem kind {kind!r}")


def save_solve_result(result: SolveResult, directory, prefix: str) -> list[str]:
    """Serialize a result: one matrix file per variable plus a summary block."""
    import os

    paths = []
    summary = {
        "status": result.status,
        "iterations": str(result.iterations),
        "objective_value": textio.format_float(result.objective_value),
    }
    for key, value in result.constraint_report.items():
        summary[f"constraint_{key}"] = textio.format_float(value)
    for key, value in result.aux.items():
        if isinstance(value, (list, tuple)):
            summary[key] = ",".join(str(v) for v in value)
        elif isinstance(value, float):
            summary[key] = textio.format_float(value)
        else:
            summary[key] = str(value)
    for name, arr in result.variables.items():
        mat = np.atleast_2d(arr)
        if arr.ndim == 1:
            mat = mat.T
        path = os.path.join(directory, f"{prefix}_{name}.mat")
        textio.write_matrix(path, mat, header={"variable": name, "status": result.status})
        paths.append(path)
    summary_path = os.path.join(directory, f"{prefix}_result.txt")
    textio.write_keyvalues(summary_path, summary)
    paths.append(summary_path)
    diag_path = os.path.join(directory, f"{prefix}_diagnostics.csv")
    write_diagnostics_csv(result, diag_path)
    paths.append(diag_path)
    return paths
