"""Recovery metrics, phase-transition grids, and the adaptivity experiment.

Trials are pure functions of (cell parameters, derived seed), so grids can be
filled serially or in parallel (capped by LSLAB_THREADS) with identical
results merged by index.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DimensionMismatchError, UnknownFamilyError
from .prng import Prng, derive_key
from .solvers import (
    GlassoProblem,
    LvglassoProblem,
    PlantedCliqueProblem,
    RpcaProblem,
    SolverConfig,
    glasso_solve,
    lvglasso_solve,
    planted_clique_solve,
    rpca_solve,
)
from .synth import gen_latent_model, gen_lowrank_sparse, gen_planted_clique, gen_sampling_operator, sample_empirical_cov
from . import textio

DEFAULT_SUCCESS_TOL = 1e-3
DEFAULT_ZERO_TOL_SCALE = 1e-4

TRIAL_FIELDS_TAIL = ["trial", "rel_error", "support_f1", "sign_consistency", "rank_hat", "success"]
CELL_FIELDS_TAIL = ["trials", "success_rate", "mean_rel_error", "mean_support_f1"]

ADAPTIVITY_TRIAL_FIELDS = [
    "h", "n", "trial",
    "glasso_best_f1", "glasso_best_lambda",
    "lvglasso_best_f1", "lvglasso_best_lambda", "lvglasso_best_gamma",
    "lvglasso_rank_at_best", "lvglasso_lfrob_at_gamma_max",
]
ADAPTIVITY_CELL_FIELDS = [
    "h", "n", "trials",
    "glasso_best_f1", "glasso_best_lambda",
    "lvglasso_best_f1", "lvglasso_best_lambda", "lvglasso_best_gamma",
    "lvglasso_rank_median_at_best", "max_lfrob_at_gamma_max",
]


@dataclass(frozen=True)
class RecoveryScore:
    rel_error_F: float
    support_f1: float
    sign_consistency: bool
    rank_hat: int
    success: bool


@dataclass
class ExperimentGrid:
    """Axes cross product with per-cell trial results.

    ``axes`` maps axis name to its value list (cells iterate in row-major
    order over the axes in insertion order); ``fixed`` holds parameters shared
    by every cell.
    """

    family: str
    axes: dict[str, list]
    trials: int
    base_seed: int
    fixed: dict = field(default_factory=dict)
    cells: list[dict] = field(default_factory=list)
    results: list[list[RecoveryScore]] = field(default_factory=list)

    def cell_params(self) -> list[dict]:
        names = list(self.axes.keys())
        out = []
        for combo in product(*(self.axes[n] for n in names)):
            params = dict(self.fixed)
            params.update(dict(zip(names, combo)))
            out.append(params)
        return out

    def success_rate(self, cell_index: int) -> float:
        scores = self.results[cell_index]
        return sum(1 for s in scores if s.success) / len(scores)


def default_zero_tol(truth) -> float:
    scale = float(np.abs(truth).max())
    return DEFAULT_ZERO_TOL_SCALE * (scale if scale > 0.0 else 1.0)


def score_recovery(estimate, truth, zero_tol: float, success_tol: float) -> RecoveryScore:
    """Frobenius error, support F1, sign pattern match, and numerical rank."""
    estimate = np.asarray(estimate, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimate.shape != truth.shape:
        raise DimensionMismatchError(
            f"estimate shape {estimate.shape} != truth shape {truth.shape}"
        )
    if zero_tol <= 0.0 or success_tol <= 0.0:
        raise ValueError("zero_tol and success_tol must be > 0")
    rel = float(np.linalg.norm(estimate - truth) / max(1e-30, np.linalg.norm(truth)))
    sup_e = np.abs(estimate) > zero_tol
    sup_t = np.abs(truth) > zero_tol
    inter = int(np.count_nonzero(sup_e & sup_t))
    denom = int(np.count_nonzero(sup_e)) + int(np.count_nonzero(sup_t))
    f1 = 1.0 if denom == 0 else 2.0 * inter / denom
    signs_e = np.where(sup_e, np.sign(estimate), 0.0)
    signs_t = np.where(sup_t, np.sign(truth), 0.0)
    sign_ok = bool(np.array_equal(signs_e, signs_t))
    mat = np.atleast_2d(estimate)
    svals = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.count_nonzero(svals > zero_tol * svals[0])) if svals[0] > 0.0 else 0
    return RecoveryScore(
        rel_error_F=rel,
        support_f1=f1,
        sign_consistency=sign_ok,
        rank_hat=rank,
        success=rel <= success_tol,
    )


def _config_from(params: dict) -> SolverConfig:
    return SolverConfig(
        rho=float(params.get("rho", 1.0)),
        max_iters=int(params.get("max_iters", 2000)),
        eps_abs=float(params.get("eps_abs", 1e-7)),
        eps_rel=float(params.get("eps_rel", 1e-5)),
        adaptive_rho=bool(params.get("adaptive_rho", True)),
    )


def _offdiag(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    np.fill_diagonal(out, 0.0)
    return out


def _rpca_trial(params: dict, prng: Prng) -> RecoveryScore:
    n = int(params["n"])
    r = int(params["r"])
    corruption = float(params.get("corruption", 0.0))
    l0, s0, m, _ = gen_lowrank_sparse(n, n, r, corruption, prng)
    lam = None if params.get("lam") is None else float(params["lam"])
    result = rpca_solve(RpcaProblem(m, None, lam), _config_from(params))
    tol = float(params.get("success_tol", DEFAULT_SUCCESS_TOL))
    return score_recovery(result.variables["L"], l0, default_zero_tol(l0), tol)


def _completion_trial(params: dict, prng: Prng) -> RecoveryScore:
    n = int(params["n"])
    r = int(params["r"])
    rate = float(params["rate"])
    corruption = float(params.get("corruption", 0.0))
    l0, s0, m, _ = gen_lowrank_sparse(n, n, r, corruption, prng)
    op = gen_sampling_operator(n, n, rate, None, prng)
    # masked-RPCA weight: 1/sqrt(observed-rate * n), reducing to 1/sqrt(n) when full
    lam = float(params["lam"]) if params.get("lam") is not None else 1.0 / np.sqrt(rate * n)
    result = rpca_solve(RpcaProblem(m, op.mask, lam), _config_from(params))
    # completion estimate: exact observed entries plus the low-rank fill, so a
    # fully observed uncorrupted instance scores rel_error exactly zero
    estimate = result.variables["L"] + result.variables["S"]
    tol = float(params.get("success_tol", DEFAULT_SUCCESS_TOL))
    return score_recovery(estimate, l0, default_zero_tol(l0), tol)


def _clique_trial(params: dict, prng: Prng) -> RecoveryScore:
    n = int(params["n"])
    k = int(params["k"])
    adjacency, clique = gen_planted_clique(n, k, prng)
    lam = float(params["lam"]) if params.get("lam") is not None else 1.0 / np.sqrt(n)
    # the clique set stabilizes long before tolerance convergence; default capped,
    # and fixed rho keeps the residual trend monotone on large instances
    params = {"max_iters": 150, "adaptive_rho": False, **params}
    result = planted_clique_solve(PlantedCliqueProblem(adjacency, k, lam), _config_from(params))
    truth = np.zeros((n, n))
    idx = np.array(clique)
    truth[np.ix_(idx, idx)] = 1.0
    tol = float(params.get("success_tol", DEFAULT_SUCCESS_TOL))
    score = score_recovery(result.variables["X"], truth, default_zero_tol(truth), tol)
    # clique success is exact set recovery, stricter than matrix error
    exact = result.aux["clique_estimate"] == sorted(clique)
    return RecoveryScore(
        rel_error_F=score.rel_error_F,
        support_f1=score.support_f1,
        sign_consistency=score.sign_consistency,
        rank_hat=score.rank_hat,
        success=bool(exact),
    )


def _glasso_trial(params: dict, prng: Prng) -> RecoveryScore:
    p = int(params["p"])
    n = int(params["n"])
    degree = int(params.get("degree", 3))
    strength = float(params.get("strength", 0.3))
    model = gen_latent_model(p, 0, degree, strength, prng.substream(0))
    cov = sample_empirical_cov(model.sigma_obs, n, prng.substream(1))
    lam = float(params["lam"]) if params.get("lam") is not None else 2.0 * np.sqrt(np.log(p) / n)
    result = glasso_solve(GlassoProblem(cov, lam), _config_from(params))
    est = _offdiag(result.variables["S"])
    truth = _offdiag(model.s_star)
    tol = float(params.get("success_tol", DEFAULT_SUCCESS_TOL))
    return score_recovery(est, truth, default_zero_tol(model.s_star), tol)


_FAMILIES = {
    "rpca": _rpca_trial,
    "completion": _completion_trial,
    "clique": _clique_trial,
    "glasso": _glasso_trial,
}


def thread_count() -> int:
    env = os.environ.get("LSLAB_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def run_phase_grid(family: str, grid: ExperimentGrid) -> ExperimentGrid:
    """Fill the grid: ``trials`` runs per cell, seeds derived per (cell, trial)."""
    if family not in _FAMILIES:
        raise UnknownFamilyError(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}")
    runner = _FAMILIES[family]
    grid.family = family
    cells = grid.cell_params()
    tasks = [(ci, ti) for ci in range(len(cells)) for ti in range(grid.trials)]

    def run_one(task):
        ci, ti = task
        prng = Prng(derive_key(grid.base_seed, ci, ti))
        return runner(cells[ci], prng)

    workers = thread_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(run_one, tasks))
    else:
        flat = [run_one(t) for t in tasks]

    grid.cells = cells
    grid.results = [
        [flat[ci * grid.trials + ti] for ti in range(grid.trials)] for ci in range(len(cells))
    ]
    return grid


def grid_trial_rows(grid: ExperimentGrid) -> tuple[list[str], list[dict]]:
    axis_names = list(grid.axes.keys())
    fields = ["family", "cell"] + axis_names + TRIAL_FIELDS_TAIL
    rows = []
    for ci, (params, scores) in enumerate(zip(grid.cells, grid.results)):
        for ti, s in enumerate(scores):
            row = {"family": grid.family, "cell": ci}
            for name in axis_names:
                row[name] = params[name]
            row.update(
                trial=ti,
                rel_error=s.rel_error_F,
                support_f1=s.support_f1,
                sign_consistency=s.sign_consistency,
                rank_hat=s.rank_hat,
                success=s.success,
            )
            rows.append(row)
    return fields, rows


def grid_cell_rows(grid: ExperimentGrid) -> tuple[list[str], list[dict]]:
    axis_names = list(grid.axes.keys())
    fields = ["family", "cell"] + axis_names + CELL_FIELDS_TAIL
    rows = []
    for ci, (params, scores) in enumerate(zip(grid.cells, grid.results)):
        row = {"family": grid.family, "cell": ci}
        for name in axis_names:
            row[name] = params[name]
        row.update(
            trials=len(scores),
            success_rate=grid.success_rate(ci),
            mean_rel_error=float(np.mean([s.rel_error_F for s in scores])),
            mean_support_f1=float(np.mean([s.support_f1 for s in scores])),
        )
        rows.append(row)
    return fields, rows


def write_grid_csv(grid: ExperimentGrid, trials_path, cells_path) -> None:
    fields, rows = grid_trial_rows(grid)
    textio.write_csv(trials_path, fields, rows)
    fields, rows = grid_cell_rows(grid)
    textio.write_csv(cells_path, fields, rows)


# --------------------------------------------------------------------------
# Adaptivity experiment
# --------------------------------------------------------------------------

GAMMA_DEGENERATE = 1e6


def default_lambda_grid() -> list[float]:
    return [float(x) for x in np.logspace(-2.0, -0.5, 6)]


def default_gamma_grid() -> list[float]:
    return [1.0, 4.0, 16.0, GAMMA_DEGENERATE]


def containment_gamma(p: int) -> float:
    """Gamma below which the latent-variable fit provably returns L = 0.

    With the diagonal penalized, any l1 subgradient H has unit diagonal and
    entries in [-1, 1], so its minimum eigenvalue is at least 2 - p.  The
    zero-L stationarity condition needs lambda_min(H) >= -1/gamma, so any
    gamma < 1/(p - 2) makes the graphical-lasso solution (with lambda equal
    to the product lam * gamma) the unique optimum.  Half that value keeps
    the margin strict.
    """
    return 0.5 / max(1, p - 2)


def lvglasso_pair_grid(p: int, lambdas: list[float], gammas: list[float]) -> list[tuple[float, float]]:
    """Product pairs (lam_i, gamma_j) plus glasso-equivalent containment pairs.

    The containment pairs (lam_i / gamma_c, gamma_c) put every glasso grid
    point inside the lvglasso search space exactly (see containment_gamma);
    the product pairs at large gamma exercise the trace-dominated limit where
    L vanishes identically.
    """
    gamma_c = containment_gamma(p)
    pairs = [(lam, gamma) for lam in lambdas for gamma in gammas]
    pairs.extend((lam / gamma_c, gamma_c) for lam in lambdas)
    return pairs


def run_adaptivity(
    p: int,
    degree: int,
    h_values: list[int],
    n_values: list[int],
    trials: int,
    base_seed: int,
    glasso_lambdas: list[float] | None = None,
    gammas: list[float] | None = None,
    strength: float = 0.3,
    max_iters: int = 2000,
) -> dict:
    """Best-over-grid support recovery, graphical lasso vs latent-variable fit.

    Both solvers penalize the diagonal here: with an unpenalized diagonal,
    PSD mass can absorb off-diagonal l1 weight for free and the
    latent-variable fit never degenerates to the graphical lasso.  The
    lvglasso point set is lvglasso_pair_grid: it provably contains every
    glasso grid point (so the h = 0 containment comparison is exact) and at
    the largest gamma returns L = 0 identically.

    Returns {"trials": rows, "cells": rows} keyed per ADAPTIVITY_*_FIELDS.
    """
    if 0 not in h_values:
        raise ValueError("h_values must include 0")
    lambdas = glasso_lambdas if glasso_lambdas is not None else default_lambda_grid()
    gamma_list = gammas if gammas is not None else default_gamma_grid()
    pairs = lvglasso_pair_grid(p, lambdas, gamma_list)
    gamma_max = max(gamma_list)
    config = SolverConfig(max_iters=max_iters)

    trial_rows = []
    cell_rows = []
    for hi, h in enumerate(h_values):
        for ni, n in enumerate(n_values):
            cell_index = hi * len(n_values) + ni
            glasso_f1 = np.zeros((len(lambdas), trials))
            lv_f1 = np.zeros((len(pairs), trials))
            lv_rank = np.zeros((len(pairs), trials), dtype=int)
            lv_lfrob = np.zeros((len(pairs), trials))
            for ti in range(trials):
                prng = Prng(derive_key(base_seed, cell_index, ti))
                model = gen_latent_model(p, h, degree, strength, prng.substream(0))
                cov = sample_empirical_cov(model.sigma_obs, n, prng.substream(1))
                truth = _offdiag(model.s_star)
                zero_tol = default_zero_tol(model.s_star)
                for li, lam_g in enumerate(lambdas):
                    res = glasso_solve(
                        GlassoProblem(cov, lam_g, penalize_diagonal=True), config
                    )
                    score = score_recovery(
                        _offdiag(res.variables["S"]), truth, zero_tol, DEFAULT_SUCCESS_TOL
                    )
                    glasso_f1[li, ti] = score.support_f1
                for pi, (lam, gamma) in enumerate(pairs):
                    res = lvglasso_solve(
                        LvglassoProblem(cov, lam, gamma, penalize_diagonal=True), config
                    )
                    score = score_recovery(
                        _offdiag(res.variables["S"]), truth, zero_tol, DEFAULT_SUCCESS_TOL
                    )
                    lv_f1[pi, ti] = score.support_f1
                    lhat = res.variables["L"]
                    svals = np.linalg.svd(lhat, compute_uv=False)
                    top = svals[0] if svals[0] > 0 else 1.0
                    lv_rank[pi, ti] = int(np.count_nonzero(svals > 1e-4 * top))
                    lv_lfrob[pi, ti] = float(np.linalg.norm(lhat))

                g_best = int(np.argmax(glasso_f1[:, ti]))
                p_best = int(np.argmax(lv_f1[:, ti]))
                at_gamma_max = [
                    lv_lfrob[pi, ti] for pi, (_, g) in enumerate(pairs) if g == gamma_max
                ]
                trial_rows.append(
                    {
                        "h": h,
                        "n": n,
                        "trial": ti,
                        "glasso_best_f1": float(glasso_f1[g_best, ti]),
                        "glasso_best_lambda": lambdas[g_best],
                        "lvglasso_best_f1": float(lv_f1[p_best, ti]),
                        "lvglasso_best_lambda": pairs[p_best][0],
                        "lvglasso_best_gamma": pairs[p_best][1],
                        "lvglasso_rank_at_best": int(lv_rank[p_best, ti]),
                        "lvglasso_lfrob_at_gamma_max": float(max(at_gamma_max)),
                    }
                )

            g_mean = glasso_f1.mean(axis=1)
            g_best = int(np.argmax(g_mean))
            lv_mean = lv_f1.mean(axis=1)
            p_best = int(np.argmax(lv_mean))
            gm_idx = [pi for pi, (_, g) in enumerate(pairs) if g == gamma_max]
            cell_rows.append(
                {
                    "h": h,
                    "n": n,
                    "trials": trials,
                    "glasso_best_f1": float(g_mean[g_best]),
                    "glasso_best_lambda": lambdas[g_best],
                    "lvglasso_best_f1": float(lv_mean[p_best]),
                    "lvglasso_best_lambda": pairs[p_best][0],
                    "lvglasso_best_gamma": pairs[p_best][1],
                    "lvglasso_rank_median_at_best": float(np.median(lv_rank[p_best, :])),
                    "max_lfrob_at_gamma_max": float(lv_lfrob[gm_idx, :].max()),
                }
            )
    return {"trials": trial_rows, "cells": cell_rows}


def write_adaptivity_csv(report: dict, trials_path, cells_path) -> None:
    textio.write_csv(trials_path, ADAPTIVITY_TRIAL_FIELDS, report["trials"])
    textio.write_csv(cells_path, ADAPTIVITY_CELL_FIELDS, report["cells"])
