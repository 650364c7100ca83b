"""Solvers and a reproducible experiment harness for low-rank + sparse
convex decomposition problems: graphical lasso, latent-variable model
selection, robust PCA / matrix completion, robust regression, compressive
L+S acquisition, and planted-clique recovery."""

__version__ = "0.1.0"

from .harness import ExperimentGrid, RecoveryScore, run_adaptivity, run_phase_grid, score_recovery
from .kernels import dct_matrix, haar_matrix, spd_inverse, svd, sym_eig
from .prng import Prng, derive_key
from .prox import (
    l2ball_project,
    prox_neg_logdet,
    prox_trace_psd,
    psd_project,
    soft_threshold,
    svt,
    transform_l1_prox,
)
from .solvers import (
    CsLpsProblem,
    GlassoProblem,
    LvglassoProblem,
    PlantedCliqueProblem,
    RobustRegressionProblem,
    RpcaProblem,
    SolveResult,
    SolverConfig,
    admm_step_report,
    cs_lps_solve,
    glasso_solve,
    lvglasso_solve,
    planted_clique_solve,
    robust_regression_solve,
    rpca_solve,
)
from .synth import (
    LatentModel,
    SamplingOperator,
    gen_latent_model,
    gen_lowrank_sparse,
    gen_planted_clique,
    gen_sampling_operator,
    sample_empirical_cov,
)

__all__ = [
    "__version__",
    "Prng",
    "derive_key",
    "sym_eig",
    "svd",
    "spd_inverse",
    "haar_matrix",
    "dct_matrix",
    "soft_threshold",
    "svt",
    "prox_neg_logdet",
    "prox_trace_psd",
    "psd_project",
    "l2ball_project",
    "transform_l1_prox",
    "SolverConfig",
    "SolveResult",
    "GlassoProblem",
    "LvglassoProblem",
    "RpcaProblem",
    "RobustRegressionProblem",
    "CsLpsProblem",
    "PlantedCliqueProblem",
    "glasso_solve",
    "lvglasso_solve",
    "rpca_solve",
    "robust_regression_solve",
    "cs_lps_solve",
    "planted_clique_solve",
    "admm_step_report",
    "LatentModel",
    "SamplingOperator",
    "gen_latent_model",
    "sample_empirical_cov",
    "gen_lowrank_sparse",
    "gen_planted_clique",
    "gen_sampling_operator",
    "RecoveryScore",
    "ExperimentGrid",
    "score_recovery",
    "run_phase_grid",
    "run_adaptivity",
]
