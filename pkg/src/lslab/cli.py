"""Batch command line: generate instances, solve problems, run experiments.

Subcommands: gen | solve | phase | adaptivity | clique.  Every run records a
``manifest`` key=value file (tool version, resolved config, seed, PRNG id)
in the output directory; all other artifact files contain no timestamps, so
identical invocations produce byte-identical artifacts.  ``--config FILE``
loads flat ``key=value`` lines; explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import datetime
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, harness, svg, textio
from .errors import LslabError, UsageError
from .kernels import dct_matrix, haar_matrix
from .prng import ALGORITHM_ID, Prng
from .solvers import (
    CsLpsProblem,
    GlassoProblem,
    LvglassoProblem,
    PlantedCliqueProblem,
    RobustRegressionProblem,
    RpcaProblem,
    SolverConfig,
    glasso_solve,
    lvglasso_solve,
    planted_clique_solve,
    robust_regression_solve,
    rpca_solve,
    cs_lps_solve,
    save_solve_result,
)
from .synth import (
    gen_latent_model,
    gen_lowrank_sparse,
    gen_planted_clique,
    gen_sampling_operator,
)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _flag(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


# key -> (type parser, required, default, help); shared keys listed once
_COMMON = {
    "seed": (int, False, 0, "base seed (64-bit)"),
    "out": (str, False, "out", "output directory"),
    "config": (str, False, None, "key=value config file; flags override"),
}

_SCHEMAS: dict[str, dict[str, tuple]] = {
    "gen": {
        "family": (str, True, None, "latent | lowrank | clique | sampling"),
        "p": (int, False, 20, "observed variables (latent)"),
        "h": (int, False, 0, "hidden variables (latent)"),
        "degree": (int, False, 3, "max row degree (latent)"),
        "strength": (float, False, 0.3, "coupling strength (latent)"),
        "n1": (int, False, 32, "rows (lowrank/sampling)"),
        "n2": (int, False, 32, "cols (lowrank/sampling)"),
        "r": (int, False, 2, "rank (lowrank)"),
        "sparsity": (float, False, 0.05, "corruption density (lowrank)"),
        "n": (int, False, 100, "vertices (clique)"),
        "k": (int, False, 10, "planted clique size"),
        "rate": (float, False, 0.5, "sampling rate (sampling)"),
        **_COMMON,
    },
    "solve": {
        "problem": (str, True, None,
                    "glasso | lvglasso | rpca | robust_regression | cs_lps | clique"),
        "input": (str, True, None, "main input matrix file"),
        "rhs": (str, False, None, "right-hand side vector file (robust_regression)"),
        "mask": (str, False, None, "observation mask matrix file (rpca)"),
        "lambda": (float, False, None, "l1 weight"),
        "gamma": (float, False, None, "l1-vs-trace weight (lvglasso)"),
        "epsilon": (float, False, 0.0, "feasibility radius (cs_lps)"),
        "k": (int, False, None, "clique size (clique)"),
        "mode": (str, False, "single", "cs_lps mode: single | background"),
        "rate": (float, False, 1.0, "cs_lps sampling rate"),
        "w": (str, False, "identity", "cs_lps row transform: haar | dct | identity"),
        "f": (str, False, "identity", "cs_lps column transform: haar | dct | identity"),
        "penalize-diagonal": (_flag, False, False, "penalize diagonal in l1 (glasso/lvglasso)"),
        "rho": (float, False, 1.0, "initial ADMM penalty"),
        "max-iters": (int, False, 2000, "iteration cap"),
        "eps-abs": (float, False, 1e-7, "absolute stopping tolerance"),
        "eps-rel": (float, False, 1e-5, "relative stopping tolerance"),
        **_COMMON,
    },
    "phase": {
        "family": (str, True, None, "rpca | completion | clique | glasso"),
        "n": (_int_list, False, None, "matrix size / vertices axis"),
        "p": (_int_list, False, None, "dimension axis (glasso)"),
        "k": (_int_list, False, None, "clique size axis"),
        "r": (_int_list, False, None, "rank axis"),
        "rate": (_float_list, False, None, "sampling rate axis"),
        "corruption": (_float_list, False, None, "corruption density axis"),
        "lambda": (_float_list, False, None, "l1 weight axis"),
        "degree": (_int_list, False, None, "graph degree axis (glasso)"),
        "trials": (int, False, 10, "trials per cell"),
        "max-iters": (int, False, None, "iteration cap per solve (family default if omitted)"),
        "svg": (_flag, False, False, "emit an SVG plot of success rates"),
        **_COMMON,
    },
    "adaptivity": {
        "p": (int, False, 20, "observed variables"),
        "degree": (int, False, 3, "max row degree"),
        "h": (_int_list, True, None, "hidden-count list, must include 0"),
        "n": (_int_list, True, None, "sample-count list"),
        "trials": (int, False, 5, "trials per cell"),
        "lambda-grid": (_float_list, False, None, "glasso lambda grid"),
        "gamma-grid": (_float_list, False, None, "gamma grid (1e6 enables degeneration row)"),
        "strength": (float, False, 0.3, "coupling strength"),
        "max-iters": (int, False, None, "iteration cap per solve (family default if omitted)"),
        "svg": (_flag, False, False, "emit an SVG plot of best F1 vs n"),
        **_COMMON,
    },
    "clique": {
        "n": (int, False, 400, "vertices"),
        "k": (_int_list, True, None, "clique size list"),
        "lambda": (float, False, None, "l1 weight, default 1/sqrt(n)"),
        "trials": (int, False, 10, "trials per size"),
        "max-iters": (int, False, None, "iteration cap per solve (family default if omitted)"),
        "svg": (_flag, False, False, "emit an SVG plot of recovery rate vs k"),
        **_COMMON,
    },
}


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    seed: int
    outdir: str


def _attr(key: str) -> str:
    return key.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lslab",
        description="Low-rank + sparse decomposition solvers and experiments",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, schema in _SCHEMAS.items():
        sp = sub.add_parser(name)
        for key, (typ, required, default, help_text) in schema.items():
            # defaults applied after config merge, so everything starts None
            if typ is _flag:
                sp.add_argument(f"--{key}", type=_flag, default=None, help=help_text,
                                nargs="?", const=True, metavar="BOOL")
            else:
                sp.add_argument(f"--{key}", type=typ, default=None, help=help_text)
    return parser


def parse_args(argv: list[str]) -> RunConfig:
    """Parse argv into a validated RunConfig; --config fills unset flags."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = ns.subcommand
    schema = _SCHEMAS[sub]
    values = {key: getattr(ns, _attr(key)) for key in schema}

    config_path = values.pop("config", None)
    if config_path is not None:
        file_items = textio.read_keyvalues(config_path)
        for key, raw in file_items.items():
            if key == "config":
                raise UsageError("config: config files cannot nest")
            if key not in schema:
                raise UsageError(f"{key}: unknown key for subcommand {sub!r}")
            if values.get(key) is None:
                typ = schema[key][0]
                try:
                    values[key] = typ(raw)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"{key}: {exc}") from exc

    for key, (typ, required, default, _help) in schema.items():
        if key == "config":
            continue
        if values.get(key) is None:
            if required:
                raise UsageError(f"{key}: required for subcommand {sub!r}")
            values[key] = default

    seed = int(values.get("seed", 0))
    outdir = str(values.get("out", "out"))
    return RunConfig(subcommand=sub, params=values, seed=seed, outdir=outdir)


def _write_manifest(config: RunConfig) -> None:
    items = {
        "tool": "lslab",
        "version": __version__,
        "prng": ALGORITHM_ID,
        "subcommand": config.subcommand,
        "seed": str(config.seed),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    for key, value in sorted(config.params.items()):
        if key in ("seed",):
            continue
        if isinstance(value, list):
            items[f"param_{key}"] = ",".join(str(v) for v in value)
        else:
            items[f"param_{key}"] = str(value)
    textio.write_keyvalues(os.path.join(config.outdir, "manifest"), items)


def _provenance(config: RunConfig, generator: str, params: dict) -> dict[str, str]:
    head = {"generator": generator, "prng": ALGORITHM_ID, "seed": str(config.seed)}
    for k, v in params.items():
        head[k] = str(v)
    return head


def _run_gen(config: RunConfig) -> None:
    p = config.params
    prng = Prng(config.seed)
    out = config.outdir
    family = p["family"]
    if family == "latent":
        model = gen_latent_model(p["p"], p["h"], p["degree"], p["strength"], prng)
        head = _provenance(config, "latent",
                           {k: p[k] for k in ("p", "h", "degree", "strength")})
        textio.write_matrix(os.path.join(out, "k_full.mat"), model.k_full, head)
        textio.write_matrix(os.path.join(out, "s_star.mat"), model.s_star, head)
        textio.write_matrix(os.path.join(out, "l_star.mat"), model.l_star, head)
        textio.write_matrix(os.path.join(out, "sigma_obs.mat"), model.sigma_obs, head)
    elif family == "lowrank":
        l0, s0, m, mask = gen_lowrank_sparse(p["n1"], p["n2"], p["r"], p["sparsity"], prng)
        head = _provenance(config, "lowrank",
                           {k: p[k] for k in ("n1", "n2", "r", "sparsity")})
        textio.write_matrix(os.path.join(out, "l0.mat"), l0, head)
        textio.write_matrix(os.path.join(out, "s0.mat"), s0, head)
        textio.write_matrix(os.path.join(out, "m.mat"), m, head)
        textio.write_matrix(os.path.join(out, "mask.mat"), mask.astype(float), head)
    elif family == "clique":
        adjacency, clique = gen_planted_clique(p["n"], p["k"], prng)
        head = _provenance(config, "clique", {"n": p["n"], "k": p["k"]})
        head["clique"] = ",".join(str(i) for i in clique)
        textio.write_matrix(os.path.join(out, "adjacency.mat"), adjacency, head)
    elif family == "sampling":
        op = gen_sampling_operator(p["n1"], p["n2"], p["rate"], None, prng)
        head = _provenance(config, "sampling", {k: p[k] for k in ("n1", "n2", "rate")})
        textio.write_matrix(os.path.join(out, "mask.mat"), op.mask.astype(float), head)
    else:
        raise UsageError(f"family: unknown generator family {family!r}")


def _transform_for(name: str, size: int) -> np.ndarray:
    if name == "identity":
        return np.eye(size)
    if name == "haar":
        return haar_matrix(size)
    if name == "dct":
        return dct_matrix(size)
    raise UsageError(f"transform: unknown transform {name!r}")


def _run_solve(config: RunConfig) -> None:
    p = config.params
    out = config.outdir
    solver_config = SolverConfig(
        rho=p["rho"], max_iters=p["max-iters"], eps_abs=p["eps-abs"], eps_rel=p["eps-rel"]
    )
    matrix, _head = textio.read_matrix(p["input"])
    problem = p["problem"]
    lam = p["lambda"]
    if problem == "glasso":
        if lam is None:
            raise UsageError("lambda: required for glasso")
        result = glasso_solve(
            GlassoProblem(matrix, lam, p["penalize-diagonal"]), solver_config
        )
    elif problem == "lvglasso":
        if lam is None or p["gamma"] is None:
            raise UsageError("lambda/gamma: required for lvglasso")
        result = lvglasso_solve(
            LvglassoProblem(matrix, lam, p["gamma"], p["penalize-diagonal"]), solver_config
        )
    elif problem == "rpca":
        mask = None
        if p["mask"] is not None:
            mask_mat, _ = textio.read_matrix(p["mask"])
            mask = mask_mat > 0.5
        result = rpca_solve(RpcaProblem(matrix, mask, lam), solver_config)
    elif problem == "robust_regression":
        if p["rhs"] is None:
            raise UsageError("rhs: required for robust_regression")
        if lam is None:
            raise UsageError("lambda: required for robust_regression")
        rhs, _ = textio.read_matrix(p["rhs"])
        result = robust_regression_solve(
            RobustRegressionProblem(matrix, rhs.reshape(-1), lam), solver_config
        )
    elif problem == "cs_lps":
        if lam is None:
            raise UsageError("lambda: required for cs_lps")
        n1, n2 = matrix.shape
        op = gen_sampling_operator(n1, n2, p["rate"], None, Prng(config.seed))
        y = op.apply(matrix)
        w = _transform_for(p["w"], n1)
        f = _transform_for(p["f"], n2)
        result = cs_lps_solve(
            CsLpsProblem(op, y, p["epsilon"], w, f, lam, p["mode"]), solver_config
        )
        textio.write_matrix(
            os.path.join(out, "cs_lps_mask.mat"),
            op.mask.astype(float),
            _provenance(config, "sampling", {"n1": n1, "n2": n2, "rate": p["rate"]}),
        )
    elif problem == "clique":
        if p["k"] is None:
            raise UsageError("k: required for clique")
        if lam is None:
            raise UsageError("lambda: required for clique")
        result = planted_clique_solve(PlantedCliqueProblem(matrix, p["k"], lam), solver_config)
    else:
        raise UsageError(f"problem: unknown problem {problem!r}")
    save_solve_result(result, out, problem)


def _run_phase(config: RunConfig) -> None:
    p = config.params
    axes: dict[str, list] = {}
    fixed: dict = {}
    if p["max-iters"] is not None:
        fixed["max_iters"] = p["max-iters"]
    for key in ("n", "p", "k", "r", "rate", "corruption", "lambda", "degree"):
        value = p.get(key)
        if value is None:
            continue
        name = "lam" if key == "lambda" else key
        if len(value) > 1:
            axes[name] = list(value)
        else:
            fixed[name] = value[0]
    grid = harness.ExperimentGrid(
        family=p["family"], axes=axes, trials=p["trials"], base_seed=config.seed, fixed=fixed
    )
    harness.run_phase_grid(p["family"], grid)
    prefix = os.path.join(config.outdir, p["family"])
    harness.write_grid_csv(grid, prefix + "_trials.csv", prefix + "_cells.csv")
    if p["svg"] and axes:
        axis = next(iter(axes))
        xs = [float(c[axis]) for c in grid.cells]
        ys = [grid.success_rate(ci) for ci in range(len(grid.cells))]
        art = svg.line_plot(
            [("success rate", xs, ys)],
            title=f"{p['family']} phase grid",
            xlabel=axis,
            ylabel="success rate",
        )
        with open(prefix + "_phase.svg", "w", newline="\n") as fh:
            fh.write(art)


def _run_adaptivity(config: RunConfig) -> None:
    p = config.params
    report = harness.run_adaptivity(
        p=p["p"],
        degree=p["degree"],
        h_values=p["h"],
        n_values=p["n"],
        trials=p["trials"],
        base_seed=config.seed,
        glasso_lambdas=p["lambda-grid"],
        gammas=p["gamma-grid"],
        strength=p["strength"],
        max_iters=p["max-iters"] if p["max-iters"] is not None else 2000,
    )
    prefix = os.path.join(config.outdir, "adaptivity")
    harness.write_adaptivity_csv(report, prefix + "_trials.csv", prefix + "_cells.csv")
    if p["svg"]:
        series = []
        for h in p["h"]:
            rows = [r for r in report["cells"] if r["h"] == h]
            xs = [float(r["n"]) for r in rows]
            series.append((f"glasso h={h}", xs, [r["glasso_best_f1"] for r in rows]))
            series.append((f"lvglasso h={h}", xs, [r["lvglasso_best_f1"] for r in rows]))
        art = svg.line_plot(series, title="adaptivity", xlabel="n", ylabel="best F1")
        with open(prefix + ".svg", "w", newline="\n") as fh:
            fh.write(art)


def _run_clique(config: RunConfig) -> None:
    p = config.params
    fixed: dict = {"n": p["n"]}
    if p["max-iters"] is not None:
        fixed["max_iters"] = p["max-iters"]
    if p["lambda"] is not None:
        fixed["lam"] = p["lambda"]
    grid = harness.ExperimentGrid(
        family="clique",
        axes={"k": list(p["k"])},
        trials=p["trials"],
        base_seed=config.seed,
        fixed=fixed,
    )
    harness.run_phase_grid("clique", grid)
    prefix = os.path.join(config.outdir, "clique")
    harness.write_grid_csv(grid, prefix + "_trials.csv", prefix + "_cells.csv")
    if p["svg"]:
        xs = [float(c["k"]) for c in grid.cells]
        ys = [grid.success_rate(ci) for ci in range(len(grid.cells))]
        art = svg.line_plot(
            [("exact recovery rate", xs, ys)],
            title=f"planted clique, n={p['n']}",
            xlabel="k",
            ylabel="recovery rate",
        )
        with open(prefix + "_recovery.svg", "w", newline="\n") as fh:
            fh.write(art)


_RUNNERS = {
    "gen": _run_gen,
    "solve": _run_solve,
    "phase": _run_phase,
    "adaptivity": _run_adaptivity,
    "clique": _run_clique,
}


def run(config: RunConfig) -> int:
    """Execute a parsed RunConfig; returns the process exit status."""
    try:
        textio.ensure_dir(config.outdir)
        _RUNNERS[config.subcommand](config)
        _write_manifest(config)
    except LslabError as exc:
        print(f"lslab {config.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        config = parse_args(argv)
    except LslabError as exc:
        print(f"lslab: error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
