"""Deterministic experiment execution and summary statistics."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..core import exploitability, normalize_unit
from ..families import BuiltGame, parse_game_spec
from ..grid import grid_best_response_edge, grid_best_response_path
from ..perturb import PerturbationSpec, RandomSource, cluster_perturbed_best_response, sfp_theory_params
from ..solvers import SolverConfig, run_anticipatory_fp, run_double_oracle, run_fictitious_play, sfp_restart_protocol
from .plan import ExperimentPlan, RunRecord, expand_game_spec, resolve_init

__all__ = ["run_experiment", "run_single", "summarize", "SummaryRow"]

_PERTURBED = {"sfp", "safp", "sdo"}
_RUNNERS = {"fp": run_fictitious_play, "sfp": run_fictitious_play,
            "afp": run_anticipatory_fp, "safp": run_anticipatory_fp,
            "do": run_double_oracle, "sdo": run_double_oracle}


def _resolve_spec(text: str, dim: int, eps: float) -> PerturbationSpec:
    """'theory' becomes Gumbel(0, beta(n, eps)) for matrix dimension n."""
    if text == "theory":
        return PerturbationSpec.gumbel(0.0, sfp_theory_params(max(dim, 2), eps).beta)
    return PerturbationSpec.parse(text)


def _cluster_oracle(clusters, side, spec):
    def oracle(game, counts, rng):
        return cluster_perturbed_best_response(game, clusters, side, counts, spec, rng)
    return oracle


def _grid_oracles(grid, row_spec, col_spec):
    def row_oracle(game, counts, rng):
        return grid_best_response_path(grid, counts, row_spec, rng)

    def col_oracle(game, counts, rng):
        return grid_best_response_edge(grid, counts, col_spec, rng)

    return row_oracle, col_oracle


def run_single(plan: ExperimentPlan, built: BuiltGame, algorithm: str, size: int, rep: int) -> RunRecord:
    """Execute one (game, algorithm, size, repetition) cell of the sweep."""
    seed = plan.base_seed + rep
    rng = RandomSource(seed)
    game = built.game
    if plan.normalize:
        game, _ = normalize_unit(game)

    perturbed = algorithm in _PERTURBED
    dim = max(game.shape)
    row_spec = _resolve_spec(plan.row_perturb, dim, plan.eps) if perturbed else PerturbationSpec.none()
    col_spec = _resolve_spec(plan.col_perturb, dim, plan.eps) if perturbed else PerturbationSpec.none()
    spec_text = str(row_spec) if str(row_spec) == str(col_spec) else f"{row_spec}|{col_spec}"
    if algorithm == "sfp-restart":
        spec_text = "gumbel:theory"

    k, l = resolve_init(plan, built)
    started = time.perf_counter()
    try:
        if algorithm == "sfp-restart":
            result = sfp_restart_protocol(game, plan.eps, rng)
        else:
            row_oracle = col_oracle = None
            if perturbed and plan.cluster and built.clusters is not None:
                row_oracle = _cluster_oracle(built.clusters, "row", row_spec)
                col_oracle = _cluster_oracle(built.clusters, "col", col_spec)
            elif built.grid is not None:
                row_oracle, col_oracle = _grid_oracles(
                    built.grid,
                    row_spec if perturbed else None,
                    col_spec if perturbed else None,
                )
            cfg = SolverConfig(
                eps=plan.eps,
                init_row=k,
                init_col=l,
                row_perturbation=row_spec if row_oracle is None else PerturbationSpec.none(),
                col_perturbation=col_spec if col_oracle is None else PerturbationSpec.none(),
                rng=rng,
                row_oracle=row_oracle,
                col_oracle=col_oracle,
            )
            result = _RUNNERS[algorithm](game, cfg)
        wall_ms = (time.perf_counter() - started) * 1000.0
        gap = exploitability(game, result.row, result.col)
        return RunRecord(
            game=built.spec, algorithm=algorithm, perturbation=spec_text, eps=plan.eps,
            size=size, rep=rep, seed=seed, iterations=result.iterations,
            terminated=result.terminated, exploitability=gap, wall_ms=wall_ms,
        )
    except Exception as exc:  # record the failure, keep the sweep going
        wall_ms = (time.perf_counter() - started) * 1000.0
        return RunRecord(
            game=built.spec, algorithm=algorithm, perturbation=spec_text, eps=plan.eps,
            size=size, rep=rep, seed=seed, iterations=0, terminated=False,
            exploitability=float("nan"), wall_ms=wall_ms, error=str(exc),
        )


def run_experiment(plan: ExperimentPlan) -> list[RunRecord]:
    """All runs of the plan, sorted by (game, algorithm, size, repetition).

    Fixed game families are built once per size and shared across
    repetitions; random games are rebuilt per repetition from the
    repetition's own stream, matching the protocol of one fresh instance
    per seed.
    """
    records = []
    for template in plan.games:
        for size in plan.sizes:
            spec_text = expand_game_spec(template, size)
            shared = None
            if not spec_text.startswith("random"):
                shared = parse_game_spec(spec_text)
            for algorithm in plan.algorithms:
                for rep in range(plan.repetitions):
                    if shared is None:
                        game_rng = RandomSource(plan.base_seed + rep, ("game", size))
                        built = parse_game_spec(spec_text, game_rng)
                    else:
                        built = shared
                    records.append(run_single(plan, built, algorithm, size, rep))
    records.sort(key=RunRecord.sort_key)
    return records


@dataclass(frozen=True)
class SummaryRow:
    game: str
    algorithm: str
    size: int
    mean_iterations: float
    sd_iterations: float
    runs: int


def summarize(records) -> list[SummaryRow]:
    """Per-(game, algorithm, size) mean and sample standard deviation.

    The sample deviation uses divisor reps - 1 and is 0 for a single run.
    """
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups: dict[tuple, list[int]] = {}
    for rec in records:
        groups.setdefault((rec.game, rec.algorithm, rec.size), []).append(rec.iterations)
    rows = []
    for (game, algorithm, size), its in sorted(groups.items()):
        arr = np.asarray(its, dtype=float)
        sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        rows.append(SummaryRow(game, algorithm, size, float(arr.mean()), sd, arr.size))
    return rows
