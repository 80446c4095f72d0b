"""Iterative equilibrium solvers built on best-response oracles.

Fictitious play and double oracle, their anticipatory and perturbed
("stochastic") variants, the randomized exponentially weighted forecaster
in self-play, and the fixed-horizon restart protocol that turns perturbed
fictitious play into an expected-logarithmic-iterations solver.

Iteration counts everywhere are the number of while-loop bodies executed,
which for the double-oracle family equals the number of subgame solves.
Lower/upper bounds (lb, ub) are always computed with exact, unperturbed
best-response values, so termination certifies a true eps-equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import MatrixGame, MixedStrategy
from .lp import nash_lp
from .perturb import PerturbationSpec, RandomSource, softmax

__all__ = [
    "SolverConfig",
    "SolveResult",
    "RegretTrace",
    "run_fictitious_play",
    "run_anticipatory_fp",
    "run_double_oracle",
    "rewf_distribution",
    "run_rewf_selfplay",
    "sfp_restart_protocol",
]

NONE = PerturbationSpec.none()


@dataclass(frozen=True)
class SolverConfig:
    """Shared configuration for the FP and DO solver families.

    init_row/init_col are 1-based pure strategies.  max_iterations of None
    picks the family default (50*(m+n) for fictitious play, m+n+2 for
    double oracle).  row_oracle/col_oracle, when given, replace the
    perturbed best responses with custom callables
    ``oracle(game, opponent_counts, rng) -> 1-based index`` (used for
    cluster and grid-structured perturbations).  perturb_anticipation
    controls whether anticipatory FP perturbs its look-ahead calls too.
    """

    eps: float
    max_iterations: int | None = None
    init_row: int = 1
    init_col: int = 1
    row_perturbation: PerturbationSpec = NONE
    col_perturbation: PerturbationSpec = NONE
    rng: RandomSource | None = None
    record_trace: bool = False
    perturb_anticipation: bool = True
    row_oracle: object = None
    col_oracle: object = None

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solver run.

    iterations counts executed loop bodies; terminated means the gap
    condition was met before the iteration cap; final_gap is ub - lb at
    exit in the algorithm's own normalization (per-play for FP, absolute
    for DO); trace holds the raw per-iteration (lb, ub) list, starting
    with the pre-loop bounds; restarts is the number of full attempts used
    by the restart protocol (0 for single-run solvers).
    """

    row: MixedStrategy
    col: MixedStrategy
    iterations: int
    terminated: bool
    final_gap: float
    trace: list | None = None
    restarts: int = 0


@dataclass(frozen=True)
class RegretTrace:
    """Realized self-play history of the exponentially weighted forecaster.

    The column player's loss is measured on the transformed matrix
    1 - M', so both regrets are against the players' own loss functions
    and are recomputable from the recorded actions.
    """

    horizon: int
    actions: tuple  # ((i_t, j_t), ...) 1-based
    row_cumulative_loss: float
    row_best_fixed_loss: float
    col_cumulative_loss: float
    col_best_fixed_loss: float

    @property
    def row_regret(self) -> float:
        return self.row_cumulative_loss - self.row_best_fixed_loss

    @property
    def col_regret(self) -> float:
        return self.col_cumulative_loss - self.col_best_fixed_loss


def _validate_init(game: MatrixGame, cfg: SolverConfig) -> tuple[int, int]:
    if not 1 <= cfg.init_row <= game.m:
        raise ValueError(f"init_row {cfg.init_row} out of range [1, {game.m}]")
    if not 1 <= cfg.init_col <= game.n:
        raise ValueError(f"init_col {cfg.init_col} out of range [1, {game.n}]")
    return cfg.init_row - 1, cfg.init_col - 1


def _need_rng(cfg: SolverConfig) -> RandomSource | None:
    perturbed = (
        cfg.row_perturbation.kind != "none"
        or cfg.col_perturbation.kind != "none"
        or cfg.row_oracle is not None
        or cfg.col_oracle is not None
    )
    if perturbed and cfg.rng is None:
        raise ValueError("perturbed solving needs cfg.rng")
    return cfg.rng


def _draw_row(game, cfg, rng, q_counts, row_vals) -> int:
    """0-based perturbed row response, from the maintained value vector."""
    if cfg.row_oracle is not None:
        return cfg.row_oracle(game, q_counts, rng) - 1
    if cfg.row_perturbation.kind == "none":
        return int(np.argmin(row_vals))
    return int(np.argmin(row_vals - cfg.row_perturbation.sample(rng, game.m)))


def _draw_col(game, cfg, rng, p_counts, col_vals) -> int:
    if cfg.col_oracle is not None:
        return cfg.col_oracle(game, p_counts, rng) - 1
    if cfg.col_perturbation.kind == "none":
        return int(np.argmax(col_vals))
    return int(np.argmax(col_vals + cfg.col_perturbation.sample(rng, game.n)))


def run_fictitious_play(game: MatrixGame, cfg: SolverConfig) -> SolveResult:
    """(Stochastic) fictitious play with the t-scaled termination test.

    Maintains unnormalized play counts p, q and the running vectors M q
    and p'M incrementally; loops while ub - lb > t * eps where lb/ub are
    the exact best-response values against the raw counts; returns the
    averaged strategies (p/t, q/t).
    """
    k, l = _validate_init(game, cfg)
    rng = _need_rng(cfg)
    M = game.payoff
    cap = cfg.max_iterations if cfg.max_iterations is not None else 50 * (game.m + game.n)

    p_counts = np.zeros(game.m)
    q_counts = np.zeros(game.n)
    p_counts[k] = 1.0
    q_counts[l] = 1.0
    row_vals = M[:, l].copy()  # M q on raw counts
    col_vals = M[k, :].copy()  # p'M on raw counts
    t = 1
    lb = float(row_vals.min())
    ub = float(col_vals.max())
    trace = [(lb, ub)] if cfg.record_trace else None
    bodies = 0

    while ub - lb > t * cfg.eps and bodies < cap:
        t += 1
        bodies += 1
        i = _draw_row(game, cfg, rng, q_counts, row_vals)
        j = _draw_col(game, cfg, rng, p_counts, col_vals)
        p_counts[i] += 1.0
        q_counts[j] += 1.0
        row_vals += M[:, j]
        col_vals += M[i, :]
        lb = float(row_vals.min())
        ub = float(col_vals.max())
        if trace is not None:
            trace.append((lb, ub))

    return SolveResult(
        row=MixedStrategy(p_counts / t),
        col=MixedStrategy(q_counts / t),
        iterations=bodies,
        terminated=ub - lb <= t * cfg.eps,
        final_gap=(ub - lb) / t,
        trace=trace,
    )


def run_anticipatory_fp(game: MatrixGame, cfg: SolverConfig) -> SolveResult:
    """Anticipatory fictitious play: respond to the opponent's next move.

    Each iteration makes four oracle calls: anticipation responses
    (i', j') to the current counts, then the played responses to the
    counts with the anticipated move added.  Only the played responses
    accumulate; termination and averaging match run_fictitious_play.
    With perturb_anticipation False only the played pair is perturbed.
    """
    k, l = _validate_init(game, cfg)
    rng = _need_rng(cfg)
    M = game.payoff
    cap = cfg.max_iterations if cfg.max_iterations is not None else 50 * (game.m + game.n)

    anticipation_cfg = cfg if cfg.perturb_anticipation else replace(
        cfg, row_perturbation=NONE, col_perturbation=NONE, row_oracle=None, col_oracle=None
    )

    p_counts = np.zeros(game.m)
    q_counts = np.zeros(game.n)
    p_counts[k] = 1.0
    q_counts[l] = 1.0
    row_vals = M[:, l].copy()
    col_vals = M[k, :].copy()
    t = 1
    lb = float(row_vals.min())
    ub = float(col_vals.max())
    trace = [(lb, ub)] if cfg.record_trace else None
    bodies = 0

    while ub - lb > t * cfg.eps and bodies < cap:
        t += 1
        bodies += 1
        i_hat = _draw_row(game, anticipation_cfg, rng, q_counts, row_vals)
        j_hat = _draw_col(game, anticipation_cfg, rng, p_counts, col_vals)
        q_counts[j_hat] += 1.0
        i = _draw_row(game, cfg, rng, q_counts, row_vals + M[:, j_hat])
        q_counts[j_hat] -= 1.0
        p_counts[i_hat] += 1.0
        j = _draw_col(game, cfg, rng, p_counts, col_vals + M[i_hat, :])
        p_counts[i_hat] -= 1.0
        p_counts[i] += 1.0
        q_counts[j] += 1.0
        row_vals += M[:, j]
        col_vals += M[i, :]
        lb = float(row_vals.min())
        ub = float(col_vals.max())
        if trace is not None:
            trace.append((lb, ub))

    return SolveResult(
        row=MixedStrategy(p_counts / t),
        col=MixedStrategy(q_counts / t),
        iterations=bodies,
        terminated=ub - lb <= t * cfg.eps,
        final_gap=(ub - lb) / t,
        trace=trace,
    )


def run_double_oracle(game: MatrixGame, cfg: SolverConfig) -> SolveResult:
    """(Stochastic) double oracle over growing pure-strategy supports.

    Each loop body solves the restricted game exactly, embeds the
    restricted equilibrium into the full dimension, expands both supports
    with (perturbed) best responses to it, and recomputes the exact bounds
    against the full game.  Iterations equal subgame solves; with exact
    oracles the loop finishes within m + n + 1 bodies.
    """
    k, l = _validate_init(game, cfg)
    rng = _need_rng(cfg)
    M = game.payoff
    cap = cfg.max_iterations if cfg.max_iterations is not None else game.m + game.n + 2

    rows = [k]
    cols = [l]
    row_set = {k}
    col_set = {l}
    p_global = np.zeros(game.m)
    q_global = np.zeros(game.n)
    p_global[k] = 1.0
    q_global[l] = 1.0
    row_vals = M[:, l].copy()
    col_vals = M[k, :].copy()
    lb = float(row_vals.min())
    ub = float(col_vals.max())
    trace = [(lb, ub)] if cfg.record_trace else None
    bodies = 0

    while ub - lb > cfg.eps and bodies < cap:
        bodies += 1
        sub = nash_lp(MatrixGame(M[np.ix_(rows, cols)]))
        p_sub = sub.row.weights
        q_sub = sub.col.weights
        p_global = np.zeros(game.m)
        q_global = np.zeros(game.n)
        p_global[rows] = p_sub
        q_global[cols] = q_sub
        row_vals = M[:, cols] @ q_sub
        col_vals = p_sub @ M[rows, :]

        i = _draw_row(game, cfg, rng, q_global, row_vals)
        if i not in row_set:
            row_set.add(i)
            rows.append(i)
        j = _draw_col(game, cfg, rng, p_global, col_vals)
        if j not in col_set:
            col_set.add(j)
            cols.append(j)

        lb = float(row_vals.min())
        ub = float(col_vals.max())
        if trace is not None:
            trace.append((lb, ub))

    return SolveResult(
        row=MixedStrategy(p_global),
        col=MixedStrategy(q_global),
        iterations=bodies,
        terminated=ub - lb <= cfg.eps,
        final_gap=ub - lb,
        trace=trace,
    )


def rewf_distribution(game: MatrixGame, opponent_counts, eta: float, side: str) -> MixedStrategy:
    """Forecaster's sampling law against the opponent's played history.

    Row side: softmax(-eta * M counts); column side: softmax(eta * counts' M).
    An all-zero history yields the uniform distribution.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    counts = np.asarray(
        opponent_counts.counts if hasattr(opponent_counts, "counts") else opponent_counts,
        dtype=float,
    )
    if side == "row":
        if counts.shape != (game.n,):
            raise ValueError(f"expected column counts of dimension {game.n}")
        return softmax(-eta * (game.payoff @ counts))
    if side == "col":
        if counts.shape != (game.m,):
            raise ValueError(f"expected row counts of dimension {game.m}")
        return softmax(eta * (counts @ game.payoff))
    raise ValueError(f"side must be 'row' or 'col', got {side!r}")


def run_rewf_selfplay(game: MatrixGame, T: int, eta: float, rng: RandomSource) -> RegretTrace:
    """Both players run the forecaster against each other for T rounds.

    Requires entries in [0, 1].  Each round the row player samples from
    softmax(-eta * M q_hist), then the column player from
    softmax(eta * p_hist' M); the column player's regret is measured on
    the transformed loss 1 - M'.
    """
    M = game.payoff
    if M.min() < 0.0 or M.max() > 1.0:
        raise ValueError("self-play regret bounds need entries in [0, 1]")
    if T < 1:
        raise ValueError("T must be at least 1")
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")

    row_vals = np.zeros(game.m)  # M q_hist
    col_vals = np.zeros(game.n)  # p_hist' M
    actions = []
    cumulative = 0.0
    for _ in range(T):
        i = rng.choice(softmax(-eta * row_vals).weights)
        j = rng.choice(softmax(eta * col_vals).weights)
        actions.append((i + 1, j + 1))
        cumulative += M[i, j]
        row_vals += M[:, j]
        col_vals += M[i, :]

    row_best = float(row_vals.min())
    col_best_transformed = float(T - col_vals.max())
    return RegretTrace(
        horizon=T,
        actions=tuple(actions),
        row_cumulative_loss=cumulative,
        row_best_fixed_loss=row_best,
        col_cumulative_loss=float(T - cumulative),
        col_best_fixed_loss=col_best_transformed,
    )


def sfp_restart_protocol(
    game: MatrixGame, eps: float, rng: RandomSource, max_restarts: int = 8
) -> SolveResult:
    """Fixed-horizon Gumbel fictitious play, restarted until certified.

    Computes (beta, T) from the theory parameters for the larger side,
    runs T loop bodies of fictitious play with Gumbel(0, beta) on both
    sides and no early stopping, and accepts the averaged pair once its
    exact exploitability is at most eps.  Each attempt succeeds with
    probability at least 1/2, so a couple of restarts suffice in
    expectation.  Entries must lie in [0, 1]; games with m > n are solved
    through the transposed loss 1 - M' and mapped back.
    """
    from .perturb import sfp_theory_params

    M = game.payoff
    if M.min() < 0.0 or M.max() > 1.0:
        raise ValueError("restart protocol expects entries normalized to [0, 1]")
    if max_restarts < 1:
        raise ValueError("max_restarts must be at least 1")

    if game.m > game.n:
        dual = sfp_restart_protocol(MatrixGame(1.0 - M.T), eps, rng, max_restarts)
        return replace(dual, row=dual.col, col=dual.row)

    params = sfp_theory_params(max(game.n, 2), eps)
    spec = PerturbationSpec.gumbel(0.0, params.beta)
    total_bodies = 0

    for attempt in range(1, max_restarts + 1):
        p_counts = np.zeros(game.m)
        q_counts = np.zeros(game.n)
        p_counts[0] = 1.0
        q_counts[0] = 1.0
        row_vals = M[:, 0].copy()
        col_vals = M[0, :].copy()
        t = 1
        for _ in range(params.T):
            t += 1
            i = int(np.argmin(row_vals - spec.sample(rng, game.m)))
            j = int(np.argmax(col_vals + spec.sample(rng, game.n)))
            p_counts[i] += 1.0
            q_counts[j] += 1.0
            row_vals += M[:, j]
            col_vals += M[i, :]
        total_bodies += params.T
        gap = (float(col_vals.max()) - float(row_vals.min())) / t
        if gap <= eps:
            return SolveResult(
                row=MixedStrategy(p_counts / t),
                col=MixedStrategy(q_counts / t),
                iterations=total_bodies,
                terminated=True,
                final_gap=gap,
                restarts=attempt,
            )

    return SolveResult(
        row=MixedStrategy(p_counts / t),
        col=MixedStrategy(q_counts / t),
        iterations=total_bodies,
        terminated=False,
        final_gap=gap,
        restarts=max_restarts,
    )
