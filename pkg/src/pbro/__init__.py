"""Best-response-oracle algorithms for two-player zero-sum matrix games.

Exact and perturbed oracles, fictitious play and double oracle (plus their
anticipatory and stochastic variants), an LP-based Nash subgame solver,
the benchmark game families, and a reproducible experiment runner.
"""

from .core import (
    AffineRecord,
    MatrixGame,
    MixedStrategy,
    NashSolution,
    SupportSet,
    WeightedProfile,
    basis_vector,
    best_response_col,
    best_response_row,
    exploitability,
    normalize_unit,
    read_matrix_text,
    submatrix,
    value,
    write_matrix_text,
)
from .families import (
    BitGameSpec,
    BuiltGame,
    ClusterMap,
    bitgame_build,
    bitgame_simulate,
    make_L,
    make_S,
    make_U,
    make_U_T,
    make_blotto,
    make_morra,
    make_random_unit,
    parse_game_spec,
)
from .grid import GridGame, grid_best_response_edge, grid_best_response_path, grid_game_build
from .lp import NashSolveError, nash_lp, support_enum_nash
from .perturb import (
    PerturbationSpec,
    RandomSource,
    SFPTheoryParams,
    cluster_perturbed_best_response,
    perturbed_best_response_col,
    perturbed_best_response_row,
    sample_gumbel,
    sample_uniform,
    sfp_theory_params,
    softmax,
)
from .solvers import (
    RegretTrace,
    SolveResult,
    SolverConfig,
    rewf_distribution,
    run_anticipatory_fp,
    run_double_oracle,
    run_fictitious_play,
    run_rewf_selfplay,
    sfp_restart_protocol,
)

__version__ = "0.1.0"
