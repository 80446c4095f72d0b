"""Path-planning game on an n x n node grid with an adversarial edge picker.

The row player walks monotonically (right/up moves only) from the
bottom-left node to the top-right one and pays the traversed edge costs.
The column player picks a single edge and multiplies its cost by a fixed
coefficient.  The matrix entry for (path, edge) is therefore

    base_cost(path) + (coefficient - 1) * cost(edge) * [edge on path]

with the column player maximizing.  Structured oracles compute best
responses by dynamic programming over the grid DAG and by usage-weighted
scoring, so they scale past the point where the explicit matrix does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MatrixGame
from .perturb import PerturbationSpec, RandomSource

__all__ = ["GridGame", "grid_game_build", "grid_best_response_path", "grid_best_response_edge"]

_LAYER_COSTS = (1.0 / 6.0, 1.0 / 2.0, 5.0 / 6.0)  # layers 0, 1, >= 2


def default_edge_cost(tail_x: int, tail_y: int, n: int) -> float:
    """Three-band cost by distance of the edge's tail from source or sink."""
    d = tail_x + tail_y
    layer = min(d, 2 * (n - 1) - 1 - d)
    return _LAYER_COSTS[min(layer, 2)]


@dataclass(frozen=True)
class GridGame:
    """Grid instance with fixed edge/path enumerations.

    Edges are enumerated by (tail_x, tail_y, direction) with right before
    up; paths by lexicographic move strings with 'R' < 'U'.  The explicit
    matrix is attached when the path count stays at or below 20000.
    """

    n: int
    coefficient: float
    edges: tuple[tuple[int, int, str], ...]
    edge_costs: np.ndarray
    paths: tuple[tuple[int, ...], ...]  # per path: edge indices in walk order
    path_base_costs: np.ndarray
    matrix: MatrixGame | None
    edge_index: dict

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_paths(self) -> int:
        return len(self.paths)


def _enumerate_paths(n: int, edge_index: dict) -> list[tuple[int, ...]]:
    """Monotone paths as edge-index tuples, lexicographic with R < U."""
    paths = []

    def walk(x, y, acc):
        if x == n - 1 and y == n - 1:
            paths.append(tuple(acc))
            return
        if x < n - 1:
            acc.append(edge_index[(x, y, "R")])
            walk(x + 1, y, acc)
            acc.pop()
        if y < n - 1:
            acc.append(edge_index[(x, y, "U")])
            walk(x, y + 1, acc)
            acc.pop()

    walk(0, 0, [])
    return paths


def grid_game_build(n: int, coefficient: float = 10.0, cost_pattern=None) -> GridGame:
    """Build the grid game; `cost_pattern` overrides the per-edge costs.

    The default pattern assigns each edge the cost of its tail's layer
    (1/6, 1/2, then 5/6 for all deeper layers), which makes every monotone
    path's base cost path-independent.  A custom pattern is a positive
    per-edge array in enumeration order.
    """
    if n < 2:
        raise ValueError("grid side must be at least 2")
    if coefficient <= 1:
        raise ValueError("coefficient must exceed 1")

    edges = []
    for x in range(n):
        for y in range(n):
            if x < n - 1:
                edges.append((x, y, "R"))
            if y < n - 1:
                edges.append((x, y, "U"))
    edge_index = {e: k for k, e in enumerate(edges)}

    if cost_pattern is None:
        costs = np.array([default_edge_cost(x, y, n) for x, y, _ in edges])
    else:
        costs = np.asarray(cost_pattern, dtype=float)
        if costs.shape != (len(edges),):
            raise ValueError(f"cost pattern needs {len(edges)} entries, got {costs.shape}")
        if np.any(costs <= 0):
            raise ValueError("edge costs must be positive")

    paths = _enumerate_paths(n, edge_index)
    base = np.array([costs[list(p)].sum() for p in paths])

    matrix = None
    if len(paths) <= 20000:
        M = np.tile(base[:, None], (1, len(edges)))
        for pi, p in enumerate(paths):
            M[pi, list(p)] += (coefficient - 1.0) * costs[list(p)]
        matrix = MatrixGame(M)

    return GridGame(
        n=n,
        coefficient=float(coefficient),
        edges=tuple(edges),
        edge_costs=costs,
        paths=tuple(paths),
        path_base_costs=base,
        matrix=matrix,
        edge_index=edge_index,
    )


def _as_weights(weights, dim: int, what: str) -> np.ndarray:
    vec = np.asarray(
        getattr(weights, "counts", getattr(weights, "weights", weights)), dtype=float
    )
    if vec.shape != (dim,):
        raise ValueError(f"{what} has shape {vec.shape}, expected ({dim},)")
    if np.any(vec < 0):
        raise ValueError(f"{what} must be nonnegative")
    return vec


def grid_best_response_path(
    g: GridGame,
    edge_weights,
    noise: PerturbationSpec | None = None,
    rng: RandomSource | None = None,
) -> int:
    """Minimum-cost monotone path against edge-picking counts (1-based index).

    The effective cost of edge e is (cost_e + noise_e) * (total +
    (coefficient - 1) * weight_e) / total, with the additive noise sampled
    per call before forming the effective cost.  Ties resolve to the
    lexicographically least path, which matches the least matrix row index.
    """
    w = _as_weights(edge_weights, g.num_edges, "edge weights")
    total = w.sum()
    costs = g.edge_costs
    if noise is not None and noise.kind != "none":
        if rng is None:
            raise ValueError("noisy oracle needs a RandomSource")
        costs = costs + noise.sample(rng, g.num_edges)
    if total > 0:
        factor = 1.0 + (g.coefficient - 1.0) * w / total
    else:
        factor = np.ones(g.num_edges)
    eff = costs * factor

    n = g.n
    edge_index = g.edge_index
    # cost-to-sink over the DAG, swept by decreasing x + y
    dist = np.full((n, n), np.inf)
    dist[n - 1, n - 1] = 0.0
    for x in range(n - 1, -1, -1):
        for y in range(n - 1, -1, -1):
            if x == n - 1 and y == n - 1:
                continue
            best = np.inf
            if x < n - 1:
                best = eff[edge_index[(x, y, "R")]] + dist[x + 1, y]
            if y < n - 1:
                up = eff[edge_index[(x, y, "U")]] + dist[x, y + 1]
                if up < best:
                    best = up
            dist[x, y] = best
    # greedy walk preferring R on exact ties gives the lex-least optimum
    moves = []
    x = y = 0
    while (x, y) != (n - 1, n - 1):
        if x < n - 1:
            right = eff[edge_index[(x, y, "R")]] + dist[x + 1, y]
        else:
            right = np.inf
        if y < n - 1:
            up = eff[edge_index[(x, y, "U")]] + dist[x, y + 1]
        else:
            up = np.inf
        if right <= up:
            moves.append(edge_index[(x, y, "R")])
            x += 1
        else:
            moves.append(edge_index[(x, y, "U")])
            y += 1
    return g.paths.index(tuple(moves)) + 1


def grid_best_response_edge(
    g: GridGame,
    path_weights,
    noise: PerturbationSpec | None = None,
    rng: RandomSource | None = None,
) -> int:
    """Edge maximizing (cost_e + noise_e) * usage_e (1-based index).

    usage_e is the expected traversal of e under the normalized path
    weights.  Equals the explicit-matrix column best response: the path
    base-cost term is constant across columns, so the argmax is unchanged.
    Ties resolve to the least edge index.
    """
    w = _as_weights(path_weights, g.num_paths, "path weights")
    total = w.sum()
    usage = np.zeros(g.num_edges)
    for pi in np.flatnonzero(w):
        usage[list(g.paths[pi])] += w[pi]
    if total > 0:
        usage /= total
    costs = g.edge_costs
    if noise is not None and noise.kind != "none":
        if rng is None:
            raise ValueError("noisy oracle needs a RandomSource")
        costs = costs + noise.sample(rng, g.num_edges)
    return int(np.argmax(costs * usage)) + 1
