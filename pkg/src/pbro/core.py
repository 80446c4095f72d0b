"""Matrix-game representation and exact best-response machinery.

Conventions used throughout the package:

* A game is an ``m x n`` real matrix whose entry ``(i, j)`` is the loss of
  the row player and the reward of the column player.  The row player
  minimizes, the column player maximizes.
* Pure-strategy indices exposed by the public API are 1-based (row 1 is the
  first row).  Vectors (strategies, profiles) are plain positional arrays.
* Exact oracles break ties by the least index, which makes every
  deterministic solver trace reproducible.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "MatrixGame",
    "MixedStrategy",
    "WeightedProfile",
    "SupportSet",
    "NashSolution",
    "AffineRecord",
    "value",
    "best_response_row",
    "best_response_col",
    "exploitability",
    "normalize_unit",
    "submatrix",
    "basis_vector",
    "read_matrix_text",
    "write_matrix_text",
]

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class MatrixGame:
    """Dense zero-sum matrix game; entries are row-player losses."""

    payoff: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.payoff, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"payoff must be a 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("payoff entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "payoff", arr)

    @property
    def m(self) -> int:
        return self.payoff.shape[0]

    @property
    def n(self) -> int:
        return self.payoff.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoff.shape


@dataclass(frozen=True)
class MixedStrategy:
    """Probability distribution over one side's pure strategies."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a 1-D vector")
        if np.any(w < -_SUM_TOL):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        w = np.maximum(w, 0.0)
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class WeightedProfile:
    """Unnormalized play-count vector; normalizing yields a MixedStrategy."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("counts must be a 1-D vector")
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        if c.sum() <= 0:
            raise ValueError("total count must be positive")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    def normalized(self) -> MixedStrategy:
        return MixedStrategy(self.counts / self.total)

    def __len__(self):
        return self.counts.size


@dataclass(frozen=True)
class SupportSet:
    """Ordered set of 1-based pure-strategy indices for one side.

    Insertion order is preserved so that solver traces are reproducible.
    """

    indices: tuple[int, ...]
    side_size: int = field(default=0)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) != len(set(idx)):
            raise ValueError("support indices must be unique")
        if self.side_size:
            for i in idx:
                if not 1 <= i <= self.side_size:
                    raise ValueError(f"index {i} out of range [1, {self.side_size}]")
        elif any(i < 1 for i in idx):
            raise ValueError("support indices are 1-based")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices


@dataclass(frozen=True)
class NashSolution:
    row: MixedStrategy
    col: MixedStrategy
    value: float


class AffineRecord(NamedTuple):
    """Affine map ``original = scale * normalized + shift``."""

    scale: float
    shift: float


def _as_vector(strategy, dim: int, what: str) -> np.ndarray:
    """Accept MixedStrategy, WeightedProfile, or a plain array."""
    if isinstance(strategy, MixedStrategy):
        vec = strategy.weights
    elif isinstance(strategy, WeightedProfile):
        vec = strategy.counts
    else:
        vec = np.asarray(strategy, dtype=float)
    if vec.ndim != 1 or vec.size != dim:
        raise ValueError(f"{what} has dimension {vec.shape}, expected ({dim},)")
    return vec


def basis_vector(dim: int, index: int) -> np.ndarray:
    """Standard basis vector e_index (1-based) of the given dimension."""
    if not 1 <= index <= dim:
        raise ValueError(f"index {index} out of range [1, {dim}]")
    e = np.zeros(dim)
    e[index - 1] = 1.0
    return e


def value(game: MatrixGame, p, q) -> float:
    """Expected outcome p' M q (row player's loss)."""
    pv = _as_vector(p, game.m, "row strategy")
    qv = _as_vector(q, game.n, "column strategy")
    return float(pv @ game.payoff @ qv)


def row_values(game: MatrixGame, q) -> np.ndarray:
    """The vector M q of per-row outcomes against the column profile q.

    Works for unnormalized profiles; the result scales with the total.
    Sparse profiles only touch their support columns.
    """
    qv = _as_vector(q, game.n, "column profile")
    support = np.flatnonzero(qv)
    if support.size == 0:
        return np.zeros(game.m)
    if support.size <= max(1, game.n // 4):
        return game.payoff[:, support] @ qv[support]
    return game.payoff @ qv


def col_values(game: MatrixGame, p) -> np.ndarray:
    """The vector p' M of per-column outcomes against the row profile p."""
    pv = _as_vector(p, game.m, "row profile")
    support = np.flatnonzero(pv)
    if support.size == 0:
        return np.zeros(game.n)
    if support.size <= max(1, game.m // 4):
        return pv[support] @ game.payoff[support, :]
    return pv @ game.payoff


def best_response_row(game: MatrixGame, q) -> tuple[int, float]:
    """Row player's exact best response to the column profile q.

    Returns ``(i, v)`` where ``i`` is the least 1-based index attaining
    ``v = min_i (M q)_i``.  The value is reported against the raw counts,
    not normalized.
    """
    vals = row_values(game, q)
    i = int(np.argmin(vals))
    return i + 1, float(vals[i])


def best_response_col(game: MatrixGame, p) -> tuple[int, float]:
    """Column player's exact best response: least argmax of p' M."""
    vals = col_values(game, p)
    j = int(np.argmax(vals))
    return j + 1, float(vals[j])


def exploitability(game: MatrixGame, p, q) -> float:
    """BRVal_c(p) - BRVal_r(q); nonnegative, zero exactly at equilibrium.

    A pair with exploitability at most eps is an eps-equilibrium.
    """
    _, ub = best_response_col(game, p)
    _, lb = best_response_row(game, q)
    return ub - lb


def normalize_unit(game: MatrixGame) -> tuple[MatrixGame, AffineRecord]:
    """Rescale entries to [0, 1]; returns the game and the inverse map.

    A constant matrix maps to all zeros with scale 1.  Best-response
    indices are invariant under the map (positive affine transform).
    """
    lo = float(game.payoff.min())
    hi = float(game.payoff.max())
    if hi - lo <= 0:
        return MatrixGame(np.zeros(game.shape)), AffineRecord(1.0, lo)
    scale = hi - lo
    return MatrixGame((game.payoff - lo) / scale), AffineRecord(scale, lo)


def submatrix(game: MatrixGame, rows: SupportSet | tuple, cols: SupportSet | tuple) -> MatrixGame:
    """Restriction of the game to the given row/column index sets (1-based)."""
    r = tuple(rows)
    c = tuple(cols)
    if not r or not c:
        raise ValueError("row and column selections must be nonempty")
    for i in r:
        if not 1 <= i <= game.m:
            raise ValueError(f"row index {i} out of range [1, {game.m}]")
    for j in c:
        if not 1 <= j <= game.n:
            raise ValueError(f"column index {j} out of range [1, {game.n}]")
    ri = np.array(r, dtype=int) - 1
    ci = np.array(c, dtype=int) - 1
    return MatrixGame(game.payoff[np.ix_(ri, ci)])


def write_matrix_text(game: MatrixGame, path_or_buf) -> None:
    """Write the plain-text exchange format: 'm n' then m rows of n reals."""
    lines = [f"{game.m} {game.n}"]
    for row in game.payoff:
        lines.append(" ".join(repr(float(x)) for x in row))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_matrix_text(path_or_buf) -> MatrixGame:
    """Parse the plain-text exchange format; rejects NaN/Inf entries."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        with open(path_or_buf, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"expected header 'm n', got {lines[0]!r}")
    m, n = int(header[0]), int(header[1])
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} data rows, got {len(lines) - 1}")
    data = np.loadtxt(io.StringIO("\n".join(lines[1:])), dtype=float, ndmin=2)
    if data.shape != (m, n):
        raise ValueError(f"expected {m}x{n} entries, got {data.shape}")
    if not np.all(np.isfinite(data)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return MatrixGame(data)
