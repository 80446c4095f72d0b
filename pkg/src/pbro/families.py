"""Generators for every benchmark game family.

Adversarial matrices L, S = L', U, U' (greater/smaller-number games and
their unique-best-response variants), random unit games, f-finger Morra,
Colonel Blotto, the n-bit stochastic game and POSG with their
terminal-state cluster maps, and spec-string parsing for the CLI.

All generators are deterministic functions of their parameters (plus the
random source where one is taken).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MatrixGame
from .perturb import RandomSource

__all__ = [
    "make_L",
    "make_S",
    "make_U",
    "make_U_T",
    "make_random_unit",
    "make_morra",
    "make_blotto",
    "ClusterMap",
    "BitGameSpec",
    "bitgame_simulate",
    "bitgame_build",
    "BuiltGame",
    "parse_game_spec",
    "GAME_SPEC_FORMS",
]


def make_L(n: int) -> MatrixGame:
    """Greater-number-wins game: 0 diagonal, +1 above, -1 below."""
    if n < 1:
        raise ValueError("n must be at least 1")
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return MatrixGame(np.sign(j - i).astype(float))


def make_S(n: int) -> MatrixGame:
    """Smaller-number-wins dual: the transpose of L."""
    return MatrixGame(make_L(n).payoff.T.copy())


def make_U(n: int) -> MatrixGame:
    """Variant of L with unique best responses: +-2 bands off the diagonal."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = np.arange(n)[None, :] - np.arange(n)[:, None]
    M = np.where(d == 0, 0.0,
                 np.where(d == 1, -2.0,
                          np.where(d > 1, -1.0,
                                   np.where(d == -1, 2.0, 1.0))))
    return MatrixGame(M)


def make_U_T(n: int) -> MatrixGame:
    """Transpose of U; unique equilibrium at the last row and column."""
    return MatrixGame(make_U(n).payoff.T.copy())


def make_random_unit(n: int, rng: RandomSource) -> MatrixGame:
    """n x n game with i.i.d. U(0,1) entries from the given source."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return MatrixGame(rng.random((n, n)))


def make_morra(f: int) -> MatrixGame:
    """f-finger Morra: show s and guess g, both in [f]; f^2 x f^2 matrix.

    A pure strategy (s, g) has index (s-1)*f + g.  The sole correct guesser
    wins s1 + s2; double-correct and double-wrong are draws.  Entries are
    column rewards.
    """
    if f < 1:
        raise ValueError("f must be at least 1")
    strategies = [(s, g) for s in range(1, f + 1) for g in range(1, f + 1)]
    dim = f * f
    M = np.zeros((dim, dim))
    for a, (s1, g1) in enumerate(strategies):
        for b, (s2, g2) in enumerate(strategies):
            col_correct = g2 == s1
            row_correct = g1 == s2
            if col_correct and not row_correct:
                M[a, b] = s1 + s2
            elif row_correct and not col_correct:
                M[a, b] = -(s1 + s2)
    return MatrixGame(M)


def _compositions(units: int, fields: int):
    """All ways to split `units` into `fields` nonnegative parts, lex order."""
    if fields == 1:
        yield (units,)
        return
    for first in range(units + 1):
        for rest in _compositions(units - first, fields - 1):
            yield (first,) + rest


def make_blotto(fields: int = 5, units: int = 0) -> MatrixGame:
    """Colonel Blotto: allocate units over fields, win-minus-lost scoring.

    Pure strategies are the compositions of `units` into `fields`
    nonnegative parts in lexicographic order; the entry is the number of
    fields the column player wins strictly minus those it loses strictly,
    as a column reward.
    """
    if fields < 1:
        raise ValueError("fields must be at least 1")
    if units < 0:
        raise ValueError("units must be nonnegative")
    allocs = np.array(list(_compositions(units, fields)), dtype=float)
    dim = allocs.shape[0]
    M = np.zeros((dim, dim))
    for a in range(dim):
        wins = (allocs > allocs[a]).sum(axis=1)
        losses = (allocs < allocs[a]).sum(axis=1)
        M[a, :] = wins - losses
    return MatrixGame(M)


@dataclass(frozen=True)
class ClusterMap:
    """Partition of matrix cells by terminal state of a structured game.

    `assignment` holds a 0-based cluster id per cell; `labels[k]` is the
    human-readable terminal name of cluster k.  Every cell of a cluster
    carries the same payoff (the terminal's reward).
    """

    assignment: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int32)
        if arr.min() < 0 or arr.max() >= len(self.labels):
            raise ValueError("cluster ids out of range of labels")
        arr.flags.writeable = False
        object.__setattr__(self, "assignment", arr)

    @property
    def K(self) -> int:
        return len(self.labels)

    def singleton(shape) -> "ClusterMap":
        """One cluster per cell (K = m*n); mirrors full-matrix perturbation."""
        m, n = shape
        ids = np.arange(m * n, dtype=np.int32).reshape(m, n)
        return ClusterMap(ids, tuple(f"cell@{i},{j}" for i in range(1, m + 1) for j in range(1, n + 1)))

    singleton = staticmethod(singleton)


@dataclass(frozen=True)
class BitGameSpec:
    """n-bit structured game; the induced matrix is 2^n x 2^n."""

    variant: str  # "stochastic" or "posg"
    n: int

    def __post_init__(self):
        if self.variant not in ("stochastic", "posg"):
            raise ValueError(f"variant must be 'stochastic' or 'posg', got {self.variant!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


def _check_bits(s: str, n: int, who: str) -> list[int]:
    if len(s) != n or any(ch not in "01" for ch in s):
        raise ValueError(f"{who} must be a bit string of length {n}, got {s!r}")
    return [int(ch) for ch in s]


def bitgame_simulate(spec: BitGameSpec, x: str, y: str) -> tuple[str, float]:
    """Walk the structured game on action bits (x_d, y_d), d = 1..n.

    Returns (terminal label, column-player reward).  In the chain, equal
    bits advance; (row 0, col 1) branches toward the column player's win,
    (row 1, col 0) toward the row player's.  The POSG variant enters
    up/down branch states that pay +-2 only if every remaining round keeps
    the winner ahead, and +-1 on the first deviation.
    """
    n = spec.n
    xb = _check_bits(x, n, "x")
    yb = _check_bits(y, n, "y")

    if spec.variant == "stochastic":
        for d in range(n):
            if xb[d] == yb[d]:
                continue
            if xb[d] == 0:  # column player chose the greater branch
                return f"+1@{d + 1}", 1.0
            return f"-1@{d + 1}", -1.0
        return "0", 0.0

    # posg: chain states c_0..c_{n-1}, then up/down branch states
    for d in range(n):
        if xb[d] == yb[d]:
            continue
        up = xb[d] == 0  # (0,1): up branch toward column's +2
        if d == n - 1:
            return ("+2", 2.0) if up else ("-2", -2.0)
        # branch states u_e / v_e; playing round r happens in state index r,
        # and advancing needs (1,0) on the up branch, (0,1) on the down one
        for r in range(d + 1, n):
            advanced = (xb[r] == 1 and yb[r] == 0) if up else (xb[r] == 0 and yb[r] == 1)
            if not advanced:
                return (f"+1@{r}", 1.0) if up else (f"-1@{r}", -1.0)
        return ("+2", 2.0) if up else ("-2", -2.0)
    return "0", 0.0


def _floor_log2_table(size: int) -> np.ndarray:
    table = np.full(size, -1, dtype=np.int32)
    if size > 1:
        table[1:] = np.floor(np.log2(np.arange(1, size))).astype(np.int32)
    return table


def _stochastic_clusters(n: int):
    size = 1 << n
    x = np.arange(size, dtype=np.uint32)[:, None]
    y = np.arange(size, dtype=np.uint32)[None, :]
    diff = x ^ y
    fl = _floor_log2_table(size)
    pos = fl[diff]  # MSB position of the first differing bit
    d = n - 1 - pos  # 0-based round of first difference
    col_wins = ((y >> pos.clip(0)) & 1) == 1
    # ids: 0 -> "0"; 1..n -> +1@1..+1@n; n+1..2n -> -1@1..-1@n
    ids = np.where(diff == 0, 0, np.where(col_wins, 1 + d, 1 + n + d)).astype(np.int32)
    labels = ("0",) + tuple(f"+1@{k}" for k in range(1, n + 1)) + tuple(f"-1@{k}" for k in range(1, n + 1))
    payoff = np.where(ids == 0, 0.0, np.where(ids <= n, 1.0, -1.0))
    return payoff, ClusterMap(ids, labels)


def _posg_clusters(n: int):
    size = 1 << n
    x = np.arange(size, dtype=np.uint32)[:, None]
    y = np.arange(size, dtype=np.uint32)[None, :]
    diff = x ^ y
    fl = _floor_log2_table(size)
    pos = fl[diff]
    mask = ((np.uint32(1) << pos.clip(0).astype(np.uint32)) - 1).astype(np.uint32)
    nz = diff != 0
    up = (((y >> pos.clip(0)) & 1) == 1) & nz
    down = nz & ~up
    plus2 = up & ((x & mask) == mask) & ((y & mask) == 0)
    minus2 = down & ((x & mask) == 0) & ((y & mask) == mask)
    # first round after the split where the winner fails to stay ahead
    fail_up = (~(x & ~y)) & mask
    fail_down = (~(y & ~x)) & mask
    e_up = n - 1 - fl[fail_up]
    e_down = n - 1 - fl[fail_down]
    # ids: 0 "0"; 1 "+2"; 2 "-2"; 3..n+1 "+1@e"; n+2..2n "-1@e" (e = 1..n-1)
    ids = np.zeros(diff.shape, dtype=np.int32)
    ids[plus2] = 1
    ids[minus2] = 2
    up_fail = up & ~plus2
    down_fail = down & ~minus2
    ids[up_fail] = 2 + e_up[up_fail]
    ids[down_fail] = 1 + n + e_down[down_fail]
    labels = ("0", "+2", "-2") + tuple(f"+1@{e}" for e in range(1, n)) + tuple(f"-1@{e}" for e in range(1, n))
    payoff = np.zeros(diff.shape)
    payoff[ids == 1] = 2.0
    payoff[ids == 2] = -2.0
    payoff[(ids >= 3) & (ids <= n + 1)] = 1.0
    payoff[ids >= n + 2] = -1.0
    return payoff, ClusterMap(ids, labels)


def bitgame_build(spec: BitGameSpec) -> tuple[MatrixGame, ClusterMap]:
    """Induced 2^n x 2^n matrix and terminal-cluster map.

    Pure strategy index = binary value of the bit string (MSB first) + 1,
    so the stochastic variant reproduces L(2^n) and the POSG variant
    U'(2^n) entrywise, with K = 2n + 1 clusters.
    """
    if spec.n > 13:
        raise ValueError(f"dense bit-game build capped at n=13, got {spec.n}")
    if spec.variant == "stochastic":
        payoff, clusters = _stochastic_clusters(spec.n)
    else:
        payoff, clusters = _posg_clusters(spec.n)
    return MatrixGame(payoff), clusters


@dataclass(frozen=True)
class BuiltGame:
    """A game built from a CLI spec string, with optional structure."""

    family: str
    spec: str
    game: MatrixGame
    clusters: ClusterMap | None = None
    grid: object | None = None


GAME_SPEC_FORMS = (
    "L:n", "S:n", "U:n", "UT:n", "random:n", "morra:f",
    "blotto:fields,units", "bitgame:variant,n", "grid:n,coefficient", "file:path",
)


def parse_game_spec(text: str, rng: RandomSource | None = None) -> BuiltGame:
    """Build a game from its textual spec (see GAME_SPEC_FORMS)."""
    from . import grid as grid_mod
    from .core import read_matrix_text

    text = text.strip()
    family, _, params = text.partition(":")
    try:
        if family == "L":
            return BuiltGame(family, text, make_L(int(params)))
        if family == "S":
            return BuiltGame(family, text, make_S(int(params)))
        if family == "U":
            return BuiltGame(family, text, make_U(int(params)))
        if family == "UT":
            return BuiltGame(family, text, make_U_T(int(params)))
        if family == "random":
            if rng is None:
                raise ValueError("random games need a RandomSource")
            return BuiltGame(family, text, make_random_unit(int(params), rng))
        if family == "morra":
            return BuiltGame(family, text, make_morra(int(params)))
        if family == "blotto":
            fields, units = (int(p) for p in params.split(","))
            return BuiltGame(family, text, make_blotto(fields, units))
        if family == "bitgame":
            variant, nbits = params.split(",")
            game, clusters = bitgame_build(BitGameSpec(variant.strip(), int(nbits)))
            return BuiltGame(family, text, game, clusters=clusters)
        if family == "grid":
            n, coefficient = params.split(",")
            g = grid_mod.grid_game_build(int(n), float(coefficient))
            if g.matrix is None:
                raise ValueError(f"grid {n} too large for an explicit matrix")
            return BuiltGame(family, text, g.matrix, grid=g)
        if family == "file":
            return BuiltGame(family, text, read_matrix_text(params))
    except ValueError:
        raise
    except Exception as exc:  # int()/split() failures on malformed params
        raise ValueError(f"malformed game spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown game family {family!r} (known: {', '.join(GAME_SPEC_FORMS)})")
