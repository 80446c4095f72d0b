"""Nash solvers for zero-sum matrix games.

`nash_lp` is the production solver: a pure-strategy saddle-point check
followed, when needed, by a dense primal simplex on the classical shifted
formulation (maximize 1'x subject to (M + s)' x <= 1, x >= 0), with the
column player's strategy recovered from the dual values.  Anti-cycling is
handled by switching to Bland's rule after a degenerate stall.

`support_enum_nash` is an independent exhaustive oracle for tiny games,
kept deliberately separate so the two routes can cross-validate each other.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import MatrixGame, MixedStrategy, NashSolution

__all__ = ["nash_lp", "support_enum_nash", "NashSolveError"]

_TOL = 1e-9
_EXPLOIT_TOL = 1e-7


class NashSolveError(RuntimeError):
    """Numerical failure inside a Nash solve (cycling, cap, bad duals)."""


def _pure_saddle(M: np.ndarray):
    """Return (i, j, v) for a unique-argmin/argmax saddle point, else None.

    Ambiguous saddles (tied security rows/columns) are left to the simplex
    so that the returned equilibrium is always an LP vertex in degenerate
    games.
    """
    rowmax = M.max(axis=1)
    colmin = M.min(axis=0)
    i = int(np.argmin(rowmax))
    j = int(np.argmax(colmin))
    if rowmax[i] - colmin[j] > 1e-12:
        return None
    if np.count_nonzero(rowmax <= rowmax[i] + 1e-12) > 1:
        return None
    if np.count_nonzero(colmin >= colmin[j] - 1e-12) > 1:
        return None
    return i, j, float(M[i, j])


def _simplex_zero_sum(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Solve the shifted zero-sum LP by primal tableau simplex.

    Returns (p, q, value) on the original payoff scale.  Raises
    NashSolveError when the pivot cap 10*(m+n+1) is exceeded.
    """
    m, n = M.shape
    shift = 1.0 - float(M.min())
    A = (M + shift).T  # n constraints over m variables, all entries >= 1
    nvar, ncon = m, n

    tableau = np.empty((ncon, nvar + ncon + 1))
    tableau[:, :nvar] = A
    tableau[:, nvar:-1] = np.eye(ncon)
    tableau[:, -1] = 1.0
    reduced = np.zeros(nvar + ncon)
    reduced[:nvar] = 1.0  # maximize sum of x
    basis = list(range(nvar, nvar + ncon))

    cap = 10 * (m + n + 1)
    pivots = 0
    objective = 0.0
    stall = 0
    bland = False

    while True:
        if bland:
            improving = np.flatnonzero(reduced > _TOL)
            if improving.size == 0:
                break
            enter = int(improving[0])
        else:
            enter = int(np.argmax(reduced))
            if reduced[enter] <= _TOL:
                break
        column = tableau[:, enter]
        positive = np.flatnonzero(column > _TOL)
        if positive.size == 0:
            raise NashSolveError("unbounded zero-sum LP (matrix not finite?)")
        ratios = tableau[positive, -1] / column[positive]
        best = ratios.min()
        tied = positive[ratios <= best + _TOL]
        leave = int(tied[np.argmin([basis[r] for r in tied])])

        pivots += 1
        if pivots > cap:
            raise NashSolveError(f"simplex pivot cap {cap} exceeded on {m}x{n} game")

        pivot = tableau[leave, enter]
        tableau[leave, :] /= pivot
        factor = tableau[:, enter].copy()
        factor[leave] = 0.0
        tableau -= np.outer(factor, tableau[leave, :])
        gain = reduced[enter] * tableau[leave, -1]
        reduced = reduced - reduced[enter] * tableau[leave, :-1]
        basis[leave] = enter

        if gain <= _TOL:
            stall += 1
            if stall >= 20:
                bland = True
        else:
            stall = 0
            bland = False
        objective += gain

    x = np.zeros(nvar)
    for r, b in enumerate(basis):
        if b < nvar:
            x[b] = tableau[r, -1]
    total = x.sum()
    if total <= _TOL:
        raise NashSolveError("degenerate simplex solution (zero objective)")
    v = 1.0 / total
    p = np.maximum(x * v, 0.0)
    p /= p.sum()
    y = np.maximum(-reduced[nvar:], 0.0)  # duals live on the slack columns
    if y.sum() <= 0:
        raise NashSolveError("dual extraction failed")
    q = y / y.sum()
    return p, q, v - shift


def nash_lp(game: MatrixGame) -> NashSolution:
    """Equilibrium of the game with exploitability at most 1e-7.

    When several equilibria exist, any one meeting the bound is valid; the
    solver returns the saddle point when it is unique and an LP vertex
    otherwise.  An all-equal matrix yields (e1, e1, constant).
    """
    M = game.payoff
    saddle = _pure_saddle(M)
    if saddle is None and M.max() - M.min() <= 1e-12:
        saddle = (0, 0, float(M[0, 0]))  # constant matrix: any pair works
    if saddle is not None:
        i, j, v = saddle
        p = np.zeros(game.m)
        q = np.zeros(game.n)
        p[i] = 1.0
        q[j] = 1.0
    else:
        p, q, v = _simplex_zero_sum(M)

    gap = float((p @ M).max() - (M @ q).min())
    if gap > _EXPLOIT_TOL:
        raise NashSolveError(f"solution exploitability {gap:.2e} above {_EXPLOIT_TOL}")
    return NashSolution(MixedStrategy(p), MixedStrategy(q), float(v))


def support_enum_nash(game: MatrixGame) -> NashSolution:
    """Exact equilibrium by exhaustive equal-size support enumeration.

    Validation oracle only; limited to games up to 6x6.  Iterates support
    pairs in lexicographic order (sizes ascending) and returns the first
    pair whose square indifference system yields a valid equilibrium.
    """
    m, n = game.m, game.n
    if m > 6 or n > 6:
        raise ValueError(f"support enumeration capped at 6x6, got {m}x{n}")
    M = game.payoff
    tol = 1e-9

    for size in range(1, min(m, n) + 1):
        for rows in itertools.combinations(range(m), size):
            for cols in itertools.combinations(range(n), size):
                sub = M[np.ix_(rows, cols)]
                # column player's q on cols: sub @ q = v, sum q = 1
                lhs = np.zeros((size + 1, size + 1))
                lhs[:size, :size] = sub
                lhs[:size, size] = -1.0
                lhs[size, :size] = 1.0
                rhs = np.zeros(size + 1)
                rhs[size] = 1.0
                try:
                    sol_q = np.linalg.solve(lhs, rhs)
                except np.linalg.LinAlgError:
                    continue
                # row player's p on rows: p' sub = v, sum p = 1
                lhs_p = np.zeros((size + 1, size + 1))
                lhs_p[:size, :size] = sub.T
                lhs_p[:size, size] = -1.0
                lhs_p[size, :size] = 1.0
                try:
                    sol_p = np.linalg.solve(lhs_p, rhs)
                except np.linalg.LinAlgError:
                    continue
                qs, v_q = sol_q[:size], sol_q[size]
                ps, v_p = sol_p[:size], sol_p[size]
                if abs(v_q - v_p) > tol:
                    continue
                if np.any(qs < -tol) or np.any(ps < -tol):
                    continue
                p = np.zeros(m)
                q = np.zeros(n)
                p[list(rows)] = np.maximum(ps, 0.0)
                q[list(cols)] = np.maximum(qs, 0.0)
                p /= p.sum()
                q /= q.sum()
                v = float(v_q)
                # global optimality: no row beats v, no column exceeds it
                if (M @ q).min() < v - tol:
                    continue
                if (p @ M).max() > v + tol:
                    continue
                return NashSolution(MixedStrategy(p), MixedStrategy(q), v)
    raise NashSolveError("support enumeration found no equilibrium (numerical ties?)")
