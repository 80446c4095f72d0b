import numpy as np
import pytest

from pbro import (
    MatrixGame,
    exploitability,
    make_L,
    make_U,
    nash_lp,
    submatrix,
    support_enum_nash,
)
from pbro.lp import NashSolveError


def random_game(rng, max_dim=4):
    m = rng.integers(1, max_dim + 1)
    n = rng.integers(1, max_dim + 1)
    return MatrixGame(rng.uniform(-1, 1, (m, n)))


class TestNashLP:
    def test_one_by_one(self):
        sol = nash_lp(MatrixGame([[2.5]]))
        assert sol.row.weights.tolist() == [1.0]
        assert sol.col.weights.tolist() == [1.0]
        assert sol.value == 2.5

    def test_matching_pennies(self):
        sol = nash_lp(MatrixGame([[1.0, -1.0], [-1.0, 1.0]]))
        assert np.allclose(sol.row.weights, [0.5, 0.5])
        assert np.allclose(sol.col.weights, [0.5, 0.5])
        assert sol.value == pytest.approx(0.0, abs=1e-9)

    def test_L4_pure(self):
        sol = nash_lp(make_L(4))
        assert np.allclose(sol.row.weights, [0, 0, 0, 1])
        assert np.allclose(sol.col.weights, [0, 0, 0, 1])
        assert sol.value == pytest.approx(0.0)

    def test_U6_pure(self):
        sol = nash_lp(make_U(6))
        assert np.allclose(sol.row.weights, np.eye(6)[0])
        assert np.allclose(sol.col.weights, np.eye(6)[0])
        assert sol.value == pytest.approx(0.0)

    def test_constant_matrix(self):
        sol = nash_lp(MatrixGame([[7.0, 7.0], [7.0, 7.0]]))
        assert np.allclose(sol.row.weights, [1, 0])
        assert np.allclose(sol.col.weights, [1, 0])
        assert sol.value == 7.0

    def test_exploitability_bound(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            g = random_game(rng, max_dim=8)
            sol = nash_lp(g)
            assert exploitability(g, sol.row, sol.col) <= 1e-7

    def test_degenerate_integer_games(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            g = MatrixGame(rng.integers(-1, 2, (rng.integers(1, 7), rng.integers(1, 7))).astype(float))
            sol = nash_lp(g)
            assert exploitability(g, sol.row, sol.col) <= 1e-7

    def test_full_selection_matches_original(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            g = random_game(rng)
            sub = submatrix(g, tuple(range(1, g.m + 1)), tuple(range(1, g.n + 1)))
            assert nash_lp(sub).value == pytest.approx(nash_lp(g).value, abs=1e-9)


class TestSupportEnum:
    def test_matching_pennies_value(self):
        sol = support_enum_nash(MatrixGame([[1.0, -1.0], [-1.0, 1.0]]))
        assert sol.value == pytest.approx(0.0)

    def test_L3_last_supports(self):
        sol = support_enum_nash(make_L(3))
        assert sol.value == pytest.approx(0.0)
        assert np.flatnonzero(sol.row.weights > 1e-9).tolist() == [2]
        assert np.flatnonzero(sol.col.weights > 1e-9).tolist() == [2]

    def test_rock_paper_scissors(self):
        rps = MatrixGame([[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]])
        sol = support_enum_nash(rps)
        assert np.allclose(sol.row.weights, np.ones(3) / 3)
        assert np.allclose(sol.col.weights, np.ones(3) / 3)
        assert sol.value == pytest.approx(0.0)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            support_enum_nash(MatrixGame(np.zeros((7, 3))))

    def test_agreement_with_lp(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            g = random_game(rng)
            assert nash_lp(g).value == pytest.approx(support_enum_nash(g).value, abs=1e-9)


def test_error_type_is_runtime_error():
    assert issubclass(NashSolveError, RuntimeError)
