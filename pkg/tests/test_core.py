import io

import numpy as np
import pytest

from pbro import (
    MatrixGame,
    MixedStrategy,
    SupportSet,
    WeightedProfile,
    basis_vector,
    best_response_col,
    best_response_row,
    exploitability,
    make_L,
    normalize_unit,
    read_matrix_text,
    submatrix,
    value,
    write_matrix_text,
)

L2 = make_L(2)
L3 = make_L(3)
PENNIES = MatrixGame([[1.0, -1.0], [-1.0, 1.0]])


def brute_best_row(game, q):
    vals = [sum(game.payoff[i, j] * q[j] for j in range(game.n)) for i in range(game.m)]
    best = min(vals)
    return vals.index(best) + 1, best


class TestValue:
    def test_greater_number_game(self):
        assert value(L2, basis_vector(2, 1), basis_vector(2, 2)) == 1.0

    def test_antisymmetric_uniform(self):
        u = MixedStrategy([0.5, 0.5])
        assert value(L2, u, u) == pytest.approx(0.0)

    def test_one_by_one(self):
        g = MatrixGame([[3.25]])
        assert value(g, basis_vector(1, 1), basis_vector(1, 1)) == 3.25

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            value(L2, basis_vector(3, 1), basis_vector(2, 1))


class TestBestResponses:
    def test_row_pure_column(self):
        assert best_response_row(L3, basis_vector(3, 3)) == (3, 0.0)

    def test_row_mixed(self):
        idx, val = best_response_row(L2, np.array([0.5, 0.5]))
        assert (idx, val) == (2, -0.5)
        assert (idx, val) == brute_best_row(L2, [0.5, 0.5])

    def test_row_homogeneity(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            g = MatrixGame(rng.uniform(-1, 1, (4, 5)))
            q = rng.uniform(0, 1, 5)
            q[rng.integers(5)] = 0.0
            q += 1e-6
            i1, v1 = best_response_row(g, q)
            i2, v2 = best_response_row(g, 3.5 * q)
            assert i1 == i2
            assert v2 == pytest.approx(3.5 * v1)

    def test_col_examples(self):
        assert best_response_col(L3, basis_vector(3, 1)) == (2, 1.0)
        assert best_response_col(L3, basis_vector(3, 3)) == (3, 0.0)

    def test_col_homogeneity(self):
        p = np.array([0.25, 0.75, 0.0])
        j1, v1 = best_response_col(L3, p)
        j2, v2 = best_response_col(L3, 2.0 * p)
        assert j1 == j2 and v2 == pytest.approx(2 * v1)

    def test_least_index_tie_rule(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            g = MatrixGame(rng.integers(-1, 2, (5, 4)).astype(float))
            q = rng.integers(0, 3, 4).astype(float)
            if q.sum() == 0:
                q[0] = 1.0
            vals = g.payoff @ q
            i, v = best_response_row(g, q)
            ties = np.flatnonzero(vals == vals.min())
            assert i == ties[0] + 1
            j, _ = best_response_col(g, np.ones(5))
            cvals = np.ones(5) @ g.payoff
            assert j == np.flatnonzero(cvals == cvals.max())[0] + 1

    def test_accepts_weighted_profile(self):
        prof = WeightedProfile([2.0, 1.0, 1.0])
        idx, val = best_response_row(L3, prof)
        assert idx == 3
        assert val == pytest.approx(-3.0)


class TestExploitability:
    def test_pure_equilibrium(self):
        e3 = basis_vector(3, 3)
        assert exploitability(L3, e3, e3) == pytest.approx(0.0)

    def test_pennies_uniform(self):
        u = MixedStrategy([0.5, 0.5])
        assert exploitability(PENNIES, u, u) == pytest.approx(0.0)

    def test_pennies_pure(self):
        e1 = basis_vector(2, 1)
        assert exploitability(PENNIES, e1, e1) == pytest.approx(2.0)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            g = MatrixGame(rng.uniform(-2, 2, (rng.integers(1, 6), rng.integers(1, 6))))
            p = rng.uniform(0, 1, g.m)
            p /= p.sum()
            q = rng.uniform(0, 1, g.n)
            q /= q.sum()
            assert exploitability(g, p, q) >= -1e-12


class TestNormalize:
    def test_basic(self):
        out, rec = normalize_unit(L2)
        assert out.payoff.tolist() == [[0.5, 1.0], [0.0, 0.5]]
        assert rec == (2.0, -1.0)

    def test_zero_one_unchanged(self):
        g = MatrixGame([[0.0, 1.0], [1.0, 0.0]])
        out, rec = normalize_unit(g)
        assert np.array_equal(out.payoff, g.payoff)
        assert rec == (1.0, 0.0)

    def test_constant(self):
        out, rec = normalize_unit(MatrixGame([[4.0, 4.0]]))
        assert out.payoff.tolist() == [[0.0, 0.0]]
        assert rec == (1.0, 4.0)

    def test_recovery(self):
        rng = np.random.default_rng(11)
        g = MatrixGame(rng.uniform(-5, 7, (3, 4)))
        out, rec = normalize_unit(g)
        assert np.allclose(out.payoff * rec.scale + rec.shift, g.payoff)
        assert out.payoff.min() == 0.0 and out.payoff.max() == 1.0

    def test_best_response_index_invariance(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            g = MatrixGame(rng.uniform(-3, 3, (4, 4)))
            out, _ = normalize_unit(g)
            q = rng.uniform(0, 1, 4)
            assert best_response_row(g, q)[0] == best_response_row(out, q)[0]
            assert best_response_col(g, q)[0] == best_response_col(out, q)[0]

    def test_positive_affine_transform_invariance(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            g = MatrixGame(rng.uniform(-3, 3, (5, 4)))
            a, b = rng.uniform(0.1, 4.0), rng.uniform(-5.0, 5.0)
            h = MatrixGame(a * g.payoff + b)
            q = rng.uniform(0, 1, 4)
            p = rng.uniform(0, 1, 5)
            assert best_response_row(g, q)[0] == best_response_row(h, q)[0]
            assert best_response_col(g, p)[0] == best_response_col(h, p)[0]


class TestSubmatrix:
    def test_example(self):
        sub = submatrix(L3, (1, 3), (2,))
        assert sub.payoff.tolist() == [[1.0], [-1.0]]

    def test_full_selection(self):
        sub = submatrix(L3, (1, 2, 3), (1, 2, 3))
        assert np.array_equal(sub.payoff, L3.payoff)

    def test_single_cell(self):
        assert submatrix(L3, (2,), (2,)).payoff.tolist() == [[0.0]]

    def test_errors(self):
        with pytest.raises(ValueError):
            submatrix(L3, (), (1,))
        with pytest.raises(ValueError):
            submatrix(L3, (4,), (1,))


class TestTypes:
    def test_matrix_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            MatrixGame([[np.nan]])
        with pytest.raises(ValueError):
            MatrixGame([[np.inf, 0.0]])

    def test_mixed_strategy_validation(self):
        with pytest.raises(ValueError):
            MixedStrategy([0.5, 0.6])
        with pytest.raises(ValueError):
            MixedStrategy([-0.1, 1.1])
        MixedStrategy([1.0])

    def test_weighted_profile_validation(self):
        with pytest.raises(ValueError):
            WeightedProfile([0.0, 0.0])
        with pytest.raises(ValueError):
            WeightedProfile([-1.0, 2.0])
        prof = WeightedProfile([1.0, 3.0])
        assert prof.total == 4.0
        assert prof.normalized().weights.tolist() == [0.25, 0.75]

    def test_support_set(self):
        s = SupportSet((3, 1, 2), side_size=3)
        assert list(s) == [3, 1, 2]  # insertion order preserved
        with pytest.raises(ValueError):
            SupportSet((1, 1))
        with pytest.raises(ValueError):
            SupportSet((0,))
        with pytest.raises(ValueError):
            SupportSet((4,), side_size=3)


class TestMatrixText:
    def test_round_trip(self):
        buf = io.StringIO()
        write_matrix_text(L3, buf)
        buf.seek(0)
        back = read_matrix_text(buf)
        assert np.array_equal(back.payoff, L3.payoff)

    def test_format(self):
        buf = io.StringIO()
        write_matrix_text(MatrixGame([[0.5, -1.0]]), buf)
        assert buf.getvalue() == "1 2\n0.5 -1.0\n"

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            read_matrix_text(io.StringIO("1 1\nnan\n"))
        with pytest.raises(ValueError):
            read_matrix_text(io.StringIO("1 2\n1.0 inf\n"))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            read_matrix_text(io.StringIO("2 2\n1 2\n"))
        with pytest.raises(ValueError):
            read_matrix_text(io.StringIO("hello\n"))
