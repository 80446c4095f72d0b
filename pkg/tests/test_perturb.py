import numpy as np
import pytest

from pbro import (
    ClusterMap,
    MatrixGame,
    PerturbationSpec,
    RandomSource,
    best_response_col,
    best_response_row,
    cluster_perturbed_best_response,
    make_L,
    make_S,
    make_U,
    perturbed_best_response_col,
    perturbed_best_response_row,
    sample_gumbel,
    sample_uniform,
    sfp_theory_params,
    softmax,
)


class TestSpecParsing:
    def test_round_trips(self):
        for text in ("none", "uniform:-0.5,0.5", "gumbel:0,2"):
            assert str(PerturbationSpec.parse(text)) == text

    def test_validation(self):
        with pytest.raises(ValueError):
            PerturbationSpec.uniform(0.0, 0.0)
        with pytest.raises(ValueError):
            PerturbationSpec.uniform(1.0, -1.0)
        with pytest.raises(ValueError):
            PerturbationSpec.gumbel(0.0, 0.0)
        with pytest.raises(ValueError):
            PerturbationSpec.parse("gaussian:0,1")
        with pytest.raises(ValueError):
            PerturbationSpec.parse("uniform:1")


class TestRandomSource:
    def test_determinism(self):
        a = RandomSource(1, (0, 1)).uniform(0, 1, 8)
        b = RandomSource(1, (0, 1)).uniform(0, 1, 8)
        assert np.array_equal(a, b)

    def test_stream_independence(self):
        a = RandomSource(1, (0, 1)).uniform(0, 1, 8)
        b = RandomSource(1, (0, 2)).uniform(0, 1, 8)
        assert not np.array_equal(a, b)

    def test_substream(self):
        root = RandomSource(9)
        assert np.array_equal(
            root.substream(3, 4).random(4), RandomSource(9, (3, 4)).random(4)
        )


class TestSamplers:
    def test_uniform_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            sample_uniform(RandomSource(1), 0.0, 0.0, 3)

    def test_uniform_mean(self):
        draws = sample_uniform(RandomSource(2), -1.0, 1.0, 10**6)
        assert abs(draws.mean()) < 0.005
        assert draws.min() >= -1.0 and draws.max() < 1.0

    def test_uniform_determinism(self):
        assert np.array_equal(
            sample_uniform(RandomSource(5, (1,)), 0, 1, 3),
            sample_uniform(RandomSource(5, (1,)), 0, 1, 3),
        )

    def test_gumbel_requires_positive_scale(self):
        with pytest.raises(ValueError):
            sample_gumbel(RandomSource(1), 0.0, -1.0, 3)

    def test_gumbel_cdf_at_location(self):
        # F(mu) = exp(-1) for the stated CDF
        draws = sample_gumbel(RandomSource(3), 0.0, 1.0, 10**6)
        assert abs((draws <= 0.0).mean() - np.exp(-1)) < 0.005

    def test_gumbel_location_scale(self):
        a = sample_gumbel(RandomSource(4, (0,)), 0.0, 1.0, 1000)
        b = sample_gumbel(RandomSource(4, (0,)), 0.0, 2.0, 1000)
        assert np.allclose(b, 2.0 * a)
        c = sample_gumbel(RandomSource(4, (0,)), 1.5, 1.0, 1000)
        assert np.allclose(c, a + 1.5)


class TestSoftmax:
    def test_symmetric(self):
        assert np.allclose(softmax([0.0, 0.0]).weights, [0.5, 0.5])

    def test_two_point(self):
        w = softmax([1.0, 0.0]).weights
        e = np.e
        assert np.allclose(w, [e / (1 + e), 1 / (1 + e)])

    def test_shift_invariance(self):
        x = np.array([0.3, -1.2, 4.0])
        assert np.allclose(softmax(x).weights, softmax(x + 123.4).weights)

    def test_overflow_safe(self):
        w = softmax([1000.0, 999.0]).weights
        assert np.isfinite(w).all()
        assert w.sum() == pytest.approx(1.0, abs=1e-12)


class TestPerturbedOracles:
    def test_none_delegates_to_exact(self):
        g = make_L(4)
        q = np.array([0.2, 0.3, 0.1, 0.4])
        rng = RandomSource(1)
        assert perturbed_best_response_row(g, q, PerturbationSpec.none(), rng) == best_response_row(g, q)[0]
        assert perturbed_best_response_col(g, q, PerturbationSpec.none(), rng) == best_response_col(g, q)[0]

    def test_gumbel_symmetric_frequencies(self):
        # M q = (0, 0): both indices equally likely under any Gumbel scale
        g = MatrixGame([[0.0], [0.0]])
        rng = RandomSource(6)
        spec = PerturbationSpec.gumbel(0.0, 1.0)
        q = np.ones(1)
        counts = np.zeros(2)
        n = 100_000
        for _ in range(n):
            counts[perturbed_best_response_row(g, q, spec, rng) - 1] += 1
        assert abs(counts[0] / n - 0.5) < 0.01

    def test_gumbel_matches_softmax_law(self):
        # M q = (1, 0): index 2 should appear with frequency softmax(-x)[2]
        g = MatrixGame([[1.0], [0.0]])
        rng = RandomSource(7)
        spec = PerturbationSpec.gumbel(0.0, 1.0)
        q = np.ones(1)
        n = 100_000
        hits = sum(
            perturbed_best_response_row(g, q, spec, rng) == 2 for _ in range(n)
        )
        expected = softmax(np.array([-1.0, 0.0])).weights[1]
        assert abs(hits / n - expected) < 0.01

    def test_uniform_col_on_S_row(self):
        # k-th row of S with U(-1/2,1/2) noise: mean index k/2, never >= k
        k, n = 10, 16
        x = make_S(n).payoff[k - 1, :]
        rng = RandomSource(8)
        draws = x[None, :] + rng.uniform(-0.5, 0.5, (100_000, n))
        idx = np.argmax(draws, axis=1) + 1
        assert idx.max() < k
        assert abs(idx.mean() - k / 2) < 0.1

    def test_uniform_col_on_U_row(self):
        k, n = 10, 16
        x = make_U(n).payoff[k - 1, :]
        rng = RandomSource(9)
        draws = x[None, :] + rng.uniform(-1.0, 1.0, (100_000, n))
        idx = np.argmax(draws, axis=1) + 1
        assert idx.max() <= k
        assert idx.mean() <= 0.75 * k


class TestLemma1TV:
    def test_total_variation(self):
        vectors = [
            np.array([0.0, 0.0]),
            np.array([1.0, 0.0]),
            np.array([0.5, -0.5, 0.25]),
            np.array([1.0, 2.0, 3.0, 4.0]),
            np.array([0.3, -1.2, 2.0, 0.0, -0.7, 1.1, 0.2, -0.4]),
        ]
        n = 100_000
        for beta in (0.5, 1.0, 2.0):
            for vi, x in enumerate(vectors):
                rng = RandomSource(1, (vi, int(beta * 10)))
                noise = rng.gumbel(0.0, beta, (n, x.size))
                emp = np.bincount(np.argmax(x + noise, axis=1), minlength=x.size) / n
                tv = 0.5 * np.abs(emp - softmax(x / beta).weights).sum()
                assert tv <= 0.01, (beta, vi, tv)

    def test_dual_argmin_form(self):
        x = np.array([1.0, 0.0, -0.5])
        rng = RandomSource(2, (99,))
        n = 100_000
        noise = rng.gumbel(0.0, 1.0, (n, 3))
        emp = np.bincount(np.argmin(x - noise, axis=1), minlength=3) / n
        tv = 0.5 * np.abs(emp - softmax(-x).weights).sum()
        assert tv <= 0.01


def brute_force_cluster_argmin(game, clusters, z, q):
    perturbed = game.payoff + z[clusters.assignment]
    vals = perturbed @ q
    return int(np.argmin(vals)) + 1


class TestClusterOracle:
    def setup_method(self):
        # 1-bit game: +1 cell, -1 cell, and the diagonal as three clusters
        self.game = make_L(2)
        self.clusters = ClusterMap(np.array([[2, 0], [1, 2]]), ("+1", "-1", "0"))

    def test_none_spec_equals_exact(self):
        q = np.array([1.0, 0.0])
        got = cluster_perturbed_best_response(
            self.game, self.clusters, "row", q, PerturbationSpec.none(), RandomSource(1)
        )
        assert got == best_response_row(self.game, q)[0]

    def test_constant_shift_keeps_argmin(self):
        # all clusters shifted by the same c: every row value moves by c*sum(q)
        from pbro.perturb import _cluster_noise

        q = np.array([0.25, 0.75])
        z = np.full(3, 3.7)
        noise = _cluster_noise(self.clusters, "row", q, z)
        assert np.allclose(noise, 3.7 * q.sum())

    def test_matches_brute_force_rebuild(self):
        spec = PerturbationSpec.uniform(-1.0, 1.0)
        q = np.array([1.0, 0.0])
        for trial in range(200):
            rng = RandomSource(3, (trial,))
            got = cluster_perturbed_best_response(self.game, self.clusters, "row", q, spec, rng)
            replay = RandomSource(3, (trial,))
            z = spec.sample(replay, self.clusters.K)
            assert got == brute_force_cluster_argmin(self.game, self.clusters, z, q)

    def test_col_side_matches_brute_force(self):
        spec = PerturbationSpec.uniform(-2.0, 2.0)
        p = np.array([0.5, 0.5])
        game = make_L(2)
        for trial in range(100):
            got = cluster_perturbed_best_response(
                game, self.clusters, "col", p, spec, RandomSource(4, (trial,))
            )
            z = spec.sample(RandomSource(4, (trial,)), self.clusters.K)
            vals = p @ (game.payoff + z[self.clusters.assignment])
            assert got == int(np.argmax(vals)) + 1

    def test_singleton_map_equals_matrix_perturbation(self):
        game = make_L(3)
        clusters = ClusterMap.singleton(game.shape)
        spec = PerturbationSpec.uniform(-1.0, 1.0)
        q = np.array([0.5, 0.25, 0.25])
        for trial in range(100):
            got = cluster_perturbed_best_response(game, clusters, "row", q, spec, RandomSource(5, (trial,)))
            z = spec.sample(RandomSource(5, (trial,)), clusters.K)
            assert got == brute_force_cluster_argmin(game, clusters, z, q)

    def test_in_cluster_ties_resolve_uniformly(self):
        # one cluster for every cell: all rows tie after perturbation
        game = MatrixGame(np.zeros((4, 2)))
        clusters = ClusterMap(np.zeros((4, 2), dtype=int), ("0",))
        spec = PerturbationSpec.uniform(-1.0, 1.0)
        q = np.array([0.5, 0.5])
        counts = np.zeros(4)
        n = 20_000
        rng = RandomSource(6)
        for _ in range(n):
            counts[cluster_perturbed_best_response(game, clusters, "row", q, spec, rng) - 1] += 1
        assert np.all(np.abs(counts / n - 0.25) < 0.02)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            cluster_perturbed_best_response(
                make_L(3), self.clusters, "row", np.ones(3) / 3,
                PerturbationSpec.uniform(-1, 1), RandomSource(1),
            )

    def test_typed_profiles_match_raw_arrays(self):
        from pbro import MixedStrategy, WeightedProfile

        spec = PerturbationSpec.uniform(-1, 1)
        raw = np.array([0.25, 0.75])
        for wrapped in (MixedStrategy(raw), WeightedProfile(raw)):
            a = cluster_perturbed_best_response(
                self.game, self.clusters, "row", wrapped, spec, RandomSource(11, (1,))
            )
            b = cluster_perturbed_best_response(
                self.game, self.clusters, "row", raw, spec, RandomSource(11, (1,))
            )
            assert a == b


class TestTheoryParams:
    def test_log_one_point(self):
        # real n with ln n = 1 exercises the closed forms directly
        params = sfp_theory_params(np.e, 1.0)
        assert params.beta == pytest.approx((2 + np.sqrt(2)) / np.sqrt(8))
        assert params.T == 12

    def test_thousand(self):
        params = sfp_theory_params(1000, 0.1)
        assert params.beta == pytest.approx(7.6904, abs=1e-3)
        assert params.T == 3269

    def test_eta_beta_product(self):
        for n, eps in ((2, 0.5), (64, 0.1), (10**6, 0.01)):
            params = sfp_theory_params(n, eps)
            assert params.eta * params.beta == pytest.approx(1.0, abs=1e-12)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            sfp_theory_params(1, 0.1)
