"""Perturbation distributions, seeded randomness, and perturbed oracles.

Randomness is counter-based: a `RandomSource` is keyed by a 64-bit seed and
a tuple of stream ids, mixed through numpy's SeedSequence into a Philox
generator.  Identical (seed, stream) always reproduces the same sample
sequence; distinct streams are statistically independent, so parallel and
serial execution of independent runs produce identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MatrixGame, MixedStrategy, best_response_col, best_response_row, col_values, row_values

__all__ = [
    "PerturbationSpec",
    "RandomSource",
    "SFPTheoryParams",
    "softmax",
    "sample_uniform",
    "sample_gumbel",
    "perturbed_best_response_row",
    "perturbed_best_response_col",
    "cluster_perturbed_best_response",
    "sfp_theory_params",
]


@dataclass(frozen=True)
class PerturbationSpec:
    """Noise distribution for perturbed best responses.

    kind is one of ``none``, ``uniform`` (params a < b) or ``gumbel``
    (params mu, beta > 0).  Textual form for CLI/config: ``none``,
    ``uniform:a,b``, ``gumbel:mu,beta``.
    """

    kind: str
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "uniform", "gumbel"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "uniform" and not self.a < self.b:
            raise ValueError(f"uniform requires a < b, got ({self.a}, {self.b})")
        if self.kind == "gumbel" and not self.b > 0:
            raise ValueError(f"gumbel requires beta > 0, got {self.b}")

    @staticmethod
    def none() -> "PerturbationSpec":
        return PerturbationSpec("none")

    @staticmethod
    def uniform(a: float, b: float) -> "PerturbationSpec":
        return PerturbationSpec("uniform", float(a), float(b))

    @staticmethod
    def gumbel(mu: float, beta: float) -> "PerturbationSpec":
        return PerturbationSpec("gumbel", float(mu), float(beta))

    @staticmethod
    def parse(text: str) -> "PerturbationSpec":
        text = text.strip()
        if text == "none":
            return PerturbationSpec.none()
        if ":" not in text:
            raise ValueError(f"cannot parse perturbation spec {text!r}")
        kind, _, params = text.partition(":")
        parts = params.split(",")
        if len(parts) != 2:
            raise ValueError(f"perturbation spec {text!r} needs two parameters")
        x, y = float(parts[0]), float(parts[1])
        if kind == "uniform":
            return PerturbationSpec.uniform(x, y)
        if kind == "gumbel":
            return PerturbationSpec.gumbel(x, y)
        raise ValueError(f"unknown perturbation kind {kind!r}")

    def __str__(self):
        if self.kind == "none":
            return "none"
        return f"{self.kind}:{self.a:g},{self.b:g}"

    def sample(self, rng: "RandomSource", dim) -> np.ndarray:
        if self.kind == "uniform":
            return rng.uniform(self.a, self.b, dim)
        if self.kind == "gumbel":
            return rng.gumbel(self.a, self.b, dim)
        raise ValueError("cannot sample from a 'none' spec")


class RandomSource:
    """Deterministic, stream-splittable random source (Philox-backed).

    The stream id tuple typically encodes (run index, iteration index,
    player side); integer ids are used directly and string tags are mixed
    in through a stable CRC32.  A single source must not be shared across
    concurrent callers; spawn substreams instead.
    """

    def __init__(self, seed: int, stream: tuple = ()):
        self.seed = int(seed)
        self.stream = tuple(self._stream_id(s) for s in stream)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.stream)
        self._gen = np.random.Generator(np.random.Philox(ss))

    @staticmethod
    def _stream_id(value) -> int:
        if isinstance(value, str):
            import zlib

            return zlib.crc32(value.encode("utf-8"))
        return int(value)

    def substream(self, *ids) -> "RandomSource":
        """Independent source keyed by this source's stream plus ids."""
        return RandomSource(self.seed, self.stream + tuple(ids))

    def random(self, size=None) -> np.ndarray:
        """Uniform draws on [0, 1)."""
        return self._gen.random(size)

    def uniform(self, a: float, b: float, size=None) -> np.ndarray:
        """I.i.d. draws from U(a, b) via a + (b - a) * u, u on [0, 1)."""
        if not a < b:
            raise ValueError(f"uniform requires a < b, got ({a}, {b})")
        return a + (b - a) * self._gen.random(size)

    def gumbel(self, mu: float, beta: float, size=None) -> np.ndarray:
        """I.i.d. Gumbel(mu, beta) draws by exact inverse CDF.

        Each draw is mu - beta * ln(-ln(u)) with u kept strictly inside
        (0, 1) to avoid log(0).
        """
        if not beta > 0:
            raise ValueError(f"gumbel requires beta > 0, got {beta}")
        u = self._gen.random(size)
        u = np.maximum(u, np.finfo(float).tiny)
        return mu - beta * np.log(-np.log(u))

    def integers(self, upper: int) -> int:
        """One integer uniform on [0, upper)."""
        return int(self._gen.integers(upper))

    def choice(self, probabilities: np.ndarray) -> int:
        """Sample an index from a probability vector by inverse CDF."""
        cdf = np.cumsum(probabilities)
        u = float(self._gen.random()) * cdf[-1]
        return int(np.searchsorted(cdf, u, side="right").clip(0, len(cdf) - 1))

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, stream={self.stream})"


def sample_uniform(rng: RandomSource, a: float, b: float, dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be at least 1")
    return rng.uniform(a, b, dim)


def sample_gumbel(rng: RandomSource, mu: float, beta: float, dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be at least 1")
    return rng.gumbel(mu, beta, dim)


def softmax(x) -> MixedStrategy:
    """Exponential weights distribution of x, computed overflow-safely."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("softmax requires finite input")
    e = np.exp(arr - arr.max())
    return MixedStrategy(e / e.sum())


def perturbed_best_response_row(game: MatrixGame, q, spec: PerturbationSpec, rng: RandomSource) -> int:
    """Least argmin of (M q - u) with u sampled fresh from spec.

    With Gumbel(0, beta) noise the returned index is distributed as
    softmax(-M q / beta).  A 'none' spec delegates to the exact oracle.
    """
    if spec.kind == "none":
        return best_response_row(game, q)[0]
    vals = row_values(game, q) - spec.sample(rng, game.m)
    return int(np.argmin(vals)) + 1


def perturbed_best_response_col(game: MatrixGame, p, spec: PerturbationSpec, rng: RandomSource) -> int:
    """Least argmax of (p' M + v); dual of the row case."""
    if spec.kind == "none":
        return best_response_col(game, p)[0]
    vals = col_values(game, p) + spec.sample(rng, game.n)
    return int(np.argmax(vals)) + 1


def _cluster_noise(clusters, side: str, weights: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Accumulated shared-noise contribution Z w for one side.

    `clusters` needs an integer cell-assignment array of the game's shape
    and a cluster count K; the noise vector z holds one value per cluster.
    Only the support of the opposing profile is touched.
    """
    assign = clusters.assignment
    support = np.flatnonzero(weights)
    if side == "row":
        out = np.zeros(assign.shape[0])
        for j in support:
            out += weights[j] * z[assign[:, j]]
    else:
        out = np.zeros(assign.shape[1])
        for i in support:
            out += weights[i] * z[assign[i, :]]
    return out


def cluster_perturbed_best_response(
    game: MatrixGame, clusters, side: str, weights, spec: PerturbationSpec, rng: RandomSource
) -> int:
    """Best response under one shared noise value per cell cluster.

    Samples z_k for every cluster k and optimizes the profile-weighted sums
    of (M + Z) without materializing the perturbed matrix.  Because whole
    clusters shift together, exact ties between optima occur with positive
    probability; they are resolved uniformly at random from rng, which
    keeps the selection among equally-perturbed candidates unbiased.
    """
    if side not in ("row", "col"):
        raise ValueError(f"side must be 'row' or 'col', got {side!r}")
    if clusters.assignment.shape != game.shape:
        raise ValueError(
            f"cluster map shape {clusters.assignment.shape} does not match game {game.shape}"
        )
    wvec = np.asarray(
        getattr(weights, "counts", getattr(weights, "weights", weights)), dtype=float
    )
    base = row_values(game, wvec) if side == "row" else col_values(game, wvec)
    if spec.kind == "none":
        vals = base
    else:
        z = spec.sample(rng, clusters.K)
        vals = base + _cluster_noise(clusters, side, wvec, z)
    best = vals.min() if side == "row" else vals.max()
    tied = np.flatnonzero(np.abs(vals - best) <= 1e-12)
    if tied.size == 1:
        return int(tied[0]) + 1
    return int(tied[rng.integers(tied.size)]) + 1


@dataclass(frozen=True)
class SFPTheoryParams:
    """Noise scale and horizon giving the logarithmic iteration guarantee."""

    n: float
    eps: float
    beta: float
    T: int
    eta: float


def sfp_theory_params(n, eps: float) -> SFPTheoryParams:
    """Gumbel scale beta and horizon T for the restart protocol.

    beta = (2 + sqrt(2 ln n)) / (eps * sqrt(8 ln n)) and
    T = ceil(((2 + sqrt(2 ln n)) / eps)^2); eta = 1/beta.  Accepts real n
    for testing; requires n >= 2 so that ln n is positive.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    ln_n = np.log(n)
    root = 2.0 + np.sqrt(2.0 * ln_n)
    beta = root / (eps * np.sqrt(8.0 * ln_n))
    T = int(np.ceil((root / eps) ** 2))
    return SFPTheoryParams(n=float(n), eps=float(eps), beta=float(beta), T=T, eta=1.0 / float(beta))


def gumbel_row_distribution(game: MatrixGame, q, beta: float) -> MixedStrategy:
    """Exact law of the Gumbel-perturbed row oracle: softmax(-M q / beta)."""
    return softmax(-row_values(game, q) / beta)


def gumbel_col_distribution(game: MatrixGame, p, beta: float) -> MixedStrategy:
    """Exact law of the Gumbel-perturbed column oracle: softmax(p' M / beta)."""
    return softmax(col_values(game, p) / beta)
