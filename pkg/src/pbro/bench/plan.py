"""Experiment plans and run records.

Plans are flat key=value text files (diffable, no structured markup):

    game      = L:{size}            ; '{size}' is filled from the sweep;
                                      ';'-separated list runs several games
    algorithm = do,sdo              ; comma list over the known algorithms
    perturb   = uniform:-1,1        ; both players; row_perturb/col_perturb
                                      override per side; 'theory' resolves
                                      to Gumbel(0, beta(n, eps)) per size
    eps       = 0.1
    sizes     = 8,16,32
    reps      = 10
    seed      = 1
    init      = worst               ; worst | first | explicit:k,l
    normalize = false
    cluster   = false               ; use terminal-cluster oracles

Bare family names without '{size}' get ':{size}' appended, so 'game = L'
sweeps L:8, L:16, ...
"""

from __future__ import annotations

from dataclasses import dataclass

from ..families import BuiltGame
from ..perturb import PerturbationSpec

__all__ = ["ExperimentPlan", "RunRecord", "parse_plan", "parse_plan_file", "resolve_init", "ALGORITHMS"]

ALGORITHMS = ("fp", "sfp", "afp", "safp", "do", "sdo", "sfp-restart")

# worst deterministic starts per family: the index farthest from the unique
# equilibrium (L and UT equilibria sit at (n, n); S and U at (1, 1))
_WORST_START = {"L": "low", "S": "high", "U": "high", "UT": "low"}


@dataclass(frozen=True)
class ExperimentPlan:
    games: tuple[str, ...]
    algorithms: tuple[str, ...]
    eps: float
    sizes: tuple[int, ...]
    repetitions: int = 10
    base_seed: int = 1
    init: str = "worst"  # worst | first | explicit:k,l
    normalize: bool = False
    cluster: bool = False
    row_perturb: str = "none"  # textual spec or 'theory'
    col_perturb: str = "none"

    def __post_init__(self):
        if not self.games:
            raise ValueError("plan needs at least one game")
        if not self.sizes:
            raise ValueError("plan needs a nonempty size sweep")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r} (known: {', '.join(ALGORITHMS)})")
        for side in (self.row_perturb, self.col_perturb):
            if side != "theory":
                PerturbationSpec.parse(side)  # validate eagerly
        if self.init not in ("worst", "first") and not self.init.startswith("explicit:"):
            raise ValueError(f"init must be worst, first, or explicit:k,l, got {self.init!r}")


@dataclass(frozen=True)
class RunRecord:
    """One solver run; reproducible from (plan, repetition) except wall_ms."""

    game: str
    algorithm: str
    perturbation: str
    eps: float
    size: int
    rep: int
    seed: int
    iterations: int
    terminated: bool
    exploitability: float
    wall_ms: float = 0.0
    error: str | None = None

    def sort_key(self):
        return (self.game, self.algorithm, self.size, self.rep)


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "yes", "1", "on"):
        return True
    if text.lower() in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"cannot parse boolean {text!r}")


def parse_plan(text: str) -> ExperimentPlan:
    """Parse the key=value plan format; '#' starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"plan line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip().lower()] = val.strip()

    def need(key):
        if key not in values:
            raise ValueError(f"plan is missing required key {key!r}")
        return values[key]

    games = tuple(g.strip() for g in need("game").split(";") if g.strip())
    algorithms = tuple(a.strip().lower() for a in need("algorithm").split(",") if a.strip())
    sizes = tuple(int(s) for s in need("sizes").split(",") if s.strip())
    perturb = values.get("perturb", "none")
    return ExperimentPlan(
        games=games,
        algorithms=algorithms,
        eps=float(need("eps")),
        sizes=sizes,
        repetitions=int(values.get("reps", "10")),
        base_seed=int(values.get("seed", "1")),
        init=values.get("init", "worst"),
        normalize=_parse_bool(values.get("normalize", "false")),
        cluster=_parse_bool(values.get("cluster", "false")),
        row_perturb=values.get("row_perturb", perturb),
        col_perturb=values.get("col_perturb", perturb),
    )


def parse_plan_file(path) -> ExperimentPlan:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_plan(fh.read())


def expand_game_spec(template: str, size: int) -> str:
    """Fill the '{size}' placeholder, appending ':{size}' to bare names."""
    if "{size}" in template:
        return template.replace("{size}", str(size))
    if ":" in template:
        return template
    return f"{template}:{size}"


def resolve_init(plan: ExperimentPlan, built: BuiltGame) -> tuple[int, int]:
    """Initial pure strategies (1-based) for a built game under the plan.

    Policy 'worst' starts at the index farthest from the unique
    equilibrium for the adversarial families and falls back to the first
    index for families without a distinguished worst start.
    """
    m, n = built.game.shape
    if plan.init.startswith("explicit:"):
        parts = plan.init.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ValueError(f"explicit init needs k,l, got {plan.init!r}")
        k, l = int(parts[0]), int(parts[1])
        if not (1 <= k <= m and 1 <= l <= n):
            raise ValueError(f"explicit init ({k}, {l}) out of range for {m}x{n} game")
        return k, l
    if plan.init == "worst":
        where = _WORST_START.get(built.family)
        if where == "high":
            return m, n
        # L, UT, and every family without a known worst start begin low
        return 1, 1
    return 1, 1
