"""Society-scale wealth dynamics under two power regimes.

Agents meet in random pairings (uniform perfect matchings of the
population, so everyone trades once per round) and each pair splits a
fixed joint surplus.  How the split tilts depends on the regime:

* authoritarian -- the richer agent's bargaining ratio is the wealth ratio
  raised to ``power_exponent``: wealth converts freely into power, and the
  conversion feeds back into more wealth;
* institutional -- the ratio is capped at ``cap``: laws, unions, and
  contracts bound how much advantage wealth can buy.

The stronger side takes share rho / (1 + rho) of the surplus.  Surplus is
injected (both sides gain), so the books must balance as
new total = old total + rounds * (n // 2) * unit_surplus each epoch;
inequality is tracked with the Gini coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import AllZero, ConfigMismatch, EmptyInput, InvalidConfig, InvalidInput


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value <= 0.0:
            raise InvalidConfig(f"constant wealth must be > 0, got {self.value!r}")


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidConfig("uniform bounds must be finite")
        if self.lo <= 0.0 or self.hi <= self.lo:
            raise InvalidConfig("uniform wealth needs 0 < lo < hi")


@dataclass(frozen=True)
class Lognormal:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)) or self.sigma < 0.0:
            raise InvalidConfig("lognormal needs finite mu and sigma >= 0")


WealthDistribution = Constant | Uniform | Lognormal


@dataclass(frozen=True)
class Authoritarian:
    power_exponent: float  # 0 disables the wealth-to-power coupling

    def __post_init__(self):
        if not math.isfinite(self.power_exponent) or self.power_exponent < 0.0:
            raise InvalidConfig("power_exponent must be finite and >= 0")


@dataclass(frozen=True)
class Institutional:
    cap: float  # 1 forces exact parity

    def __post_init__(self):
        if not math.isfinite(self.cap) or self.cap < 1.0:
            raise InvalidConfig("cap must be finite and >= 1")


RegimeRule = Authoritarian | Institutional


@dataclass(frozen=True)
class SocietyConfig:
    n_agents: int
    initial_wealth: WealthDistribution
    regime: RegimeRule
    epochs: int
    pairings_per_epoch: int
    seed: int
    unit_surplus: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_agents, int) or self.n_agents < 2:
            raise InvalidConfig("n_agents must be an integer >= 2")
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise InvalidConfig("epochs must be a positive integer")
        if not isinstance(self.pairings_per_epoch, int) or self.pairings_per_epoch < 1:
            raise InvalidConfig("pairings_per_epoch must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        if not math.isfinite(self.unit_surplus) or self.unit_surplus <= 0.0:
            raise InvalidConfig("unit_surplus must be > 0")
        if not isinstance(self.initial_wealth, (Constant, Uniform, Lognormal)):
            raise InvalidConfig("initial_wealth must be a distribution spec")
        if not isinstance(self.regime, (Authoritarian, Institutional)):
            raise InvalidConfig("regime must be Authoritarian or Institutional")


@dataclass(frozen=True)
class WealthTrace:
    """Per-epoch inequality and accounting series for one run.

    Index 0 of each series is the initial state; index e is the state
    after epoch e.  ``injected_per_epoch`` is the surplus added each epoch
    (pairings_per_epoch * (n_agents // 2) * unit_surplus), the quantity
    conservation is checked against.
    """

    gini_series: np.ndarray
    totals: np.ndarray
    injected_per_epoch: float
    final_wealth: np.ndarray
    config: SocietyConfig

    @property
    def final_gini(self) -> float:
        return float(self.gini_series[-1])


def gini(wealths) -> float:
    """Gini coefficient: mean absolute pairwise difference over twice the mean.

    Computed via the sorted-index identity, which is O(n log n) and equal
    to the n^2-pair definition.  Ranges from 0 (perfect equality) to
    1 - 1/n (one agent holds everything).
    """
    arr = np.asarray(wealths, dtype=float)
    if arr.size == 0:
        raise EmptyInput("gini needs at least one value")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("gini values must be finite")
    if np.any(arr < 0.0):
        raise InvalidInput("gini values must be non-negative")
    total = float(arr.sum())
    if total == 0.0:
        raise AllZero("gini is undefined when every value is zero")
    n = arr.size
    ranked = np.sort(arr)
    weighted = float(np.dot(np.arange(1, n + 1), ranked))
    return 2.0 * weighted / (n * total) - (n + 1) / n


def _sample_initial(dist: WealthDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(dist, Constant):
        return np.full(n, dist.value, dtype=float)
    if isinstance(dist, Uniform):
        return rng.uniform(dist.lo, dist.hi, size=n)
    return rng.lognormal(dist.mu, dist.sigma, size=n)


def _power_ratio(wealth_ratio: float, regime: RegimeRule) -> float:
    if isinstance(regime, Authoritarian):
        return wealth_ratio ** regime.power_exponent
    return min(wealth_ratio, regime.cap)


def run_society(cfg: SocietyConfig) -> WealthTrace:
    """Simulate one society; deterministic given the config (incl. seed).

    Each epoch draws ``pairings_per_epoch`` uniform pairings (perfect
    matchings via a shuffle; with an odd population one agent sits a round
    out) and processes them sequentially: a round's exchanges see the
    wealth left by earlier rounds.  The richer side of a pair gets surplus
    share rho / (1 + rho) with rho from the regime rule.  Because every
    agent trades exactly once per round, exact power parity preserves a
    flat wealth distribution exactly.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_agents
    wealth_arr = _sample_initial(cfg.initial_wealth, n, rng)
    wealth = [float(w) for w in wealth_arr]  # plain floats: the hot loop is sequential

    gini_series = np.empty(cfg.epochs + 1)
    totals = np.empty(cfg.epochs + 1)
    gini_series[0] = gini(wealth)
    totals[0] = sum(wealth)

    surplus = cfg.unit_surplus
    regime = cfg.regime
    n_pairs = n // 2
    for epoch in range(cfg.epochs):
        for _ in range(cfg.pairings_per_epoch):
            order = rng.permutation(n).tolist()
            for k in range(n_pairs):
                i, j = order[2 * k], order[2 * k + 1]
                wi, wj = wealth[i], wealth[j]
                if wi >= wj:
                    rich, poor, ratio = i, j, wi / wj
                else:
                    rich, poor, ratio = j, i, wj / wi
                rho = _power_ratio(ratio, regime)
                share_rich = 1.0 if math.isinf(rho) else rho / (1.0 + rho)
                wealth[rich] = wealth[rich] + surplus * share_rich
                wealth[poor] = wealth[poor] + surplus * (1.0 - share_rich)
        gini_series[epoch + 1] = gini(wealth)
        totals[epoch + 1] = sum(wealth)

    return WealthTrace(
        gini_series=gini_series,
        totals=totals,
        injected_per_epoch=cfg.pairings_per_epoch * n_pairs * surplus,
        final_wealth=np.asarray(wealth),
        config=cfg,
    )


@dataclass(frozen=True)
class RegimeComparison:
    """Paired final-Gini outcomes for two regimes over a shared seed set."""

    seeds: tuple[int, ...]
    final_gini_a: tuple[float, ...]
    final_gini_b: tuple[float, ...]
    mean_a: float
    mean_b: float
    mean_diff: float  # mean_a - mean_b
    sign: int  # -1, 0, or +1

    @property
    def n_positive(self) -> int:
        """Seeds where regime A ended more unequal than regime B."""
        return sum(1 for a, b in zip(self.final_gini_a, self.final_gini_b) if a > b)


def compare_regimes(cfg_a: SocietyConfig, cfg_b: SocietyConfig,
                    n_seeds: int) -> RegimeComparison:
    """Run both configs across the same seed set and compare final Ginis.

    The configs must be identical except (possibly) for the regime; seeds
    are cfg.seed, cfg.seed + 1, ... so replicate sweeps stay reproducible.
    """
    if not isinstance(n_seeds, int) or n_seeds < 1:
        raise InvalidConfig("n_seeds must be a positive integer")
    if replace(cfg_a, regime=cfg_b.regime) != cfg_b:
        raise ConfigMismatch("configs may differ only in their regime rule")
    seeds = tuple(cfg_a.seed + i for i in range(n_seeds))
    final_a = tuple(run_society(replace(cfg_a, seed=s)).final_gini for s in seeds)
    final_b = tuple(run_society(replace(cfg_b, seed=s)).final_gini for s in seeds)
    mean_a = sum(final_a) / n_seeds
    mean_b = sum(final_b) / n_seeds
    diff = mean_a - mean_b
    return RegimeComparison(
        seeds=seeds,
        final_gini_a=final_a,
        final_gini_b=final_b,
        mean_a=mean_a,
        mean_b=mean_b,
        mean_diff=diff,
        sign=(diff > 0) - (diff < 0),
    )
