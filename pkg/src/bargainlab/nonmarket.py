"""Money-free exchanges: welfare bookkeeping, threats, and equity mapping.

With no price to haggle over, each side simply balances what it would lose
by providing its good or service against what it would gain from the
other's, and accepts when the balance is positive.  Outside the goods
themselves sit the "gray areas": a threat makes refusal costly (so a party
can rationally accept an exchange whose own balance is negative), while a
shield -- laws, institutions, a protective environment -- discounts the
threat away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import equity_index
from .errors import DegenerateRatio, EmptyInput, InvalidInput


def _finite(name: str, value: float) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise InvalidInput(f"{name} must be a finite number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ExchangeProposal:
    """The four welfare deltas of a bilateral goods/services swap.

    Costs are positive magnitudes of welfare given up; gains are the
    welfare the receiving side attributes to the incoming good.
    """

    give_cost_a: float
    gain_for_b: float
    give_cost_b: float
    gain_for_a: float

    def __post_init__(self):
        for name in ("give_cost_a", "gain_for_b", "give_cost_b", "gain_for_a"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.give_cost_a < 0.0 or self.give_cost_b < 0.0:
            raise InvalidInput("give costs are magnitudes and must be >= 0")


@dataclass(frozen=True)
class ExternalInfluence:
    """Context element unrelated to the traded goods.

    ``threat_on_refusal``: potential welfare loss if this side refuses.
    ``shield``: fraction of that threat neutralized by the environment
    (0 = unprotected, 1 = fully shielded).
    """

    threat_on_refusal: float = 0.0
    shield: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "threat_on_refusal", _finite("threat_on_refusal", self.threat_on_refusal))
        object.__setattr__(self, "shield", _finite("shield", self.shield))
        if self.threat_on_refusal < 0.0:
            raise InvalidInput("threat_on_refusal must be >= 0")
        if not 0.0 <= self.shield <= 1.0:
            raise InvalidInput("shield must lie in [0, 1]")


NO_INFLUENCE = ExternalInfluence()


class Verdict(Enum):
    BOTH_ACCEPT = "both_accept"
    A_REFUSES = "a_refuses"
    B_REFUSES = "b_refuses"
    BOTH_REFUSE = "both_refuse"


@dataclass(frozen=True)
class BalanceSheet:
    """Motivations, powers, equity, and the resulting accept/refuse verdict.

    ``m_b_effective`` (and ``m_a_effective``) fold in the avoided threat:
    accepting dodges the threatened loss, so the un-shielded part of the
    threat counts as extra motivation to accept.
    """

    m_a: float
    m_a_effective: float
    m_b_raw: float
    m_b_effective: float
    k_a: float
    k_b: float
    equity: float | None
    verdict: Verdict


def _verdict(m_a_effective: float, m_b_effective: float) -> Verdict:
    # Strict positivity: indifference (exactly zero) refuses.
    a_accepts = m_a_effective > 0.0
    b_accepts = m_b_effective > 0.0
    if a_accepts and b_accepts:
        return Verdict.BOTH_ACCEPT
    if a_accepts:
        return Verdict.B_REFUSES
    if b_accepts:
        return Verdict.A_REFUSES
    return Verdict.BOTH_REFUSE


def welfare_balance(proposal: ExchangeProposal,
                    influence_a: ExternalInfluence = NO_INFLUENCE,
                    influence_b: ExternalInfluence = NO_INFLUENCE,
                    promise_keep_prob: float = 1.0) -> BalanceSheet:
    """Full bookkeeping for one proposed exchange.

    ``promise_keep_prob`` discounts B's gain when A's good is only a
    promise that might not be kept (a scenario input, never inferred).
    Equity uses the raw motivations -- threats live outside the exchange --
    and is None whenever any magnitude entering the index is non-positive.
    """
    promise_keep_prob = _finite("promise_keep_prob", promise_keep_prob)
    if not 0.0 <= promise_keep_prob <= 1.0:
        raise InvalidInput("promise_keep_prob must lie in [0, 1]")
    gain_for_b = proposal.gain_for_b * promise_keep_prob
    m_a = proposal.gain_for_a - proposal.give_cost_a
    m_b_raw = gain_for_b - proposal.give_cost_b
    k_a = gain_for_b - proposal.give_cost_a
    k_b = proposal.gain_for_a - proposal.give_cost_b
    m_a_effective = m_a + influence_a.threat_on_refusal * (1.0 - influence_a.shield)
    m_b_effective = m_b_raw + influence_b.threat_on_refusal * (1.0 - influence_b.shield)
    try:
        equity = equity_index(m_a, k_a, m_b_raw, k_b)
    except DegenerateRatio:
        equity = None
    return BalanceSheet(
        m_a=m_a,
        m_a_effective=m_a_effective,
        m_b_raw=m_b_raw,
        m_b_effective=m_b_effective,
        k_a=k_a,
        k_b=k_b,
        equity=equity,
        verdict=_verdict(m_a_effective, m_b_effective),
    )


def accept_decision(sheet: BalanceSheet) -> Verdict:
    """Verdict from effective motivations alone: accept iff strictly positive."""
    return _verdict(sheet.m_a_effective, sheet.m_b_effective)


@dataclass(frozen=True)
class ExchangeRecord:
    """One sampled exchange: which stratum it came from and its equity."""

    stratum: str
    equity: float

    def __post_init__(self):
        object.__setattr__(self, "equity", _finite("equity", self.equity))
        if self.equity <= 0.0:
            raise InvalidInput("equity must be > 0")


@dataclass(frozen=True)
class StratumSummary:
    stratum: str
    count: int
    mean: float
    median: float
    deciles: tuple[float, ...]  # 10th..90th percentiles


@dataclass(frozen=True)
class EquityMap:
    strata: tuple[StratumSummary, ...]  # sorted by stratum label
    pooled: StratumSummary


def _summarize(label: str, values: list[float]) -> StratumSummary:
    arr = np.sort(np.asarray(values, dtype=float))
    deciles = np.percentile(arr, np.arange(10, 100, 10))
    return StratumSummary(
        stratum=label,
        count=int(arr.size),
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        deciles=tuple(float(d) for d in deciles),
    )


def equity_map(records: list[ExchangeRecord]) -> EquityMap:
    """Per-stratum equity summaries plus a pooled one.

    Order-independent: records are grouped and sorted internally, so any
    permutation of the input yields an identical map.
    """
    if not records:
        raise EmptyInput("equity_map needs at least one record")
    groups: dict[str, list[float]] = {}
    for record in records:
        groups.setdefault(record.stratum, []).append(record.equity)
    strata = tuple(_summarize(label, groups[label]) for label in sorted(groups))
    pooled = _summarize("__pooled__", [r.equity for r in records])
    return EquityMap(strata=strata, pooled=pooled)
