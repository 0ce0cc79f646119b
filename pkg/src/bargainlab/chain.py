"""Multi-stage supply chains settled link by link, market end first.

Stage 0 is the market-facing link (the party that actually sells to
consumers buying from its supplier); the last stage is the raw-material or
labor link.  Price pressure propagates backward: each stage's buyer will
pay at most what it collects downstream minus the margin it insists on
keeping, further shrunk by whatever perception advantage it holds.  A link
that fails to settle starves every deeper link.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import negotiation
from .core import PerceptionView, Role, adjust_reserve_full, imbalance_ratio
from .errors import InvalidConfig
from .negotiation import Agreement, ConcessionRates, NegotiationConfig


@dataclass(frozen=True)
class ChainStage:
    """One bilateral link: the stage's buyer purchases from its seller.

    ``base_seller_reserve`` is the seller's unadjusted minimum price.  The
    buyer's unadjusted maximum is the price it receives from downstream,
    so it is not a field here; ``margin_floor`` is the absolute margin the
    buyer refuses to go below.
    """

    name: str
    seller_view: PerceptionView
    buyer_view: PerceptionView
    base_seller_reserve: float
    margin_floor: float = 0.0
    rates: ConcessionRates = ConcessionRates(0.1, 0.05, 0.1, 0.05)

    def __post_init__(self):
        if self.buyer_view.role is not Role.BUYER:
            raise InvalidConfig(f"stage {self.name!r}: buyer_view must have role BUYER")
        if self.seller_view.role is not Role.SELLER:
            raise InvalidConfig(f"stage {self.name!r}: seller_view must have role SELLER")
        if self.base_seller_reserve < 0.0:
            raise InvalidConfig(f"stage {self.name!r}: base_seller_reserve must be >= 0")
        if self.margin_floor < 0.0:
            raise InvalidConfig(f"stage {self.name!r}: margin_floor must be >= 0")


@dataclass(frozen=True)
class ChainSpec:
    stages: tuple[ChainStage, ...]
    anchor_price: float

    def __post_init__(self):
        if len(self.stages) < 1:
            raise InvalidConfig("a chain needs at least one stage")
        if self.anchor_price <= 0.0:
            raise InvalidConfig("anchor_price must be > 0")
        object.__setattr__(self, "stages", tuple(self.stages))


@dataclass(frozen=True)
class StageResult:
    """Settled (or failed) state of one link.

    ``settlement`` and ``margin`` are None on breakdown; stages deeper
    than a broken link never negotiate, so their reserve is None as well.
    margin = incoming price - settlement.
    """

    name: str
    buyer_reserve_effective: float | None
    settlement: float | None
    margin: float | None

    @property
    def settled(self) -> bool:
        return self.settlement is not None


def _settle_stage(stage: ChainStage, incoming: float,
                  gap_epsilon: float, max_steps: int) -> tuple[float | None, float]:
    """Negotiate one link given the price its buyer collects downstream."""
    rho_buyer = imbalance_ratio(stage.buyer_view)
    rho_seller = imbalance_ratio(stage.seller_view)
    buyer_reserve = min(adjust_reserve_full(incoming, stage.buyer_view),
                        max(0.0, incoming - stage.margin_floor))
    seller_reserve = adjust_reserve_full(stage.base_seller_reserve, stage.seller_view)
    rates = negotiation.concession_rates_from_imbalance(stage.rates, rho_buyer, rho_seller)
    # Each side opens at the other's adjusted reserve (its best plausible
    # deal); min/max keeps the opening order valid when reserves invert.
    cfg = NegotiationConfig(
        buyer_open=min(buyer_reserve, seller_reserve),
        seller_open=max(buyer_reserve, seller_reserve),
        buyer_reserve_adj=buyer_reserve,
        seller_reserve_adj=seller_reserve,
        rates=rates,
        gap_epsilon=gap_epsilon,
        max_steps=max_steps,
    )
    trace = negotiation.run(cfg)
    if isinstance(trace.outcome, Agreement):
        return trace.outcome.price, buyer_reserve
    return None, buyer_reserve


def propagate(spec: ChainSpec, gap_epsilon: float | None = None,
              max_steps: int = 5000) -> list[StageResult]:
    """Settle every link from the market end toward the raw-material end.

    Stage k's buyer reserve is min(full imbalance adjustment of the
    incoming price, incoming price - margin floor); the incoming price is
    the anchor for stage 0 and the previous settlement after that.  The
    pass is single and sequential: a breakdown never reopens links that
    already settled.
    """
    if gap_epsilon is None:
        gap_epsilon = max(1e-9, 1e-6 * spec.anchor_price)
    results: list[StageResult] = []
    incoming: float | None = spec.anchor_price
    for stage in spec.stages:
        if incoming is None:
            results.append(StageResult(stage.name, None, None, None))
            continue
        settlement, buyer_reserve = _settle_stage(stage, incoming, gap_epsilon, max_steps)
        if settlement is None:
            results.append(StageResult(stage.name, buyer_reserve, None, None))
            incoming = None
        else:
            results.append(StageResult(stage.name, buyer_reserve, settlement,
                                       incoming - settlement))
            incoming = settlement
    return results


@dataclass(frozen=True)
class SqueezeReport:
    """Margin shares of the anchor price, plus the terminal residual.

    When every link settled, margin shares and the final settlement share
    sum to 1: the consumer price is fully accounted for by who kept what.
    """

    anchor_price: float | None
    margin_shares: tuple[tuple[str, float], ...]
    final_settlement_share: float | None
    complete: bool

    @property
    def total(self) -> float | None:
        if not self.complete or self.final_settlement_share is None:
            return None
        return sum(share for _, share in self.margin_shares) + self.final_settlement_share


def squeeze_report(results: list[StageResult]) -> SqueezeReport:
    """Distribution of the anchor price across stage margins."""
    if not results:
        return SqueezeReport(None, (), None, False)
    first = results[0]
    complete = all(r.settled for r in results)
    if not first.settled:
        return SqueezeReport(None, tuple((r.name, 0.0) for r in results), None, False)
    anchor = first.margin + first.settlement  # incoming price of stage 0
    shares = []
    for r in results:
        shares.append((r.name, (r.margin / anchor) if r.settled else 0.0))
    final_share = results[-1].settlement / anchor if complete else None
    return SqueezeReport(anchor, tuple(shares), final_share, complete)
