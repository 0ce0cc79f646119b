"""Iterative offer dance between one buyer and one seller.

Each step both parties move their standing offer: partly toward their own
(already imbalance-adjusted) reserve price, partly toward the opponent's
current offer:

    buyer_next  = buyer  + r_a * (buyer_reserve - buyer) + r_a' * (seller - buyer)
    seller_next = seller - r_b * (seller - seller_reserve) - r_b' * (seller - buyer)

The four concession rates encode strategy: r is the propensity to yield
toward one's reserve, r' the eagerness to close the remaining gap.  Rates
are constant within a run.  Because each update is a convex combination of
(own offer, own reserve, opponent offer), offers stay inside the convex
hull of the four anchor prices and the iteration matrix is a strict
contraction, so the coupled system has a unique rest point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRatio, InvalidConfig, SingularSystem

#: Clamp bounds used when imbalance scaling pushes a rate out of range.
RATE_MIN = 1e-9
RATE_MAX = 1.0 - 1e-9

#: Determinant magnitude below which fixed_point refuses to solve.
SINGULAR_DET = 1e-12


@dataclass(frozen=True)
class ConcessionRates:
    """Per-step concession fractions for both sides.

    ``r_a``/``r_b`` pull each side toward its own reserve and must be in
    (0, 1); ``r_a_prime``/``r_b_prime`` pull toward the opponent's offer
    and may be zero.  Each side's pair must sum below 1 so a step stays a
    bounded interpolation.
    """

    r_a: float
    r_a_prime: float
    r_b: float
    r_b_prime: float

    def __post_init__(self):
        for name in ("r_a", "r_a_prime", "r_b", "r_b_prime"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise InvalidConfig(f"{name} must be a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("r_a", "r_b"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise InvalidConfig(f"{name} must lie in (0, 1), got {getattr(self, name)!r}")
        for name in ("r_a_prime", "r_b_prime"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise InvalidConfig(f"{name} must lie in [0, 1), got {getattr(self, name)!r}")
        if self.r_a + self.r_a_prime >= 1.0:
            raise InvalidConfig("r_a + r_a_prime must be < 1")
        if self.r_b + self.r_b_prime >= 1.0:
            raise InvalidConfig("r_b + r_b_prime must be < 1")


@dataclass(frozen=True)
class NegotiationConfig:
    buyer_open: float
    seller_open: float
    buyer_reserve_adj: float
    seller_reserve_adj: float
    rates: ConcessionRates
    gap_epsilon: float = 0.05
    max_steps: int = 1000

    def __post_init__(self):
        for name in ("buyer_open", "seller_open", "buyer_reserve_adj",
                     "seller_reserve_adj", "gap_epsilon"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise InvalidConfig(f"{name} must be a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.seller_open < self.buyer_open:
            raise InvalidConfig("seller_open must be >= buyer_open at the start")
        if self.gap_epsilon <= 0.0:
            raise InvalidConfig("gap_epsilon must be > 0")
        if not isinstance(self.max_steps, int) or isinstance(self.max_steps, bool) or self.max_steps < 1:
            raise InvalidConfig("max_steps must be a positive integer")
        if not isinstance(self.rates, ConcessionRates):
            raise InvalidConfig("rates must be a ConcessionRates")


@dataclass(frozen=True)
class TraceStep:
    step: int
    offer_buyer: float
    offer_seller: float
    gap: float


@dataclass(frozen=True)
class Agreement:
    price: float
    step: int


@dataclass(frozen=True)
class Breakdown:
    at_step: int


Outcome = Agreement | Breakdown


@dataclass(frozen=True)
class NegotiationTrace:
    steps: tuple[TraceStep, ...]
    outcome: Outcome

    @property
    def agreed(self) -> bool:
        return isinstance(self.outcome, Agreement)


def concession_rates_from_imbalance(base: ConcessionRates, rho_buyer: float,
                                    rho_seller: float,
                                    r_min: float = RATE_MIN,
                                    r_max: float = RATE_MAX) -> ConcessionRates:
    """Scale base rates by each side's perceived imbalance.

    A disadvantaged buyer (rho_buyer > 1) concedes faster, so its rates are
    multiplied by rho_buyer; an advantaged seller (rho_seller > 1) concedes
    slower, so its rates are divided by rho_seller.  Results are clamped
    into range and, if a side's pair would sum to 1 or more, shrunk
    proportionally so the interpolation invariant survives.  A ratio of
    exactly 1 leaves that side's rates untouched.
    """
    for name, rho in (("rho_buyer", rho_buyer), ("rho_seller", rho_seller)):
        if not math.isfinite(rho) or rho <= 0.0:
            raise DegenerateRatio(f"{name} must be a finite positive number, got {rho!r}")

    def scale_pair(r: float, r_prime: float, factor: float) -> tuple[float, float]:
        if factor == 1.0:
            return r, r_prime
        r = min(max(r * factor, r_min), r_max)
        r_prime = min(r_prime * factor, r_max)
        total = r + r_prime
        if total > r_max:
            shrink = r_max / total
            r *= shrink
            r_prime *= shrink
        return r, r_prime

    r_a, r_a_prime = scale_pair(base.r_a, base.r_a_prime, rho_buyer)
    r_b, r_b_prime = scale_pair(base.r_b, base.r_b_prime, 1.0 / rho_seller)
    return ConcessionRates(r_a, r_a_prime, r_b, r_b_prime)


def step(x_a: float, x_b: float, cfg: NegotiationConfig) -> tuple[float, float]:
    """One simultaneous update of both offers."""
    r = cfg.rates
    next_a = x_a + r.r_a * (cfg.buyer_reserve_adj - x_a) + r.r_a_prime * (x_b - x_a)
    next_b = x_b - r.r_b * (x_b - cfg.seller_reserve_adj) - r.r_b_prime * (x_b - x_a)
    return next_a, next_b


def run(cfg: NegotiationConfig) -> NegotiationTrace:
    """Iterate the dance until the offers meet or max_steps is exhausted.

    Agreement is declared at the first step whose gap (seller minus buyer
    offer) is at most gap_epsilon, which also covers crossed offers; the
    settlement is the midpoint of the two terminal offers.  If the gap is
    still open after max_steps updates the negotiation breaks down.
    """
    x_a, x_b = cfg.buyer_open, cfg.seller_open
    steps: list[TraceStep] = []
    for n in range(cfg.max_steps + 1):
        gap = x_b - x_a
        steps.append(TraceStep(n, x_a, x_b, gap))
        if gap <= cfg.gap_epsilon:
            return NegotiationTrace(tuple(steps), Agreement(price=(x_a + x_b) / 2.0, step=n))
        if n == cfg.max_steps:
            break
        x_a, x_b = step(x_a, x_b, cfg)
    return NegotiationTrace(tuple(steps), Breakdown(at_step=cfg.max_steps))


def fixed_point(cfg: NegotiationConfig) -> tuple[float, float]:
    """Rest point of the coupled update, solved in closed form.

    Solves the 2x2 linear system obtained by zeroing both increments:

        (r_a + r_a') x_a - r_a' x_b        = r_a * buyer_reserve
        -r_b' x_a + (r_b + r_b') x_b       = r_b * seller_reserve

    With nonzero cross-rates this rest point differs from the pair of
    reserves: each side is pulled off its reserve by its eagerness to
    close the gap.
    """
    r = cfg.rates
    a11 = r.r_a + r.r_a_prime
    a12 = -r.r_a_prime
    a21 = -r.r_b_prime
    a22 = r.r_b + r.r_b_prime
    b1 = r.r_a * cfg.buyer_reserve_adj
    b2 = r.r_b * cfg.seller_reserve_adj
    det = a11 * a22 - a12 * a21
    if abs(det) < SINGULAR_DET:
        raise SingularSystem(f"fixed-point system determinant {det!r} below {SINGULAR_DET!r}")
    x_a = (b1 * a22 - a12 * b2) / det
    x_b = (a11 * b2 - a21 * b1) / det
    return x_a, x_b


def iteration_matrix(r_a: float, r_a_prime: float, r_b: float, r_b_prime: float) -> np.ndarray:
    """Linear part of the offer update, as a 2x2 array."""
    return np.array([[1.0 - r_a - r_a_prime, r_a_prime],
                     [r_b_prime, 1.0 - r_b - r_b_prime]])


def spectral_radius(r_a: float, r_a_prime: float, r_b: float, r_b_prime: float) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(
        iteration_matrix(r_a, r_a_prime, r_b, r_b_prime)))))


def is_stable(rates: ConcessionRates) -> bool:
    """True iff both eigenvalue moduli of the iteration matrix are < 1.

    A modulus of exactly 1 (e.g. the identity matrix at all-zero rates)
    counts as unstable: the simulation relies on strict contraction.
    """
    return spectral_radius(rates.r_a, rates.r_a_prime, rates.r_b, rates.r_b_prime) < 1.0
