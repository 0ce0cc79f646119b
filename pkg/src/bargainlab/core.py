"""Primitive quantities of a two-party exchange.

Everything here is expressed as welfare deltas on an abstract, per-scenario
utility scale:

* motivation  -- net welfare gain a party expects from completing the
  exchange (what it receives minus what it gives up),
* power       -- a party's perceived ability to change the other's welfare
  per unit of own welfare relinquished,
* perceived imbalance -- the product of the motivation ratio and the power
  ratio one side believes holds between the parties.  Each side carries a
  single scalar; imbalance is perceived as a whole, not element by element.

The imbalance scalar rescales reserve prices before a negotiation starts:
a buyer who sees a desperate, powerless seller lowers the maximum it is
willing to pay, and symmetrically for the seller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateRatio, InvalidInput

#: Divisors below this floor raise DegenerateRatio instead of being used.
DEFAULT_EPSILON = 1e-9


class Role(Enum):
    BUYER = "buyer"
    SELLER = "seller"


def _require_finite(name: str, value: float) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise InvalidInput(f"{name} must be a finite number, got {value!r}")
    return float(value)


def _require_divisor(name: str, value: float, eps: float) -> float:
    if value < eps:
        raise DegenerateRatio(f"{name} = {value!r} is below the epsilon floor {eps!r}")
    return value


@dataclass(frozen=True)
class PerceptionView:
    """One side's private estimates of the four exchange magnitudes.

    For a buyer: its own motivation and power, plus the motivation and power
    it attributes to the seller.  For a seller, the mirror image.  All four
    magnitudes must be strictly positive; they appear as divisors in the
    ratio formulas below.
    """

    own_motivation: float
    other_motivation_perceived: float
    own_power: float
    other_power_perceived: float
    role: Role

    def __post_init__(self):
        for name in ("own_motivation", "other_motivation_perceived",
                     "own_power", "other_power_perceived"):
            value = _require_finite(name, getattr(self, name))
            if value <= 0.0:
                raise InvalidInput(f"{name} must be strictly positive, got {value!r}")
            object.__setattr__(self, name, value)
        if not isinstance(self.role, Role):
            raise InvalidInput(f"role must be a Role, got {self.role!r}")


def motivation(gain: float, loss: float) -> float:
    """Net motivation to exchange: welfare gained minus welfare given up.

    ``loss`` is the positive magnitude of what is relinquished.  The result
    may be negative; negative motivations are legal values but are rejected
    wherever they would become divisors (see PerceptionView).
    """
    return _require_finite("gain", gain) - _require_finite("loss", loss)


def power(effect_on_other: float, own_cost: float) -> float:
    """Exchange power: welfare change inflicted on the other party, net of
    the welfare the holder must spend to produce it."""
    return _require_finite("effect_on_other", effect_on_other) - _require_finite("own_cost", own_cost)


def imbalance_ratio(view: PerceptionView, eps: float = DEFAULT_EPSILON) -> float:
    """Scalar imbalance one side perceives between the parties.

    Buyer:  (own motivation / seller's perceived motivation)
          * (seller's perceived power / own power)
    Seller: (buyer's perceived motivation / own motivation)
          * (own power / buyer's perceived power)

    A value below 1 means the side holds the advantage (it will push its
    reserve price in its own favor); above 1 means it is the weak side.
    """
    if view.role is Role.BUYER:
        _require_divisor("other_motivation_perceived", view.other_motivation_perceived, eps)
        _require_divisor("own_power", view.own_power, eps)
        return (view.own_motivation / view.other_motivation_perceived) * (
            view.other_power_perceived / view.own_power)
    _require_divisor("own_motivation", view.own_motivation, eps)
    _require_divisor("other_power_perceived", view.other_power_perceived, eps)
    return (view.other_motivation_perceived / view.own_motivation) * (
        view.own_power / view.other_power_perceived)


def _require_reserve(base: float) -> float:
    value = _require_finite("base reserve", base)
    if value < 0.0:
        raise InvalidInput(f"reserve price must be non-negative, got {value!r}")
    return value


def adjust_reserve_motivation(base: float, view: PerceptionView,
                              eps: float = DEFAULT_EPSILON) -> float:
    """Reserve price adjusted by the motivation ratio alone.

    Buyer multiplies by own/other motivation, seller by other/own; the
    result is clamped at zero (a negative price is meaningless).
    """
    base = _require_reserve(base)
    if view.role is Role.BUYER:
        _require_divisor("other_motivation_perceived", view.other_motivation_perceived, eps)
        ratio = view.own_motivation / view.other_motivation_perceived
    else:
        _require_divisor("own_motivation", view.own_motivation, eps)
        ratio = view.other_motivation_perceived / view.own_motivation
    return max(0.0, base * ratio)


def adjust_reserve_full(base: float, view: PerceptionView,
                        eps: float = DEFAULT_EPSILON) -> float:
    """Reserve price adjusted by the full motivation-and-power imbalance.

    Equals ``base * imbalance_ratio(view)`` clamped at zero.  With extreme
    perceived advantages this can drive a buyer's maximum offer to a small
    fraction of the going rate, which is exactly the squeeze the model is
    built to expose.
    """
    base = _require_reserve(base)
    return max(0.0, base * imbalance_ratio(view, eps))


def equity_index(m_a: float, k_a: float, m_b: float, k_b: float,
                 eps: float = DEFAULT_EPSILON) -> float:
    """Cross-ratio fairness indicator (m_a * k_b) / (m_b * k_a).

    Equals 1 when motivations and powers are balanced; falls below 1 as
    side A gains power or side B gains desperation.  Defined only for
    strictly positive magnitudes -- callers with possibly negative
    motivations must treat DegenerateRatio as "index undefined".
    """
    for name, value in (("m_a", m_a), ("k_a", k_a), ("m_b", m_b), ("k_b", k_b)):
        _require_finite(name, value)
        _require_divisor(name, value, eps)
    return (m_a * k_b) / (m_b * k_a)
