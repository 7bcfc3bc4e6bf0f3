"""User-1 rate demand expressed as a cap on the power of user 2.

For a fixed circularity ``kappa2`` the user-1 rate decreases in ``p2``, so
``R1(p2, kappa2) >= r_bar`` holds exactly when ``p2 <= q(kappa2)``. The cap
has two closed forms depending on whether user 1 answers with a partially
(``kappa1 < 1``) or maximally (``kappa1 = 1``) improper signal.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

from .model import RateTarget, ZicScenario, rate1_reduced

__all__ = [
    "CapBranch",
    "PowerCap",
    "power_cap",
    "q_value",
    "rate_constraint_satisfied",
    "on_region_edge",
    "is_power_limited",
    "quadratic_residual",
    "RATE_SLACK",
]

log = logging.getLogger(__name__)

# slack on the user-1 rate constraint
RATE_SLACK = 1e-12
# |gamma_2rbar / (2 P1) - 1| below this counts as the power/interference edge
EDGE_RTOL = 1e-12
# below this |leading coefficient| the kappa1 < 1 quadratic is solved as linear
LINEAR_TOL = 1e-10


class CapBranch(enum.Enum):
    KAPPA1_LESS_THAN_ONE = "kappa1<1"
    KAPPA1_EQUAL_ONE = "kappa1=1"


@dataclass(frozen=True)
class PowerCap:
    """Equivalent power constraint ``q(kappa2)``.

    ``q_value`` may be ``math.inf``; ``effective`` is ``min(q_value, P2)``.
    ``clamped`` flags a root that came out slightly negative from rounding
    and was reset to zero.
    """

    q_value: float
    branch: CapBranch
    effective: float
    clamped: bool = False


def on_region_edge(s: ZicScenario, rt: RateTarget) -> bool:
    """True when ``2 P1 == gamma_2rbar`` up to :data:`EDGE_RTOL`."""
    return abs(rt.gamma_2rbar / (2.0 * s.p1_budget) - 1.0) <= EDGE_RTOL


def is_power_limited(s: ZicScenario, rt: RateTarget) -> bool:
    """``2 P1 >= gamma_2rbar``: user 1 can meet the demand with kappa1 = 1."""
    return rt.gamma_2rbar <= 2.0 * s.p1_budget or on_region_edge(s, rt)


def _partial_root(s: ZicScenario, rt: RateTarget, kappa2: float) -> float:
    """Root ``x = p2 a12`` of the kappa1 < 1 quadratic.

    The quadratic is ``c2 x^2 - 2 b x - c0 = 0`` with
    ``c2 = (g2 + 1)(1 - k^2) - 1``, ``b = P1 - g2`` and
    ``c0 = (1 + P1)^2 - (g2 + 1) >= 0``; the wanted root is
    ``(b + sqrt(disc)) / c2``, evaluated in whichever of its two algebraic
    forms avoids cancellation.
    """
    P1 = s.p1_budget
    g1, g2 = rt.gamma_rbar, rt.gamma_2rbar
    k2sq = kappa2 * kappa2
    c2 = (g2 + 1.0) * (1.0 - k2sq) - 1.0
    b = P1 - g2
    c0 = (P1 - g1) * (P1 + g1 + 2.0)
    disc = (g2 + 1.0) * (P1 * P1 * (1.0 - k2sq) + (g2 - 2.0 * P1) * k2sq)
    root = math.sqrt(max(disc, 0.0))
    if abs(c2) < LINEAR_TOL and b != 0:
        return -c0 / (2.0 * b)
    if b <= 0:
        den = root - b
        return c0 / den if den > 0 else math.inf
    return (b + root) / c2


def power_cap(s: ZicScenario, rt: RateTarget, kappa2: float) -> PowerCap:
    """Largest user-2 power that keeps user 1 at or above ``rt.r_bar``.

    Parameters
    ----------
    s : ZicScenario
    rt : RateTarget
    kappa2 : float
        Circularity coefficient of user 2, in [0, 1].

    Returns
    -------
    PowerCap
        ``q_value`` is infinite when the demand is vacuous (``r_bar = 0``),
        when there is no cross link, or when ``kappa2 = 1`` and the demand
        is reachable with ``kappa1 = 1`` (``2 P1 >= gamma_2rbar``).
    """
    if not 0.0 <= kappa2 <= 1.0:
        raise ValueError(f"kappa2 must lie in [0, 1], got {kappa2}")
    P1, P2, a = s.p1_budget, s.p2_budget, s.a12
    if rt.r_bar <= 0 or a == 0:
        branch = (CapBranch.KAPPA1_LESS_THAN_ONE if a == 0 or kappa2 == 0
                  else CapBranch.KAPPA1_EQUAL_ONE)
        return PowerCap(math.inf, branch, P2)

    g2 = rt.gamma_2rbar
    edge = on_region_edge(s, rt)
    power_limited = edge or g2 < 2.0 * P1

    if kappa2 >= 1.0 and power_limited:
        # orthogonal interference never hurts a kappa1 = 1 user
        return PowerCap(math.inf, CapBranch.KAPPA1_EQUAL_ONE, P2)

    if 0.0 < kappa2 < 1.0 and power_limited and not edge:
        x_max = (2.0 * P1 / g2 - 1.0) / (1.0 - kappa2)
        if x_max * kappa2 / P1 >= 1.0:
            q = x_max / a
            return PowerCap(q, CapBranch.KAPPA1_EQUAL_ONE, min(q, P2))

    x = _partial_root(s, rt, kappa2)
    clamped = False
    if x < 0:
        log.debug("negative cap %.3e clamped to 0 (kappa2=%s, alpha=%s)",
                  x, kappa2, rt.alpha)
        x, clamped = 0.0, True
    q = x / a
    return PowerCap(q, CapBranch.KAPPA1_LESS_THAN_ONE, min(q, P2), clamped)


def q_value(s: ZicScenario, rt: RateTarget, kappa2: float) -> float:
    return power_cap(s, rt, kappa2).q_value


def rate_constraint_satisfied(s: ZicScenario, rt: RateTarget, p2: float,
                              kappa2: float) -> bool:
    """Whether ``(p2, kappa2)`` meets the user-1 demand (slack 1e-12)."""
    return bool(rate1_reduced(s, p2, kappa2) >= rt.r_bar - RATE_SLACK)


def quadratic_residual(s: ZicScenario, rt: RateTarget, kappa2: float,
                       q: float, branch: CapBranch) -> float:
    """Relative residual of the defining quadratic at ``p2 = q``.

    Used to check that the selected root actually solves the boundary
    equation of its branch.
    """
    P1, a = s.p1_budget, s.a12
    g2 = rt.gamma_2rbar
    x = q * a
    k = kappa2
    # residual over the sum of |monomials|, so that a root at zero with
    # cancelling constant terms is still judged by backward error
    if branch is CapBranch.KAPPA1_EQUAL_ONE:
        terms = (x * x * g2 * (1.0 - k * k), 2.0 * x * g2,
                 -2.0 * x * P1 * (1.0 + k), g2, -2.0 * P1)
    else:
        terms = (x * x * (g2 + 1.0) * (1.0 - k * k), -x * x,
                 -2.0 * x * P1, 2.0 * x * g2, g2 + 1.0, -(1.0 + P1) ** 2)
    scale = max(sum(abs(t) for t in terms), 1e-300)
    return abs(sum(terms)) / scale
