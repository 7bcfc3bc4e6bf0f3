"""Channel-gain thresholds that decide when improper signaling pays off.

For one rate demand the user-2 rate along the cap ``p2 = q(kappa2)`` is
monotone in ``kappa2`` above ``mu``, dips below the proper rate before
overtaking it between ``iota`` and ``mu``, and never beats proper signaling
at or below ``iota``. With the budget ``P2`` taken into account improper
signaling is optimal exactly when ``a12 > max(iota, rho)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constraints import is_power_limited, on_region_edge
from .model import RateTarget, ZicScenario

__all__ = [
    "ThresholdSet",
    "Regime",
    "Region",
    "MonotonicityCase",
    "compute_thresholds",
    "improper_threshold",
    "classify_regime",
    "classify_region",
    "monotonicity_case",
    "min_improper_threshold",
    "transition_alpha",
    "iota_right_limit",
    "underlay_threshold",
]


class Regime(enum.Enum):
    STRICTLY_IMPROPER = "strictly-improper"
    SELECTIVE = "selective"
    STRICTLY_PROPER = "strictly-proper"


class Region(enum.Enum):
    POWER_LIMITED = "power-limited"
    INTERFERENCE_LIMITED = "interference-limited"


class MonotonicityCase(enum.Enum):
    ALWAYS_INCREASING = "always-increasing"
    CROSSES_PROPER = "crosses-proper"
    NEVER_BEATS_PROPER = "never-beats-proper"


@dataclass(frozen=True)
class ThresholdSet:
    mu: float
    iota: float
    rho: float
    nu: float
    eta: float
    a_p: float
    a_i: float
    improper_optimal: bool

    @property
    def threshold(self) -> float:
        """``max(iota, rho)``, the gain above which improper wins."""
        return max(self.iota, self.rho)


def _iota(P1: float, g1: float, g2: float, power_limited: bool) -> float:
    if power_limited:
        return 0.0
    # (P1 - g1)^2 / ((g2 - g1)(u - g1)^2) with u = sqrt(g2 - 2 P1); since
    # u^2 - g1^2 = -2 (P1 - g1) this equals (u + g1)^2 / (4 g1 (g1 + 1)),
    # which stays finite at alpha = 1 where the original form is 0/0.
    u = math.sqrt(g2 - 2.0 * P1)
    return (u + g1) ** 2 / (4.0 * g1 * (g1 + 1.0))


def iota_right_limit(p1: float) -> float:
    """Limit of ``iota`` entering the interference-limited region."""
    return 0.25 * (1.0 - 1.0 / math.sqrt(1.0 + 2.0 * p1))


def underlay_threshold(s: ZicScenario, rt: RateTarget) -> float:
    """Improper-optimality threshold when user 1 is restricted to proper
    signals, ``1 - P1 / gamma_2rbar``. Only used for comparisons."""
    if rt.gamma_2rbar == 0:
        return -math.inf
    return 1.0 - s.p1_budget / rt.gamma_2rbar


def compute_thresholds(s: ZicScenario, rt: RateTarget) -> ThresholdSet:
    """All thresholds for one scenario and rate demand.

    At ``alpha = 0`` the demand is vacuous; the budget-type thresholds are
    returned as ``+inf`` and ``improper_optimal`` is False.
    """
    P1, P2, a = s.p1_budget, s.p2_budget, s.a12
    g1, g2 = rt.gamma_rbar, rt.gamma_2rbar
    if g1 <= 0:
        inf = math.inf
        return ThresholdSet(mu=-inf, iota=0.0, rho=inf, nu=inf, eta=inf,
                            a_p=inf, a_i=inf, improper_optimal=False)

    # g2 - g1 = g1 (g1 + 1)
    mu = 1.0 - P1 / (g1 * (g1 + 1.0))
    iota = _iota(P1, g1, g2, is_power_limited(s, rt))

    a_p = (P1 / g1 - 1.0) / P2
    a_i = 0.0 if on_region_edge(s, rt) else (2.0 * P1 / g2 - 1.0) / P2

    d = a_p - P2 * a_i
    e = max(2.0 * P2 * (a_i * a_i + a_p * a_p), 0.0)
    root = math.sqrt(d * d + e)
    # larger root of x^2 - d x - e/4 = 0, written to avoid cancellation
    eta = (d + root) / 2.0 if d >= 0 else (e / 2.0) / (root - d) if e else 0.0

    if eta >= P1 / P2 + a_i:
        nu = eta
    else:
        nu = ((g1 * (2.0 * g2 + 1.0) - P1 * (2.0 * g1 + 1.0))
              / (g1 * (P2 + 2.0 * (g2 + 1.0))))
    rho = max(a_p, nu)
    return ThresholdSet(mu=mu, iota=iota, rho=rho, nu=nu, eta=eta, a_p=a_p,
                        a_i=a_i, improper_optimal=a > max(iota, rho))


def improper_threshold(s: ZicScenario, alpha: float) -> float:
    """``max(iota(alpha), rho(alpha))``."""
    return compute_thresholds(s, RateTarget.from_alpha(s, alpha)).threshold


def classify_region(s: ZicScenario, rt: RateTarget) -> Region:
    if is_power_limited(s, rt):
        return Region.POWER_LIMITED
    return Region.INTERFERENCE_LIMITED


def monotonicity_case(s: ZicScenario, rt: RateTarget) -> MonotonicityCase:
    """Shape of the user-2 rate along the cap ``p2 = q(kappa2)``."""
    t = compute_thresholds(s, rt)
    if s.a12 >= t.mu:
        return MonotonicityCase.ALWAYS_INCREASING
    if s.a12 > t.iota:
        return MonotonicityCase.CROSSES_PROPER
    return MonotonicityCase.NEVER_BEATS_PROPER


def transition_alpha(s: ZicScenario) -> float:
    """The alpha at which ``2 P1 = gamma_2rbar`` (power/interference edge)."""
    return math.log1p(2.0 * s.p1_budget) / (2.0 * math.log1p(s.p1_budget))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def min_improper_threshold(s: ZicScenario, n_seed: int = 1024,
                           tol: float = 1e-10) -> tuple[float, float]:
    """Minimise ``max(iota, rho)`` over ``alpha`` in (0, 1].

    A uniform seed grid (plus the region edge, where ``iota`` jumps) locates
    the best bracket, which golden-section search then refines to ``tol``
    in alpha. Returns ``(alpha_star, min_value)``.
    """
    alphas = np.linspace(0.0, 1.0, n_seed + 1)[1:]
    alphas = np.union1d(alphas, [transition_alpha(s)])
    alphas = alphas[(alphas > 0) & (alphas <= 1)]
    vals = np.array([improper_threshold(s, float(al)) for al in alphas])
    i = int(np.argmin(vals))
    best_a, best_v = float(alphas[i]), float(vals[i])
    lo = float(alphas[i - 1]) if i > 0 else float(alphas[0]) / 2.0
    hi = float(alphas[i + 1]) if i + 1 < len(alphas) else 1.0

    f = lambda al: improper_threshold(s, al)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    for al, v in ((x1, f1), (x2, f2)):
        if v < best_v:
            best_a, best_v = al, v
    return best_a, best_v


def classify_regime(s: ZicScenario) -> Regime:
    if s.a12 >= s.p1_budget / (s.p1_budget + 1.0):
        return Regime.STRICTLY_IMPROPER
    _, m = min_improper_threshold(s)
    if s.a12 <= m:
        return Regime.STRICTLY_PROPER
    return Regime.SELECTIVE
