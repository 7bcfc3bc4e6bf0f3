"""Z interference channel model with improper Gaussian inputs.

Receiver 1 sees ``y1 = s1 + sqrt(a12) s2 + n1`` and receiver 2 sees
``y2 = s2 + n2``, with unit-variance proper noise at both receivers. Each
transmit signal is described by its variance ``p``, circularity
coefficient ``kappa`` and the phase ``phi`` of its complementary variance
``p * kappa * exp(1j * phi)``. Rates are in bits per channel use and assume
interference is treated as (possibly improper) Gaussian noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "ZicScenario",
    "TransmitParams",
    "AugmentedMoments",
    "RateTarget",
    "augmented_moments",
    "rate_pair_general",
    "optimal_kappa1_phi1",
    "rate1_reduced",
    "rate2_reduced",
    "BRANCH_TIE_TOL",
]

LN2 = math.log(2.0)

# kappa1 candidates within this distance of 1 are evaluated on the kappa1 = 1
# branch so that sweeps never flap between the two (equal) expressions.
BRANCH_TIE_TOL = 1e-12

# slack allowed on budget checks, relative to the budget
_BUDGET_RTOL = 1e-12


class DomainError(ValueError):
    """Raised for inputs outside the physical domain of the model."""


@dataclass(frozen=True)
class ZicScenario:
    """Channel and power parameters of the Z-IC in standard form.

    Parameters
    ----------
    p1_budget : float
        Power budget ``P1`` of user 1 (linear, unit noise).
    p2_budget : float
        Power budget ``P2`` of user 2 (linear, unit noise).
    a12 : float
        Power gain of the cross link from transmitter 2 to receiver 1.
    """

    p1_budget: float
    p2_budget: float
    a12: float

    def __post_init__(self):
        for name in ("p1_budget", "p2_budget", "a12"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.p1_budget <= 0 or self.p2_budget <= 0:
            raise DomainError(
                f"power budgets must be positive, got P1={self.p1_budget}, "
                f"P2={self.p2_budget}")
        if self.a12 < 0:
            raise DomainError(f"a12 must be nonnegative, got {self.a12}")

    @property
    def r1_max(self) -> float:
        """Interference-free rate of user 1, ``log2(1 + P1)``."""
        return math.log1p(self.p1_budget) / LN2

    @property
    def r2_max(self) -> float:
        return math.log1p(self.p2_budget) / LN2

    @property
    def r1_corner(self) -> float:
        """User-1 rate when user 2 transmits a proper signal at full power."""
        return math.log1p(self.p1_budget /
                          (1.0 + self.p2_budget * self.a12)) / LN2

    @property
    def sir(self) -> float:
        """Signal-to-interference ratio ``P1 / (P2 a12)`` at receiver 1."""
        if self.a12 == 0:
            return math.inf
        return self.p1_budget / (self.p2_budget * self.a12)


@dataclass(frozen=True)
class TransmitParams:
    """Second-order description of one transmit signal.

    ``circularity`` is the circularity coefficient (0 proper, 1 maximally
    improper) and ``phase`` the argument of the complementary variance.
    """

    power: float
    circularity: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not (self.power >= 0 and math.isfinite(self.power)):
            raise DomainError(f"transmit power must be >= 0, got {self.power}")
        if not 0.0 <= self.circularity <= 1.0:
            raise DomainError(
                "circularity coefficient must lie in [0, 1] "
                f"(|complementary variance| <= variance), got {self.circularity}")
        if not math.isfinite(self.phase):
            raise DomainError(f"phase must be finite, got {self.phase}")

    @property
    def complementary(self) -> complex:
        """Complementary variance ``E[s^2]``."""
        return self.power * self.circularity * complex(
            math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class AugmentedMoments:
    """Variances and complementary variances seen at both receivers.

    ``z1 = sqrt(a12) s2 + n1`` and ``z2 = n2`` are the interference-plus-noise
    terms.
    """

    c_y1: float
    c_y2: float
    ct_y1: complex
    ct_y2: complex
    c_z1: float
    c_z2: float
    ct_z1: complex
    ct_z2: complex


@dataclass(frozen=True)
class RateTarget:
    """Rate demand ``r_bar = alpha * log2(1 + P1)`` placed on user 1.

    ``gamma_rbar = 2**r_bar - 1`` and ``gamma_2rbar = 2**(2 r_bar) - 1``.
    Build with :meth:`from_alpha` or :meth:`from_rate`, which compute the
    SNR quantities without cancellation.
    """

    alpha: float
    r_bar: float
    gamma_rbar: float
    gamma_2rbar: float

    @classmethod
    def from_alpha(cls, s: ZicScenario, alpha: float) -> "RateTarget":
        if not 0.0 <= alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
        g = math.expm1(alpha * math.log1p(s.p1_budget))
        return cls(alpha=alpha, r_bar=alpha * s.r1_max,
                   gamma_rbar=g, gamma_2rbar=g * (g + 2.0))

    @classmethod
    def from_rate(cls, s: ZicScenario, r_bar: float) -> "RateTarget":
        r1_max = s.r1_max
        if not 0.0 <= r_bar <= r1_max * (1 + 1e-12):
            raise DomainError(
                f"rate target must lie in [0, {r1_max}], got {r_bar}")
        r_bar = min(r_bar, r1_max)
        g = math.expm1(r_bar * LN2)
        return cls(alpha=r_bar / r1_max, r_bar=r_bar,
                   gamma_rbar=g, gamma_2rbar=g * (g + 2.0))


def augmented_moments(s: ZicScenario, t1: TransmitParams,
                      t2: TransmitParams) -> AugmentedMoments:
    a = s.a12
    pt1, pt2 = t1.complementary, t2.complementary
    return AugmentedMoments(
        c_y1=t1.power + t2.power * a + 1.0,
        c_y2=t2.power + 1.0,
        ct_y1=pt1 + pt2 * a,
        ct_y2=pt2,
        c_z1=t2.power * a + 1.0,
        c_z2=1.0,
        ct_z1=pt2 * a,
        ct_z2=0j,
    )


def _impropriety_gain(c_y, ct_y, c_z, ct_z):
    # 0.5 log2 of the ratio of (1 - |ct/c|^2) terms
    num = 1.0 - abs(ct_y) ** 2 / c_y ** 2
    den = 1.0 - abs(ct_z) ** 2 / c_z ** 2
    return 0.5 * math.log2(num / den)


def rate_pair_general(s: ZicScenario, t1: TransmitParams,
                      t2: TransmitParams) -> tuple[float, float]:
    """Achievable rates ``(R1, R2)`` for arbitrary improper Gaussian inputs.

    Raises
    ------
    DomainError
        If a power exceeds its budget. Invalid variance pairs are rejected
        when the :class:`TransmitParams` are built.
    """
    if t1.power > s.p1_budget * (1 + _BUDGET_RTOL):
        raise DomainError(f"p1={t1.power} exceeds budget {s.p1_budget}")
    if t2.power > s.p2_budget * (1 + _BUDGET_RTOL):
        raise DomainError(f"p2={t2.power} exceeds budget {s.p2_budget}")
    m = augmented_moments(s, t1, t2)
    r1 = (math.log2(1.0 + t1.power / m.c_z1)
          + _impropriety_gain(m.c_y1, m.ct_y1, m.c_z1, m.ct_z1))
    r2 = (math.log2(1.0 + t2.power / m.c_z2)
          + _impropriety_gain(m.c_y2, m.ct_y2, m.c_z2, m.ct_z2))
    # rounding can push an exact zero slightly negative
    return max(r1, 0.0), max(r2, 0.0)


def optimal_kappa1_phi1(s: ZicScenario, t2: TransmitParams) -> TransmitParams:
    """Best full-power user-1 signal against the interference ``t2``.

    User 1 cancels as much of the complementary variance at its receiver as
    it can: ``kappa1 = min(p2 kappa2 a12 / P1, 1)`` with its phase opposite
    to the interference.
    """
    k1 = min(t2.power * t2.circularity * s.a12 / s.p1_budget, 1.0)
    phi1 = math.fmod(t2.phase + math.pi, 2.0 * math.pi)
    if phi1 < 0:
        phi1 += 2.0 * math.pi
    return TransmitParams(power=s.p1_budget, circularity=k1, phase=phi1)


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def rate1_reduced(s: ZicScenario, p2, kappa2):
    """User-1 rate with its own signal set optimally against ``(p2, kappa2)``.

    Accepts scalars or broadcastable arrays. The ``kappa1 = 1`` expression is
    used whenever ``p2 kappa2 a12 / P1 >= 1 - BRANCH_TIE_TOL``.
    """
    p2 = np.asarray(p2, dtype=float)
    k2 = np.asarray(kappa2, dtype=float)
    P1 = s.p1_budget
    if s.a12 == 0:
        return _scalar_or_array(np.full(np.broadcast(p2, k2).shape, s.r1_max))
    x = p2 * s.a12
    den = 1.0 + x * (x * (1.0 - k2 * k2) + 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        partial = 0.5 * (2.0 * np.log1p(x + P1) - np.log(den)) / LN2
        maximal = 0.5 * np.log1p(2.0 * P1 * (x * (1.0 + k2) + 1.0) / den) / LN2
    use_max = x * k2 / P1 >= 1.0 - BRANCH_TIE_TOL
    return _scalar_or_array(np.maximum(np.where(use_max, maximal, partial), 0.0))


def rate2_reduced(p2, kappa2):
    """User-2 rate ``0.5 log2(1 + p2 (p2 (1 - kappa2^2) + 2))``."""
    p2 = np.asarray(p2, dtype=float)
    k2 = np.asarray(kappa2, dtype=float)
    return _scalar_or_array(
        0.5 * np.log1p(p2 * (p2 * (1.0 - k2 * k2) + 2.0)) / LN2)
