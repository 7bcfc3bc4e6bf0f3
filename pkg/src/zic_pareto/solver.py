"""Pareto boundary of the Z-IC rate region with improper signaling.

Each boundary point maximises the user-2 rate subject to a user-1 demand
``alpha * log2(1 + P1)``. The closed-form solution picks ``kappa2`` in
{0, kappa_max, 1} and sets ``p2 = min(q(kappa2), P2)``; user 1 answers with
``kappa1 = min(p2 kappa2 a12 / P1, 1)`` at the opposite phase.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .constraints import on_region_edge, power_cap
from .model import RateTarget, ZicScenario, rate1_reduced, rate2_reduced
from .thresholds import (Region, classify_region, compute_thresholds,
                         improper_threshold, iota_right_limit,
                         transition_alpha)

__all__ = [
    "Branch",
    "Spacing",
    "DiscontinuityKind",
    "BoundaryPoint",
    "Discontinuity",
    "ParetoBoundary",
    "kappa_max",
    "solve_point",
    "proper_point",
    "sweep_boundary",
    "detect_discontinuities",
    "threshold_crossings",
    "bend_alpha",
    "upper_hull",
    "max_improper_count",
]

# circularity values this close to 1 count as maximally improper
MAX_IMPROPER_TOL = 1e-12
# bisection tolerance, in alpha, for analytic breakpoints
ALPHA_TOL = 1e-10
# collinearity tolerance of the hull
HULL_TOL = 1e-12
# a kappa2 jump smaller than this at a threshold crossing is not recorded
KAPPA_JUMP_TOL = 1e-6
_CROSSING_SCAN = 2048


class Branch(enum.Enum):
    PROPER_OPTIMAL = "proper"
    IMPROPER_KAPPA_MAX = "improper-kappa-max"
    IMPROPER_MAXIMAL = "improper-maximal"


class Spacing(enum.Enum):
    UNIFORM_ALPHA = "alpha"
    UNIFORM_R1 = "r1"


class DiscontinuityKind(enum.Enum):
    REGION_TRANSITION = "region-transition"
    THRESHOLD_CROSSING = "threshold-crossing"


@dataclass(frozen=True)
class BoundaryPoint:
    alpha: float
    r1: float
    r2: float
    p2: float
    kappa2: float
    kappa1: float
    phase_delta: float
    branch: Branch
    region: Region


@dataclass(frozen=True)
class Discontinuity:
    """A jump in the optimal strategy along the boundary.

    ``r2_left``/``r2_right`` (and the ``p2``/``kappa2`` pairs) are the one-
    sided limits as ``r1`` approaches ``r1`` from below/above.
    """

    r1: float
    r2_left: float
    r2_right: float
    kind: DiscontinuityKind
    alpha: float
    p2_left: float
    p2_right: float
    kappa2_left: float
    kappa2_right: float


@dataclass(frozen=True)
class ParetoBoundary:
    points: tuple[BoundaryPoint, ...]
    discontinuities: tuple[Discontinuity, ...]
    convex_hull: tuple[tuple[float, float], ...]
    bend_alpha: Optional[float] = None


def kappa_max(s: ZicScenario, rt: RateTarget) -> float:
    """Smallest ``kappa2`` whose power cap reaches the budget ``P2``.

    Raises
    ------
    ValueError
        If ``q(0) > P2`` (proper signaling already reaches the budget, so no
        circularity is needed) or ``q(1) < P2`` (the budget is out of reach
        even for a maximally improper signal).
    """
    P1, P2, a = s.p1_budget, s.p2_budget, s.a12
    q0 = power_cap(s, rt, 0.0).q_value
    q1 = power_cap(s, rt, 1.0).q_value
    if q0 > P2 * (1.0 + 1e-12):
        raise ValueError(
            f"q(0)={q0} exceeds P2={P2}: the budget binds at kappa2=0")
    if q1 < P2 * (1.0 - 1e-12):
        raise ValueError(
            f"q(1)={q1} is below P2={P2}: the budget is never reached")
    if q0 >= P2 * (1.0 - 1e-12):
        return 0.0

    g2 = rt.gamma_2rbar
    x = P2 * a
    c0 = (P1 - rt.gamma_rbar) * (P1 + rt.gamma_rbar + 2.0)
    k_sq = (x * (x * g2 - 2.0 * (P1 - g2)) - c0) / (x * x * (g2 + 1.0))
    k = math.sqrt(min(max(k_sq, 0.0), 1.0))
    if x * k / P1 < 1.0:
        return k
    if on_region_edge(s, rt):
        return 1.0
    return min(max(1.0 - (2.0 * P1 / g2 - 1.0) / x, 0.0), 1.0)


def _make_point(s: ZicScenario, rt: RateTarget, p2: float, k2: float,
                branch: Branch) -> BoundaryPoint:
    if p2 <= 0:
        p2, k2 = 0.0, 0.0
    k1 = min(p2 * k2 * s.a12 / s.p1_budget, 1.0)
    return BoundaryPoint(
        alpha=rt.alpha,
        r1=rate1_reduced(s, p2, k2),
        r2=rate2_reduced(p2, k2),
        p2=p2,
        kappa2=k2,
        kappa1=k1,
        phase_delta=math.pi if p2 * k2 > 0 else 0.0,
        branch=branch,
        region=classify_region(s, rt),
    )


def proper_point(s: ZicScenario, rt: RateTarget) -> BoundaryPoint:
    """Best point when both users are restricted to proper signals."""
    return _make_point(s, rt, power_cap(s, rt, 0.0).effective, 0.0,
                       Branch.PROPER_OPTIMAL)


def _improper_point(s: ZicScenario, rt: RateTarget) -> BoundaryPoint:
    cap1 = power_cap(s, rt, 1.0)
    if cap1.q_value <= s.p2_budget:
        return _make_point(s, rt, cap1.q_value, 1.0, Branch.IMPROPER_MAXIMAL)
    return _make_point(s, rt, s.p2_budget, kappa_max(s, rt),
                       Branch.IMPROPER_KAPPA_MAX)


def solve_point(s: ZicScenario, rt: RateTarget) -> BoundaryPoint:
    """Pareto-optimal point for the demand ``rt``.

    Improper signaling is used iff ``a12 > max(iota, rho)``; ties go to the
    proper solution.
    """
    if compute_thresholds(s, rt).improper_optimal:
        return _improper_point(s, rt)
    return proper_point(s, rt)


def _alpha_grid(s: ZicScenario, n_points: int, spacing: Spacing) -> np.ndarray:
    if spacing is Spacing.UNIFORM_ALPHA:
        return np.linspace(0.0, 1.0, n_points)
    # uniform in r1 over the part of the boundary that actually moves; every
    # demand below the proper full-power corner maps to that corner
    a0 = s.r1_corner / s.r1_max
    return np.concatenate(([0.0], np.linspace(a0, 1.0, n_points - 1)))


def _bisect(f, lo: float, hi: float, tol: float = ALPHA_TOL) -> float:
    """Locate the sign change of boolean ``f`` in ``[lo, hi]``."""
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_crossings(s: ZicScenario) -> list[float]:
    """Alphas where ``a12`` crosses ``max(iota, rho)``, away from the edge.

    The scan is split at the power/interference edge, where ``iota`` jumps
    by construction.
    """
    if s.a12 == 0:
        return []
    edge = transition_alpha(s)
    grid = np.linspace(0.0, 1.0, _CROSSING_SCAN + 1)[1:]
    segments = [grid[grid < edge], grid[grid > edge]]
    is_improper = lambda al: s.a12 > improper_threshold(s, al)
    out = []
    for seg in segments:
        if len(seg) < 2:
            continue
        flags = [is_improper(float(al)) for al in seg]
        for i in range(len(seg) - 1):
            if flags[i] != flags[i + 1]:
                out.append(_bisect(is_improper, float(seg[i]),
                                   float(seg[i + 1])))
    return out


def bend_alpha(s: ZicScenario) -> Optional[float]:
    """Alpha in the interference-limited region where ``q(1) = P2``.

    Beyond this point a maximally improper user 2 can no longer use its full
    budget, which is where the boundary bends. None if ``q(1) < P2`` (or
    ``q(1) > P2``) throughout.
    """
    if s.a12 == 0:
        return None
    edge = transition_alpha(s)
    lo = min(edge * (1.0 + 1e-9), 1.0)
    below = lambda al: power_cap(
        s, RateTarget.from_alpha(s, al), 1.0).q_value <= s.p2_budget
    if below(lo) or not below(1.0):
        return None
    return _bisect(below, lo, 1.0)


def _region_transition(s: ZicScenario) -> Optional[Discontinuity]:
    P1, P2, a = s.p1_budget, s.p2_budget, s.a12
    if a == 0 or P2 <= P1 / a:
        return None
    al0 = transition_alpha(s)
    rt0 = RateTarget.from_alpha(s, al0)
    left = solve_point(s, rt0)
    # right-hand limit: every threshold except iota is continuous at the edge,
    # and q(1) falls back from +inf to P1 / a12
    t = compute_thresholds(s, rt0)
    if a > max(iota_right_limit(P1), t.rho):
        q1 = P1 / a
        if q1 <= P2:
            p_r, k_r = q1, 1.0
        else:
            p_r, k_r = P2, kappa_max(s, rt0)
    else:
        p_r, k_r = power_cap(s, rt0, 0.0).effective, 0.0
    return Discontinuity(
        r1=left.r1, r2_left=left.r2, r2_right=rate2_reduced(p_r, k_r),
        kind=DiscontinuityKind.REGION_TRANSITION, alpha=al0,
        p2_left=left.p2, p2_right=p_r,
        kappa2_left=left.kappa2, kappa2_right=k_r)


def _crossing_record(s: ZicScenario, alpha: float) -> Optional[Discontinuity]:
    rt = RateTarget.from_alpha(s, alpha)
    if power_cap(s, rt, 0.0).q_value >= s.p2_budget * (1.0 - 1e-6):
        # crossing where proper signaling just stops reaching the budget:
        # kappa_max grows continuously from 0, nothing jumps
        return None
    prop = proper_point(s, rt)
    try:
        imp = _improper_point(s, rt)
    except ValueError:
        return None
    if abs(imp.kappa2 - prop.kappa2) <= KAPPA_JUMP_TOL:
        return None
    # improper below the crossing iff the improper side is to the left
    d = 1e-7
    left_improper = s.a12 > improper_threshold(s, max(alpha - d, 0.0))
    left, right = (imp, prop) if left_improper else (prop, imp)
    return Discontinuity(
        r1=rt.r_bar, r2_left=left.r2, r2_right=right.r2,
        kind=DiscontinuityKind.THRESHOLD_CROSSING, alpha=alpha,
        p2_left=left.p2, p2_right=right.p2,
        kappa2_left=left.kappa2, kappa2_right=right.kappa2)


def detect_discontinuities(boundary: ParetoBoundary | Sequence[BoundaryPoint],
                           s: ZicScenario) -> list[Discontinuity]:
    """Analytic jumps of the optimal strategy within the boundary's r1 span.

    A region transition is reported at ``2 P1 = gamma_2rbar`` whenever
    ``P2 > P1 / a12``; threshold crossings are reported when ``kappa2``
    jumps there (r2 stays continuous).
    """
    points = boundary.points if isinstance(boundary, ParetoBoundary) else boundary
    if not points:
        return []
    r1_lo = min(p.r1 for p in points)
    r1_hi = max(p.r1 for p in points)
    found = []
    rec = _region_transition(s)
    if rec is not None:
        found.append(rec)
    for al in threshold_crossings(s):
        rec = _crossing_record(s, al)
        if rec is not None:
            found.append(rec)
    eps = 1e-9
    found = [d for d in found if r1_lo - eps <= d.r1 <= r1_hi + eps]
    return sorted(found, key=lambda d: d.r1)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(pairs) -> list[tuple[float, float]]:
    """Upper concave envelope of rate pairs (monotone chain).

    Points are ordered by r1 and, at equal r1, by decreasing r2 so only the
    highest survives. Middle points within :data:`HULL_TOL` of collinear are
    dropped.
    """
    pts = sorted({(float(x), float(y)) for x, y in pairs},
                 key=lambda p: (p[0], -p[1]))
    hull: list[tuple[float, float]] = []
    for p in pts:
        if hull and p[0] == hull[-1][0]:
            continue
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= -HULL_TOL:
            hull.pop()
        hull.append(p)
    return hull


def _hull_of(s: ZicScenario, points: Sequence[BoundaryPoint]):
    pairs = [(p.r1, p.r2) for p in points]
    pairs.append((s.r1_max, 0.0))
    pairs.append((s.r1_corner, s.r2_max))
    return tuple(upper_hull(pairs))


def sweep_boundary(s: ZicScenario, n_points: int = 2000,
                   alpha_spacing: Spacing | str = Spacing.UNIFORM_ALPHA,
                   include_markers: bool = True,
                   workers: int = 1) -> ParetoBoundary:
    """Trace the Pareto boundary by sweeping the user-1 demand.

    Parameters
    ----------
    s : ZicScenario
    n_points : int
        Number of regularly spaced demands, at least 2.
    alpha_spacing : Spacing or {"alpha", "r1"}
        Uniform in alpha, or uniform in r1 between the proper full-power
        corner and ``log2(1 + P1)``.
    include_markers : bool
        Also evaluate the analytic breakpoints (region edge and threshold
        crossings) so that their exact points appear in the sweep.
    workers : int
        Threads used to evaluate points; results do not depend on it.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    spacing = Spacing(alpha_spacing)
    alphas = _alpha_grid(s, n_points, spacing)
    if include_markers and s.a12 > 0:
        marks = [transition_alpha(s), *threshold_crossings(s)]
        alphas = np.union1d(alphas, [m for m in marks if 0 < m < 1])
    targets = [RateTarget.from_alpha(s, float(al)) for al in alphas]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            points = list(ex.map(lambda rt: solve_point(s, rt), targets))
    else:
        points = [solve_point(s, rt) for rt in targets]
    # alpha order is r1 order up to rounding; sort stably on r1 for safety
    points.sort(key=lambda p: p.r1)
    partial = ParetoBoundary(tuple(points), (), ())
    return ParetoBoundary(
        points=tuple(points),
        discontinuities=tuple(detect_discontinuities(partial, s)),
        convex_hull=_hull_of(s, points),
        bend_alpha=bend_alpha(s),
    )


def max_improper_count(boundary: ParetoBoundary) -> int:
    """Number of points where both users are maximally improper."""
    return sum(
        1 for p in boundary.points
        if p.p2 > 0 and p.kappa1 >= 1.0 - MAX_IMPROPER_TOL
        and p.kappa2 >= 1.0 - MAX_IMPROPER_TOL)
