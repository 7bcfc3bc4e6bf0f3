"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a one-line PASS/FAIL verdict in ``RESULTS``; the
summary hook in ``conftest.py`` prints them at the end of the run.
Criteria whose stated reference values cannot be met by a correct
implementation are marked ``xfail(strict=True)``: their assertions are
unchanged, they show up as FAIL lines, and an unexpected pass would turn
the suite red.
"""

import math
import time

import numpy as np
import pytest

from zic_pareto import (DiscontinuityKind, GridSpec, McSpec,
                        MonotonicityCase, RateTarget, TransmitParams,
                        ZicScenario, compute_thresholds, grid_solve,
                        grid_validate_user1, max_improper_count,
                        mc_rate_estimate, monotonicity_case,
                        optimal_kappa1_phi1, power_cap, q_value,
                        rate1_reduced, rate2_reduced, rate_pair_general,
                        solve_point, sweep_boundary, transition_alpha)
from zic_pareto.solver import Branch, bend_alpha

from strategies import sample_case

RESULTS: dict[int, str] = {}


def _record(n: int, ok: bool, detail: str):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)


MU_ITA_REASON = (
    "mu(0.7) evaluates to 0.571676 (confirmed at 30 digits), 6.8e-4 from "
    "the quoted 0.571; the quoted value is truncated, not rounded")


@pytest.mark.xfail(strict=True, reason=MU_ITA_REASON)
def test_criterion_01_threshold_reproduction():
    s = ZicScenario(10.0, 10.0, 0.55)
    t0 = time.perf_counter()
    t = compute_thresholds(s, RateTarget.from_alpha(s, 0.7))
    dt = time.perf_counter() - t0
    mu_ok = abs(t.mu - 0.571) <= 5e-4
    iota_ok = abs(t.iota - 0.545) <= 5e-4
    ok = mu_ok and iota_ok and dt < 1e-3
    _record(1, ok, f"mu={t.mu:.6f} (|d|={abs(t.mu - 0.571):.1e}, "
                   f"{'ok' if mu_ok else 'out of tol'}), iota={t.iota:.6f} "
                   f"(|d|={abs(t.iota - 0.545):.1e}), {dt * 1e3:.3f} ms")
    assert mu_ok and iota_ok and dt < 1e-3


def test_criterion_02_regime_boundary_identity():
    worst, slowest = 0.0, 0.0
    for p1 in (1.0, 10.0, 100.0):
        s = ZicScenario(p1, 10.0, 1.0)
        t0 = time.perf_counter()
        t = compute_thresholds(s, RateTarget.from_alpha(s, 1.0))
        slowest = max(slowest, time.perf_counter() - t0)
        ref = p1 / (p1 + 1.0)
        worst = max(worst, abs(t.mu - ref) / ref, abs(t.iota - ref) / ref)
    ok = worst <= 1e-12 and slowest < 1e-3
    _record(2, ok, f"max relative error {worst:.1e}, "
                   f"slowest {slowest * 1e3:.3f} ms")
    assert ok


INTERVAL_REASON = (
    "the r2 limits are 0.5*log2(21)=2.196 and 0.5*log2(11)=1.730; the "
    "upper end of the quoted interval [1.7, 2.3) is 0.104 away from 2.196")


@pytest.mark.xfail(strict=True, reason=INTERVAL_REASON)
def test_criterion_03_region_transition_jump():
    s = ZicScenario(10.0, 10.0, 2.0)
    t0 = time.perf_counter()
    b = sweep_boundary(s, 2000)
    dt = time.perf_counter() - t0
    trans = [d for d in b.discontinuities
             if d.kind is DiscontinuityKind.REGION_TRANSITION]
    d = trans[0] if trans else None
    checks = {
        "one transition": len(trans) == 1,
        "r1": d is not None and abs(d.r1 - 0.5 * math.log2(21)) <= 1e-9,
        "r2 left=0.5log2(21)": d is not None
        and abs(d.r2_left - 0.5 * math.log2(21)) <= 0.05,
        "r2 right=0.5log2(11)": d is not None
        and abs(d.r2_right - 0.5 * math.log2(11)) <= 0.05,
        "interval low 1.7": d is not None and abs(d.r2_right - 1.7) <= 0.05,
        "interval high 2.3": d is not None and abs(d.r2_left - 2.3) <= 0.05,
        "p2 10->5": d is not None and (d.p2_left, d.p2_right) == (10.0, 5.0),
        "runtime": dt < 1.0,
    }
    failed = [k for k, v in checks.items() if not v]
    detail = (f"r1={d.r1:.10f} r2 {d.r2_left:.4f}->{d.r2_right:.4f} "
              f"p2 {d.p2_left:g}->{d.p2_right:g}, {dt:.2f} s"
              if d else "no transition")
    _record(3, not failed, detail + (f"; failed: {', '.join(failed)}"
                                     if failed else ""))
    assert not failed


def _max_gap(points):
    r2 = [p.r2 for p in points]
    return max(abs(a - b) for a, b in zip(r2, r2[1:]))


def test_criterion_04_selective_boundary():
    s = ZicScenario(10.0, 10.0, 0.8)
    t0 = time.perf_counter()
    b = sweep_boundary(s, 2000)
    dt = time.perf_counter() - t0
    # no r2 jump: the largest step shrinks with the sweep resolution
    gaps = [_max_gap(sweep_boundary(s, n, include_markers=False).points)
            for n in (1000, 2000, 4000)]
    scales = gaps[1] < 0.6 * gaps[0] and gaps[2] < 0.6 * gaps[1]
    no_jump = all(abs(d.r2_left - d.r2_right) <= 1e-6
                  for d in b.discontinuities)
    # improper optimality on exactly one r1 interval
    flags = [p.branch is not Branch.PROPER_OPTIMAL for p in b.points]
    runs = sum(1 for a, c in zip([False] + flags, flags) if c and not a)
    imp = [p.r1 for p, f in zip(b.points, flags) if f]
    lo, hi = min(imp), max(imp)
    interval_ok = runs == 1 and abs(lo - 1.1) <= 0.05 and abs(hi - 2.9) <= 0.05
    # the maximally improper point quoted at R1 = 2.2 is where q(1) = P2
    al = bend_alpha(s)
    rt = RateTarget.from_alpha(s, al)
    pt = solve_point(s, rt)
    bend_ok = (abs(rt.r_bar - 2.2) < 0.05 and abs(pt.kappa2 - 1.0) <= 1e-9
               and abs(pt.kappa1 - 0.8) <= 1e-9)
    lit = solve_point(s, RateTarget.from_rate(s, 2.2))
    ok = scales and no_jump and interval_ok and bend_ok and dt < 1.0
    _record(4, ok, f"max gaps {gaps[0]:.4f}/{gaps[1]:.4f}/{gaps[2]:.4f}, "
                   f"improper r1 in ({lo:.4f}, {hi:.4f}), q(1)=P2 at "
                   f"R={rt.r_bar:.4f}: kappa2={pt.kappa2:.12f} "
                   f"kappa1={pt.kappa1:.12f} (at R=2.2 exactly: "
                   f"kappa2={lit.kappa2:.5f}, kappa1={lit.kappa1:.5f}), "
                   f"{dt:.2f} s")
    assert ok


def test_criterion_05_max_improper_rule():
    rng = np.random.default_rng(55)
    t0 = time.perf_counter()
    wrong = 0
    n_with = 0
    for _ in range(100):
        p1, p2 = np.exp(rng.uniform(math.log(0.5), math.log(50.0), 2))
        s = ZicScenario(float(p1), float(p2),
                        math.exp(rng.uniform(math.log(0.02), math.log(5.0))))
        for markers in (True, False):
            b = sweep_boundary(s, 64, include_markers=markers)
            sampled = any(abs(p.alpha - transition_alpha(s)) == 0
                          for p in b.points)
            want = int(s.p2_budget * s.a12 >= s.p1_budget and sampled)
            wrong += max_improper_count(b) != want
            n_with += want
    dt = time.perf_counter() - t0
    ok = wrong == 0 and dt < 10.0
    _record(5, ok, f"{wrong} mismatches over 200 sweeps of 100 scenarios "
                   f"({n_with} with a both-maximal point), {dt:.1f} s")
    assert ok


LOCATION_REASON = (
    "grid resolution, not the closed form: the closed form is never beaten "
    "and every gap shrinks on an 8001^2 grid, but with P2 near 15-20 one "
    "kappa2 step near 1 costs up to ~5e-3 in r2 (dR2/dkappa2 ~ 7 there); "
    "the argmax also wanders along flat ridges of R2 on the cap p2 = "
    "q(kappa2), near kappa2 = 0 (flat to second order) and near kappa2 = 1")


@pytest.mark.xfail(strict=True, reason=LOCATION_REASON)
def test_criterion_06_oracle_equivalence():
    rng = np.random.default_rng(6)
    g = GridSpec(2001, 2001)
    t0 = time.perf_counter()
    worst_gap, value_fail, loc_fail, knife = 0.0, [], [], 0
    for i in range(50):
        p1, p2 = np.exp(rng.uniform(0.0, math.log(20.0), 2))
        a12 = math.exp(rng.uniform(math.log(0.05), math.log(3.0)))
        s = ZicScenario(float(p1), float(p2), a12)
        rt = RateTarget.from_alpha(s, float(rng.uniform(0.0, 1.0)))
        if abs(a12 - compute_thresholds(s, rt).threshold) < 1e-6:
            knife += 1
            continue
        pt = solve_point(s, rt)
        gs = grid_solve(s, rt, g)
        gap = abs(pt.r2 - gs.r2_best)
        worst_gap = max(worst_gap, gap)
        if gap > 1e-3:
            value_fail.append(i)
        dp = s.p2_budget / (g.p2_points - 1)
        dk = 1.0 / (g.kappa2_points - 1)
        if (abs(gs.p2 - pt.p2) > dp * (1 + 1e-9)
                or abs(gs.kappa2 - pt.kappa2) > dk * (1 + 1e-9)):
            loc_fail.append(i)
    dt = time.perf_counter() - t0
    ok = not value_fail and not loc_fail and dt < 300
    _record(6, ok, f"max |r2 gap| {worst_gap:.2e} ({len(value_fail)} over "
                   f"1e-3), argmax outside one cell in {len(loc_fail)}/"
                   f"{50 - knife} cases {loc_fail}, {knife} knife-edge, "
                   f"{dt:.0f} s")
    assert ok


def test_criterion_07_cap_tightness():
    rng = np.random.default_rng(7)
    n = 10_000
    p = np.exp(rng.uniform(math.log(0.1), math.log(100.0), (n, 2)))
    a = np.exp(rng.uniform(math.log(0.01), math.log(10.0), n))
    al = rng.uniform(0.0, 1.0, n)
    k = rng.uniform(0.0, 1.0, n)
    k[rng.uniform(size=n) < 0.05] = 1.0
    k[rng.uniform(size=n) < 0.05] = 0.0
    t0 = time.perf_counter()
    worst, finite = 0.0, 0
    for i in range(n):
        s = ZicScenario(float(p[i, 0]), float(p[i, 1]), float(a[i]))
        rt = RateTarget.from_alpha(s, float(al[i]))
        q = power_cap(s, rt, float(k[i])).q_value
        if math.isinf(q):
            continue
        finite += 1
        worst = max(worst, abs(rate1_reduced(s, q, float(k[i])) - rt.r_bar))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 1.0
    _record(7, ok, f"max |R1(q) - R| = {worst:.1e} over {finite} finite "
                   f"caps, {dt:.2f} s")
    assert ok


def _r2_on_q(s, rt, k):
    q = q_value(s, rt, k)
    # uncapped q(1) is infinite in the power-limited region; R2 -> inf there
    return math.inf if math.isinf(q) else rate2_reduced(q, k)


def _r2_curve(s, rt, ks):
    return np.array([_r2_on_q(s, rt, float(k)) for k in ks])


def _sign_changes(diffs, tol):
    signs = [np.sign(d) for d in diffs if abs(d) > tol]
    return [b for a, b in zip(signs, signs[1:]) if a != b]


def test_criterion_08_monotonicity_cases():
    ks = np.linspace(0.0, 1.0, 2001)
    t0 = time.perf_counter()
    bad = {c: 0 for c in MonotonicityCase}
    roots = []
    for case in MonotonicityCase:
        rng = np.random.default_rng(800 + list(MonotonicityCase).index(case))
        for _ in range(30):
            s, rt = sample_case(case, rng)
            r2 = _r2_curve(s, rt, ks)
            r0 = r2[0]
            d = np.diff(r2)
            tol = 1e-12 * max(1.0, float(np.max(np.abs(r2[np.isfinite(r2)]))))
            if case is MonotonicityCase.ALWAYS_INCREASING:
                good = bool(np.all(d >= -tol)) and r2[-1] > r0
            elif case is MonotonicityCase.CROSSES_PROPER:
                changes = _sign_changes(d, tol)
                good = changes == [1.0] and r2[-1] > r0 and r2[1] <= r0
                # root of R2(k) = R2(0) past the minimum, by bisection
                lo, hi = float(ks[int(np.argmin(r2))]), 1.0
                f = lambda k: _r2_on_q(s, rt, k) - r0
                good &= f(lo) < 0 < f(hi)
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
                roots.append(hi)
                good &= 0.0 < hi < 1.0
                good &= bool(np.all(r2[ks > hi] > r0))
            else:
                good = bool(np.all(r2 <= r0 + 1e-9))
            # the pattern must match and the classifier must agree
            bad[case] += not good or monotonicity_case(s, rt) is not case
    dt = time.perf_counter() - t0
    ok = not any(bad.values()) and len(roots) == 30 and dt < 30.0
    _record(8, ok, ", ".join(f"{c.value}: {30 - v}/30" for c, v in
                             bad.items())
            + f", roots in ({min(roots):.3f}, {max(roots):.3f}), {dt:.1f} s")
    assert ok


def test_criterion_09_monte_carlo():
    t0 = time.perf_counter()
    worst = 0.0
    for a12 in (2.0, 0.8):
        s = ZicScenario(10.0, 10.0, a12)
        special = transition_alpha(s) if a12 > 1 else bend_alpha(s)
        for j, al in enumerate((0.25, 0.5, special, 0.8, 0.95)):
            pt = solve_point(s, RateTarget.from_alpha(s, al))
            t2 = TransmitParams(pt.p2, pt.kappa2, 0.0)
            t1 = optimal_kappa1_phi1(s, t2)
            est = mc_rate_estimate(s, t1, t2, McSpec(1_000_000, 900 + j))
            worst = max(worst, abs(est.r1_hat - pt.r1),
                        abs(est.r2_hat - pt.r2))
    dt = time.perf_counter() - t0
    ok = worst <= 0.02 and dt < 60.0
    _record(9, ok, f"max |MC - closed form| = {worst:.4f} over 10 points, "
                   f"n=1e6, {dt:.1f} s")
    assert ok


def test_criterion_10_user1_dominance():
    rng = np.random.default_rng(10)
    g = GridSpec(kappa1_points=501, phi_points=360)
    t0 = time.perf_counter()
    worst = -math.inf
    for _ in range(20):
        p1, p2 = np.exp(rng.uniform(math.log(0.5), math.log(50.0), 2))
        s = ZicScenario(float(p1), float(p2),
                        math.exp(rng.uniform(math.log(0.05), math.log(5.0))))
        p, k = float(rng.uniform(0, s.p2_budget)), float(rng.uniform(0, 1))
        res = grid_validate_user1(s, p, k, g)
        closed = rate1_reduced(s, p, k)
        # closed form also checked against the general formula
        t2 = TransmitParams(p, k, 0.0)
        assert closed == pytest.approx(
            rate_pair_general(s, optimal_kappa1_phi1(s, t2), t2)[0],
            rel=1e-12, abs=1e-12)
        worst = max(worst, res.r1_best - closed)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 30.0
    _record(10, ok, f"max (grid - closed form) = {worst:.1e}, {dt:.1f} s")
    assert ok
