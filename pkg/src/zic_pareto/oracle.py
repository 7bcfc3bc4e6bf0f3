"""Brute-force and Monte Carlo cross-checks for the closed forms.

Nothing here calls the power cap, the thresholds or the solver: the grid
search only evaluates the two rate formulas, and the Monte Carlo estimator
only sees sampled signals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (LN2, RateTarget, TransmitParams, ZicScenario,
                    rate1_reduced, rate2_reduced)
from .constraints import RATE_SLACK

__all__ = [
    "GridSpec",
    "McSpec",
    "GridSolution",
    "User1GridResult",
    "McEstimate",
    "grid_solve",
    "grid_validate_user1",
    "grid_resolution_bound",
    "mc_rate_estimate",
    "improper_samples",
    "sample_circularity",
    "real_composite_covariance",
]

_RIDGE = 1e-12
_BLOCK = 128


@dataclass(frozen=True)
class GridSpec:
    p2_points: int = 2001
    kappa2_points: int = 2001
    kappa1_points: int = 501
    phi_points: int = 360

    def __post_init__(self):
        for name in ("p2_points", "kappa2_points", "kappa1_points",
                     "phi_points"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be >= 2")


@dataclass(frozen=True)
class McSpec:
    n_samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1000:
            raise ValueError("n_samples must be >= 1000")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class GridSolution:
    r2_best: float
    p2: float
    kappa2: float


@dataclass(frozen=True)
class User1GridResult:
    r1_best: float
    kappa1: float
    phi1: float


@dataclass(frozen=True)
class McEstimate:
    r1_hat: float
    r2_hat: float
    regularized: bool = False


def grid_resolution_bound(s: ZicScenario, g: GridSpec) -> float:
    """Conservative gap between the grid optimum and the true optimum,
    ``10 * (dp + dkappa)`` for the uniform grid of ``g``."""
    dp = s.p2_budget / (g.p2_points - 1)
    dk = 1.0 / (g.kappa2_points - 1)
    return 10.0 * (dp + dk)


def grid_solve(s: ZicScenario, rt: RateTarget,
               g: GridSpec = GridSpec()) -> GridSolution:
    """Exhaustive maximisation of the user-2 rate on a uniform grid.

    Feasibility is the user-1 rate constraint evaluated directly from the
    rate formula. Ties go to the smaller ``p2``, then the smaller ``kappa2``;
    the answer does not depend on the block size used to bound memory.
    """
    p_grid = np.linspace(0.0, s.p2_budget, g.p2_points)
    k_grid = np.linspace(0.0, 1.0, g.kappa2_points)
    best = (-math.inf, 0.0, 0.0)
    for start in range(0, len(p_grid), _BLOCK):
        p = p_grid[start:start + _BLOCK, None]
        r1 = rate1_reduced(s, p, k_grid[None, :])
        r2 = np.where(r1 >= rt.r_bar - RATE_SLACK,
                      rate2_reduced(p, k_grid[None, :]), -np.inf)
        i = int(np.argmax(r2))
        v = float(r2.flat[i])
        if v > best[0]:
            ip, ik = divmod(i, len(k_grid))
            best = (v, float(p[ip, 0]), float(k_grid[ik]))
    if not math.isfinite(best[0]):
        return GridSolution(0.0, 0.0, 0.0)
    return GridSolution(*best)


def _rate1_from_moments(s: ZicScenario, p1, pt1, p2, pt2):
    # user-1 rate from raw (complementary) variances, array-valued
    a = s.a12
    c_y = p1 + p2 * a + 1.0
    c_z = p2 * a + 1.0
    ct_y = pt1 + pt2 * a
    ct_z = pt2 * a
    return (np.log2(1.0 + p1 / c_z)
            + 0.5 * np.log2((1.0 - np.abs(ct_y) ** 2 / c_y ** 2)
                            / (1.0 - np.abs(ct_z) ** 2 / c_z ** 2)))


def grid_validate_user1(s: ZicScenario, p2: float, kappa2: float,
                        g: GridSpec = GridSpec()) -> User1GridResult:
    """Maximise the user-1 rate over a ``(kappa1, phi1)`` grid.

    User 1 transmits at full power and user 2 uses ``phi2 = 0``. The phase
    grid is ``2 pi k / phi_points``, so it contains ``pi`` when
    ``phi_points`` is even.
    """
    k1 = np.linspace(0.0, 1.0, g.kappa1_points)[:, None]
    phi = (2.0 * np.pi / g.phi_points) * np.arange(g.phi_points)[None, :]
    P1 = s.p1_budget
    r1 = _rate1_from_moments(s, P1, P1 * k1 * np.exp(1j * phi),
                             p2, p2 * kappa2 + 0j)
    i = int(np.argmax(r1))
    ik, ip = divmod(i, g.phi_points)
    return User1GridResult(float(r1.flat[i]), float(k1[ik, 0]),
                           float(phi[0, ip]))


def real_composite_covariance(t: TransmitParams) -> np.ndarray:
    """Covariance of ``[Re s, Im s]`` for variance ``p`` and complementary
    variance ``p kappa exp(j phi)``."""
    p, k, phi = t.power, t.circularity, t.phase
    c, sn = math.cos(phi), math.sin(phi)
    return 0.5 * p * np.array([[1.0 + k * c, k * sn],
                               [k * sn, 1.0 - k * c]])


def improper_samples(t: TransmitParams, n: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` improper complex Gaussian samples with parameters ``t``.

    Uses the symmetric square root of the real-composite covariance, which
    is well defined also for maximally improper (rank-one) signals.
    """
    w, v = np.linalg.eigh(real_composite_covariance(t))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    xy = rng.standard_normal((n, 2)) @ root.T
    return xy[:, 0] + 1j * xy[:, 1]


def sample_circularity(x: np.ndarray) -> float:
    return float(abs(np.mean(x * x)) / np.mean(np.abs(x) ** 2))


def _log_det_rate(y: np.ndarray, z: np.ndarray) -> tuple[float, bool]:
    # 0.5 log2 of det(cov_y) / det(cov_z) in augmented form:
    # det is c^2 - |ct|^2 up to a constant factor that cancels
    def det(x):
        c = np.mean(np.abs(x) ** 2)
        ct = np.mean(x * x)
        return float(c * c - abs(ct) ** 2)

    dy, dz = det(y), det(z)
    reg = False
    if dy <= 0 or dz <= 0:
        dy, dz, reg = dy + _RIDGE, dz + _RIDGE, True
    return 0.5 * math.log(dy / dz) / LN2, reg


def mc_rate_estimate(s: ZicScenario, t1: TransmitParams, t2: TransmitParams,
                     m: McSpec = McSpec()) -> McEstimate:
    """Monte Carlo estimate of ``(R1, R2)`` from sampled signals.

    Samples both transmit signals and proper unit-variance noise from a
    Philox (counter-based) generator seeded with ``m.seed``, forms the
    received and interference-plus-noise signals, and evaluates the
    Gaussian rate expressions on their sample second-order moments.
    """
    rng = np.random.Generator(np.random.Philox(m.seed))
    n = m.n_samples
    s1 = improper_samples(t1, n, rng)
    s2 = improper_samples(t2, n, rng)
    noise = rng.standard_normal((2, n, 2)) * math.sqrt(0.5)
    n1 = noise[0, :, 0] + 1j * noise[0, :, 1]
    n2 = noise[1, :, 0] + 1j * noise[1, :, 1]
    z1 = math.sqrt(s.a12) * s2 + n1
    r1, reg1 = _log_det_rate(s1 + z1, z1)
    r2, reg2 = _log_det_rate(s2 + n2, n2)
    return McEstimate(r1, r2, reg1 or reg2)
