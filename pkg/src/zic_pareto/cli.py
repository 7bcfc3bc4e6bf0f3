"""Command-line entry point ``zic-pareto``.

Subcommands: ``boundary`` (sweep and export), ``thresholds`` (report for one
alpha), ``regime`` (operation regime of a scenario) and ``verify`` (grid and
Monte Carlo cross-checks). Settings come from ``--config`` (flat
``key=value`` lines or a flat JSON object) and are overridden by flags.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 output path not writable.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .export import boundary_table, dump_csv_sections, to_json, write_csv
from .model import (RateTarget, TransmitParams, ZicScenario,
                    optimal_kappa1_phi1)
from .oracle import (GridSpec, McSpec, grid_resolution_bound, grid_solve,
                     mc_rate_estimate)
from .solver import Spacing, solve_point, sweep_boundary
from .thresholds import (classify_regime, compute_thresholds,
                         min_improper_threshold, transition_alpha)

__all__ = ["main", "Config", "load_config", "EXIT_OK", "EXIT_VERIFY_FAILED",
           "EXIT_INVALID", "EXIT_UNWRITABLE"]

log = logging.getLogger("zic_pareto")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_UNWRITABLE = 3

THREADS_ENV = "ZIC_PARETO_THREADS"


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    """Resolved settings for one invocation."""

    p1: float = 10.0
    p2: float = 10.0
    a12: float = 2.0
    alpha: Optional[float] = None
    n: int = 2000
    spacing: str = "alpha"
    format: str = "csv"
    out: Optional[str] = None
    seed: int = 0
    grid: str = "2001x2001"
    mc_samples: int = 100_000
    trials: Optional[int] = None

    def scenario(self) -> ZicScenario:
        return ZicScenario(self.p1, self.p2, self.a12)

    def grid_spec(self) -> GridSpec:
        try:
            a, b = (int(v) for v in self.grid.lower().split("x"))
        except ValueError:
            raise ConfigError(f"--grid must look like AxB, got {self.grid!r}")
        return GridSpec(p2_points=a, kappa2_points=b)


_TYPES = {"p1": float, "p2": float, "a12": float, "alpha": float, "n": int,
          "spacing": str, "format": str, "out": str, "seed": int,
          "grid": str, "mc_samples": int, "trials": int}


def _coerce(key: str, value):
    key = key.strip().replace("-", "_")
    if key not in _TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return key, _TYPES[key](value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}")


def load_config(path: str) -> dict:
    """Read a flat ``key=value`` file or a flat JSON object."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad JSON in {path}: {e}")
        items = doc.items()
    else:
        items = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"expected key=value, got {line!r}")
            items.append(tuple(line.split("=", 1)))
    return dict(_coerce(k, v.strip() if isinstance(v, str) else v)
                for k, v in items)


def _resolve(args: argparse.Namespace) -> Config:
    values = load_config(args.config) if args.config else {}
    for key in _TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = Config(**values)
    if cfg.spacing not in ("alpha", "r1"):
        raise ConfigError(f"spacing must be alpha or r1, got {cfg.spacing!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.alpha is not None and not 0.0 <= cfg.alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {cfg.alpha}")
    if cfg.n < 2:
        raise ConfigError("n must be >= 2")
    if cfg.trials is not None and cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    return cfg


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return n


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w") as fh:
        fh.write(text)


def _cmd_boundary(cfg: Config) -> int:
    s = cfg.scenario()
    b = sweep_boundary(s, cfg.n, Spacing(cfg.spacing), workers=_threads())
    t = boundary_table(s, b)
    log.info("%d points, %d discontinuities, %d hull vertices",
             len(t.points), len(t.discontinuities), len(t.hull))
    if cfg.format == "json":
        _emit(to_json(t) + "\n", cfg.out)
    elif cfg.out is None:
        dump_csv_sections(t, sys.stdout)
    else:
        for p in write_csv(t, cfg.out):
            log.info("wrote %s", p)
    return EXIT_OK


def _num(v: float):
    # JSON has no infinities; report them as strings
    return v if math.isfinite(v) else repr(v)


def _cmd_thresholds(cfg: Config) -> int:
    if cfg.alpha is None:
        raise ConfigError("thresholds needs --alpha")
    s = cfg.scenario()
    t = compute_thresholds(s, RateTarget.from_alpha(s, cfg.alpha))
    rows = {"mu": t.mu, "iota": t.iota, "rho": t.rho, "nu": t.nu,
            "eta": t.eta, "a_p": t.a_p, "a_i": t.a_i}
    if cfg.format == "json":
        doc = {k: _num(v) for k, v in rows.items()}
        doc.update(alpha=cfg.alpha, improper_optimal=t.improper_optimal)
        _emit(json.dumps(doc, indent=1) + "\n", cfg.out)
    else:
        lines = [f"alpha={cfg.alpha!r}"]
        lines += [f"{k}={v!r}" for k, v in rows.items()]
        lines.append(f"improper_optimal={str(t.improper_optimal).lower()}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _cmd_regime(cfg: Config) -> int:
    s = cfg.scenario()
    regime = classify_regime(s)
    alpha_star, lower = min_improper_threshold(s)
    upper = s.p1_budget / (s.p1_budget + 1.0)
    if cfg.format == "json":
        _emit(json.dumps({"regime": regime.value, "lower": lower,
                          "upper": upper, "alpha_star": alpha_star},
                         indent=1) + "\n", cfg.out)
    else:
        _emit(f"{regime.value}\nlower={lower!r}\nupper={upper!r}\n"
              f"alpha_star={alpha_star!r}\n", cfg.out)
    return EXIT_OK


def _verify_cases(cfg: Config) -> list[tuple[ZicScenario, float]]:
    if cfg.trials is None:
        cases = []
        for a12 in (2.0, 0.8):
            s = ZicScenario(10.0, 10.0, a12)
            alphas = [0.1, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95,
                      transition_alpha(s)]
            cases += [(s, al) for al in alphas]
        return cases
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    cases = []
    for _ in range(cfg.trials):
        p1, p2 = np.exp(rng.uniform(math.log(0.5), math.log(20.0), 2))
        a12 = math.exp(rng.uniform(math.log(0.01), math.log(5.0)))
        cases.append((ZicScenario(float(p1), float(p2), a12),
                      float(rng.uniform(0.0, 1.0))))
    return cases


def _cmd_verify(cfg: Config) -> int:
    g = cfg.grid_spec()
    mc_tol = 20.0 / math.sqrt(cfg.mc_samples)
    McSpec(cfg.mc_samples, cfg.seed)  # validates the Monte Carlo settings
    records = []
    ok = True
    for i, (s, al) in enumerate(_verify_cases(cfg)):
        rt = RateTarget.from_alpha(s, al)
        pt = solve_point(s, rt)
        gs = grid_solve(s, rt, g)
        bound = grid_resolution_bound(s, g)
        gap = pt.r2 - gs.r2_best
        t2 = TransmitParams(pt.p2, pt.kappa2, 0.0)
        t1 = optimal_kappa1_phi1(s, t2)
        est = mc_rate_estimate(s, t1, t2, McSpec(cfg.mc_samples,
                                                 cfg.seed + i))
        mc_err = max(abs(est.r1_hat - pt.r1), abs(est.r2_hat - pt.r2))
        passed = abs(gap) <= bound and mc_err <= mc_tol
        ok &= passed
        records.append({"p1": s.p1_budget, "p2": s.p2_budget, "a12": s.a12,
                        "alpha": al, "r2_closed": pt.r2,
                        "r2_grid": gs.r2_best, "grid_gap": gap,
                        "grid_bound": bound, "mc_error": mc_err,
                        "mc_tol": mc_tol, "regularized": est.regularized,
                        "pass": passed})
        if not passed:
            log.warning("check failed at P1=%g P2=%g a12=%g alpha=%g: "
                        "grid gap %.3e (bound %.3e), mc error %.3e "
                        "(tol %.3e)", s.p1_budget, s.p2_budget, s.a12, al,
                        gap, bound, mc_err, mc_tol)
    max_gap = max(abs(r["grid_gap"]) for r in records)
    max_mc = max(r["mc_error"] for r in records)
    if cfg.format == "json":
        _emit(json.dumps({"pass": ok, "max_grid_gap": max_gap,
                          "max_mc_error": max_mc, "cases": records},
                         indent=1) + "\n", cfg.out)
    else:
        bound = max(r["grid_bound"] for r in records)
        _emit(f"cases={len(records)}\n"
              f"max_grid_gap={max_gap!r} bound<={bound!r}\n"
              f"max_mc_error={max_mc!r} tol={mc_tol!r}\n"
              f"{'pass' if ok else 'FAIL'}\n", cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


_COMMANDS = {"boundary": _cmd_boundary, "thresholds": _cmd_thresholds,
             "regime": _cmd_regime, "verify": _cmd_verify}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value or JSON settings file")
    common.add_argument("--p1", type=float, help="power budget of user 1")
    common.add_argument("--p2", type=float, help="power budget of user 2")
    common.add_argument("--a12", type=float, help="cross-link power gain")
    common.add_argument("--format", help="csv or json")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="zic-pareto", description=__doc__,
                                formatter_class=argparse.RawTextHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("boundary", parents=[common],
                       help="sweep the Pareto boundary")
    b.add_argument("--n", type=int, help="number of sweep points")
    b.add_argument("--spacing", help="alpha or r1")
    t = sub.add_parser("thresholds", parents=[common],
                       help="thresholds for one rate demand")
    t.add_argument("--alpha", type=float, help="rate demand fraction in [0, 1]")
    sub.add_parser("regime", parents=[common], help="operation regime")
    v = sub.add_parser("verify", parents=[common],
                       help="grid and Monte Carlo cross-checks")
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int,
                   help="random scenarios instead of the default set")
    v.add_argument("--grid", help="grid size AxB (p2 by kappa2)")
    v.add_argument("--mc-samples", dest="mc_samples", type=int)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except ValueError as e:
        # ConfigError, DomainError and grid or sampling settings all land here
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_UNWRITABLE
