"""CSV and JSON encodings of a swept boundary.

The CSV layout is versioned by a leading ``# schema: zic-pareto/1`` line
followed by a header row. Discontinuities and hull vertices go to sidecar
files ``<stem>.discontinuities.csv`` and ``<stem>.hull.csv`` so that the main
table holds boundary points only. Floats are written with ``repr``, the
shortest string that round-trips to the same double.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from .model import RateTarget, ZicScenario
from .solver import ParetoBoundary, proper_point

__all__ = [
    "SCHEMA",
    "POINT_FIELDS",
    "DISCONTINUITY_FIELDS",
    "HULL_FIELDS",
    "BoundaryTable",
    "boundary_table",
    "sidecar_paths",
    "write_csv",
    "read_csv",
    "dump_csv_sections",
    "to_json",
    "from_json",
]

SCHEMA = "zic-pareto/1"
POINT_FIELDS = ("alpha", "r1", "r2_improper", "r2_proper", "p2", "kappa2",
                "kappa1", "branch", "region")
DISCONTINUITY_FIELDS = ("r1", "r2_left", "r2_right", "kind", "alpha",
                        "p2_left", "p2_right", "kappa2_left", "kappa2_right")
HULL_FIELDS = ("r1", "r2")
_TEXT_FIELDS = {"branch", "region", "kind"}


@dataclass(frozen=True)
class BoundaryTable:
    """Plain-data view of a boundary, the unit that is serialized."""

    scenario: dict
    points: list[dict]
    discontinuities: list[dict]
    hull: list[dict]


def boundary_table(s: ZicScenario, b: ParetoBoundary) -> BoundaryTable:
    """Flatten a :class:`ParetoBoundary`, adding the proper-only rate."""
    points = []
    for p in b.points:
        prop = proper_point(s, RateTarget.from_alpha(s, p.alpha))
        points.append({
            "alpha": p.alpha, "r1": p.r1, "r2_improper": p.r2,
            "r2_proper": prop.r2, "p2": p.p2, "kappa2": p.kappa2,
            "kappa1": p.kappa1, "branch": p.branch.value,
            "region": p.region.value,
        })
    discs = [{
        "r1": d.r1, "r2_left": d.r2_left, "r2_right": d.r2_right,
        "kind": d.kind.value, "alpha": d.alpha, "p2_left": d.p2_left,
        "p2_right": d.p2_right, "kappa2_left": d.kappa2_left,
        "kappa2_right": d.kappa2_right,
    } for d in b.discontinuities]
    hull = [{"r1": r1, "r2": r2} for r1, r2 in b.convex_hull]
    scen = {"p1": s.p1_budget, "p2": s.p2_budget, "a12": s.a12}
    return BoundaryTable(scen, points, discs, hull)


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (float, int)) else str(v)


def _write_rows(fh: IO[str], fields: Iterable[str], rows: list[dict]):
    fields = tuple(fields)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[f]) for f in fields])


def _read_rows(fh: IO[str]) -> list[dict]:
    rows = []
    for r in csv.DictReader(fh):
        rows.append({k: (v if k in _TEXT_FIELDS else float(v))
                     for k, v in r.items()})
    return rows


def sidecar_paths(path: str | Path) -> tuple[Path, Path]:
    """``(<stem>.discontinuities.csv, <stem>.hull.csv)`` next to ``path``."""
    path = Path(path)
    stem = path.with_suffix("") if path.suffix == ".csv" else path
    return (stem.parent / (stem.name + ".discontinuities.csv"),
            stem.parent / (stem.name + ".hull.csv"))


def _header(fh: IO[str], t: BoundaryTable):
    sc = t.scenario
    fh.write(f"# schema: {SCHEMA}\n")
    fh.write(f"# p1={_fmt(sc['p1'])} p2={_fmt(sc['p2'])} "
             f"a12={_fmt(sc['a12'])}\n")


def write_csv(t: BoundaryTable, path: str | Path) -> list[Path]:
    """Write the main table and both sidecars; returns the paths written."""
    path = Path(path)
    disc_path, hull_path = sidecar_paths(path)
    for p, fields, rows in ((path, POINT_FIELDS, t.points),
                            (disc_path, DISCONTINUITY_FIELDS,
                             t.discontinuities),
                            (hull_path, HULL_FIELDS, t.hull)):
        with open(p, "w", newline="") as fh:
            _header(fh, t)
            _write_rows(fh, fields, rows)
    return [path, disc_path, hull_path]


def _parse_header(fh: IO[str]) -> dict:
    first = fh.readline().strip()
    if first != f"# schema: {SCHEMA}":
        raise ValueError(f"unsupported schema line {first!r}")
    second = fh.readline().strip().lstrip("#").split()
    kv = dict(item.split("=", 1) for item in second)
    return {k: float(v) for k, v in kv.items()}


def read_csv(path: str | Path) -> BoundaryTable:
    """Inverse of :func:`write_csv`."""
    path = Path(path)
    out = []
    for p in (path, *sidecar_paths(path)):
        with open(p, newline="") as fh:
            scen = _parse_header(fh)
            out.append(_read_rows(fh))
    return BoundaryTable(scen, *out)


def dump_csv_sections(t: BoundaryTable, fh: IO[str]):
    """Single-stream CSV (for stdout): the point table, then each sidecar
    table introduced by a ``# section: <name>`` comment line."""
    _header(fh, t)
    _write_rows(fh, POINT_FIELDS, t.points)
    fh.write("# section: discontinuities\n")
    _write_rows(fh, DISCONTINUITY_FIELDS, t.discontinuities)
    fh.write("# section: hull\n")
    _write_rows(fh, HULL_FIELDS, t.hull)


def to_json(t: BoundaryTable) -> str:
    # non-finite values cannot occur in boundary data; refuse them loudly
    return json.dumps({
        "schema": SCHEMA,
        "scenario": t.scenario,
        "points": t.points,
        "discontinuities": t.discontinuities,
        "hull": t.hull,
    }, allow_nan=False, indent=1)


def from_json(text: str) -> BoundaryTable:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")

    def floats(rows):
        return [{k: (v if k in _TEXT_FIELDS else float(v))
                 for k, v in r.items()} for r in rows]

    return BoundaryTable({k: float(v) for k, v in doc["scenario"].items()},
                         floats(doc["points"]),
                         floats(doc["discontinuities"]),
                         floats(doc["hull"]))
