"""Parameter grids analyzed point by point, optionally on a process pool.

Each job is a pure function of immutable inputs, so the table does not
depend on the number of workers or on completion order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from ..cycle import ScanConfig, analyze_cycle
from ..errors import PwlError
from ..lienard import LienardParams
from .config import SweepSpec
from .figures import csv_text

__all__ = ["COLUMNS", "sweep_points", "analyze_point", "run_sweep", "atlas_csv"]

COLUMNS = (
    "index", "tL", "tR", "dL", "dR", "a", "verdict", "stability", "y0_star", "y1_star",
    "delta_prime", "status",
)


def sweep_points(base: LienardParams, spec: SweepSpec) -> list[LienardParams]:
    """Grid points in row-major order of the axes as listed in ``spec``."""
    axes = spec.axis_values()
    names = [n for n, _ in axes]
    out = []
    for combo in itertools.product(*(vals for _, vals in axes)):
        out.append(replace(base, **dict(zip(names, combo))))
    return out


def analyze_point(job) -> dict:
    """One atlas row. ``job`` is ``(index, params, scan, method)``."""
    index, p, scan, method = job
    row = {"index": index, **p.to_dict()}
    try:
        search = analyze_cycle(p, scan, method)
    except PwlError as exc:
        row.update(verdict="", stability="", y0_star=None, y1_star=None, delta_prime=None)
        row["status"] = f"error: {type(exc).__name__}: {exc}"
        return row
    rep = search.report
    row["verdict"] = search.verdict.value
    row["stability"] = rep.stability.value if rep else ""
    row["y0_star"] = rep.y0_star if rep else None
    row["y1_star"] = rep.y1_star if rep else None
    row["delta_prime"] = rep.delta_prime if rep else None
    row["status"] = "cycle" if rep else (search.reason or "no cycle")
    return row


def run_sweep(
    base: LienardParams,
    spec: SweepSpec,
    scan: ScanConfig,
    method: str = "cubic",
    workers: int | None = None,
) -> list[dict]:
    """Analyze every grid point; rows come back in grid order."""
    pts = sweep_points(base, spec)
    jobs = [(i, p, scan, method) for i, p in enumerate(pts)]
    n = spec.workers if workers is None else workers
    if n <= 1 or len(jobs) <= 1:
        return [analyze_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(analyze_point, jobs, chunksize=max(1, len(jobs) // (4 * n))))


def atlas_csv(rows) -> str:
    out = []
    for r in rows:
        line = []
        for c in COLUMNS:
            v = r[c]
            line.append("" if v is None else v)
        out.append(line)
    return csv_text(list(COLUMNS), out)

