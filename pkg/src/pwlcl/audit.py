"""Randomized property checks over admissible parameter draws.

Each check consumes draws from a caller-supplied generator until it has the
requested number of draws that yielded data, so results are reproducible
from a seed.
"""

from __future__ import annotations

import math

import numpy as np

from .cycle import DEFAULT_SCAN, ScanConfig, scan_displacement
from .errors import DomainError, StepLimit
from .flow import DEFAULT_CONFIG, Half, IntegratorConfig
from .geometry import g_inner, gamma_solve_y1, sign_a_tl, unit
from .halfmap import MAPS, CubicField, WPoly, anchor_orbit, discover_domain, half_map_direct, trace_cubic, w_positive_on
from .lienard import LienardParams
from .sampling import random_admissible

__all__ = [
    "cross_method_tolerance",
    "interior_grid",
    "compare_methods",
    "gamma_points",
    "gamma_sign_check",
    "uniqueness_check",
    "property_audit",
]


def cross_method_tolerance(y1_direct: float) -> float:
    return max(1e-6, 1e-5 * abs(y1_direct))


def interior_grid(lo: float, hi: float, n: int, cap: float) -> list[float]:
    """``n`` abscissas in ``(lo, hi]``, or in ``(lo, hi)`` when ``hi`` is a found boundary.

    A boundary found by bisection sits where the half-map slope blows up,
    so neither route is well conditioned there.
    """
    if hi >= cap:
        return [float(v) for v in np.linspace(lo, hi, n + 1)[1:]]
    return [float(v) for v in np.linspace(lo, hi, n + 2)[1:-1]]


def compare_methods(
    p: LienardParams,
    n: int,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    cap: float = 8.0,
    grid=None,
) -> list[dict]:
    """Cubic against direct half-map values for both maps of ``p``.

    ``grid`` overrides the interior grid of the discovered domain. A map
    whose anchor cannot be computed is skipped.
    """
    rows = []
    for half, direction in MAPS:
        try:
            anchor = anchor_orbit(p, half, direction, cfg)
            lo, hi = discover_domain(p, half, direction, cfg, cap=cap, anchor=anchor)
        except (DomainError, StepLimit):
            continue
        if hi <= lo:
            continue
        xs = list(grid) if grid is not None else interior_grid(lo, hi, n, cap)
        try:
            cubic = trace_cubic(p, half, direction, xs, cfg, anchor=anchor)
        except DomainError as exc:
            # inside the domain found by direct flights: a genuine disagreement
            rows.append({"half": half.value, "y0": xs[-1], "error": str(exc), "ok": False})
            continue
        for x, c in zip(xs, cubic):
            d = half_map_direct(p, half, direction, x, cfg)
            tol = cross_method_tolerance(d)
            rows.append(
                {"half": half.value, "y0": x, "cubic": c, "direct": d,
                 "err": abs(c - d), "tol": tol, "ok": abs(c - d) <= tol}
            )
    return rows


def gamma_points(p: LienardParams, y0_max: float = 5.0, n: int = 60) -> list[tuple[float, float]]:
    """Points of ``F = 0`` in int(Q) where ``W_L`` and ``W_R`` are positive on ``[y1, y0]``.

    Outside that set no half-map graph can reach the point, and the sign
    identity of the inner products is not claimed there.
    """
    wl, wr = WPoly.for_half(p, Half.LEFT), WPoly.for_half(p, Half.RIGHT)
    out = []
    for y0 in np.linspace(0.0, y0_max, n + 1)[1:]:
        y1 = gamma_solve_y1(p, float(y0))
        if y1 is None or not y1 < 0.0:
            continue
        if w_positive_on(wl, y1, float(y0)) and w_positive_on(wr, y1, float(y0)):
            out.append((float(y0), y1))
    return out


def gamma_sign_check(p: LienardParams, points) -> list[dict]:
    """Sign of ``<grad F, X_L>``, ``<grad F, X_R>`` and the unit-field gap at each point."""
    s = sign_a_tl(p)
    fl, fr = CubicField.for_half(p, Half.LEFT), CubicField.for_half(p, Half.RIGHT)
    rows = []
    for y0, y1 in points:
        gl = g_inner(p, Half.LEFT, y0, y1)
        gr = g_inner(p, Half.RIGHT, y0, y1)
        ul, ur = unit(fl(y0, y1)), unit(fr(y0, y1))
        gap = math.hypot(ul[0] - ur[0], ul[1] - ur[1])
        rows.append(
            {"y0": y0, "y1": y1, "g_l": gl, "g_r": gr, "unit_gap": gap,
             "ok": gl * s > 0.0 and gr * s > 0.0 and gap <= 1e-9}
        )
    return rows


def uniqueness_check(p: LienardParams, scan: ScanConfig = DEFAULT_SCAN, method: str = "cubic"):
    """Number of sign-change brackets of ``delta``, or None when the scan is not possible."""
    try:
        _, _, brackets = scan_displacement(p, scan, method)
    except (DomainError, StepLimit):
        return None
    return len(brackets)


def property_audit(
    rng: np.random.Generator,
    n_draws: int = 20,
    scan: ScanConfig = DEFAULT_SCAN,
    max_tries: int = 20,
) -> dict:
    """Run the three randomized checks on ``n_draws`` useful draws each."""
    cfg = scan.integrator
    summary = {}

    def collect(kind, fn):
        used, tries, bad, rows = 0, 0, [], 0
        while used < n_draws and tries < max_tries * n_draws:
            tries += 1
            p = random_admissible(rng, kind)
            res = fn(p)
            if res is None:
                continue
            used += 1
            rows += len(res)
            bad.extend({"params": p.to_dict(), **r} for r in res if not r["ok"])
        return {"draws": used, "tries": tries, "checked": rows, "failures": bad}

    summary["cross_method"] = collect("mixed", lambda p: compare_methods(p, 6, cfg) or None)
    summary["gamma_sign"] = collect(
        "mixed", lambda p: gamma_sign_check(p, gamma_points(p)) or None
    )

    def uniq(p):
        k = uniqueness_check(p, scan)
        return None if k is None else [{"brackets": k, "ok": k <= 1}]

    summary["uniqueness"] = collect("mixed", uniq)
    summary["passed"] = all(not v["failures"] for v in summary.values() if isinstance(v, dict))
    return summary
