"""Run records: everything ``analyze`` computed, persisted as JSON.

A record is self-contained: the figures are rendered from its ``figures``
section alone, so a record re-loaded from disk renders byte-identically.
"""

from __future__ import annotations

import json
import logging
import math
import time
from pathlib import Path

import numpy as np

from ..cycle import analyze_cycle
from ..errors import A12Zero, ConfigError, DomainError
from ..flow import Direction, Half
from ..geometry import crossing_audit, region_census, sample_gamma
from ..halfmap import MAPS, anchor_orbit, build_orbit, discover_domain
from ..lienard import LienardParams, Verdict, canonicalize, classify_params, near_degenerate
from . import figdata
from .config import RunConfig

log = logging.getLogger(__name__)

__all__ = [
    "SCHEMA_VERSION",
    "resolve_input",
    "window_for",
    "halfmap_table",
    "build_record",
    "save_record",
    "load_record",
]

SCHEMA_VERSION = "pwlcl.run/1"
ORBIT_POINTS = 81


def resolve_input(cfg: RunConfig) -> tuple[LienardParams | None, Verdict, list[str]]:
    """Canonical parameters (None when ``a12 = 0``), verdict and warnings."""
    if cfg.raw is not None:
        try:
            p = canonicalize(cfg.raw)
        except A12Zero:
            return None, Verdict.NO_PERIODIC_ORBIT_A12_ZERO, []
    else:
        p = cfg.params
    return p, classify_params(p), near_degenerate(p)


def window_for(report, anchors) -> float:
    """Half-width of the plotted part of Q."""
    scale = max([abs(v) for anc in anchors for v in anc] + [0.0])
    if report is not None:
        scale = max(scale, report["y0_star"], abs(report["y1_star"]))
    return 1.6 * scale if scale > 0.0 else 1.0


def _search_dict(search, with_orbit):
    d = {
        "method": search.method,
        "reason": search.reason,
        "setup": search.setup.to_dict() if search.setup else None,
        "brackets": [list(b) for b in search.brackets],
        "scan": [[s.y0, s.y_l, s.y_r] for s in search.samples],
        "cycle": search.report.to_dict(with_orbit) if search.report else None,
    }
    return d


def _orbit_dict(orb):
    return {
        "half": orb.half.value,
        "direction": orb.direction.value,
        "method": orb.method,
        "anchor": list(orb.anchor),
        "domain": [orb.domain_lo, orb.domain_hi],
        "samples": [list(s) for s in orb.samples],
    }


def halfmap_table(p: LienardParams, half: Half, direction: Direction, cfg: RunConfig, *, top=None, n=ORBIT_POINTS):
    """Both routes of one half-map side by side on a grid of its domain.

    The grid runs from the anchor to ``top`` (default: a window around the
    anchor, at most 2, kept inside the discovered domain). Returns the two
    :class:`HalfMapOrbit` objects and the discovered domain.

    Raises
    ------
    DomainError
        ``top`` lies beyond the discovered domain.
    """
    icfg = cfg.integrator
    anchor = anchor_orbit(p, half, direction, icfg)
    lo, hi = discover_domain(p, half, direction, icfg, cap=cfg.scan.domain_cap, anchor=anchor)
    interior = lo + 0.99 * (hi - lo) if hi < cfg.scan.domain_cap else hi
    if top is None:
        top = min(max(2.0, 2.0 * lo), interior)
    elif not lo < top <= hi:
        raise DomainError(
            f"y0 = {top:g} is outside the discovered domain [{lo:.12g}, {hi:.12g}] "
            f"of the {half.value}/{direction.value} half-map"
        )
    grid = np.linspace(lo, top, n)
    orbits = {}
    for m in ("cubic", "direct"):
        orbits[m] = build_orbit(
            p, half, direction, grid, icfg, method=m, domain=(lo, hi), anchor=anchor,
            keep_path=(m == "cubic"),
        )
    return orbits, (lo, hi)


def _graph_in_window(orb, window):
    """Dense polyline of a cubic orbit, clipped to the plotted window."""
    pts = orb.path or orb.samples
    out = [list(q) for q in pts if q[0] <= window and q[1] >= -window]
    return out


def build_record(cfg: RunConfig) -> dict:
    """Run the full pipeline for ``cfg`` and return the record as plain data.

    Numerical failures propagate as :class:`~pwlcl.errors.PwlError`.
    """
    clock = {}
    t_all = time.perf_counter()
    p, verdict, warnings = resolve_input(cfg)
    for w in warnings:
        log.warning(w)
    rec = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "params": p.to_dict() if p is not None else None,
        "verdict": verdict.value,
        "warnings": warnings,
        "searches": {},
        "cycle": None,
    }
    if not verdict.admits_cycle:
        rec["timing"] = {"total_s": time.perf_counter() - t_all}
        return rec

    scan = cfg.scan_config
    methods = ["cubic", "direct"] if cfg.method == "both" else [cfg.method]
    for m in methods:
        t0 = time.perf_counter()
        search = analyze_cycle(p, scan, m)
        clock[f"search_{m}_s"] = time.perf_counter() - t0
        rec["searches"][m] = _search_dict(search, cfg.emit.orbits)
    primary = rec["searches"][methods[0]]
    rec["cycle"] = primary["cycle"]
    if len(methods) == 2:
        a, b = (rec["searches"][m]["cycle"] for m in methods)
        if (a is None) != (b is None):
            log.warning("the two routes disagree on the existence of a limit cycle")

    t0 = time.perf_counter()
    anchors = []
    for half, direction in MAPS:
        try:
            anchors.append(anchor_orbit(p, half, direction, cfg.integrator))
        except DomainError:
            pass
    window = window_for(rec["cycle"], anchors)
    half_maps = {}
    graphs = {}
    for half, direction in MAPS:
        key = half.value
        try:
            orbits, _ = halfmap_table(p, half, direction, cfg, top=None)
        except DomainError as exc:
            half_maps[key] = {"error": f"{type(exc).__name__}: {exc}"}
            continue
        half_maps[key] = {m: _orbit_dict(o) for m, o in orbits.items()}
        graphs[key] = _graph_in_window(orbits["cubic"], window)
    rec["half_maps"] = half_maps
    clock["half_maps_s"] = time.perf_counter() - t0

    gamma = sample_gamma(p, np.linspace(0.0, window, 201), y1_min=-window)
    rec["gamma"] = {
        "coefficients": {"c0": gamma.coeffs.c0, "c11": gamma.coeffs.c11, "c1": gamma.coeffs.c1},
        "samples": [list(q) for q in gamma.branch_samples],
        "regions": region_census(p, window),
    }
    rec["audit"] = {k: crossing_audit(p, g) for k, g in graphs.items() if g}

    if cfg.emit.figures:
        t0 = time.perf_counter()
        cyc = rec["cycle"]
        orbit = cyc.get("orbit") if cyc else None
        rec["figures"] = {
            "phase_planes": figdata.phase_plane_data(p, window, orbit, cfg.integrator),
            "cubic_fields": figdata.cubic_field_data(p, window, graphs, cfg.integrator),
            "q_diagram": figdata.q_diagram_data(
                p, window, graphs, (cyc["y0_star"], cyc["y1_star"]) if cyc else None
            ),
        }
        clock["figures_s"] = time.perf_counter() - t0
    clock["total_s"] = time.perf_counter() - t_all
    rec["timing"] = clock
    return rec


def _clean(obj):
    # JSON has no NaN/inf; store them as strings and keep everything else as is
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def save_record(rec: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(rec), indent=1, allow_nan=False) + "\n", encoding="utf-8")
    return path


def load_record(path) -> dict:
    """Read a record and check its schema version.

    Raises
    ------
    ConfigError
        Unreadable file, invalid JSON or unknown schema.
    """
    path = Path(path)
    try:
        rec = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read record {path}: {exc}") from exc
    if not isinstance(rec, dict) or rec.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: not a {SCHEMA_VERSION} record")
    return rec
