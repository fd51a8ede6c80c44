"""Numerical content of the three figures, computed once and stored in the record.

* phase planes: orbits of each linear system over the whole plane, cut into
  runs that lie in the system's own zone (solid, real pieces of orbits of
  the piecewise system) or in the other zone (dotted);
* cubic fields: unit arrows of ``X_L`` and ``X_R`` on a grid of Q with a few
  of their orbits, the half-map graph among them;
* Q-diagram: both half-map graphs, the curve ``F = 0`` and unit arrows of the
  cubic fields along it, plus the cycle point when there is one.
"""

from __future__ import annotations

import math

from .._rk import Dopri54
from ..errors import StepLimit
from ..flow import DEFAULT_CONFIG, Half, IntegratorConfig, integrate_span
from ..geometry import gamma_solve_y1
from ..halfmap import CubicField
from ..lienard import LienardParams

__all__ = [
    "segment_by_zone",
    "phase_plane_data",
    "trace_field",
    "quiver",
    "cubic_field_data",
    "gamma_branches",
    "q_diagram_data",
]

QUIVER_N = 15


def segment_by_zone(points, half: Half):
    """Split a polyline into ``(solid, run)`` pieces by zone membership.

    A segment is solid when it lies in the closed zone of ``half``. Segments
    crossing ``x = 0`` are cut at the interpolated crossing, so consecutive
    runs share an endpoint.
    """
    side = half.side
    pieces = []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 * x1 < 0.0:
            cut = [0.0, y0 + x0 / (x0 - x1) * (y1 - y0)]
            pieces.append((side * x0 > 0.0, [x0, y0], cut))
            pieces.append((side * x1 > 0.0, cut, [x1, y1]))
        else:
            pieces.append((side * (x0 + x1) >= 0.0, [x0, y0], [x1, y1]))
    runs = []
    for solid, a, b in pieces:
        if runs and runs[-1][0] is solid:
            runs[-1][1].append(b)
        else:
            runs.append((solid, [a, b]))
    return runs


def _time_scale(t, d):
    disc = t * t - 4.0 * d
    if disc < 0.0:
        return 4.0 * math.pi / math.sqrt(-disc)
    r = math.sqrt(disc)
    return 4.0 / max(abs(0.5 * (t + r)), abs(0.5 * (t - r)), 1e-3)


def phase_plane_data(
    p: LienardParams,
    window: float,
    cycle_orbit=None,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    n_seeds: int = 5,
):
    """Per-half panels of orbit runs for the phase-plane figure."""
    panels = {}
    bound = 3.0 * window
    for half in (Half.LEFT, Half.RIGHT):
        t, d = (p.tL, p.dL) if half is Half.LEFT else (p.tR, p.dR)
        duration = min(_time_scale(t, d), 200.0)
        curves = []
        seeds = [(0.0, window * (k + 1) / n_seeds) for k in range(n_seeds)]
        seeds += [(0.0, -window * (k + 1) / n_seeds) for k in range(n_seeds)]
        for i, s in enumerate(seeds):
            fwd = integrate_span(p, half, s, duration, cfg, bound)
            bwd = integrate_span(p, half, s, -duration, cfg, bound)
            pts = [[q.x, q.y] for q in reversed(bwd)] + [[q.x, q.y] for q in fwd[1:]]
            for j, (solid, run) in enumerate(segment_by_zone(pts, half)):
                curves.append(
                    {
                        "id": f"orbit{i}.{j}",
                        "role": "orbit",
                        "style": "solid" if solid else "dotted",
                        "points": run,
                    }
                )
        if cycle_orbit:
            piece = [list(q) for q in cycle_orbit if half.side * q[0] >= 0.0]
            if len(piece) > 1:
                curves.append({"id": "cycle", "role": "cycle", "style": "solid", "points": piece})
        panels[half.value] = {"curves": curves}
    return {"window": window, "panels": panels}


def trace_field(field_, start, length, box, cfg: IntegratorConfig = DEFAULT_CONFIG):
    """Arclength polyline of ``field_`` from ``start`` (negative length = reverse).

    Stops at the end of ``length``, on leaving ``box = (x0, x1, y0, y1)``, or
    at an equilibrium.
    """
    sign = 1.0 if length >= 0 else -1.0

    def g(u, v):
        fx, fy = field_(u, v)
        n = math.hypot(fx, fy)
        if n == 0.0 or not math.isfinite(n):
            return (0.0, 0.0)
        return (sign * fx / n, sign * fy / n)

    x, y = float(start[0]), float(start[1])
    pts = [[x, y]]
    if g(x, y) == (0.0, 0.0):
        return pts
    solver = Dopri54(g, max(cfg.rel_tol, 1e-9), max(cfg.abs_tol, 1e-11))
    hmax = abs(length) / 100.0
    bx0, bx1, by0, by1 = box
    try:
        for _, _, _, _, xn, yn in solver.run(
            x, y, t_max=abs(length), max_steps=cfg.max_steps, h0=hmax / 10.0, hmax=hmax
        ):
            pts.append([xn, yn])
            if not (bx0 <= xn <= bx1 and by0 <= yn <= by1):
                break
    except StepLimit:
        pass  # a figure curve may stop early
    return pts


def quiver(field_, box, n: int = QUIVER_N):
    """Unit arrows ``[x, y, u, v]`` of ``field_`` on an ``n`` by ``n`` grid of ``box``."""
    x0, x1, y0, y1 = box
    out = []
    for i in range(n):
        for j in range(n):
            x = x0 + (x1 - x0) * (i + 0.5) / n
            y = y0 + (y1 - y0) * (j + 0.5) / n
            u, v = field_(x, y)
            r = math.hypot(u, v)
            if r > 0.0 and math.isfinite(r):
                out.append([x, y, u / r, v / r])
    return out


def cubic_field_data(p: LienardParams, window: float, graphs, cfg: IntegratorConfig = DEFAULT_CONFIG):
    """Quiver and orbits of ``X_L`` and ``X_R`` on ``[0, window] x [-window, 0]``.

    ``graphs`` maps ``"left"``/``"right"`` to the half-map graph polyline.
    """
    box = (0.0, window, -window, 0.0)
    panels = {}
    for half in (Half.LEFT, Half.RIGHT):
        field_ = CubicField.for_half(p, half)
        curves = []
        for k in range(1, 5):
            s = (window * k / 5.0, -window * k / 5.0)
            fwd = trace_field(field_, s, 2.5 * window, box, cfg)
            bwd = trace_field(field_, s, -2.5 * window, box, cfg)
            pts = list(reversed(bwd)) + fwd[1:]
            if len(pts) > 1:
                curves.append({"id": f"orbit{k}", "style": "thin", "points": pts})
        graph = graphs.get(half.value)
        if graph:
            curves.append({"id": "graph", "style": "thick", "points": [list(q) for q in graph]})
        panels[half.value] = {"arrows": quiver(field_, box), "curves": curves}
    return {"window": window, "panels": panels}


def gamma_branches(p: LienardParams, window: float, n: int = 400):
    """Connected runs of ``F = 0`` in ``[0, window] x [-window, 0]``."""
    runs, cur = [], []
    for i in range(n + 1):
        y0 = window * i / n
        y1 = gamma_solve_y1(p, y0)
        if y1 is None or y1 < -window:
            if len(cur) > 1:
                runs.append(cur)
            cur = []
            continue
        cur.append([y0, y1])
    if len(cur) > 1:
        runs.append(cur)
    return runs


def q_diagram_data(p: LienardParams, window: float, graphs, cycle_point=None, n_arrows: int = 12):
    """Half-map graphs, the dashed curve ``F = 0`` and unit arrows of ``X_L, X_R`` on it."""
    branches = gamma_branches(p, window)
    fl = CubicField.for_half(p, Half.LEFT)
    fr = CubicField.for_half(p, Half.RIGHT)
    arrows = []
    pts = [q for br in branches for q in br if q[0] > 0.0 and q[1] < 0.0]
    if pts:
        stride = max(1, len(pts) // n_arrows)
        for y0, y1 in pts[stride // 2 :: stride]:
            ul, vl = fl(y0, y1)
            ur, vr = fr(y0, y1)
            rl, rr = math.hypot(ul, vl), math.hypot(ur, vr)
            if rl > 0.0 and rr > 0.0:
                arrows.append([y0, y1, ul / rl, vl / rl, ur / rr, vr / rr])
    curves = [{"id": f"gamma{i}", "style": "dashed", "points": br} for i, br in enumerate(branches)]
    for key, label in (("left", "gamma_L"), ("right", "gamma_R")):
        if graphs.get(key):
            curves.append({"id": label, "style": "solid", "points": [list(q) for q in graphs[key]]})
    return {
        "window": window,
        "curves": curves,
        "arrows": arrows,
        "cycle_point": list(cycle_point) if cycle_point is not None else None,
    }
