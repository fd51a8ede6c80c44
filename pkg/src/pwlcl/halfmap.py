"""Poincaré half-maps as orbits of a cubic vector field.

For one linear system ``x' = T x - y, y' = D x - a`` the graph
``{(y0, y1) : y1 = half-map(y0)}`` of its forward (and of its backward)
half-map is an orbit of

    X(y0, y1) = -(y1 W(y0), y0 W(y1)),   W(y) = D y^2 - a T y + a^2,

oriented so that ``y0`` increases. Evaluating a half-map therefore needs no
flight time: integrate ``X`` from a point of the graph on the border of the
fourth quadrant ``Q = {y1 <= 0 <= y0}`` until the abscissa reaches the
target. The direct flow of :mod:`pwlcl.flow` supplies that starting point
when it is not the origin, and serves as the cross-check everywhere else.

Only the two maps that glue into orbits of the piecewise system are
supported: the forward map of the left system (``y_L``) and the backward map
of the right system (``y_R``).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from ._rk import ESCAPE, Dopri54
from .errors import AnchorStall, DomainError, LeftQ, NoReturn, WViolation
from .flow import DEFAULT_CONFIG, Direction, Half, IntegratorConfig, integrate_half_return
from .lienard import LienardParams

__all__ = [
    "WPoly",
    "CubicField",
    "HalfMapOrbit",
    "MAPS",
    "w_eval",
    "w_positive_on",
    "cubic_field_eval",
    "extends_to_origin",
    "origin_branch",
    "half_map_direct",
    "anchor_orbit",
    "trace_cubic",
    "half_map_cubic",
    "discover_domain",
    "build_orbit",
]

#: the (half, direction) pairs whose graphs live in Q
MAPS = ((Half.LEFT, Direction.FORWARD), (Half.RIGHT, Direction.BACKWARD))

DEFAULT_DOMAIN_CAP = 1e6


@dataclass(frozen=True)
class WPoly:
    d: float
    t: float
    a: float

    @classmethod
    def for_half(cls, p: LienardParams, half: Half) -> "WPoly":
        if half is Half.LEFT:
            return cls(p.dL, p.tL, p.a)
        return cls(p.dR, p.tR, p.a)

    def __call__(self, y):
        return w_eval(self, y)


def w_eval(w: WPoly, y: float) -> float:
    return w.d * y * y - w.a * w.t * y + w.a * w.a


def w_positive_on(w: WPoly, lo: float, hi: float) -> bool:
    """True iff ``min W > 0`` on ``[lo, hi]``, from the vertex and the endpoints."""
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    m = min(w_eval(w, lo), w_eval(w, hi))
    if w.d > 0.0:
        v = w.a * w.t / (2.0 * w.d)
        if lo < v < hi:
            m = min(m, w_eval(w, v))
    return m > 0.0


@dataclass(frozen=True)
class CubicField:
    w: WPoly

    @classmethod
    def for_half(cls, p: LienardParams, half: Half) -> "CubicField":
        return cls(WPoly.for_half(p, half))

    def __call__(self, y0, y1):
        return cubic_field_eval(self, y0, y1)


def cubic_field_eval(f: CubicField, y0: float, y1: float) -> tuple[float, float]:
    w = f.w
    return (-y1 * w_eval(w, y0), -y0 * w_eval(w, y1))


def _check_map(half, direction):
    if (half, direction) not in MAPS:
        raise ValueError(
            f"{direction.value} map of the {half.value} system does not live in Q; "
            "use (left, forward) or (right, backward)"
        )


def extends_to_origin(p: LienardParams, half: Half, direction: Direction) -> bool:
    """Whether this half-map extends continuously to ``y0 = 0`` with value 0.

    ``x'' = a`` at the origin, so the contact orbit touches ``x = 0`` from the
    right when ``a > 0`` (small orbits of the left system then make short
    arcs around the origin) and from the left when ``a < 0``.
    """
    _check_map(half, direction)
    if p.a == 0.0:
        return False
    return p.a > 0.0 if half is Half.LEFT else p.a < 0.0


def origin_branch(w: WPoly, y0: float) -> float:
    """Third-order expansion of the graph leaving the origin.

    The origin is a saddle of ``X`` whose unstable direction is ``(1, -1)``;
    matching ``dy1/dy0 = y0 W(y1) / (y1 W(y0))`` term by term gives
    ``y1 = -y0 - (2u/3) y0^2 - (4u^2/9) y0^3 + O(y0^4)``, ``u = T/a``.
    """
    u = w.t / w.a
    return -y0 - (2.0 * u / 3.0) * y0 * y0 - (4.0 * u * u / 9.0) * y0 ** 3


def _branch_radius(w: WPoly) -> float:
    # keep (u y0)^4 and D y0^4 / a^2 far below the integrator tolerance
    scale = 1.0
    if w.t != 0.0:
        scale = min(scale, abs(w.a / w.t))
    if w.d != 0.0:
        scale = min(scale, abs(w.a) / math.sqrt(abs(w.d)))
    return 1e-3 * scale


def half_map_direct(
    p: LienardParams,
    half: Half,
    direction: Direction,
    y0: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> float:
    """Half-map value by direct integration of the linear flow."""
    return integrate_half_return(p, half, direction, y0, cfg).y_return


def anchor_orbit(
    p: LienardParams,
    half: Half,
    direction: Direction,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> tuple[float, float]:
    """Point where the half-map graph meets the border of Q.

    ``(0, 0)`` if the map extends to the origin. Otherwise the orbit of the
    linear system through the origin is followed: in the map's own time
    direction it returns at ``(0, ybar1)`` and the anchor is ``(0, ybar1)``;
    failing that, in the opposite direction it comes back at ``(0, ybar0)``
    and the orbit through ``(0, ybar0)`` lands tangentially on the origin, so
    the anchor is ``(ybar0, 0)``.

    Raises
    ------
    NoReturn
        Neither contact orbit reaches ``x = 0`` again.
    """
    _check_map(half, direction)
    if extends_to_origin(p, half, direction):
        return (0.0, 0.0)
    try:
        return (0.0, half_map_direct(p, half, direction, 0.0, cfg))
    except NoReturn as first:
        opposite = Direction.BACKWARD if direction is Direction.FORWARD else Direction.FORWARD
        try:
            ybar0 = integrate_half_return(p, half, opposite, 0.0, cfg).y_return
        except NoReturn:
            raise NoReturn(
                f"{half.value}/{direction.value} graph does not reach the border of Q: {first}",
                cfg.t_max,
            ) from None
        return (ybar0, 0.0)


def _normalized(field_):
    def g(y0, y1):
        u, v = field_(y0, y1)
        n = math.hypot(u, v)
        if n == 0.0:
            return (0.0, 0.0)
        return (u / n, v / n)

    return g


def trace_cubic(
    p: LienardParams,
    half: Half,
    direction: Direction,
    targets,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    *,
    anchor=None,
    path=None,
    stop_at=None,
):
    """Half-map values at every abscissa in ``targets`` from one orbit of ``X``.

    The field is normalized to unit length, so the integration variable is
    arc length and the zeros of ``X`` on the axes cause no step collapse.
    Positivity of ``W`` on ``[y1, y0]`` is asserted at every accepted step.

    Parameters
    ----------
    targets : iterable of float
        Abscissas ``>= 0``, any order.
    anchor : (float, float), optional
        Precomputed :func:`anchor_orbit`.
    path : list, optional
        Receives every accepted ``(y0, y1)`` point of the orbit.
    stop_at : float, optional
        Keep integrating up to this abscissa even after the last target; with
        no targets this turns the call into a domain probe.

    Returns
    -------
    list of float
        ``y1`` per target, in the order given.

    Raises
    ------
    WViolation
        ``W <= 0`` somewhere on ``[y1, y0]``: the target is out of the domain.
    LeftQ
        The orbit leaves Q or escapes to infinity before the target, or the
        target precedes the anchor.
    AnchorStall
        The orbit cannot leave its anchor.
    """
    _check_map(half, direction)
    w = WPoly.for_half(p, half)
    X = CubicField(w)
    targets = [float(t) for t in targets]
    order = sorted(range(len(targets)), key=targets.__getitem__)
    out = [math.nan] * len(targets)

    if anchor is None:
        anchor = anchor_orbit(p, half, direction, cfg)
    s0, s1 = anchor
    if (s0, s1) == (0.0, 0.0):
        eps = _branch_radius(w)
        start = (eps, origin_branch(w, eps))
    else:
        eps = 0.0
        start = (s0, s1)

    pending = []
    for i in order:
        t = targets[i]
        if t < 0.0 or not math.isfinite(t):
            raise ValueError(f"target abscissa must be finite and >= 0, got {t}")
        if eps > 0.0 and t <= eps:
            out[i] = origin_branch(w, t)
        elif t == start[0]:
            out[i] = start[1]
        elif t < start[0]:
            raise LeftQ(
                f"y0 = {t:g} precedes the start {start[0]:g} of the "
                f"{half.value}/{direction.value} graph",
                reached=start[0],
            )
        else:
            pending.append(i)
    horizon = max(stop_at or 0.0, targets[pending[-1]] if pending else 0.0)
    if path is not None:
        if eps > 0.0:
            path.append((0.0, 0.0))
        path.append(start)
    if horizon <= start[0]:
        return out

    if not w_positive_on(w, start[1], start[0]):
        raise WViolation(f"W <= 0 on [{start[1]:g}, {start[0]:g}] at the anchor", reached=start[0])
    u, v = X(*start)
    if u == 0.0 and v == 0.0:
        raise AnchorStall(f"cubic field vanishes at the start point {start}")

    solver = Dopri54(_normalized(X), cfg.rel_tol, cfg.abs_tol)
    qtol = 1e-12
    k = 0  # next pending target
    reached = start[0]
    steps = solver.run(*start, t_max=math.inf, max_steps=cfg.max_steps)
    for _, y0, y1, h, y0n, y1n in steps:
        while k < len(pending) and targets[pending[k]] <= y0n:
            tgt = targets[pending[k]]
            etol = cfg.event_tol * max(1.0, abs(y0), abs(y1))
            _, _, yt = solver.locate(y0, y1, h, lambda a_, b_: tgt - a_, etol)
            out[pending[k]] = yt
            k += 1
        if path is not None:
            path.append((y0n, y1n))
        if y1n > qtol * (1.0 + abs(y0n)) or y0n < -qtol * (1.0 + abs(y1n)):
            raise LeftQ(f"orbit left Q at ({y0n:g}, {y1n:g})", reached=reached)
        if abs(y1n) > ESCAPE or abs(y0n) > ESCAPE:
            raise LeftQ(f"orbit escapes to infinity near y0 = {y0n:g}", reached=reached)
        if not w_positive_on(w, min(y1n, 0.0), max(y0n, 0.0)):
            if k == len(pending) and y0n >= horizon:
                break
            goal = targets[pending[k]] if k < len(pending) else horizon
            raise WViolation(
                f"W <= 0 on [{y1n:g}, {y0n:g}]: y0 = {goal:g} is outside the half-map domain",
                reached=reached,
            )
        reached = max(reached, y0n)
        if k == len(pending) and y0n >= horizon:
            break
    return out


def half_map_cubic(
    p: LienardParams,
    half: Half,
    direction: Direction,
    y0_target: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    *,
    anchor=None,
) -> float:
    """Half-map value at ``y0_target`` through the cubic field."""
    return trace_cubic(p, half, direction, [y0_target], cfg, anchor=anchor)[0]


def discover_domain(
    p: LienardParams,
    half: Half,
    direction: Direction,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    *,
    cap: float = DEFAULT_DOMAIN_CAP,
    method: str = "direct",
    anchor=None,
    refine: int = 24,
) -> tuple[float, float]:
    """Empirical domain ``[lo, hi]`` of a half-map, ``hi <= cap``.

    ``lo`` is the anchor abscissa. ``hi`` doubles from 1 until a domain error
    fires or ``cap`` is reached; a failure is then bracketed and refined
    (``refine`` bisections with the direct flow, or the furthest abscissa the
    cubic orbit reached).
    """
    if anchor is None:
        anchor = anchor_orbit(p, half, direction, cfg)
    lo = anchor[0]
    probes = []
    v = 1.0
    while v < cap:
        if v > lo:
            probes.append(v)
        v *= 2.0
    probes.append(cap)
    if cap <= lo:
        return (lo, lo)

    if method == "cubic":
        try:
            trace_cubic(p, half, direction, [], cfg, anchor=anchor, stop_at=cap)
        except DomainError as exc:
            return (lo, max(lo, exc.reached if exc.reached is not None else lo))
        return (lo, cap)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")

    good, bad = lo, None
    for v in probes:
        try:
            half_map_direct(p, half, direction, v, cfg)
        except DomainError:
            bad = v
            break
        good = v
    if bad is None:
        return (lo, good)
    for _ in range(refine):
        mid = 0.5 * (good + bad)
        try:
            half_map_direct(p, half, direction, mid, cfg)
            good = mid
        except DomainError:
            bad = mid
    return (lo, good)


@dataclass(frozen=True)
class HalfMapOrbit:
    """Sampled graph of one half-map.

    ``samples`` holds ``(y0, y1)`` pairs with ``y0`` increasing, all inside Q.
    ``path`` is the dense polyline of the cubic orbit when it was traced.
    """

    half: Half
    direction: Direction
    anchor: tuple[float, float]
    samples: tuple[tuple[float, float], ...]
    domain_lo: float
    domain_hi: float
    method: str = "cubic"
    path: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    @property
    def label(self) -> str:
        return "yL" if self.half is Half.LEFT else "yR"

    def in_q(self) -> bool:
        return all(y1 <= 0.0 <= y0 for y0, y1 in self.samples)

    def is_monotone(self) -> bool:
        """Strictly decreasing on the interior of Q."""
        inner = [(y0, y1) for y0, y1 in self.samples if y0 > 0.0 and y1 < 0.0]
        return all(b[1] < a[1] for a, b in zip(inner, inner[1:]))

    def w_positive(self, p: LienardParams) -> bool:
        w = WPoly.for_half(p, self.half)
        return all(w_positive_on(w, min(y1, 0.0), max(y0, 0.0)) for y0, y1 in self.samples)

    def value_at(self, y0: float) -> float:
        """Linear interpolation in the samples (for plotting, not analysis)."""
        xs = [s[0] for s in self.samples]
        i = bisect.bisect_left(xs, y0)
        if i == 0:
            return self.samples[0][1]
        if i >= len(xs):
            return self.samples[-1][1]
        (a0, a1), (b0, b1) = self.samples[i - 1], self.samples[i]
        return a1 + (b1 - a1) * (y0 - a0) / (b0 - a0)


def build_orbit(
    p: LienardParams,
    half: Half,
    direction: Direction,
    grid,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    *,
    method: str = "cubic",
    cap: float = DEFAULT_DOMAIN_CAP,
    domain=None,
    anchor=None,
    keep_path: bool = True,
) -> HalfMapOrbit:
    """Discover the domain and sample the graph on ``grid`` (clipped to the domain)."""
    _check_map(half, direction)
    if anchor is None:
        anchor = anchor_orbit(p, half, direction, cfg)
    if domain is None:
        domain = discover_domain(p, half, direction, cfg, cap=cap, anchor=anchor)
    lo, hi = domain
    xs = sorted({float(g) for g in grid if lo <= g <= hi})
    if not xs or xs[0] > lo:
        xs.insert(0, lo)
    path = [] if keep_path else None
    if method == "cubic":
        ys = trace_cubic(p, half, direction, xs, cfg, anchor=anchor, path=path)
    elif method == "direct":
        ys = []
        for x in xs:
            if x == anchor[0]:
                ys.append(anchor[1])
            else:
                ys.append(half_map_direct(p, half, direction, x, cfg))
    else:
        raise ValueError(f"unknown method {method!r}")
    return HalfMapOrbit(
        half,
        direction,
        (float(anchor[0]), float(anchor[1])),
        tuple(zip(xs, ys)),
        lo,
        hi,
        method,
        tuple(path or ()),
    )
