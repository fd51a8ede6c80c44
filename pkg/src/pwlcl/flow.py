"""Direct integration of the canonical piecewise system and its linear halves.

Flights start on (or inside a zone next to) the switching line ``x = 0`` and
stop at the next crossing, located by time bisection. These flights are the
independent oracle for every half-map computed through the cubic field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from ._rk import ESCAPE, Dopri54
from .errors import NoReturn, TangentStart
from .lienard import LienardParams

__all__ = [
    "Half",
    "Direction",
    "PlanarState",
    "IntegratorConfig",
    "FlightResult",
    "half_field",
    "integrate_half_return",
    "integrate_full_orbit",
    "return_ordinates",
    "integrate_span",
]


class Half(Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def side(self) -> int:
        """Sign of ``x`` inside the zone."""
        return -1 if self is Half.LEFT else 1

    @property
    def other(self) -> "Half":
        return Half.RIGHT if self is Half.LEFT else Half.LEFT


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.FORWARD else -1


class PlanarState(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    event_tol: float = 1e-12
    t_max: float = 1e4
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol", "t_max", "max_steps"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"IntegratorConfig.{name} must be positive, got {value!r}")

    @property
    def scale_tol(self) -> float:
        """Accuracy one can expect of a returned ordinate of unit size."""
        return self.rel_tol + self.abs_tol

    def to_dict(self):
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "event_tol": self.event_tol,
            "t_max": self.t_max,
            "max_steps": self.max_steps,
        }


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class FlightResult:
    y_return: float
    flight_time: float
    samples: tuple[PlanarState, ...]
    direction: Direction
    half: Half

    @property
    def start(self) -> PlanarState:
        return self.samples[0]

    @property
    def end(self) -> PlanarState:
        return self.samples[-1]


def _coeffs(p: LienardParams, half: Half):
    return (p.tL, p.dL) if half is Half.LEFT else (p.tR, p.dR)


def half_field(p: LienardParams, half: Half, s) -> tuple[float, float]:
    """Velocity ``(T x - y, D x - a)`` of the linear system of ``half`` at ``s``."""
    t, d = _coeffs(p, half)
    x, y = s
    return (t * x - y, d * x - p.a)


def _make_field(p, half, sign):
    t, d = _coeffs(p, half)
    a = p.a
    if sign > 0:
        return lambda x, y: (t * x - y, d * x - a)
    return lambda x, y: (y - t * x, a - d * x)


def _fly(p, half, direction, x0, y0, cfg):
    """Fly from ``(x0, y0)`` inside or on the border of ``half`` to the next crossing."""
    side = half.side
    sign = direction.sign
    f = _make_field(p, half, sign)
    solver = Dopri54(f, cfg.rel_tol, cfg.abs_tol)

    armed = side * x0 > 0.0
    if x0 == 0.0:
        vx = f(x0, y0)[0]
        if vx == 0.0:
            # y0 = 0: xddot = a at the origin in either time direction
            if p.a == 0.0:
                raise NoReturn("origin is an equilibrium of the homogeneous system", cfg.t_max)
            if side * p.a < 0.0:
                raise TangentStart(
                    f"quadratic contact at the origin curves away from the {half.value} zone "
                    f"(a = {p.a:g})"
                )
        elif side * vx < 0.0:
            raise TangentStart(
                f"{direction.value} flow at (0, {y0:g}) leaves the {half.value} zone immediately"
            )
    elif not armed:
        raise ValueError(f"start ({x0:g}, {y0:g}) is not inside the {half.value} zone")

    state = {"armed": armed}

    def accept(xn, yn):
        # until the trajectory has visibly entered the zone, refuse steps that
        # land on the wrong side: the excursion was stepped over
        if state["armed"]:
            return True
        return side * xn >= 0.0

    g = lambda x, y: side * x  # noqa: E731

    samples = [PlanarState(x0, y0)]
    h0 = None
    if x0 == 0.0 and y0 != 0.0 and p.a != 0.0:
        # a tiny start ordinate can return within ~2|y0/a|
        h0 = min(solver.initial_step(x0, y0, cfg.t_max), 0.05 * abs(y0 / p.a))
    for t, x, y, h, xn, yn in solver.run(
        x0, y0, t_max=cfg.t_max, max_steps=cfg.max_steps, h0=h0, accept=accept
    ):
        if not state["armed"]:
            if side * xn > 0.0:
                state["armed"] = True
            samples.append(PlanarState(xn, yn))
            continue
        if side * xn <= 0.0:
            dt, xe, ye = solver.locate(x, y, h, g, cfg.event_tol)
            samples.append(PlanarState(xe, ye))
            return FlightResult(ye, t + dt, tuple(samples), direction, half)
        if abs(xn) > ESCAPE or abs(yn) > ESCAPE:
            raise NoReturn(f"trajectory escapes to infinity (t = {t:.4g})", cfg.t_max)
        samples.append(PlanarState(xn, yn))
    raise NoReturn(f"no return to x = 0 within t_max = {cfg.t_max:g}", cfg.t_max)


def integrate_half_return(
    p: LienardParams,
    half: Half,
    direction: Direction,
    y0: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> FlightResult:
    """First return to ``x = 0`` of one linear half-system started at ``(0, y0)``.

    The trajectory is integrated with the linear field of ``half`` only (the
    other zone is ignored) and must stay in that zone until it returns.

    Raises
    ------
    NoReturn
        ``t_max`` reached or the trajectory escapes to infinity: ``y0`` is
        outside the half-map domain.
    StepLimit
        ``max_steps`` exceeded.
    TangentStart
        The trajectory leaves the zone right away; for ``y0 = 0`` this is the
        quadratic contact curving to the other side.
    """
    if not math.isfinite(y0):
        raise ValueError("y0 must be finite")
    return _fly(p, half, direction, 0.0, float(y0), cfg)


def _zone_of(p, x, y):
    if x < 0.0:
        return Half.LEFT
    if x > 0.0:
        return Half.RIGHT
    vx = -y  # T*0 - y
    if vx != 0.0:
        return Half.LEFT if vx < 0.0 else Half.RIGHT
    if p.a == 0.0:
        raise NoReturn("origin is an equilibrium of the homogeneous system")
    return Half.LEFT if p.a < 0.0 else Half.RIGHT


def integrate_full_orbit(
    p: LienardParams,
    start,
    n_crossings: int,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> list[FlightResult]:
    """Follow the piecewise system forward through ``n_crossings`` switchings."""
    x, y = float(start[0]), float(start[1])
    half = _zone_of(p, x, y)
    flights = []
    for _ in range(n_crossings):
        fl = _fly(p, half, Direction.FORWARD, x, y, cfg)
        flights.append(fl)
        x, y = 0.0, fl.y_return
        half = half.other
    return flights


def return_ordinates(
    p: LienardParams, y0: float, n_returns: int, cfg: IntegratorConfig = DEFAULT_CONFIG
) -> list[float]:
    """Successive upper crossings ``(0, y)``, ``y > 0``, of the orbit through ``(0, y0)``.

    Stops early (shorter list) if the orbit stops returning.
    """
    out = [float(y0)]
    y = float(y0)
    for _ in range(n_returns):
        try:
            left = _fly(p, Half.LEFT, Direction.FORWARD, 0.0, y, cfg)
            right = _fly(p, Half.RIGHT, Direction.FORWARD, 0.0, left.y_return, cfg)
        except (NoReturn, TangentStart):
            break
        y = right.y_return
        out.append(y)
    return out


def integrate_span(
    p: LienardParams,
    half: Half,
    start,
    duration: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    bound: float = math.inf,
) -> list[PlanarState]:
    """Polyline of one linear half-system over ``[0, duration]`` (negative = backward).

    No zone restriction: used to draw full phase planes. Stops early when the
    state leaves the box ``|x|, |y| <= bound``.
    """
    sign = 1 if duration >= 0 else -1
    f = _make_field(p, half, sign)
    solver = Dopri54(f, cfg.rel_tol, cfg.abs_tol)
    x0, y0 = float(start[0]), float(start[1])
    pts = [PlanarState(x0, y0)]
    if duration == 0:
        return pts
    hmax = abs(duration) / 50.0
    h0 = solver.initial_step(x0, y0, hmax)
    for _, _, _, _, xn, yn in solver.run(
        x0, y0, t_max=abs(duration), max_steps=cfg.max_steps, h0=h0, hmax=hmax
    ):
        pts.append(PlanarState(xn, yn))
        if abs(xn) > bound or abs(yn) > bound:
            break
    return pts
