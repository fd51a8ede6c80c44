"""The bilinear function F, its zero set gamma, and the regions R+ / R- of Q.

At a periodic orbit through ``(0, y0)`` and ``(0, y1)`` the derivative of
the displacement function is ``C(y0, y1) F(y0, y1)`` with ``C > 0`` in the
interior of Q, so the sign of ``F`` decides stability. Along ``F = 0`` both
cubic fields point the same way, into ``R+``, which is what forbids a second
intersection of the two half-map graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DegenerateF, DiagonalPoint, NotOnGamma, OutsideQ, WNonPositive, ZeroY1
from .flow import Half
from .halfmap import CubicField, WPoly, w_eval
from .lienard import LienardParams

__all__ = [
    "FCoefficients",
    "GammaCurve",
    "RegionLabel",
    "f_coefficients",
    "f_expanded",
    "f_gradient",
    "f_quotient",
    "c_eval",
    "gamma_solve_y1",
    "sample_gamma",
    "default_gamma_tol",
    "region_classify",
    "sign_a_tl",
    "g_inner",
    "g_on_gamma",
    "unit",
    "region_sequence",
    "region_census",
    "crossing_audit",
]


@dataclass(frozen=True)
class FCoefficients:
    """``F(y0, y1) = c0 + c11 y0 y1 + c1 (y0 + y1)``."""

    c0: float
    c11: float
    c1: float

    @property
    def degenerate(self) -> bool:
        return self.c0 == 0.0 and self.c11 == 0.0 and self.c1 == 0.0

    def __call__(self, y0, y1):
        return self.c0 + self.c11 * y0 * y1 + self.c1 * (y0 + y1)


def f_coefficients(p: LienardParams) -> FCoefficients:
    a = p.a
    return FCoefficients(
        c0=a ** 3 * (p.tL - p.tR),
        c11=a * (p.dL * p.tR - p.dR * p.tL),
        c1=a * a * (p.dR - p.dL),
    )


def _exact(p: LienardParams):
    return tuple(Fraction(v) for v in (p.tL, p.tR, p.dL, p.dR, p.a))


def f_expanded(p: LienardParams, y0: float, y1: float) -> float:
    """``c0 + c11 y0 y1 + c1 (y0 + y1)``, correctly rounded.

    Evaluated in rationals: near gamma the float terms cancel and lose
    more digits than the comparison with :func:`f_quotient` allows.
    """
    tL, tR, dL, dR, a = _exact(p)
    u, v = Fraction(y0), Fraction(y1)
    return float(
        a ** 3 * (tL - tR) + a * (dL * tR - dR * tL) * u * v + a * a * (dR - dL) * (u + v)
    )


def f_gradient(p: LienardParams, y0: float, y1: float) -> tuple[float, float]:
    c = f_coefficients(p)
    return (c.c11 * y1 + c.c1, c.c11 * y0 + c.c1)


def f_quotient(p: LienardParams, y0: float, y1: float) -> float:
    """``(W_L(y1) W_R(y0) - W_L(y0) W_R(y1)) / (y0 - y1)``, correctly rounded."""
    if y0 == y1:
        raise DiagonalPoint(f"quotient form undefined on the diagonal y0 = y1 = {y0:g}")
    tL, tR, dL, dR, a = _exact(p)
    u, v = Fraction(y0), Fraction(y1)

    def w(d, t, y):
        return d * y * y - a * t * y + a * a

    num = w(dL, tL, v) * w(dR, tR, u) - w(dL, tL, u) * w(dR, tR, v)
    return float(num / (u - v))


def c_eval(p: LienardParams, y0: float, y1: float) -> float:
    """``-y0 (y0 - y1) / (y1 W_R(y0) W_L(y0))``; positive on the interior of Q."""
    if y1 == 0.0:
        raise ZeroY1("C is singular at y1 = 0")
    wl0 = w_eval(WPoly.for_half(p, Half.LEFT), y0)
    wr0 = w_eval(WPoly.for_half(p, Half.RIGHT), y0)
    if wl0 <= 0.0 or wr0 <= 0.0:
        raise WNonPositive(f"W_L(y0) = {wl0:g}, W_R(y0) = {wr0:g} must both be positive")
    return -y0 * (y0 - y1) / (y1 * wr0 * wl0)


def default_gamma_tol(p: LienardParams) -> float:
    c = f_coefficients(p)
    return 1e-9 * (1.0 + abs(c.c0) + abs(c.c11) + abs(c.c1))


def gamma_solve_y1(p: LienardParams, y0: float):
    """The ``y1 <= 0`` with ``F(y0, y1) = 0`` for ``y0 >= 0``, or None.

    ``F`` is affine in ``y1`` once ``y0`` is fixed. None when the
    coefficient of ``y1`` vanishes or the solution is outside Q.
    """
    c = f_coefficients(p)
    if c.degenerate:
        raise DegenerateF("F vanishes identically (identical zones): gamma is not a curve")
    den = c.c11 * y0 + c.c1
    if den == 0.0 or y0 < 0.0:
        return None
    y1 = -(c.c0 + c.c1 * y0) / den
    if y1 > 0.0:
        return None
    return y1


@dataclass(frozen=True)
class GammaCurve:
    coeffs: FCoefficients
    branch_samples: tuple[tuple[float, float], ...]


def sample_gamma(p: LienardParams, grid, y1_min: float = -math.inf) -> GammaCurve:
    """Points of gamma in Q above ``y1_min`` at the abscissas of ``grid``."""
    pts = []
    for y0 in grid:
        y1 = gamma_solve_y1(p, float(y0))
        if y1 is not None and y1 >= y1_min:
            pts.append((float(y0), y1))
    return GammaCurve(f_coefficients(p), tuple(pts))


class RegionLabel(Enum):
    R_PLUS = "R+"
    R_MINUS = "R-"
    ON_GAMMA = "gamma"


def sign_a_tl(p: LienardParams) -> float:
    """``sign(a tL)`` from the factor signs, immune to underflow of the product."""
    if p.a == 0.0 or p.tL == 0.0:
        return 0.0
    return math.copysign(1.0, p.a) * math.copysign(1.0, p.tL)


def region_classify(p: LienardParams, y0: float, y1: float, tol: float | None = None) -> RegionLabel:
    """Label of a point of Q: ``R+`` where ``sign F = sign(a tL)``."""
    if not (y1 <= 0.0 <= y0):
        raise OutsideQ(f"({y0:g}, {y1:g}) is not in Q")
    if tol is None:
        tol = default_gamma_tol(p)
    f = f_expanded(p, y0, y1)
    if abs(f) <= tol:
        return RegionLabel.ON_GAMMA
    s = sign_a_tl(p)
    if s == 0.0:
        raise ValueError("a * tL = 0: the regions R+ and R- are undefined")
    return RegionLabel.R_PLUS if f * s > 0.0 else RegionLabel.R_MINUS


def g_on_gamma(p: LienardParams, half: Half, y0: float, y1: float) -> float:
    """Closed form of the inner product on gamma: ``W_half(y1) a (tL W_R(y0) - tR W_L(y0))``."""
    wl = WPoly.for_half(p, Half.LEFT)
    wr = WPoly.for_half(p, Half.RIGHT)
    wh = wl if half is Half.LEFT else wr
    return w_eval(wh, y1) * p.a * (p.tL * w_eval(wr, y0) - p.tR * w_eval(wl, y0))


def g_inner(
    p: LienardParams,
    half: Half,
    y0: float,
    y1: float,
    *,
    tol: float | None = None,
    rel_agree: float = 1e-9,
) -> float:
    """``<grad F, X_half>`` at a point of gamma in the interior of Q.

    Also evaluates the closed form valid on gamma and asserts the two agree
    within ``rel_agree``; the raw inner product is returned.
    """
    if not (y0 > 0.0 and y1 < 0.0):
        raise OutsideQ(f"({y0:g}, {y1:g}) is not in the interior of Q")
    if tol is None:
        tol = default_gamma_tol(p)
    f = f_expanded(p, y0, y1)
    if abs(f) > tol:
        raise NotOnGamma(f"|F({y0:g}, {y1:g})| = {abs(f):.3g} > {tol:.3g}")
    fx, fy = f_gradient(p, y0, y1)
    u, v = CubicField.for_half(p, half)(y0, y1)
    raw = fx * u + fy * v
    closed = g_on_gamma(p, half, y0, y1)
    scale = max(abs(fx * u), abs(fy * v), abs(closed))
    if abs(raw - closed) > rel_agree * scale:
        raise AssertionError(
            f"G_{half.value}: raw {raw!r} and on-gamma form {closed!r} disagree at ({y0}, {y1})"
        )
    return raw


def unit(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n)


def region_sequence(p: LienardParams, points, tol: float | None = None) -> list[RegionLabel]:
    return [region_classify(p, y0, y1, tol) for y0, y1 in points]


def crossing_audit(p: LienardParams, points, tol: float | None = None) -> dict:
    """Summarize how an ordered point sequence of Q moves between R- and R+.

    ``transitions`` lists the label changes, ignoring ``gamma`` labels in
    between (a sample that lands on gamma counts as touching it).
    """
    labels = region_sequence(p, points, tol)
    strict = [lab for lab in labels if lab is not RegionLabel.ON_GAMMA]
    transitions = []
    for a, b in zip(strict, strict[1:]):
        if a is not b:
            transitions.append((a.value, b.value))
    return {
        "start": labels[0].value if labels else None,
        "end": labels[-1].value if labels else None,
        "transitions": transitions,
        "touches_gamma": any(lab is RegionLabel.ON_GAMMA for lab in labels),
        "regions": sorted({lab.value for lab in labels}),
    }


def region_census(p: LienardParams, window: float, n: int = 60) -> dict:
    """Region counts on an ``n x n`` grid of int(Q) within ``[0, window] x [-window, 0]``.

    ``r_minus_empty`` holds for the sampled window only; it is not a
    certificate for all of Q.
    """
    ticks = np.linspace(0.0, window, n + 1)[1:]
    counts = {lab.value: 0 for lab in RegionLabel}
    for y0 in ticks:
        for y1 in -ticks:
            counts[region_classify(p, float(y0), float(y1)).value] += 1
    return {"window": window, "grid": n, "counts": counts, "r_minus_empty": counts["R-"] == 0}
