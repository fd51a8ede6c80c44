"""Raw two-zone systems, their Liénard canonical form, and existence verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import A12Zero

__all__ = [
    "PwlSystem",
    "LienardParams",
    "Verdict",
    "canonicalize",
    "classify_raw",
    "classify_params",
    "near_degenerate",
]


def _check_finite(obj):
    for name, value in vars(obj).items():
        if not math.isfinite(value):
            raise ValueError(f"{type(obj).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PwlSystem:
    """Continuous piecewise linear system ``x' = A_{L,R} x + b``.

    Only the first column differs between zones; ``a12`` and ``a22`` are
    shared, which is what makes the field continuous across ``x1 = 0``.
    """

    aL11: float
    aL21: float
    aR11: float
    aR21: float
    a12: float
    a22: float
    b1: float
    b2: float

    def __post_init__(self):
        _check_finite(self)

    @classmethod
    def from_matrices(cls, A_L, A_R, b) -> "PwlSystem":
        (l11, l12), (l21, l22) = A_L
        (r11, r12), (r21, r22) = A_R
        if l12 != r12 or l22 != r22:
            raise ValueError("A_L and A_R must share their second column for continuity")
        return cls(l11, l21, r11, r21, l12, l22, b[0], b[1])

    @property
    def A_L(self):
        return ((self.aL11, self.a12), (self.aL21, self.a22))

    @property
    def A_R(self):
        return ((self.aR11, self.a12), (self.aR21, self.a22))


@dataclass(frozen=True)
class LienardParams:
    """The five scalars of the canonical form.

    Left zone ``x < 0``: ``x' = tL x - y``, ``y' = dL x - a``; the right zone
    uses ``tR``, ``dR``.
    """

    tL: float
    tR: float
    dL: float
    dR: float
    a: float

    def __post_init__(self):
        _check_finite(self)

    def as_tuple(self):
        return (self.tL, self.tR, self.dL, self.dR, self.a)

    def to_dict(self):
        return {"tL": self.tL, "tR": self.tR, "dL": self.dL, "dR": self.dR, "a": self.a}


class Verdict(Enum):
    MAY_HAVE_LIMIT_CYCLE = "MayHaveLimitCycle"
    NO_PERIODIC_ORBIT_A12_ZERO = "NoPeriodicOrbit_A12Zero"
    NO_LIMIT_CYCLE_HOMOGENEOUS = "NoLimitCycle_Homogeneous"
    NO_LIMIT_CYCLE_TRACE_PRODUCT = "NoLimitCycle_TraceProductNonNegative"

    @property
    def admits_cycle(self) -> bool:
        return self is Verdict.MAY_HAVE_LIMIT_CYCLE


def canonicalize(sys: PwlSystem) -> LienardParams:
    """Reduce ``sys`` to Liénard form via ``(x, y) = (x1, a22 x1 - a12 x2 - b1)``.

    Raises
    ------
    A12Zero
        If ``sys.a12 == 0``.
    """
    if sys.a12 == 0.0:
        raise A12Zero("a12 = 0: system has no periodic orbits and no Liénard form")
    tL = sys.aL11 + sys.a22
    tR = sys.aR11 + sys.a22
    dL = sys.aL11 * sys.a22 - sys.a12 * sys.aL21
    dR = sys.aR11 * sys.a22 - sys.a12 * sys.aR21
    a = sys.a12 * sys.b2 - sys.a22 * sys.b1
    return LienardParams(tL, tR, dL, dR, a)


def classify_params(p: LienardParams) -> Verdict:
    # exact sign tests, no tolerance
    if p.a == 0.0:
        return Verdict.NO_LIMIT_CYCLE_HOMOGENEOUS
    # compare signs, not the product: tL * tR can underflow to -0.0
    if not ((p.tL > 0.0 and p.tR < 0.0) or (p.tL < 0.0 and p.tR > 0.0)):
        return Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT
    return Verdict.MAY_HAVE_LIMIT_CYCLE


def classify_raw(sys: PwlSystem) -> Verdict:
    if sys.a12 == 0.0:
        return Verdict.NO_PERIODIC_ORBIT_A12_ZERO
    return classify_params(canonicalize(sys))


def near_degenerate(p: LienardParams, eps: float = 1e-12) -> list[str]:
    """Warnings for inputs whose verdict hinges on a value below ``eps``."""
    out = []
    if p.a != 0.0 and abs(p.a) < eps:
        out.append(f"|a| = {abs(p.a):.3g} < {eps:g}: verdict sensitive to rounding")
    prod = abs(p.tL) * abs(p.tR)
    if p.tL != 0.0 and p.tR != 0.0 and prod < eps:
        out.append(f"|tL*tR| = {abs(prod):.3g} < {eps:g}: verdict sensitive to rounding")
    return out
