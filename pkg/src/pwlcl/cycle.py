"""Displacement function, limit cycle location, and stability.

With ``y_L`` the forward half-map of the left system and ``y_R`` the
backward half-map of the right system, a periodic orbit through
``(0, y0*)``, ``y0* > 0``, is a root of ``delta = y_R - y_L``. Its derivative
there has the closed form ``C F`` (see :mod:`pwlcl.geometry`), and the sign
of ``a * tL`` predicts it: negative means attracting.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum

from scipy.optimize import brentq

from .errors import (
    ClosureFailure,
    Contradiction,
    DomainError,
    EmptyCommonDomain,
    NonHyperbolic,
    StepLimit,
    WNonPositive,
)
from .flow import (
    DEFAULT_CONFIG,
    Direction,
    Half,
    IntegratorConfig,
    PlanarState,
    integrate_half_return,
)
from .geometry import c_eval, f_expanded, sign_a_tl
from .halfmap import (
    DEFAULT_DOMAIN_CAP,
    MAPS,
    WPoly,
    anchor_orbit,
    discover_domain,
    half_map_direct,
    trace_cubic,
    w_eval,
)
from .lienard import LienardParams, Verdict, classify_params

log = logging.getLogger(__name__)

__all__ = [
    "Stability",
    "ScanConfig",
    "DisplacementSample",
    "LimitCycleReport",
    "CycleSearch",
    "MapSetup",
    "prepare_maps",
    "displacement",
    "scan_displacement",
    "find_limit_cycle",
    "analyze_cycle",
    "delta_prime_closed_form",
    "classify_stability",
    "reconstruct_cycle",
    "closure_tol",
    "scan_grid",
]

LEFT_MAP, RIGHT_MAP = MAPS


class Stability(Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"


@dataclass(frozen=True)
class ScanConfig:
    grid_size: int = 64
    grid_lo: float = 1e-3
    domain_cap: float = DEFAULT_DOMAIN_CAP
    root_tol: float = 1e-10
    integrator: IntegratorConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.grid_size < 2:
            raise ValueError("grid_size must be at least 2")
        for name in ("grid_lo", "domain_cap", "root_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"ScanConfig.{name} must be positive")

    def to_dict(self):
        return {
            "grid_size": self.grid_size,
            "grid_lo": self.grid_lo,
            "domain_cap": self.domain_cap,
            "root_tol": self.root_tol,
            "integrator": self.integrator.to_dict(),
        }


DEFAULT_SCAN = ScanConfig()


@dataclass(frozen=True)
class DisplacementSample:
    y0: float
    y_l: float
    y_r: float

    @property
    def delta(self) -> float:
        return self.y_r - self.y_l


@dataclass(frozen=True)
class LimitCycleReport:
    y0_star: float
    y1_star: float
    delta_prime: float
    stability: Stability
    period: float
    orbit: tuple[PlanarState, ...] = field(repr=False)
    y1_star_right: float = math.nan
    method: str = "direct"

    def to_dict(self, with_orbit=True):
        d = {
            "y0_star": self.y0_star,
            "y1_star": self.y1_star,
            "y1_star_right": self.y1_star_right,
            "delta_prime": self.delta_prime,
            "stability": self.stability.value,
            "period": self.period,
            "method": self.method,
        }
        if with_orbit:
            d["orbit"] = [[s.x, s.y] for s in self.orbit]
        return d


@dataclass(frozen=True)
class MapSetup:
    """Anchors and discovered domains of ``y_L`` and ``y_R``."""

    anchor_l: tuple[float, float]
    anchor_r: tuple[float, float]
    domain_l: tuple[float, float]
    domain_r: tuple[float, float]

    @property
    def common(self) -> tuple[float, float]:
        return (max(self.domain_l[0], self.domain_r[0]), min(self.domain_l[1], self.domain_r[1]))

    def to_dict(self):
        return {
            "anchor_l": list(self.anchor_l),
            "anchor_r": list(self.anchor_r),
            "domain_l": list(self.domain_l),
            "domain_r": list(self.domain_r),
        }


@dataclass
class CycleSearch:
    """Everything :func:`analyze_cycle` learned, whether or not a cycle exists."""

    params: LienardParams
    verdict: Verdict
    method: str
    report: LimitCycleReport | None = None
    reason: str = ""
    setup: MapSetup | None = None
    samples: list[DisplacementSample] = field(default_factory=list)
    brackets: list[tuple[float, float]] = field(default_factory=list)


def prepare_maps(
    p: LienardParams, cfg: ScanConfig = DEFAULT_SCAN, method: str = "direct"
) -> MapSetup:
    icfg = cfg.integrator
    anchors = [anchor_orbit(p, h, d, icfg) for h, d in MAPS]
    domains = [
        discover_domain(p, h, d, icfg, cap=cfg.domain_cap, method=method, anchor=anc)
        for (h, d), anc in zip(MAPS, anchors)
    ]
    return MapSetup(anchors[0], anchors[1], domains[0], domains[1])


def _eval_map(p, which, y0, method, anchor, icfg):
    half, direction = which
    if y0 == anchor[0]:
        return anchor[1]
    if method == "direct":
        return half_map_direct(p, half, direction, y0, icfg)
    if method == "cubic":
        return trace_cubic(p, half, direction, [y0], icfg, anchor=anchor)[0]
    raise ValueError(f"unknown method {method!r}")


def displacement(
    p: LienardParams,
    y0: float,
    method: str = "direct",
    cfg: ScanConfig = DEFAULT_SCAN,
    *,
    setup: MapSetup | None = None,
) -> DisplacementSample:
    """``delta(y0) = y_R(y0) - y_L(y0)``.

    Raises
    ------
    EmptyCommonDomain
        ``y0`` is outside the intersection of the two discovered domains.
    """
    if setup is None:
        setup = prepare_maps(p, cfg, method)
    lo, hi = setup.common
    if lo > hi:
        raise EmptyCommonDomain(f"domains {setup.domain_l} and {setup.domain_r} do not meet")
    if not (lo <= y0 <= hi):
        raise EmptyCommonDomain(f"y0 = {y0:g} outside the common domain [{lo:g}, {hi:g}]")
    icfg = cfg.integrator
    yl = _eval_map(p, LEFT_MAP, y0, method, setup.anchor_l, icfg)
    yr = _eval_map(p, RIGHT_MAP, y0, method, setup.anchor_r, icfg)
    return DisplacementSample(float(y0), yl, yr)


def scan_grid(lo: float, hi: float, cfg: ScanConfig = DEFAULT_SCAN) -> list[float]:
    """``lo`` followed by ``grid_size`` log-spaced abscissas up to ``hi``."""
    start = max(cfg.grid_lo, lo)
    if hi <= start:
        return [lo] if lo == hi else [lo, hi]
    n = cfg.grid_size
    r = math.log(hi / start)
    pts = [start * math.exp(r * i / (n - 1)) for i in range(n)]
    pts[-1] = hi
    if lo < start:
        pts.insert(0, lo)
    return pts


def _noise(s: DisplacementSample, icfg: IntegratorConfig) -> float:
    return 100.0 * (icfg.rel_tol * (abs(s.y_l) + abs(s.y_r)) + icfg.abs_tol)


def scan_displacement(
    p: LienardParams,
    cfg: ScanConfig = DEFAULT_SCAN,
    method: str = "direct",
    *,
    setup: MapSetup | None = None,
):
    """Sample ``delta`` on the scan grid; return ``(setup, samples, brackets)``.

    A bracket is a pair of consecutive reliably-signed samples (``|delta|``
    above integration noise) with opposite signs.
    """
    if setup is None:
        setup = prepare_maps(p, cfg, method)
    lo, hi = setup.common
    if lo > hi:
        raise EmptyCommonDomain(f"domains {setup.domain_l} and {setup.domain_r} do not meet")
    grid = scan_grid(lo, hi, cfg)
    icfg = cfg.integrator
    if method == "cubic":
        (hl, dl), (hr, dr) = MAPS
        yl = trace_cubic(p, hl, dl, grid, icfg, anchor=setup.anchor_l)
        yr = trace_cubic(p, hr, dr, grid, icfg, anchor=setup.anchor_r)
        samples = [DisplacementSample(g, a, b) for g, a, b in zip(grid, yl, yr)]
    else:
        samples = [displacement(p, g, method, cfg, setup=setup) for g in grid]

    signed = [s for s in samples if abs(s.delta) > _noise(s, icfg)]
    brackets = []
    for s, t in zip(signed, signed[1:]):
        if (s.delta > 0.0) != (t.delta > 0.0):
            brackets.append((s.y0, t.y0))
    return setup, samples, brackets


def delta_prime_closed_form(p: LienardParams, y0_star: float, y1_star: float) -> float:
    """``delta'(y0*) = C(y0*, y1*) F(y0*, y1*)``.

    Raises
    ------
    WNonPositive
        ``W_L(y0*)`` or ``W_R(y0*)`` is not positive, or the point is not in
        the interior of Q.
    """
    if not (y0_star > 0.0 and y1_star < 0.0):
        raise WNonPositive(f"({y0_star:g}, {y1_star:g}) must satisfy y0 > 0 > y1")
    return c_eval(p, y0_star, y1_star) * f_expanded(p, y0_star, y1_star)


def classify_stability(p: LienardParams) -> Stability:
    """Stability predicted by the sign of ``a * tL`` (no integration)."""
    s = sign_a_tl(p)
    if s == 0.0:
        raise ValueError("a * tL = 0: no limit cycle, stability undefined")
    return Stability.ATTRACTING if s < 0.0 else Stability.REPELLING


def closure_tol(y0: float, cfg: ScanConfig = DEFAULT_SCAN, method: str = "direct") -> float:
    """Allowed gap when closing the orbit through ``(0, y0)`` with direct flights.

    A root found through the cubic field is not exactly a root of the direct
    displacement; the looser bound absorbs that cross-method discrepancy.
    """
    icfg = cfg.integrator
    unit = icfg.abs_tol + icfg.rel_tol * max(1.0, abs(y0))
    factor = 10.0 if method == "direct" else 1000.0
    return factor * unit + 10.0 * cfg.root_tol


def reconstruct_cycle(
    p: LienardParams,
    y0_star: float,
    cfg: ScanConfig = DEFAULT_SCAN,
    *,
    tol: float | None = None,
) -> tuple[tuple[PlanarState, ...], float]:
    """Closed orbit through ``(0, y0*)`` and its period, from two direct flights.

    Raises
    ------
    ClosureFailure
        The right flight does not come back to ``(0, y0*)`` within ``tol``
        (default :func:`closure_tol`).
    """
    icfg = cfg.integrator
    left = integrate_half_return(p, Half.LEFT, Direction.FORWARD, y0_star, icfg)
    y1 = left.y_return
    try:
        right = integrate_half_return(p, Half.RIGHT, Direction.FORWARD, y1, icfg)
    except DomainError as exc:
        raise ClosureFailure(f"right flight from (0, {y1:g}) does not return: {exc}") from exc
    gap = abs(right.y_return - y0_star)
    if tol is None:
        tol = closure_tol(y0_star, cfg)
    if gap > tol:
        raise ClosureFailure(
            f"orbit through (0, {y0_star:.12g}) returns at {right.y_return:.12g}: "
            f"gap {gap:.3g} > {tol:.3g}"
        )
    orbit = left.samples + right.samples[1:]
    return orbit, left.flight_time + right.flight_time


def analyze_cycle(
    p: LienardParams,
    cfg: ScanConfig = DEFAULT_SCAN,
    method: str = "direct",
) -> CycleSearch:
    """Full search: verdict, domains, scan, root, derivative, reconstruction.

    Domain failures end the search with ``report=None`` and a ``reason``;
    numerical inconsistencies raise.
    """
    verdict = classify_params(p)
    out = CycleSearch(p, verdict, method)
    if not verdict.admits_cycle:
        out.reason = f"verdict {verdict.value}"
        return out
    try:
        setup, samples, brackets = scan_displacement(p, cfg, method)
    except (DomainError, StepLimit) as exc:
        out.reason = f"{type(exc).__name__}: {exc}"
        return out
    out.setup, out.samples, out.brackets = setup, samples, brackets
    if not brackets:
        out.reason = "delta has no sign change on the common domain"
        return out
    if len(brackets) > 1:
        raise Contradiction(
            f"{len(brackets)} disjoint sign changes of delta for {p}: {brackets}"
        )

    icfg = cfg.integrator
    lo, hi = brackets[0]

    def delta(y):
        return displacement(p, y, method, cfg, setup=setup).delta

    y0s = brentq(delta, lo, hi, xtol=cfg.root_tol, rtol=4 * sys.float_info.epsilon, maxiter=200)
    at = displacement(p, y0s, method, cfg, setup=setup)
    y1s = at.y_l
    dp = delta_prime_closed_form(p, y0s, y1s)
    if dp == 0.0 or abs(dp) < 1e-14:
        raise NonHyperbolic(f"delta'({y0s:g}) = {dp:g}: semi-stable or degenerate cycle")
    check = 10.0 * max(cfg.root_tol * max(1.0, abs(dp)), _noise(at, icfg))
    if abs(at.delta) > check:
        raise Contradiction(f"|delta({y0s:g})| = {abs(at.delta):.3g} exceeds {check:.3g}")
    stability = Stability.ATTRACTING if dp < 0.0 else Stability.REPELLING
    if stability is not classify_stability(p):
        raise Contradiction(f"delta' = {dp:g} disagrees with sign(a tL) for {p}")
    for half in (Half.LEFT, Half.RIGHT):
        w = WPoly.for_half(p, half)
        if w_eval(w, y0s) <= 0.0 or w_eval(w, y1s) <= 0.0:
            raise Contradiction(f"W_{half.value} not positive at the cycle crossings")
    orbit, period = reconstruct_cycle(p, y0s, cfg, tol=closure_tol(y0s, cfg, method))
    out.report = LimitCycleReport(y0s, y1s, dp, stability, period, orbit, at.y_r, method)
    log.info("limit cycle y0*=%.12g y1*=%.12g delta'=%.6g %s", y0s, y1s, dp, stability.value)
    return out


def find_limit_cycle(
    p: LienardParams, cfg: ScanConfig = DEFAULT_SCAN, method: str = "direct"
) -> LimitCycleReport | None:
    """The unique limit cycle, or None when there is none (see :func:`analyze_cycle`)."""
    return analyze_cycle(p, cfg, method).report
