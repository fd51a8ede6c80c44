"""Limit cycles of continuous planar piecewise linear systems with two zones.

The systems are reduced to the five-parameter Liénard form

    x' = T x - y,  y' = D x - a,

with ``(T, D) = (tL, dL)`` for ``x < 0`` and ``(tR, dR)`` for ``x > 0``. The
half-maps of each zone are computed both by direct flights and as orbits of
a polynomial (cubic) vector field in the ``(y0, y1)`` plane; the displacement
function between them locates the limit cycle, when there is one.
"""

from .cycle import (
    CycleSearch,
    LimitCycleReport,
    ScanConfig,
    Stability,
    analyze_cycle,
    classify_stability,
    delta_prime_closed_form,
    displacement,
    find_limit_cycle,
    scan_displacement,
)
from .errors import DomainError, PwlError
from .flow import (
    Direction,
    Half,
    IntegratorConfig,
    integrate_full_orbit,
    integrate_half_return,
    return_ordinates,
)
from .geometry import (
    c_eval,
    crossing_audit,
    f_expanded,
    f_quotient,
    g_inner,
    region_census,
    region_classify,
    sample_gamma,
)
from .halfmap import (
    MAPS,
    HalfMapOrbit,
    anchor_orbit,
    build_orbit,
    discover_domain,
    half_map_cubic,
    half_map_direct,
    trace_cubic,
)
from .lienard import LienardParams, PwlSystem, Verdict, canonicalize, classify_params, classify_raw

__version__ = "0.1.0"

__all__ = [
    "CycleSearch",
    "Direction",
    "DomainError",
    "Half",
    "HalfMapOrbit",
    "IntegratorConfig",
    "LienardParams",
    "LimitCycleReport",
    "MAPS",
    "PwlError",
    "PwlSystem",
    "ScanConfig",
    "Stability",
    "Verdict",
    "analyze_cycle",
    "anchor_orbit",
    "build_orbit",
    "c_eval",
    "canonicalize",
    "classify_params",
    "classify_raw",
    "classify_stability",
    "crossing_audit",
    "delta_prime_closed_form",
    "discover_domain",
    "displacement",
    "f_expanded",
    "f_quotient",
    "find_limit_cycle",
    "g_inner",
    "half_map_cubic",
    "half_map_direct",
    "integrate_full_orbit",
    "integrate_half_return",
    "region_census",
    "region_classify",
    "return_ordinates",
    "sample_gamma",
    "scan_displacement",
    "trace_cubic",
]
