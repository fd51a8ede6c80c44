import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reference import EXACT_Y_L, EXACT_Y_L_AT_0, EXACT_Y_R, TIGHT
from pwlcl.errors import DomainError, LeftQ, NoReturn, WViolation
from pwlcl.flow import Direction, Half, IntegratorConfig
from pwlcl.halfmap import (
    DEFAULT_DOMAIN_CAP,
    MAPS,
    CubicField,
    WPoly,
    anchor_orbit,
    build_orbit,
    discover_domain,
    extends_to_origin,
    half_map_cubic,
    half_map_direct,
    origin_branch,
    trace_cubic,
    w_positive_on,
)
from pwlcl.lienard import LienardParams
from pwlcl.sampling import random_admissible

L, R = Half.LEFT, Half.RIGHT
FWD, BWD = Direction.FORWARD, Direction.BACKWARD
# right/backward map of this system ends near y0 = 0.7907 (y1 -> -infinity)
BOUNDED = LienardParams(0.830166997463628, -0.807215957314444, 0.2121297072772541, 0.11370244840309329, -0.4945382052015347)


def test_w_polynomial(example):
    w = WPoly.for_half(example, L)
    assert w(0.0) == pytest.approx(0.04)
    assert w(1.0) == pytest.approx(3.0 + 0.2 * 0.4 + 0.04)
    # focus: T^2 < 4D makes W positive everywhere
    assert w_positive_on(w, -1e6, 1e6)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-5, 5), st.floats(0, 5))
def test_w_positive_on_matches_dense_sampling(d, t, a, lo, width):
    w = WPoly(d, t, a)
    hi = lo + width
    ys = np.linspace(lo, hi, 2001)
    dense = min(w(float(y)) for y in ys)
    got = w_positive_on(w, lo, hi)
    if abs(dense) > 1e-6:  # away from a double root the dense minimum decides
        assert got == (dense > 0.0)
    if got:
        assert dense >= -1e-12


def test_cubic_field_formula(example):
    X = CubicField.for_half(example, R)
    w = WPoly.for_half(example, R)
    assert X(0.7, -0.4) == (0.4 * w(0.7), -0.7 * w(-0.4))


def test_unsupported_map_combinations(example):
    with pytest.raises(ValueError):
        anchor_orbit(example, L, BWD)
    with pytest.raises(ValueError):
        trace_cubic(example, R, FWD, [1.0])


@pytest.mark.parametrize("a, left, right", [(-0.2, False, True), (0.2, True, False), (0.0, False, False)])
def test_extension_to_origin_follows_sign_of_a(a, left, right):
    p = LienardParams(0.4, -0.3, 3, 0.1, a)
    assert extends_to_origin(p, L, FWD) is left
    assert extends_to_origin(p, R, BWD) is right


def test_example_anchors(example, mirrored):
    al = anchor_orbit(example, L, FWD)
    assert al[0] == 0.0 and al[1] == pytest.approx(EXACT_Y_L_AT_0, abs=1e-9)
    assert anchor_orbit(example, R, BWD) == (0.0, 0.0)
    # time-reversed system: the left orbit through the origin never comes
    # back forward, so the graph starts on the y0 axis instead
    ml = anchor_orbit(mirrored, L, FWD)
    assert ml[1] == 0.0 and ml[0] == pytest.approx(-EXACT_Y_L_AT_0, abs=1e-9)


def test_anchor_without_return():
    p = LienardParams(1.0, -1.0, -1.0, 1.0, -1.0)
    with pytest.raises(NoReturn):
        anchor_orbit(p, L, FWD)


def test_origin_branch_is_third_order(example):
    w = WPoly.for_half(example, R)
    errs = [abs(origin_branch(w, y) - half_map_direct(example, R, BWD, y, TIGHT)) for y in (0.04, 0.02)]
    # neglected term is O(y0^4): halving y0 divides the error by about 16
    assert 10 < errs[0] / errs[1] < 22
    assert errs[1] < 2 * 0.02 ** 4


@pytest.mark.parametrize("y0", sorted(EXACT_Y_L))
def test_cubic_route_against_exact_flow(example, y0):
    assert half_map_cubic(example, L, FWD, y0) == pytest.approx(EXACT_Y_L[y0], abs=1e-8)
    assert half_map_cubic(example, R, BWD, y0) == pytest.approx(EXACT_Y_R[y0], abs=1e-8)


def test_trace_cubic_keeps_target_order_and_tiny_targets(example):
    ts = [2.0, 1e-5, 0.5, 0.0, 1.0]
    ys = trace_cubic(example, R, BWD, ts)
    assert ys[3] == 0.0
    assert ys[1] == pytest.approx(-1e-5, rel=1e-4)
    for t, y in zip(ts, ys):
        if t >= 0.25:
            assert y == pytest.approx(EXACT_Y_R[t], abs=1e-8)


def test_trace_cubic_rejects_targets_before_the_anchor(mirrored):
    with pytest.raises(LeftQ):
        trace_cubic(mirrored, L, FWD, [0.1])
    with pytest.raises(ValueError):
        trace_cubic(mirrored, L, FWD, [-1.0])


def test_path_is_recorded(example):
    path = []
    trace_cubic(example, R, BWD, [1.0], path=path)
    assert path[0] == (0.0, 0.0)
    assert path[-1][0] >= 1.0
    assert all(b[0] > a[0] for a, b in zip(path, path[1:]))


def test_example_domains_reach_the_cap(example):
    for half, d in MAPS:
        assert discover_domain(example, half, d, cap=1e3) == (0.0, 1e3)
    assert discover_domain(example, R, BWD, cap=1e3, method="cubic") == (0.0, 1e3)
    with pytest.raises(ValueError):
        discover_domain(example, R, BWD, method="euler")


def test_bounded_domain_found_by_both_routes():
    lo, hi = discover_domain(BOUNDED, R, BWD, cap=8.0)
    assert lo == 0.0 and 0.78 < hi < 0.80
    with pytest.raises(DomainError):
        half_map_direct(BOUNDED, R, BWD, hi + 1e-3)
    lo_c, hi_c = discover_domain(BOUNDED, R, BWD, cap=8.0, method="cubic")
    assert hi_c == pytest.approx(hi, rel=1e-3)
    with pytest.raises(WViolation):
        trace_cubic(BOUNDED, R, BWD, [hi + 1e-2])


def test_domain_below_anchor_is_empty(mirrored):
    lo, hi = discover_domain(mirrored, L, FWD, cap=0.1)
    assert lo == hi


def test_build_orbit_properties(example):
    grid = np.linspace(0.0, 3.0, 31)
    for half, d in MAPS:
        for method in ("cubic", "direct"):
            orb = build_orbit(example, half, d, grid, method=method, cap=100.0)
            assert orb.in_q() and orb.is_monotone() and orb.w_positive(example)
            assert orb.samples[0][0] == 0.0
            assert orb.domain_hi == 100.0 and orb.method == method
    orb = build_orbit(example, R, BWD, grid, cap=100.0)
    assert orb.label == "yR" and orb.path[0] == (0.0, 0.0)
    assert orb.value_at(1.0) == pytest.approx(EXACT_Y_R[1.0], abs=1e-8)
    assert orb.value_at(0.95) == pytest.approx(half_map_direct(example, R, BWD, 0.95), abs=5e-3)
    with pytest.raises(ValueError):
        build_orbit(example, R, BWD, grid, method="euler", cap=10.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_graphs_are_monotone_with_positive_w(seed):
    p = random_admissible(np.random.default_rng(seed), "mixed")
    for half, d in MAPS:
        try:
            anchor = anchor_orbit(p, half, d)
            lo, hi = discover_domain(p, half, d, cap=4.0, anchor=anchor)
        except DomainError:
            continue
        if hi <= lo:
            continue
        grid = np.linspace(lo, lo + 0.9 * (hi - lo), 12)
        orb = build_orbit(p, half, d, grid, domain=(lo, hi), anchor=anchor)
        assert orb.in_q()
        assert orb.is_monotone()
        assert orb.w_positive(p)


def test_tighter_tolerance_converges_to_exact(example):
    loose = abs(half_map_cubic(example, L, FWD, 2.0, IntegratorConfig(rel_tol=1e-7, abs_tol=1e-9)) - EXACT_Y_L[2.0])
    tight = abs(half_map_cubic(example, L, FWD, 2.0, IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)) - EXACT_Y_L[2.0])
    assert tight < loose and tight < 1e-10


def test_default_cap():
    assert DEFAULT_DOMAIN_CAP == 1e6 and math.isfinite(DEFAULT_DOMAIN_CAP)
