import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwlcl.errors import A12Zero
from pwlcl.lienard import (
    LienardParams,
    PwlSystem,
    Verdict,
    canonicalize,
    classify_params,
    classify_raw,
    near_degenerate,
)

coef = st.floats(-3, 3, allow_nan=False)


def test_canonicalize_matches_trace_and_determinant():
    s = PwlSystem(aL11=1.0, aL21=2.0, aR11=-0.5, aR21=0.25, a12=-1.5, a22=0.7, b1=0.3, b2=-0.9)
    p = canonicalize(s)
    for A, t, d in ((s.A_L, p.tL, p.dL), (s.A_R, p.tR, p.dR)):
        assert t == pytest.approx(np.trace(A), abs=1e-15)
        assert d == pytest.approx(np.linalg.det(A), abs=1e-14)
    assert p.a == pytest.approx(-1.5 * -0.9 - 0.7 * 0.3, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.lists(coef, min_size=8, max_size=8), st.floats(-2, 2), st.floats(-2, 2))
def test_canonical_change_of_variables_conjugates_the_fields(c, x1, x2):
    aL11, aL21, aR11, aR21, a12, a22, b1, b2 = c
    if abs(a12) < 1e-3:
        return
    s = PwlSystem(aL11, aL21, aR11, aR21, a12, a22, b1, b2)
    p = canonicalize(s)
    A = s.A_L if x1 < 0 else s.A_R
    dx1, dx2 = A @ np.array([x1, x2]) + np.array([b1, b2])
    # (x, y) = (x1, a22 x1 - a12 x2 - b1)
    x, y = x1, a22 * x1 - a12 * x2 - b1
    dx, dy = dx1, a22 * dx1 - a12 * dx2
    t, d = (p.tL, p.dL) if x1 < 0 else (p.tR, p.dR)
    scale = 1.0 + abs(dx) + abs(dy) + abs(x) + abs(y)
    assert dx == pytest.approx(t * x - y, abs=1e-12 * scale)
    assert dy == pytest.approx(d * x - p.a, abs=1e-11 * scale)


def test_continuity_requires_shared_second_column():
    with pytest.raises(ValueError):
        PwlSystem.from_matrices([[1, 2], [3, 4]], [[1, 2.5], [3, 4]], [0, 1])
    s = PwlSystem.from_matrices([[1, 2], [3, 4]], [[-1, 2], [5, 4]], [0, 1])
    assert (s.aL11, s.aR21, s.a12, s.a22) == (1, 5, 2, 4)


def test_non_finite_inputs_rejected():
    with pytest.raises(ValueError):
        LienardParams(math.nan, 0, 0, 0, 1)
    with pytest.raises(ValueError):
        PwlSystem(0, 0, 0, 0, 1, 0, math.inf, 0)


def test_a12_zero():
    s = PwlSystem(1, 2, 3, 4, 0.0, 1, 1, 1)
    with pytest.raises(A12Zero):
        canonicalize(s)
    assert classify_raw(s) is Verdict.NO_PERIODIC_ORBIT_A12_ZERO


@pytest.mark.parametrize(
    "p, verdict",
    [
        ((0.4, -0.3, 3, 0.1, -0.2), Verdict.MAY_HAVE_LIMIT_CYCLE),
        ((0.4, 0.3, 3, 0.1, -0.2), Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT),
        ((0.0, -0.3, 3, 0.1, -0.2), Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT),
        ((0.4, -0.3, 3, 0.1, 0.0), Verdict.NO_LIMIT_CYCLE_HOMOGENEOUS),
        # a = 0 wins over the trace product
        ((0.4, 0.3, 3, 0.1, 0.0), Verdict.NO_LIMIT_CYCLE_HOMOGENEOUS),
    ],
)
def test_verdict_precedence(p, verdict):
    assert classify_params(LienardParams(*p)) is verdict


def test_verdicts_are_exact_sign_tests():
    # the product underflows to -0.0, the signs are still opposite
    p = LienardParams(1e-300, -1e-300, 1, 1, 5e-324)
    assert classify_params(p) is Verdict.MAY_HAVE_LIMIT_CYCLE
    assert len(near_degenerate(p)) == 2
    assert classify_params(LienardParams(-0.0, 1, 1, 1, 1)) is Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT


def test_near_degenerate_quiet_for_ordinary_inputs():
    assert near_degenerate(LienardParams(0.4, -0.3, 3, 0.1, -0.2)) == []
    assert near_degenerate(LienardParams(0.4, -0.3, 3, 0.1, 0.0)) == []


def test_verdict_admits_cycle():
    assert [v for v in Verdict if v.admits_cycle] == [Verdict.MAY_HAVE_LIMIT_CYCLE]
