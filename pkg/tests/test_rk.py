import math

import pytest

from pwlcl._rk import Dopri54
from pwlcl.errors import StepLimit


def rotation(x, y):
    return (-y, x)


def test_rotation_after_one_turn():
    solver = Dopri54(rotation, 1e-11, 1e-13)
    last = None
    for t, x, y, h, xn, yn in solver.run(1.0, 0.0, t_max=2 * math.pi, max_steps=10_000):
        last = (t + h, xn, yn)
    assert last[0] == pytest.approx(2 * math.pi, abs=1e-12)
    assert last[1] == pytest.approx(1.0, abs=1e-9)
    assert last[2] == pytest.approx(0.0, abs=1e-9)


def test_error_estimate_shrinks_with_step_like_fifth_order():
    solver = Dopri54(rotation, 1e-10, 1e-12)
    errs = []
    for h in (0.2, 0.1):
        xn, yn, _, _ = solver.step(1.0, 0.0, h)
        errs.append(math.hypot(xn - math.cos(h), yn - math.sin(h)))
    # local error is O(h^6)
    assert 40 < errs[0] / errs[1] < 100


def test_locate_crossing_of_y_axis():
    # x = cos t reaches 0 at t = pi/2
    solver = Dopri54(rotation, 1e-12, 1e-14)
    for t, x, y, h, xn, yn in solver.run(1.0, 0.0, t_max=3.0, max_steps=10_000):
        if xn <= 0.0:
            dt, xe, ye = solver.locate(x, y, h, lambda u, v: u, 1e-14)
            assert t + dt == pytest.approx(math.pi / 2, abs=1e-11)
            assert abs(xe) < 1e-11
            assert ye == pytest.approx(1.0, abs=1e-11)
            break
    else:
        pytest.fail("no crossing")


def test_step_limit():
    solver = Dopri54(rotation, 1e-12, 1e-14)
    with pytest.raises(StepLimit):
        for _ in solver.run(1.0, 0.0, t_max=100.0, max_steps=5):
            pass


def test_accept_hook_forces_smaller_steps():
    solver = Dopri54(lambda x, y: (1.0, 0.0), 1e-8, 1e-10)
    steps = list(solver.run(0.0, 0.0, t_max=1.0, max_steps=1000, h0=0.5, accept=lambda xn, yn: xn <= 0.1 or xn > 0.2))
    assert all(not (0.1 < s[4] <= 0.2) for s in steps)
