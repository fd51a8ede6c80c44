"""Dormand-Prince 5(4) stepper for planar autonomous systems.

Pure-Python floats: for a two-component state this is several times faster
than going through numpy arrays. FSAL, PI step-size control (Hairer-Wanner,
*Solving ODEs I*, II.4) and single-step time bisection for event location.
"""

from __future__ import annotations

import math

from .errors import StepLimit

# Butcher tableau
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# 5th minus embedded 4th order weights
E1 = 71 / 57600
E3 = -71 / 16695
E4 = 71 / 1920
E5 = -17253 / 339200
E6 = 22 / 525
E7 = -1 / 40

SAFE = 0.9
SHRINK_MAX = 5.0
GROW_MAX = 10.0
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA

ESCAPE = 1e100


class Dopri54:
    """Adaptive integrator for ``z' = f(z)``, ``z = (x, y)``.

    Parameters
    ----------
    f : callable
        ``f(x, y) -> (fx, fy)``.
    rtol, atol : float
        Mixed error control, ``atol + rtol * max(|z_old|, |z_new|)`` per
        component.
    """

    def __init__(self, f, rtol, atol):
        self.f = f
        self.rtol = rtol
        self.atol = atol

    def step(self, x, y, h, k1=None):
        """One trial step. Returns ``(xn, yn, err, k7)``; ``err <= 1`` means acceptable."""
        f = self.f
        if k1 is None:
            k1 = f(x, y)
        k1x, k1y = k1
        k2x, k2y = f(x + h * A21 * k1x, y + h * A21 * k1y)
        k3x, k3y = f(x + h * (A31 * k1x + A32 * k2x), y + h * (A31 * k1y + A32 * k2y))
        k4x, k4y = f(
            x + h * (A41 * k1x + A42 * k2x + A43 * k3x),
            y + h * (A41 * k1y + A42 * k2y + A43 * k3y),
        )
        k5x, k5y = f(
            x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
            y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y),
        )
        k6x, k6y = f(
            x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
            y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y),
        )
        xn = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
        yn = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
        k7 = f(xn, yn)
        ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7[0])
        ey = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7[1])
        sx = self.atol + self.rtol * max(abs(x), abs(xn))
        sy = self.atol + self.rtol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((ex / sx) ** 2 + (ey / sy) ** 2))
        return xn, yn, err, k7

    def initial_step(self, x, y, hmax):
        fx, fy = self.f(x, y)
        sx = self.atol + self.rtol * abs(x)
        sy = self.atol + self.rtol * abs(y)
        d0 = math.hypot(x / sx, y / sy)
        d1 = math.hypot(fx / sx, fy / sy)
        h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        return min(h, hmax)

    def run(self, x, y, *, t_max, max_steps, h0=None, accept=None, hmax=math.inf):
        """Yield accepted steps ``(t, x, y, h, xn, yn)`` until ``t_max``.

        ``accept(xn, yn)`` may return False to force rejection with halving;
        the caller uses this to keep the first step on the intended side of a
        switching line. The generator exits normally once ``t`` reaches
        ``t_max``; the caller decides what that means.
        """
        t = 0.0
        h = h0 if h0 is not None else self.initial_step(x, y, t_max)
        k1 = self.f(x, y)
        facold = 1e-4
        rejected = False
        steps = 0
        while t < t_max:
            steps += 1
            if steps > max_steps:
                raise StepLimit(f"more than {max_steps} steps (t = {t:.6g})")
            if h > hmax:
                h = hmax
            if t + h > t_max:
                h = t_max - t
            xn, yn, err, k7 = self.step(x, y, h, k1)
            if not (math.isfinite(xn) and math.isfinite(yn) and math.isfinite(err)):
                h *= 0.25
                rejected = True
                if h < 1e-300:
                    raise StepLimit("non-finite state")
                continue
            fac11 = err ** EXPO if err > 0 else 0.0
            if err <= 1.0:
                if accept is not None and not accept(xn, yn):
                    h *= 0.5
                    rejected = True
                    if h < 1e-300:
                        raise StepLimit("step size underflow while forcing acceptance")
                    continue
                fac = fac11 / facold ** BETA
                fac = max(1.0 / GROW_MAX, min(SHRINK_MAX, fac / SAFE))
                hnew = h / fac
                facold = max(err, 1e-4)
                if rejected:
                    hnew = min(hnew, h)
                rejected = False
                yield t, x, y, h, xn, yn
                t += h
                x, y, k1 = xn, yn, k7
                h = hnew
            else:
                h = h / min(SHRINK_MAX, fac11 / SAFE)
                rejected = True
                if h < 1e-300:
                    raise StepLimit("step size underflow")

    def locate(self, x, y, h, g, tol):
        """Bisect in time inside the step ``(x, y) -> h`` for ``g`` crossing to ``<= 0``.

        ``g(x, y) > 0`` at the step start and ``<= 0`` at its end. Each probe
        is a fresh single step from the start point, so the located state
        carries the local accuracy of the method rather than of an
        interpolant. Returns ``(dt, xe, ye)``.
        """
        lo, hi = 0.0, h
        glo = g(x, y)
        xh, yh, _, _ = self.step(x, y, hi)
        ghi = g(xh, yh)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
            xm, ym, _, _ = self.step(x, y, mid)
            gm = g(xm, ym)
            if gm > 0.0:
                lo, glo = mid, gm
            else:
                hi, ghi = mid, gm
        # final secant inside the (tiny) bracket
        if glo != ghi:
            dt = lo + (hi - lo) * glo / (glo - ghi)
        else:
            dt = hi
        xe, ye, _, _ = self.step(x, y, dt)
        return dt, xe, ye
