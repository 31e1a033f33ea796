"""Adaptive explicit Runge-Kutta integration with dense output.

The integrator is the Dormand-Prince 5(4) embedded pair.  Accepted steps are
stored together with the right-hand-side values, so trajectories support
dense evaluation by Hermite interpolation.  When the caller can supply the
second derivative of the state (the "jet" of the vector field) the dense
output is quintic, otherwise cubic.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = ["Trajectory", "StepSizeUnderflow", "NonFiniteState",
           "ode_integrate", "solve_to_grid"]


class StepSizeUnderflow(RuntimeError):
    """Step control collapsed; the problem is stiff or has hit a pole."""


class NonFiniteState(RuntimeError):
    """State left the range of floating point (blow-up)."""


# Dormand-Prince coefficients
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)


def _hermite5(t, t0, y0, d0, s0, t1, y1, d1, s1):
    """Two-point quintic Hermite using value, first and second derivative."""
    h = t1 - t0
    u = (t - t0) / h
    a0 = y1 - y0 - d0 * h - 0.5 * s0 * h * h
    b0 = (d1 - d0 - s0 * h) * h
    c0 = (s1 - s0) * h * h
    pa = 10 * a0 - 4 * b0 + 0.5 * c0
    pb = -15 * a0 + 7 * b0 - c0
    pc = 6 * a0 - 3 * b0 + 0.5 * c0
    return y0 + d0 * h * u + 0.5 * s0 * h * h * u * u + u ** 3 * (pa + u * (pb + u * pc))


def _hermite3(t, t0, y0, d0, t1, y1, d1):
    """Two-point cubic Hermite from values and first derivatives."""
    h = t1 - t0
    u = (t - t0) / h
    a0 = y1 - y0 - d0 * h
    b0 = (d1 - d0) * h
    return y0 + d0 * h * u + u * u * (3 * a0 - b0 + u * (b0 - 2 * a0))


class Trajectory:
    """Piecewise-polynomial solution record.

    Parameters
    ----------
    grid : array
        Strictly monotone abscissae (ascending or descending).
    states : array, shape (n, m)
        State vectors at the grid points.
    derivs : array, shape (n, m)
        First derivatives of the state at the grid points.
    derivs2 : array, shape (n, m), optional
        Second derivatives; enables quintic dense output (order 5),
        otherwise interpolation is cubic (order 3).
    """

    def __init__(self, grid, states, derivs, derivs2=None):
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1 or len(grid) < 2:
            raise ValueError("grid must hold at least two points")
        d = np.diff(grid)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("grid must be strictly monotone")
        self._descending = bool(d[0] < 0)
        self.grid = grid
        self.states = np.asarray(states, dtype=float)
        self.derivs = np.asarray(derivs, dtype=float)
        self.derivs2 = None if derivs2 is None else np.asarray(derivs2, dtype=float)
        if self.states.shape != (len(grid), self.states.shape[1]):
            raise ValueError("states shape mismatch")
        self.interpolation_order = 3 if self.derivs2 is None else 5

    @property
    def t_min(self) -> float:
        return float(self.grid.min())

    @property
    def t_max(self) -> float:
        return float(self.grid.max())

    def _locate(self, t: float) -> int:
        g = self.grid
        if self._descending:
            i = int(np.searchsorted(-g, -t, side="left"))
        else:
            i = int(np.searchsorted(g, t, side="left"))
        return min(max(i, 1), len(g) - 1)

    def value(self, t: float) -> np.ndarray:
        """Dense evaluation; reproduces stored states exactly at grid nodes."""
        g = self.grid
        i = self._locate(t)
        if t == g[i]:
            return self.states[i].copy()
        if t == g[i - 1]:
            return self.states[i - 1].copy()
        t0, t1 = g[i - 1], g[i]
        y0, y1 = self.states[i - 1], self.states[i]
        d0, d1 = self.derivs[i - 1], self.derivs[i]
        if self.derivs2 is not None:
            s0, s1 = self.derivs2[i - 1], self.derivs2[i]
            return np.array([_hermite5(t, t0, y0[k], d0[k], s0[k], t1, y1[k], d1[k], s1[k])
                             for k in range(len(y0))])
        return np.array([_hermite3(t, t0, y0[k], d0[k], t1, y1[k], d1[k])
                         for k in range(len(y0))])

    def __call__(self, t: float) -> np.ndarray:
        return self.value(t)


def _dp_step(f, t, y, h, k1):
    k2 = f(t + h * _A21, [yi + h * _A21 * a for yi, a in zip(y, k1)])
    k3 = f(t + 0.3 * h, [yi + h * (_A31 * a + _A32 * b)
                         for yi, a, b in zip(y, k1, k2)])
    k4 = f(t + 0.8 * h, [yi + h * (_A41 * a + _A42 * b + _A43 * c)
                         for yi, a, b, c in zip(y, k1, k2, k3)])
    k5 = f(t + (8 / 9) * h, [yi + h * (_A51 * a + _A52 * b + _A53 * c + _A54 * d)
                             for yi, a, b, c, d in zip(y, k1, k2, k3, k4)])
    k6 = f(t + h, [yi + h * (_A61 * a + _A62 * b + _A63 * c + _A64 * d + _A65 * e)
                   for yi, a, b, c, d, e in zip(y, k1, k2, k3, k4, k5)])
    ynew = [yi + h * (_B1 * a + _B3 * c + _B4 * d + _B5 * e + _B6 * g)
            for yi, a, c, d, e, g in zip(y, k1, k3, k4, k5, k6)]
    k7 = f(t + h, ynew)
    err = [h * (_E1 * a + _E3 * c + _E4 * d + _E5 * e + _E6 * g + _E7 * q)
           for a, c, d, e, g, q in zip(k1, k3, k4, k5, k6, k7)]
    return ynew, k7, err


def _integrate_raw(f, t0, y0, t1, rtol, atol, max_step, h0):
    t = float(t0)
    y = [float(v) for v in y0]
    k1 = f(t, y)
    direction = 1.0 if t1 > t0 else -1.0
    h = direction * min(h0, max_step)
    steps = [(t, list(y), list(k1))]
    while (t1 - t) * direction > 0:
        if (t + h - t1) * direction > 0:
            h = t1 - t
        ynew, k7, err = _dp_step(f, t, y, h, k1)
        if not all(math.isfinite(v) for v in ynew):
            raise NonFiniteState("state became non-finite near t=%g" % t)
        ymag = max(max(abs(v) for v in y), max(abs(v) for v in ynew))
        sc = atol + rtol * ymag
        en = math.sqrt(sum((e / sc) ** 2 for e in err) / len(y))
        if en <= 1.0:
            t += h
            y = ynew
            k1 = k7
            steps.append((t, list(y), list(k1)))
        fac = min(5.0, max(0.2, 0.9 * (en + 1e-30) ** -0.2))
        h = direction * min(abs(h) * fac, max_step)
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            raise StepSizeUnderflow("step size underflow at t=%g" % t)
    return steps


def ode_integrate(rhs: Callable, t0: float, y0: Sequence[float], t1: float,
                  tol: float = 1e-10, max_step: float = 0.25) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` adaptively.

    ``rhs`` takes ``(t, y)`` with ``y`` a list and returns a list.  The
    direction of integration may be decreasing.  Local error per step is
    controlled to ``tol`` (relative, with a small absolute floor).  The
    returned :class:`Trajectory` holds every accepted step and supports
    cubic Hermite dense output.

    Raises :class:`StepSizeUnderflow` when step control collapses (a pole or
    stiffness) and :class:`NonFiniteState` on blow-up.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    if t1 == t0:
        raise ValueError("empty integration range")
    steps = _integrate_raw(rhs, t0, y0, t1, rtol=tol, atol=tol * 1e-4,
                           max_step=max_step, h0=1e-3)
    grid = np.array([s[0] for s in steps])
    states = np.array([s[1] for s in steps])
    derivs = np.array([s[2] for s in steps])
    return Trajectory(grid, states, derivs)


def solve_to_grid(rhs: Callable, t0: float, y0: Sequence[float], grid,
                  jet2: Callable | None = None, rtol: float = 1e-12,
                  atol: float = 1e-18, max_step: float = 0.05) -> Trajectory:
    """Integrate and resample onto ``grid`` with quintic dense output.

    ``grid`` must start at ``t0`` and be monotone.  ``jet2(t, y)`` returns the
    second derivative of the state; when provided, node values are filled by
    quintic Hermite interpolation between accepted steps and the returned
    trajectory itself carries second derivatives, so its dense output is
    quintic as well.  Used to build production solutions at uniform spacing.
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] != t0:
        raise ValueError("grid must start at t0")
    steps = _integrate_raw(rhs, t0, y0, grid[-1], rtol=rtol, atol=atol,
                           max_step=max_step, h0=1e-3)
    ts = np.array([s[0] for s in steps])
    desc = ts[-1] < ts[0]
    m = len(steps[0][1])
    states = np.empty((len(grid), m))
    for j, tg in enumerate(grid):
        if desc:
            i = int(np.searchsorted(-ts, -tg, side="left"))
        else:
            i = int(np.searchsorted(ts, tg, side="left"))
        i = min(max(i, 1), len(steps) - 1)
        (ta, ya, ka), (tb, yb, kb) = steps[i - 1], steps[i]
        if tg == ta:
            states[j] = ya
            continue
        if tg == tb:
            states[j] = yb
            continue
        if jet2 is not None:
            sa, sb = jet2(ta, ya), jet2(tb, yb)
            states[j] = [_hermite5(tg, ta, ya[k], ka[k], sa[k], tb, yb[k], kb[k], sb[k])
                         for k in range(m)]
        else:
            states[j] = [_hermite3(tg, ta, ya[k], ka[k], tb, yb[k], kb[k])
                         for k in range(m)]
    derivs = np.array([rhs(t, list(y)) for t, y in zip(grid, states)])
    derivs2 = None
    if jet2 is not None:
        derivs2 = np.array([jet2(t, list(y)) for t, y in zip(grid, states)])
    return Trajectory(grid, states, derivs, derivs2)
