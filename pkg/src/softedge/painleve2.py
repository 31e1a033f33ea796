"""Hastings-McLeod family q0(t; xi) and its sigma-form companion u0(x; xi).

``q0(.; xi)`` solves q'' = t q + 2 q^3 with right boundary data
``q0 ~ sqrt(xi) Ai(t)``.  For xi = 1 it is the Hastings-McLeod solution,
which behaves like ``sqrt(-t/2)`` on the left; for 0 < xi < 1 it decays and
oscillates on the left.  ``u0(x; xi) = int_x^inf q0^2`` solves the
Jimbo-Miwa-Okamoto sigma form with parameter a = 0.

Solver strategy
---------------
* Seeding at ``t_max`` uses the two-instanton tail expansion: the Airy
  carrier ``sqrt(xi) Ai(t)`` times ``1 + xi e^{-(4/3)t^{3/2}}/(16 pi t^{3/2})
  (1 - a1 zeta^{-1})``.
* For ``0 < xi < 1`` the solution is marched leftward with the adaptive
  Runge-Kutta integrator; the leftward direction is neutrally stable for
  these decaying-oscillating solutions.
* For ``xi = 1`` marching is stable only down to t ~ 0 (the solution is a
  separatrix; seed error is amplified like exp((2 sqrt 2/3)|t|^{3/2})).
  The left part is therefore refined by damped-Newton collocation on a
  Chebyshev-Lobatto mesh with boundary data taken from the march at t = 0
  and from the left asymptotic series at t_min.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .core.ode import Trajectory, StepSizeUnderflow, solve_to_grid
from .core.quad import panel_integral
from .specfun import airy, log_gamma_arg

__all__ = ["PIIParams", "TransSeriesCoeffs", "TranscendentSolution", "SigmaSolution",
           "hm_seed", "solve_q0", "sigma0_from_q0", "sigma_residual",
           "transseries_u0", "left_asymptote", "oscillation_constants",
           "envelope_amplitude", "GRID_STEP"]

GRID_STEP = 0.025

_GL6 = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class TransSeriesCoeffs:
    """Fixed constants of the tail expansions of u0 and q0."""
    c: float = -17.0 / 12.0
    c1: float = (35.0 / 24.0) ** 2
    d: float = -13.0 / 6.0
    d1: float = 1531.0 / 288.0
    alpha1: float = 5.0 / 72.0
    a1: float = 23.0 / 24.0


COEFFS = TransSeriesCoeffs()


@dataclass(frozen=True)
class PIIParams:
    """Parameters (alpha, xi) labelling a transcendent; xi_star records a
    complex-deformation label without being solved for."""
    alpha: float
    xi: float
    xi_star: Optional[complex] = None

    def __post_init__(self):
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")


# left asymptote q = sqrt(th/2)(1 - th^-3/8 - 73 th^-6/128 - 10657 th^-9/1024
#                            - 13912277 th^-12/32768), th = -t
_LEFT = (-1.0 / 8.0, -73.0 / 128.0, -10657.0 / 1024.0, -13912277.0 / 32768.0)


def left_asymptote(t: float) -> tuple[float, float]:
    """Value and derivative of the xi=1 left tail sqrt(-t/2)(1 + ...)."""
    th = -t
    f = 1.0
    fp = 0.0  # d/d(th)
    for k, a in enumerate(_LEFT, start=1):
        f += a * th ** (-3 * k)
        fp += -3 * k * a * th ** (-3 * k - 1)
    root = math.sqrt(th / 2.0)
    q = root * f
    # dq/dt = -dq/dth
    dq_dth = f / (2.0 * math.sqrt(2.0 * th)) + root * fp
    return q, -dq_dth


def hm_seed(t0: float, xi: float) -> tuple[float, float]:
    """Right-tail seed (q, q') at t0 from the two-instanton expansion.

    The algebraic prefactor series is carried by Ai(t0) itself (its
    asymptotic series has alpha1 = 5/72 as first coefficient); the
    xi-proportional instanton term carries a1 = 23/24.  Truncation error is
    below 1e-15 relative for t0 >= 8.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if t0 < 6.0:
        raise ValueError("seed point too small for the tail expansion")
    if xi == 0.0:
        return 0.0, 0.0
    ai, aip = airy(t0)
    zeta = (2.0 / 3.0) * t0 ** 1.5
    a1 = COEFFS.a1
    pre = math.exp(-3.0 * zeta) / (32.0 * math.pi ** 1.5)
    # instanton term G(t) = e^{-3 zeta}/(32 pi^{3/2} t^{7/4}) (1 - a1/zeta)
    G = pre * (1.0 - a1 / zeta) / t0 ** 1.75
    dG = pre * ((-3.0 * math.sqrt(t0) - 1.75 / t0) * (1.0 - a1 / zeta)
                + a1 * math.sqrt(t0) / zeta ** 2) / t0 ** 1.75
    rx = math.sqrt(xi)
    return rx * (ai + xi * G), rx * (aip + xi * dG)


def _pii_rhs(t, y):
    return [y[1], t * y[0] + 2.0 * y[0] ** 3]


def _pii_jet2(t, y):
    q, v = y
    return [t * q + 2.0 * q ** 3, q + t * v + 6.0 * q * q * v]


class TranscendentSolution:
    """A solved member q(t; alpha, xi) with (q, q') on a uniform grid.

    Dense evaluation is quintic Hermite; second and third derivatives are
    reconstructed from the differential equation, never by differencing.
    """

    def __init__(self, params: PIIParams, grid: np.ndarray, states: np.ndarray):
        self.params = params
        self.grid = np.asarray(grid, dtype=float)
        self._q = np.ascontiguousarray(states[:, 0])
        self._qp = np.ascontiguousarray(states[:, 1])
        self._h = float(self.grid[1] - self.grid[0])
        derivs = np.column_stack([self._qp, self.grid * self._q + 2 * self._q ** 3])
        derivs2 = np.column_stack([derivs[:, 1],
                                   self._q + self.grid * self._qp
                                   + 6 * self._q ** 2 * self._qp])
        self.trajectory = Trajectory(self.grid, np.column_stack([self._q, self._qp]),
                                     derivs, derivs2)

    @property
    def t_min(self) -> float:
        return float(self.grid[0])

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])

    @property
    def domain(self) -> tuple[float, float]:
        return (self.t_min, self.t_max)

    def eval(self, t: float) -> tuple[float, float]:
        """(q, q') at t; fast scalar quintic Hermite on the uniform grid."""
        g = self.grid
        if not g[0] <= t <= g[-1]:
            raise ValueError("t=%g outside solved domain [%g, %g]" % (t, g[0], g[-1]))
        i = min(int((t - g[0]) / self._h), len(g) - 2)
        t0 = g[i]
        if t == t0:
            return float(self._q[i]), float(self._qp[i])
        t1 = g[i + 1]
        q0, q1 = self._q[i], self._q[i + 1]
        p0, p1 = self._qp[i], self._qp[i + 1]
        s0 = t0 * q0 + 2.0 * q0 ** 3
        s1 = t1 * q1 + 2.0 * q1 ** 3
        r0 = q0 + t0 * p0 + 6.0 * q0 * q0 * p0
        r1 = q1 + t1 * p1 + 6.0 * q1 * q1 * p1
        h = t1 - t0
        u = (t - t0) / h
        out = []
        for (y0, d0, a0, y1, d1, a1) in ((q0, p0, s0, q1, p1, s1),
                                         (p0, s0, r0, p1, s1, r1)):
            A = y1 - y0 - d0 * h - 0.5 * a0 * h * h
            B = (d1 - d0 - a0 * h) * h
            C = (a1 - a0) * h * h
            pa = 10 * A - 4 * B + 0.5 * C
            pb = -15 * A + 7 * B - C
            pc = 6 * A - 3 * B + 0.5 * C
            out.append(y0 + d0 * h * u + 0.5 * a0 * h * h * u * u
                       + u ** 3 * (pa + u * (pb + u * pc)))
        return out[0], out[1]

    def jet(self, t: float) -> tuple[float, float, float, float]:
        """(q, q', q'', q''') with the higher derivatives from the equation."""
        q, qp = self.eval(t)
        a = self.params.alpha
        qpp = t * q + 2.0 * q ** 3 - a
        qppp = q + t * qp + 6.0 * q * q * qp
        return q, qp, qpp, qppp

    def residual(self, t: float, h: float = 0.015) -> float:
        """|q'' - t q - 2 q^3 + alpha| with q'' by five-point differencing of
        the dense q values (no use of the stored derivative channels)."""
        if not self.t_min + 2 * h <= t <= self.t_max - 2 * h:
            raise ValueError("residual stencil leaves the domain")
        qm2, qm1, q0 = (self.eval(t - 2 * h)[0], self.eval(t - h)[0], self.eval(t)[0])
        qp1, qp2 = self.eval(t + h)[0], self.eval(t + 2 * h)[0]
        qpp = (-qm2 + 16 * qm1 - 30 * q0 + 16 * qp1 - qp2) / (12 * h * h)
        return abs(qpp - t * q0 - 2.0 * q0 ** 3 + self.params.alpha)


def _cheb_lobatto(N: int):
    x = np.cos(np.pi * np.arange(N + 1) / N)
    c = np.ones(N + 1)
    c[0] = c[N] = 2.0
    c *= (-1.0) ** np.arange(N + 1)
    X = np.tile(x, (N + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(N + 1))
    D -= np.diag(D.sum(axis=1))
    return D, x


def _collocate_full(t_min: float, t_max: float,
                    guess_grid: np.ndarray, guess_q: np.ndarray, N: int):
    """Damped-Newton Chebyshev collocation of q'' = tq + 2q^3 on
    [t_min, t_max]; Dirichlet data from the tail seed and the left asymptote."""
    D, xc = _cheb_lobatto(N)
    half = 0.5 * (t_max - t_min)
    t = t_min + (xc + 1.0) * half
    D = D / half
    D2 = D @ D
    q = np.interp(t, guess_grid, guess_q)
    below = t < guess_grid[0]
    q[below] = [left_asymptote(tt)[0] for tt in t[below]]
    q_right = hm_seed(t_max, 1.0)[0]
    q_left = left_asymptote(t_min)[0]
    for _ in range(50):
        F = D2 @ q - (t * q + 2.0 * q ** 3)
        F[0] = q[0] - q_right
        F[N] = q[N] - q_left
        J = D2 - np.diag(t + 6.0 * q ** 2)
        J[0, :] = 0.0
        J[0, 0] = 1.0
        J[N, :] = 0.0
        J[N, N] = 1.0
        dq = np.linalg.solve(J, -F)
        step = float(np.max(np.abs(dq)))
        lam = 1.0 if step < 0.5 else 0.5 / step
        q += lam * dq
        if step < 1e-13:
            break
    else:
        raise RuntimeError("collocation Newton failed to converge")
    qp = D @ q
    return t[::-1].copy(), q[::-1].copy(), qp[::-1].copy()


def _bary_eval(tn: np.ndarray, vals: np.ndarray, x: float) -> float:
    """Barycentric interpolation on an ascending Chebyshev-Lobatto grid."""
    N = len(tn) - 1
    d = x - tn
    j = int(np.argmin(np.abs(d)))
    if abs(d[j]) < 1e-13:
        return float(vals[j])
    w = np.ones(N + 1)
    w[0] = w[N] = 0.5
    w *= (-1.0) ** np.arange(N + 1)
    r = w / d
    return float(np.dot(r, vals) / np.sum(r))


def _march(xi: float, t_min: float, t_max: float, tol: float) -> Trajectory:
    q0, qp0 = hm_seed(t_max, xi)
    n = int(round((t_max - t_min) / GRID_STEP))
    grid = t_max - GRID_STEP * np.arange(n + 1)
    return solve_to_grid(_pii_rhs, t_max, [q0, qp0], grid, jet2=_pii_jet2,
                         rtol=tol, atol=1e-18, max_step=GRID_STEP)


def solve_q0(xi: float, t_min: float = -12.0, t_max: float = 12.5,
             tol: float = 1e-12) -> TranscendentSolution:
    """Solve for the alpha=0 family member q0(.; xi) on [t_min, t_max]."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if t_min < -40.0:
        raise ValueError("t_min < -40 unsupported")
    if t_max < 6.0:
        raise ValueError("t_max must be >= 6")
    params = PIIParams(alpha=0.0, xi=xi)
    n = int(round((t_max - t_min) / GRID_STEP))
    grid = np.linspace(t_min, t_max, n + 1)
    if xi == 0.0:
        states = np.zeros((n + 1, 2))
        return TranscendentSolution(params, grid, states)
    if xi < 1.0:
        traj = _march(xi, t_min, t_max, tol)
        states = traj.states[::-1].copy()
        return TranscendentSolution(params, grid, states)
    # xi = 1: collocation over [t_min, t_max] carries the left part to full
    # accuracy (boundary data: tail seed on the right, left asymptote on the
    # left); the exponentially small right tail, which a global polynomial
    # cannot resolve relatively, is taken from the march instead.  Marching
    # leftward is the stable direction for the decaying tail and doubles
    # (continued to -4) as the Newton initial guess.
    t_switch = 2.0
    t_guess = max(t_min, -4.0)
    march = _march(1.0, t_guess, t_max, tol)
    mgrid = march.grid[::-1].copy()
    mstates = march.states[::-1].copy()
    N = 170 + int(10 * (t_max - t_min))
    tc, qc, qpc = _collocate_full(t_min, t_max, mgrid, mstates[:, 0], N)
    i_switch = int(round((t_switch - t_min) / GRID_STEP))
    states = np.empty((n + 1, 2))
    for j in range(i_switch + 1):
        states[j, 0] = _bary_eval(tc, qc, grid[j])
        states[j, 1] = _bary_eval(tc, qpc, grid[j])
    i_m = int(round((t_switch - t_guess) / GRID_STEP))
    states[i_switch + 1:] = mstates[i_m + 1:]
    return TranscendentSolution(params, grid, states)


def transseries_u0(x: float, xi: float) -> float:
    """Two-instanton tail expansion of u0(x; xi); valid for x >= 4."""
    if x < 4.0:
        raise ValueError("tail expansion requires x >= 4")
    if xi == 0.0:
        return 0.0
    z = x ** 1.5
    k = COEFFS
    one = xi * math.exp(-(4.0 / 3.0) * z) / (8.0 * math.pi * x) \
        * (1.0 + k.c / (2.0 * z) + k.c1 / (2.0 * z * z))
    two = xi * xi * math.exp(-(8.0 / 3.0) * z) / (128.0 * math.pi ** 2 * x ** 2.5) \
        * (1.0 + k.d / z + k.d1 / (z * z))
    return one + two


class SigmaSolution:
    """A sigma-form function u(x) with jets on a uniform grid.

    ``values`` carries (u, u') as a :class:`Trajectory`; dense evaluation of
    (u, u', u'') uses stored jets.  ``mask`` flags grid intervals poisoned by
    poles (zeros of q0 for members built from log-derivatives).
    """

    def __init__(self, a: float, xi: float, grid: np.ndarray, jets: np.ndarray,
                 mask: np.ndarray | None = None):
        self.a = float(a)
        self.xi = float(xi)
        self.grid = np.asarray(grid, dtype=float)
        # jet columns u, u', u'', u''' and optionally u''''
        self._jets = np.asarray(jets, dtype=float)
        self._h = float(self.grid[1] - self.grid[0])
        self.mask = np.zeros(len(self.grid), dtype=bool) if mask is None else mask
        self.values = Trajectory(self.grid, self._jets[:, 0:2],
                                 self._jets[:, 1:3], self._jets[:, 2:4])

    @property
    def domain(self) -> tuple[float, float]:
        return (float(self.grid[0]), float(self.grid[-1]))

    def ok(self, x: float) -> bool:
        """False inside grid intervals contaminated by a pole."""
        i = min(int((x - self.grid[0]) / self._h), len(self.grid) - 2)
        return not (self.mask[i] or self.mask[i + 1])

    def u_jet(self, x: float) -> tuple[float, float, float]:
        """(u, u', u'') by dense interpolation of the stored jets."""
        g = self.grid
        if not g[0] <= x <= g[-1]:
            raise ValueError("x=%g outside [%g, %g]" % (x, g[0], g[-1]))
        if not self.ok(x):
            raise ArithmeticError("evaluation at x=%g hits a pole interval" % x)
        i = min(int((x - g[0]) / self._h), len(g) - 2)
        if x == g[i]:
            j = self._jets[i]
            return float(j[0]), float(j[1]), float(j[2])
        out = []
        t0, t1 = g[i], g[i + 1]
        h = t1 - t0
        u = (x - t0) / h
        ncols = self._jets.shape[1]
        for col in range(3):
            y0, y1 = self._jets[i, col], self._jets[i + 1, col]
            d0, d1 = self._jets[i, col + 1], self._jets[i + 1, col + 1]
            if col + 2 < ncols:
                s0, s1 = self._jets[i, col + 2], self._jets[i + 1, col + 2]
                A = y1 - y0 - d0 * h - 0.5 * s0 * h * h
                B = (d1 - d0 - s0 * h) * h
                C = (s1 - s0) * h * h
                pa = 10 * A - 4 * B + 0.5 * C
                pb = -15 * A + 7 * B - C
                pc = 6 * A - 3 * B + 0.5 * C
                out.append(y0 + d0 * h * u + 0.5 * s0 * h * h * u * u
                           + u ** 3 * (pa + u * (pb + u * pc)))
            else:
                A = y1 - y0 - d0 * h
                B = (d1 - d0) * h
                out.append(y0 + d0 * h * u + u * u * (3 * A - B + u * (B - 2 * A)))
        return out[0], out[1], out[2]

    def __call__(self, x: float) -> float:
        return self.u_jet(x)[0]


def sigma0_from_q0(sol: TranscendentSolution) -> SigmaSolution:
    """u0(x; xi) = int_x^inf q0^2 with the tail beyond the grid from the
    trans-series; u0' = -q0^2 by construction."""
    if sol.params.alpha != 0.0:
        raise ValueError("sigma0_from_q0 requires the alpha=0 family")
    xi = sol.params.xi
    g = sol.grid
    n = len(g)
    u = np.empty(n)
    u[-1] = transseries_u0(g[-1], xi) if xi > 0 else 0.0
    xg, wg = _GL6
    for i in range(n - 2, -1, -1):
        mid = 0.5 * (g[i] + g[i + 1])
        rad = 0.5 * (g[i + 1] - g[i])
        acc = 0.0
        for xx, ww in zip(xg, wg):
            qv = sol.eval(mid + rad * xx)[0]
            acc += ww * qv * qv
        u[i] = u[i + 1] + rad * acc
    q = sol._q
    qp = sol._qp
    qpp = g * q + 2.0 * q ** 3
    qppp = q + g * qp + 6.0 * q ** 2 * qp
    jets = np.column_stack([u, -q * q, -2.0 * q * qp,
                            -2.0 * qp * qp - 2.0 * q * qpp,
                            -6.0 * qp * qpp - 2.0 * q * qppp])
    return SigmaSolution(0.0, xi, g, jets)


def sigma_residual(u: SigmaSolution, a: float | None = None,
                   x_lo: float | None = None, x_hi: float | None = None,
                   n_samples: int = 240) -> float:
    """Max residual of the sigma form |(u'')^2 + 4u'((u')^2 - x u' + u) - a^2|
    over an off-grid sample of the domain (pole intervals skipped)."""
    if a is None:
        a = u.a
    lo = u.grid[0] if x_lo is None else x_lo
    hi = u.grid[-1] if x_hi is None else x_hi
    xs = np.linspace(lo, hi, n_samples) + 0.37 * u._h
    worst = 0.0
    for x in xs:
        x = float(min(max(x, u.grid[0]), u.grid[-1]))
        if not u.ok(x):
            continue
        uu, up, upp = u.u_jet(x)
        r = abs(upp ** 2 + 4.0 * up * (up ** 2 - x * up + uu) - a * a)
        worst = max(worst, r)
    return worst


def oscillation_constants(xi: float) -> tuple[float, float]:
    """(d^2, c) of the oscillatory left asymptote for 0 < xi < 1:
    d^2 = -log(1-xi)/pi and c = (3/2) d^2 log 2 + arg Gamma(1 - i d^2/2) - pi/4.
    """
    if not 0.0 < xi < 1.0:
        raise ValueError("oscillation constants need 0 < xi < 1")
    d2 = -math.log1p(-xi) / math.pi
    c = 1.5 * d2 * math.log(2.0) + log_gamma_arg(complex(1.0, -0.5 * d2)) - math.pi / 4.0
    return d2, c


def envelope_amplitude(sol: TranscendentSolution, t: float) -> float:
    """Local oscillation envelope sqrt(q^2 sqrt(-t) + q'^2/sqrt(-t)); for
    0 < xi < 1 and t << 0 this estimates d (times (-t)^{-1/4} removed)."""
    if t >= -1.0:
        raise ValueError("envelope extraction requires t << 0")
    q, qp = sol.eval(t)
    r = math.sqrt(-t)
    return math.sqrt(q * q * r + qp * qp / r)


@lru_cache(maxsize=32)
def family(xi: float, t_min: float = -12.0, t_max: float = 12.5) -> TranscendentSolution:
    """Cached solve of q0(.; xi); shared by the distribution modules."""
    return solve_q0(xi, t_min, t_max)


@lru_cache(maxsize=32)
def family_sigma(xi: float, t_min: float = -12.0, t_max: float = 12.5) -> SigmaSolution:
    return sigma0_from_q0(family(xi, t_min, t_max))
