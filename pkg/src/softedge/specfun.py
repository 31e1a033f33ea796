"""Special functions: Airy Ai/Ai', modified Bessel I_n, and the Gamma function.

Airy values are produced by a hybrid scheme with no external dependencies:

* ``x >= 9``: the standard asymptotic expansions truncated at the smallest
  term (the smallest term at x=9 is ~2e-16 relative).
* ``-30.5 <= x < 9``: Taylor recentering along a chain of anchor points.
  ``y'' = x y`` gives the three-term Taylor recurrence
  ``(k+2)(k+1) c_{k+2} = a c_k + c_{k-1}``, so 34-term series on steps of
  0.25 carry machine precision.  The chain is seeded at x=9 from the
  asymptotic series and marched leftward, which is the stable direction
  for Ai.

Bessel I_n uses Miller's backward recurrence normalized with the
generating-function identity ``e^x = I_0 + 2 sum_k I_k``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List

__all__ = ["AiryPair", "airy", "airy_bi", "bessel_i", "bessel_i_row", "gamma_fn",
           "log_gamma_arg"]

_SQRTPI = math.sqrt(math.pi)

AIRY_MIN, AIRY_MAX = -30.0, 200.0
_ANCH_HI, _ANCH_LO, _ANCH_STEP = 9.0, -30.5, 0.25


@dataclass(frozen=True)
class AiryPair:
    """Value and derivative of the Airy function at one point."""
    ai: float
    ai_prime: float

    def __iter__(self):
        return iter((self.ai, self.ai_prime))


def _asym_pos(x: float) -> tuple[float, float]:
    # asymptotic series for x >= 9; u_k = u_{k-1} (6k-5)(6k-1)/(72k),
    # derivative series via v_k = -u_k (6k+1)/(6k-1)
    zeta = (2.0 / 3.0) * x ** 1.5
    su = sv = 1.0
    term = 1.0
    k = 0
    while k < 60:
        k += 1
        term *= (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        tu = term / zeta ** k
        du = (-1.0) ** k * tu
        su += du
        sv += du * (6 * k + 1) / (1.0 - 6 * k)
        if tu < 1e-19 * abs(su):
            break
    pre = math.exp(-zeta) / (2.0 * _SQRTPI)
    return pre * su / x ** 0.25, -pre * sv * x ** 0.25


def _taylor_step(a: float, ya: float, ypa: float, h: float, nterms: int = 34):
    c = [0.0] * (nterms + 2)
    c[0], c[1], c[2] = ya, ypa, a * ya / 2.0
    for k in range(1, nterms):
        c[k + 2] = (a * c[k] + c[k - 1]) / ((k + 2) * (k + 1))
    y = 0.0
    for k in range(nterms + 1, -1, -1):
        y = y * h + c[k]
    yp = 0.0
    for k in range(nterms + 1, 0, -1):
        yp = yp * h + k * c[k]
    return y, yp


def _build_chain(a0: float, y0: float, yp0: float, a1: float, step: float):
    """Anchor list from a0 toward a1 (sign of step sets direction)."""
    n = int(round((a1 - a0) / step))
    a, y, yp = a0, y0, yp0
    out = [(a, y, yp)]
    for _ in range(abs(n)):
        y, yp = _taylor_step(a, y, yp, step)
        a += step
        out.append((a, y, yp))
    return out


_ai_anchors: List[tuple] | None = None
_bi_anchors: List[tuple] | None = None


def _ai_chain():
    global _ai_anchors
    if _ai_anchors is None:
        y, yp = _asym_pos(_ANCH_HI)
        chain = _build_chain(_ANCH_HI, y, yp, _ANCH_LO, -_ANCH_STEP)
        _ai_anchors = chain[::-1]
    return _ai_anchors


def airy(x: float) -> AiryPair:
    """Airy Ai(x) and Ai'(x) on the working range [-30, 200]."""
    if not AIRY_MIN <= x <= AIRY_MAX:
        raise ValueError("airy: x=%g outside working range [%g, %g]"
                         % (x, AIRY_MIN, AIRY_MAX))
    if x >= _ANCH_HI:
        if x > 108.0:
            # |Ai| < 1e-300 here; underflow to zero is within contract
            return AiryPair(0.0, 0.0)
        return AiryPair(*_asym_pos(x))
    anchors = _ai_chain()
    i = int(round((x - _ANCH_LO) / _ANCH_STEP))
    i = min(max(i, 0), len(anchors) - 1)
    a, ya, ypa = anchors[i]
    if x == a:
        return AiryPair(ya, ypa)
    return AiryPair(*_taylor_step(a, ya, ypa, x - a))


def _bi_chain():
    # Bi from exact Maclaurin data at 0, marched both ways (stable: Bi grows
    # rightward; both solutions oscillate for x < 0).  Internal use only.
    global _bi_anchors
    if _bi_anchors is None:
        bi0 = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
        bip0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)
        right = _build_chain(0.0, bi0, bip0, 9.0, _ANCH_STEP)
        left = _build_chain(0.0, bi0, bip0, _ANCH_LO, -_ANCH_STEP)
        _bi_anchors = left[::-1] + right[1:]
    return _bi_anchors


def airy_bi(x: float) -> AiryPair:
    """Companion solution Bi(x), Bi'(x) on [-30, 9]; used for Wronskian checks."""
    if not AIRY_MIN <= x <= 9.0:
        raise ValueError("airy_bi: x outside [-30, 9]")
    anchors = _bi_chain()
    i = int(round((x - _ANCH_LO) / _ANCH_STEP))
    i = min(max(i, 0), len(anchors) - 1)
    a, ya, ypa = anchors[i]
    if x == a:
        return AiryPair(ya, ypa)
    return AiryPair(*_taylor_step(a, ya, ypa, x - a))


def bessel_i_row(n_max: int, x: float) -> List[float]:
    """I_0(x) .. I_{n_max}(x) by one Miller backward pass."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not 0.0 <= x <= 200.0:
        raise ValueError("bessel_i: x outside [0, 200]")
    if x == 0.0:
        return [1.0] + [0.0] * n_max
    start = n_max + int(math.sqrt(80.0 * max(x, 1.0))) + 25
    out = [0.0] * (start + 1)
    rp, r = 0.0, 1e-305
    out[start] = r
    for k in range(start, 0, -1):
        rm = rp + (2.0 * k / x) * r
        out[k - 1] = rm
        rp, r = r, rm
        if abs(rm) > 1e250:
            sc = 1e-250
            rp *= sc
            r *= sc
            for j in range(k - 1, start + 1):
                out[j] *= sc
    norm = out[0] + 2.0 * sum(out[1:])
    scale = math.exp(x) / norm
    return [v * scale for v in out[:n_max + 1]]


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function I_n(x) for integer order; I_{-n} = I_n."""
    n = abs(int(n))
    if n > 200:
        raise ValueError("bessel_i: |n| > 200 unsupported")
    return bessel_i_row(n, x)[n]


def gamma_fn(x: float) -> float:
    """Gamma function for positive real argument."""
    if not x > 0:
        raise ValueError("gamma_fn requires x > 0")
    return math.gamma(x)


# Lanczos coefficients (g = 607/128, 15 terms) for the complex log-Gamma
_LANCZOS_G = 607.0 / 128.0
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def log_gamma_arg(z: complex) -> float:
    """arg Gamma(z) for Re z > 0, via a Lanczos approximation.

    Needed for the phase constant in oscillatory left asymptotics; accuracy
    ~1e-13 in the strip used (|Im z| < 2).
    """
    z = complex(z)
    if z.real <= 0:
        raise ValueError("log_gamma_arg requires Re z > 0")
    zz = z - 1.0
    s = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        s += c / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    lg = 0.5 * math.log(2.0 * math.pi) + (zz + 0.5) * cmath.log(t) - t + cmath.log(s)
    return lg.imag
