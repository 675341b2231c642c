"""Airy function toolkit: evaluation, zeros, log-derivative, Weierstrass sum.

The complex evaluator is backed by scipy's AMOS routines; the Maclaurin
series and the large-|w| expansion are implemented independently so they
can serve as oracles and as testable predicates for the asymptotic
envelope used everywhere else in this package.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.special as sp

# Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

# |w| below which the Maclaurin series is the method of record.
SERIES_RADIUS = 6.0

# Re[w] beyond which unscaled evaluation underflows; use the log-scaled path.
LOG_SCALED_THRESHOLD = 40.0


class AiryMethod(Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"


class AiryOverflowError(ArithmeticError):
    """exp(-(2/3)w^{3/2}) left the representable range; use airy_log."""


class PoleProximityError(ValueError):
    """Evaluation point is too close to a zero of Ai."""

    def __init__(self, w, zero_index, distance):
        self.w = w
        self.zero_index = zero_index
        self.distance = distance
        super().__init__(
            f"w={w} is within {distance:.3e} of Airy zero #{zero_index}"
        )


class InsufficientTableError(ValueError):
    """Zero table too short for the requested tail accuracy."""


@dataclass(frozen=True)
class AiryValue:
    value: complex
    derivative: complex
    method: AiryMethod


@dataclass(frozen=True)
class AiryZeroTable:
    """Zeros of Ai, ordered 0 > a_1 > a_2 > ... (stored descending)."""

    zeros: np.ndarray
    count: int
    envelope_constant: float  # max_i |a_i + (3*pi*i/2)^{2/3}| * i^{1/3}

    def __post_init__(self):
        object.__setattr__(self, "zeros", np.asarray(self.zeros, dtype=float))


def airy_series(w, max_terms: int = 120):
    """Maclaurin-series Ai(w), Ai'(w), Ai''(w), summed to machine precision.

    Ai = Ai(0)*f + Ai'(0)*g with f, g the standard Airy series; terms are
    generated by the recurrence implied by Ai'' = w*Ai.
    """
    w = complex(w)
    w3 = w * w * w
    # f = sum f_k w^{3k},      f_{k} = f_{k-1}/((3k)(3k-1))   (times w^3)
    # g = sum g_k w^{3k+1},    g_{k} = g_{k-1}/((3k+1)(3k))
    f_term = 1.0 + 0.0j
    g_term = w
    f = f_term
    g = g_term
    fp = 0.0 + 0.0j  # f' and g' accumulate d/dw of each term
    gp = 1.0 + 0.0j
    fpp = 0.0 + 0.0j
    gpp = 0.0 + 0.0j
    for k in range(1, max_terms):
        f_term = f_term * w3 / ((3 * k) * (3 * k - 1))
        g_term = g_term * w3 / ((3 * k + 1) * (3 * k))
        f += f_term
        g += g_term
        if w != 0:
            fp += 3 * k * f_term / w
            gp += (3 * k + 1) * g_term / w
            fpp += 3 * k * (3 * k - 1) * f_term / (w * w)
            gpp += (3 * k + 1) * (3 * k) * g_term / (w * w)
        if abs(f_term) + abs(g_term) < 1e-18 * (abs(f) + abs(g)):
            break
    ai = AI0 * f + AIP0 * g
    aip = AI0 * fp + AIP0 * gp
    aipp = AI0 * fpp + AIP0 * gpp
    return ai, aip, aipp


def _asymptotic_coeffs(n_terms: int):
    """u_k and v_k of the large-|w| expansion (DLMF 9.7)."""
    u = np.empty(n_terms)
    v = np.empty(n_terms)
    u[0] = v[0] = 1.0
    for k in range(1, n_terms):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        v[k] = u[k] * (6 * k + 1) / (1 - 6 * k)
    return u, v


_U_COEF, _V_COEF = _asymptotic_coeffs(40)


def airy_asymptotic(w, max_terms: int = 40):
    """Large-|w| expansion of (Ai, Ai') on the principal branch.

    Valid for |arg w| < pi; the series is truncated at its smallest term.
    """
    w = complex(w)
    if w.real < 0 and w.imag == 0:
        raise ValueError("asymptotic branch requires |arg w| < pi")
    zeta = (2.0 / 3.0) * w ** 1.5
    if abs(zeta.real) > 700.0:
        raise AiryOverflowError(f"exp(-zeta) out of range at w={w}")
    s_ai = 1.0 + 0.0j
    s_aip = 1.0 + 0.0j
    prev = math.inf
    for k in range(1, min(max_terms, _U_COEF.size)):
        term = _U_COEF[k] / zeta**k
        if abs(term) >= prev:
            break
        s_ai += (-1) ** k * term
        s_aip += (-1) ** k * _V_COEF[k] / zeta**k
        prev = abs(term)
    pref = cmath.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref * s_ai / w**0.25
    aip = -pref * s_aip * w**0.25
    return ai, aip


def airy_eval(w) -> AiryValue:
    """Ai(w) and Ai'(w) on the principal branch.

    Raises AiryOverflowError when the unscaled value leaves the
    representable range (use airy_log instead).
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError("w must be finite")
    method = AiryMethod.SERIES if abs(w) <= SERIES_RADIUS else AiryMethod.ASYMPTOTIC
    if method is AiryMethod.ASYMPTOTIC and not (w.real < 0 and w.imag == 0):
        zeta = (2.0 / 3.0) * w ** 1.5
        if abs(zeta.real) > 700.0:
            raise AiryOverflowError(f"w={w}: use airy_log for the scaled value")
    ai, aip, _, _ = sp.airy(w)
    if w.imag == 0.0:
        ai, aip = complex(ai.real), complex(aip.real)
    return AiryValue(value=complex(ai), derivative=complex(aip), method=method)


def airy_log(w):
    """(log Ai(w), log(-Ai'(w))) for large Re[w], via the scaled AMOS path.

    Avoids underflow of exp(-(2/3)w^{3/2}); intended for Re[w] > 40.
    """
    w = complex(w)
    zeta = (2.0 / 3.0) * w ** 1.5
    ai_s, aip_s, _, _ = sp.airye(w)  # Ai*exp(zeta), Ai'*exp(zeta)
    return cmath.log(ai_s) - zeta, cmath.log(-aip_s) - zeta


def _zero_guess(i):
    """Asymptotic location of the i-th Airy zero (i = 1, 2, ...)."""
    t = 3.0 * math.pi * (4.0 * np.asarray(i, dtype=float) - 1.0) / 8.0
    t2 = t * t
    # T(t) = t^{2/3} (1 + 5/48 t^-2 - 5/36 t^-4 + 77125/82944 t^-6)
    corr = 1.0 + 5.0 / (48.0 * t2) - 5.0 / (36.0 * t2 * t2) \
        + 77125.0 / (82944.0 * t2 * t2 * t2)
    return -(t ** (2.0 / 3.0)) * corr


def _ai_real(x):
    ai, _, _, _ = sp.airy(x)
    return ai


def _bisect_zero(lo, hi, tol=1e-13, max_iter=200):
    flo = _ai_real(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = _ai_real(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def airy_zeros(count: int) -> AiryZeroTable:
    """First `count` zeros of Ai, each accurate to 1e-10.

    Asymptotic initial guesses refined by safeguarded Newton; any index
    where Newton leaves its bracket falls back to bisection.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    idx = np.arange(1, count + 1)
    x = _zero_guess(idx)
    # brackets: midpoints between consecutive guesses (guesses are accurate
    # to ~1e-7 absolute already, so +-40% of the local gap always brackets)
    gaps = np.empty(count)
    gaps[:-1] = x[:-1] - x[1:]
    gaps[-1] = gaps[-2] if count > 1 else 1.0
    lo = x - 0.4 * gaps
    hi = x + 0.4 * gaps
    for _ in range(6):
        ai, aip, _, _ = sp.airy(x)
        step = ai / aip
        x_new = x - step
        bad = (x_new < lo) | (x_new > hi)
        x = np.where(bad, x, x_new)
        if np.all(np.abs(step) < 1e-13 * np.maximum(1.0, np.abs(x))):
            break
    # safeguard: bisection for any entry Newton did not pin down
    ai, _, _, _ = sp.airy(x)
    for j in np.nonzero(np.abs(ai) > 1e-11)[0]:
        x[j] = _bisect_zero(lo[j], hi[j])
    envelope = float(np.max(
        np.abs(x + (3.0 * math.pi * idx / 2.0) ** (2.0 / 3.0)) * idx ** (1.0 / 3.0)
    ))
    return AiryZeroTable(zeros=x, count=count, envelope_constant=envelope)


def nearest_zero_index(w) -> tuple[int, float]:
    """Index (1-based) and distance of the Airy zero nearest to w."""
    w = complex(w)
    if w.real >= -1.0:
        return 1, abs(w - _zero_guess(1))
    # invert the leading-order zero profile to find candidate indices
    i_est = max(1, int((2.0 / (3.0 * math.pi)) * (-w.real) ** 1.5))
    cand = np.arange(max(1, i_est - 2), i_est + 3)
    zs = _zero_guess(cand)
    for _ in range(4):  # polish the guesses so distances are meaningful
        ai, aip, _, _ = sp.airy(zs)
        zs = zs - ai / aip
    d = np.abs(w - zs)
    j = int(np.argmin(d))
    return int(cand[j]), float(d[j])


def airy_log_derivative(w) -> complex:
    """-Ai'(w)/Ai(w), the Stieltjes transform of the Airy zero measure.

    Raises PoleProximityError within 1e-8 of a zero.
    """
    w = complex(w)
    if abs(w.imag) < 1e-6 and w.real < 0:
        idx, dist = nearest_zero_index(w)
        if dist < 1e-8:
            raise PoleProximityError(w, idx, dist)
    # the exponential scaling cancels in the ratio, so the scaled AMOS
    # path works everywhere and never overflows
    ai_s, aip_s, _, _ = sp.airye(w)
    return -aip_s / ai_s


def _zero_profile(t):
    """Zero location -a as a function of the continuous index t >= 1."""
    tt = 3.0 * math.pi * (4.0 * t - 1.0) / 8.0
    return (tt ** (2.0 / 3.0)) * (1.0 + 5.0 / (48.0 * tt * tt))


def weierstrass_tail(w, n_table: int, order: int = 1):
    """sum_{i>N} [1/(a_i - w) - 1/a_i] via the asymptotic zero density.

    Midpoint Euler-Maclaurin against dt = sqrt(x)/pi dx; `order` >= 1 adds
    the g'(N+1/2)/24 correction. Returns (tail, error_estimate).
    """
    w = complex(w)
    x0 = _zero_profile(n_table + 0.5)
    s0 = cmath.sqrt(x0)
    sw = cmath.sqrt(w)
    # integral_{x0}^inf [1/(-x-w) + 1/x] sqrt(x)/pi dx = (2 sqrt(w)/pi) atan(sqrt(w/x0))
    tail = (2.0 * sw / math.pi) * _catan(sw / s0)
    err = abs(w) * 0.02 * n_table ** (-7.0 / 3.0)  # zero-profile truncation
    if order >= 1:
        t = n_table + 0.5
        a = -_zero_profile(t)
        ap = -math.pi / math.sqrt(-a)  # da/dt from the sqrt(-x)/pi density
        g1 = -ap * (1.0 / (a - w) ** 2 - 1.0 / a**2)
        tail += g1 / 24.0
        err += abs(g1) * 0.05  # next Euler-Maclaurin term is O(g''')
    else:
        err += abs(w) * 2.0 * x0 ** (-1.5)
    return tail, err


def _catan(z):
    return 0.5j * (cmath.log(1.0 - 1j * z) - cmath.log(1.0 + 1j * z))


def weierstrass_sum(w, zeros: AiryZeroTable, tail_order: int = 1,
                    tol: float = 1e-8) -> complex:
    """-Ai'(w)/Ai(w) from its pole expansion over the zero table.

    sum_i [1/(a_i - w) - 1/a_i] - Ai'(0)/Ai(0), with the indices beyond
    the table replaced by the asymptotic-density tail.
    """
    w = complex(w)
    a = zeros.zeros
    d = np.abs(a - w)
    if d.min() < 1e-12:
        idx = int(np.argmin(d)) + 1
        raise PoleProximityError(w, idx, float(d.min()))
    tail, err = weierstrass_tail(w, zeros.count, order=tail_order)
    if err > tol:
        raise InsufficientTableError(
            f"tail estimate {err:.2e} exceeds tolerance {tol:.2e} "
            f"with {zeros.count} zeros"
        )
    head = np.sum(1.0 / (a - w) - 1.0 / a)
    return complex(head + tail - AIP0 / AI0)
