"""Particle-generated Herglotz functions and their verification toolkit.

A function here is b + c*w + sum_x 1/(x - w) over a finite particle list,
or the Airy-anchored variant sum_i [1/(x_i - w) - 1/a_i] - Ai'(0)/Ai(0)
whose exact-zero specialization is -Ai'/Ai. Checks cover the square-root
asymptote high in the half-plane, derivative inequalities, rigidity
against the Airy zeros, and test-function integration against the
representing measure through the planar (Helffer-Sjostrand) formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
import scipy.integrate as integrate

from . import airy

_POLE_TOL = 1e-12  # below this 1/(x-w) has no relative accuracy left


class TailMode(Enum):
    NONE = "none"
    AIRY_TAIL = "airy_tail"


class Representation(Enum):
    GENERAL = "general"
    AIRY_ANCHORED = "airy_anchored"


class ParticleProximityError(ValueError):
    def __init__(self, w, particle_index, distance):
        self.w = w
        self.particle_index = particle_index
        self.distance = distance
        super().__init__(
            f"w={w} is within {distance:.3e} of particle #{particle_index}"
        )


_ZERO_CACHE: dict[int, airy.AiryZeroTable] = {}


def anchor_table(count: int) -> airy.AiryZeroTable:
    """Shared read-only Airy zero table, grown on demand."""
    have = max(_ZERO_CACHE) if _ZERO_CACHE else 0
    if count > have:
        size = max(count, 2 * have, 1024)
        _ZERO_CACHE.clear()
        _ZERO_CACHE[size] = airy.airy_zeros(size)
        have = size
    return _ZERO_CACHE[have]


@dataclass(frozen=True)
class ParticleMeasure:
    """Ordered particle configuration x_1 >= x_2 >= ... (unit atoms)."""

    particles: np.ndarray
    tail_mode: TailMode = TailMode.NONE
    # implied tail particles sit at a_i + tail_shift for i beyond the list
    tail_shift: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.particles, dtype=float)
        if p.ndim != 1:
            raise ValueError("particles must be a 1-d array")
        if p.size > 1 and np.any(np.diff(p) > 0):
            raise ValueError("particles must be non-increasing")
        object.__setattr__(self, "particles", p)

    @property
    def count(self) -> int:
        return int(self.particles.size)


@dataclass(frozen=True)
class NevanlinnaFn:
    measure: ParticleMeasure
    b: float = 0.0
    c: float = 0.0
    representation: Representation = Representation.GENERAL

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("c must be >= 0")
        if self.representation is Representation.AIRY_ANCHORED:
            if self.b != 0.0 or self.c != 0.0:
                raise ValueError("anchored representation forces b = c = 0")
        elif self.measure.tail_mode is TailMode.AIRY_TAIL:
            raise ValueError("airy_tail requires the anchored representation")


def airy_anchored_fn(particles, tail: bool = True,
                     tail_shift: float = 0.0) -> NevanlinnaFn:
    mode = TailMode.AIRY_TAIL if tail else TailMode.NONE
    return NevanlinnaFn(
        measure=ParticleMeasure(particles, tail_mode=mode,
                                tail_shift=tail_shift),
        representation=Representation.AIRY_ANCHORED,
    )


def _check_pole_distance(w: complex, particles: np.ndarray):
    if particles.size == 0:
        return
    d = np.abs(particles - w)
    j = int(np.argmin(d))
    if d[j] < _POLE_TOL:
        raise ParticleProximityError(w, j + 1, float(d[j]))


def evaluate(fn: NevanlinnaFn, w) -> complex:
    """Y(w); exact finite sum plus the analytic tail when configured."""
    w = complex(w)
    p = fn.measure.particles
    _check_pole_distance(w, p)
    if fn.representation is Representation.AIRY_ANCHORED:
        n = fn.measure.count
        a = anchor_table(n).zeros[:n]
        out = complex(np.sum(1.0 / (p - w) - 1.0 / a)) - airy.AIP0 / airy.AI0
        if fn.measure.tail_mode is TailMode.AIRY_TAIL:
            # shifted tail particles: 1/(a_i + s - w) = 1/(a_i - (w - s)),
            # and the -1/a_i anchors are shift-free, so this is exact
            tail, _ = airy.weierstrass_tail(w - fn.measure.tail_shift, n)
            out += tail
        return out
    out = fn.b + fn.c * w
    if p.size:
        out += complex(np.sum(1.0 / (p - w)))
    return out


def _tail_integrand_factory(k: int, w: complex):
    # integral over the asymptotic zero density sqrt(x)/pi of the k-th
    # derivative summand k!/(a-w)^{k+1} with a = -x
    kf = math.factorial(k)

    def g(x):
        return kf * math.sqrt(x) / math.pi / (-x - w) ** (k + 1)

    return g


def _derivative_tail(w: complex, n_table: int, k: int) -> complex:
    """sum_{i>N} k!/(a_i - w)^{k+1} via density quadrature plus the
    midpoint Euler-Maclaurin correction."""
    x0 = airy._zero_profile(n_table + 0.5)
    g = _tail_integrand_factory(k, w)

    def sub(u):  # x = x0/u^2 maps (0,1] onto [x0, inf)
        return g(x0 / u**2) * 2.0 * x0 / u**3

    re, _ = integrate.quad(lambda u: sub(u).real, 0.0, 1.0, limit=200)
    im, _ = integrate.quad(lambda u: sub(u).imag, 0.0, 1.0, limit=200)
    t = n_table + 0.5
    a = -airy._zero_profile(t)
    ap = -math.pi / math.sqrt(-a)
    g1 = -math.factorial(k + 1) * ap / (a - w) ** (k + 2)
    return complex(re, im) + g1 / 24.0


def derivative(fn: NevanlinnaFn, w, k: int = 1) -> complex:
    """k-th derivative of Y, by exact term-wise differentiation."""
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    w = complex(w)
    p = fn.measure.particles
    _check_pole_distance(w, p)
    out = complex(np.sum(math.factorial(k) / (p - w) ** (k + 1))) if p.size else 0j
    if fn.representation is Representation.GENERAL and k == 1:
        out += fn.c
    if fn.measure.tail_mode is TailMode.AIRY_TAIL:
        out += _derivative_tail(w - fn.measure.tail_shift,
                                fn.measure.count, k)
    return out


# ---------------------------------------------------------------------------
# square-root envelope checks

@dataclass(frozen=True)
class AiryLikeParams:
    frak_d: float
    c_star: float

    def __post_init__(self):
        if not 0 < self.frak_d < 1:
            raise ValueError("frak_d must lie in (0,1)")
        if self.c_star <= 0:
            raise ValueError("c_star must be positive")


@dataclass(frozen=True)
class GridSpec:
    """Square-root-parametrized lattice w = (kappa + i eta)^2 covering the
    envelope region Im[w] >= c_star sqrt(Re[w] v 0 + 1), |w| <= cap."""

    cap: float = 1e4
    n_kappa: int = 24
    n_eta: int = 24

    def points(self, c_star: float) -> np.ndarray:
        rmax = math.sqrt(self.cap)
        kap = np.linspace(-rmax, rmax, self.n_kappa)
        eta = np.geomspace(0.05 * rmax, rmax, self.n_eta)
        k, e = np.meshgrid(kap, eta)
        w = (k + 1j * e) ** 2
        w = w.ravel()
        keep = (np.abs(w) <= self.cap) & (w.imag > 0)
        keep &= w.imag >= c_star * np.sqrt(np.maximum(w.real, 0.0) + 1.0)
        return w[keep]


@dataclass(frozen=True)
class AiryLikeReport:
    poles_bounded: bool
    max_pole: float
    envelope_violations: list = field(default_factory=list)
    fitted_constant: float = 0.0

    @property
    def passed(self) -> bool:
        return self.poles_bounded and not self.envelope_violations


def check_airy_like(fn: NevanlinnaFn, params: AiryLikeParams,
                    grid: GridSpec | None = None) -> AiryLikeReport:
    """Grid check of the two square-root-asymptote conditions: pole upper
    bound and |Y(w) - sqrt(w)| <= C Im[sqrt(w)]^{1-d}/Im[w] high up."""
    grid = grid or GridSpec()
    p = fn.measure.particles
    max_pole = float(p[0]) if p.size else -math.inf
    poles_ok = max_pole <= params.c_star
    violations = []
    fitted = 0.0
    for w in grid.points(params.c_star):
        y = evaluate(fn, w)
        sw = cmath.sqrt(w)
        dev = abs(y - sw)
        bound = params.c_star * sw.imag ** (1.0 - params.frak_d) / w.imag
        fitted = max(fitted, dev * w.imag / sw.imag ** (1.0 - params.frak_d))
        if dev > bound:
            violations.append((complex(w), dev, bound))
    return AiryLikeReport(poles_bounded=poles_ok, max_pole=max_pole,
                          envelope_violations=violations,
                          fitted_constant=fitted)


@dataclass(frozen=True)
class WedgeReport:
    max_statistic: float
    bounded: bool
    argmax_w: complex


def closeR_bound_check(fn: NevanlinnaFn, B: float, r_max: float = 1e4,
                       n_r: int = 20, n_arg: int = 12) -> WedgeReport:
    """max |Y(w)-sqrt(w)| |w|^{1/2} over the wedge arg in (0, 3pi/4),
    |w| in (B, r_max], compared against B."""
    stat = -math.inf
    arg_w = 0j
    for r in np.geomspace(max(B * 1.01, 1.0), r_max, n_r):
        for th in np.linspace(0.02, 0.75 * math.pi - 0.02, n_arg):
            w = r * cmath.exp(1j * th)
            s = abs(evaluate(fn, w) - cmath.sqrt(w)) * math.sqrt(r)
            if s > stat:
                stat, arg_w = s, w
    return WedgeReport(max_statistic=float(stat), bounded=stat <= B,
                       argmax_w=arg_w)


# ---------------------------------------------------------------------------
# rigidity against the Airy zeros

@dataclass(frozen=True)
class RigidityReport:
    statistic: float  # max_i |x_i - a_i| i^{delta/6} / K^4
    argmax_index: int
    deviations: np.ndarray


def rigidity_check(measure: ParticleMeasure, K: float, delta: float,
                   enforce_K: bool = True) -> RigidityReport:
    if enforce_K and K <= 100:
        raise ValueError("K must exceed 100 (pass enforce_K=False to relax)")
    x = measure.particles
    n = x.size
    if n < 1:
        raise ValueError("measure must contain at least one particle")
    a = anchor_table(n).zeros[:n]
    i = np.arange(1, n + 1)
    dev = np.abs(x - a) * i ** (delta / 6.0) / K**4
    j = int(np.argmax(dev))
    return RigidityReport(statistic=float(dev[j]), argmax_index=j + 1,
                          deviations=dev)


# ---------------------------------------------------------------------------
# planar integration against the representing measure

@dataclass(frozen=True)
class TestFunction:
    """f with two explicit derivatives and compact support [lo, hi]."""

    f: Callable[[float], float]
    fp: Callable[[float], float]
    fpp: Callable[[float], float]
    lo: float
    hi: float


@dataclass(frozen=True)
class CutoffFunction:
    """chi(y) = 1 near 0, supported in [0, y1]; chi' supplied."""

    chi: Callable[[float], float]
    chip: Callable[[float], float]
    y1: float


def _smoothstep(t):
    # C^2 quintic ramp on [0,1]
    return 6 * t**5 - 15 * t**4 + 10 * t**3


def _smoothstep_p(t):
    return 30 * t**4 - 60 * t**3 + 30 * t**2


def _smoothstep_pp(t):
    return 120 * t**3 - 180 * t**2 + 60 * t


def smooth_indicator(lo: float, hi: float, ramp: float) -> TestFunction:
    """= 1 on [lo, hi], C^2 ramps of width `ramp` down to 0 outside."""

    def f(x):
        if x <= lo - ramp or x >= hi + ramp:
            return 0.0
        if x < lo:
            return _smoothstep((x - lo + ramp) / ramp)
        if x > hi:
            return _smoothstep((hi + ramp - x) / ramp)
        return 1.0

    def fp(x):
        if lo - ramp < x < lo:
            return _smoothstep_p((x - lo + ramp) / ramp) / ramp
        if hi < x < hi + ramp:
            return -_smoothstep_p((hi + ramp - x) / ramp) / ramp
        return 0.0

    def fpp(x):
        if lo - ramp < x < lo:
            return _smoothstep_pp((x - lo + ramp) / ramp) / ramp**2
        if hi < x < hi + ramp:
            return _smoothstep_pp((hi + ramp - x) / ramp) / ramp**2
        return 0.0

    return TestFunction(f=f, fp=fp, fpp=fpp, lo=lo - ramp, hi=hi + ramp)


def default_cutoff(y1: float = 1.0) -> CutoffFunction:
    half = 0.5 * y1

    def chi(y):
        y = abs(y)
        if y <= half:
            return 1.0
        if y >= y1:
            return 0.0
        return _smoothstep((y1 - y) / half)

    def chip(y):
        s = 1.0 if y >= 0 else -1.0
        y = abs(y)
        if y <= half or y >= y1:
            return 0.0
        return -s * _smoothstep_p((y1 - y) / half) / half

    return CutoffFunction(chi=chi, chip=chip, y1=y1)


class QuadratureError(RuntimeError):
    def __init__(self, message, error_estimate):
        self.error_estimate = error_estimate
        super().__init__(message)


def hs_integrate(fn: NevanlinnaFn, f: TestFunction,
                 chi: CutoffFunction | None = None,
                 tol: float = 1e-7) -> float:
    """integral of f against the representing measure, recovered from Y by
    the planar formula

        (2/pi) * double-integral over the upper half-plane of
        Re[ dbar( (f(x) + i y f'(x)) chi(y) ) * Y(x+iy) ]

    which reduces to -(1/pi) * Im[(y f''(x) chi(y)
                                  + (f(x) + i y f'(x)) chi'(y)) Y(x+iy)].
    Requires b = c = 0 so the result is exactly the atom count weighted
    by f.
    """
    chi = chi or default_cutoff()
    if fn.b != 0.0 or fn.c != 0.0:
        raise ValueError("particle counting needs b = c = 0")

    def inner(y):
        def integrand(x):
            w = complex(x, y)
            yv = evaluate(fn, w)
            term = (y * f.fpp(x) * chi.chi(y)
                    + (f.f(x) + 1j * y * f.fp(x)) * chi.chip(y))
            return -(term * yv).imag / math.pi

        atoms = fn.measure.particles
        pts = [x for x in atoms if f.lo < x < f.hi] if y < 0.1 else []
        val, err = integrate.quad(integrand, f.lo, f.hi, limit=400,
                                  points=pts[:50] or None,
                                  epsabs=0.02 * tol, epsrel=1e-9)
        return val, err

    total, est = integrate.quad(lambda y: inner(y)[0], 0.0, chi.y1,
                                limit=200, epsabs=0.5 * tol, epsrel=1e-9)
    if est > 10 * tol:
        raise QuadratureError(
            f"outer quadrature error {est:.2e} above tolerance", est)
    return total
