"""Exact particle-side observables for the rescaled Stieltjes transform.

Everything here is computed term by term from the particle positions;
no finite differencing in w anywhere. With S_k(w) = sum_i 1/(x_i - w)^(k+1)
the function Y(w) = S_0(w) + c (c the rescaled Stieltjes shift) has
d^k Y / dw^k = k! S_k exactly.
"""

from __future__ import annotations

import numpy as np

from .._kernels import stieltjes_sums
from ..edge_scaling import EdgeScaling
from ..ensembles import ProcessSpec


def stieltjes_tower(particles: np.ndarray, w: complex, max_order: int):
    """S_0..S_max_order at a single w, as a 1-d complex array."""
    out = stieltjes_sums(np.ascontiguousarray(particles, dtype=np.float64),
                         np.array([w.real]), np.array([w.imag]), max_order)
    return out[0]


def y_value(particles: np.ndarray, w: complex, chi_shift: float) -> complex:
    return complex(stieltjes_tower(particles, w, 0)[0]) + chi_shift


def sde_drift(particles: np.ndarray, w: complex, chi_shift: float,
              beta: float) -> complex:
    """Drift of Delta(w) in rescaled time.

    (2-beta)/(2 beta) Y'' + (1/2) (Y^2)' - 1/2 with all derivatives taken
    term-wise: Y'' = 2 S_2 and (Y^2)' = 2 Y S_1.
    """
    s = stieltjes_tower(particles, w, 2)
    y = s[0] + chi_shift
    return ((2.0 - beta) / beta) * s[2] + y * s[1] - 0.5


def transport_correction(particles: np.ndarray, w: complex, chi_shift: float,
                         n: int) -> complex:
    """Exact sub-leading drift term of the quadratic-confinement process.

    Equals (2 n^(1/3))^(-1) d/dw [w Y(w)] = (Y + w Y') / (2 n^(1/3)); for
    the Gaussian process this makes the Delta-drift identity exact, so the
    residual is a pure martingale up to time discretization.
    """
    s = stieltjes_tower(particles, w, 1)
    y = s[0] + chi_shift
    return (y + w * s[1]) / (2.0 * n ** (1.0 / 3.0))


def qv_rate(particles: np.ndarray, w: complex, beta: float) -> complex:
    """d<M(w)>/dt = (1/(3 beta)) Y''' = (2/beta) S_3."""
    s = stieltjes_tower(particles, w, 3)
    return (2.0 / beta) * s[3]


def cross_qv_rate(particles: np.ndarray, w: complex, wp: complex,
                  beta: float) -> complex:
    """d<M(w), M(w')>/dt = (2/beta) sum_i 1/((x_i-w)^2 (x_i-w')^2)."""
    x = np.asarray(particles, dtype=float)
    return (2.0 / beta) * np.sum(1.0 / ((x - w) ** 2 * (x - wp) ** 2))


def cross_qv_rate_divided(particles: np.ndarray, w: complex, wp: complex,
                          beta: float) -> complex:
    """Same bracket through the divided-difference route:
    (2/beta) d_w d_w' [(Y(w) - Y(w'))/(w - w')], expanded term-wise as
    sum_i d_w d_w' 1/((x_i-w)(x_i-w'))."""
    x = np.asarray(particles, dtype=float)
    a, b = 1.0 / (x - w), 1.0 / (x - wp)
    # d_w a = a^2, d_w' b = b^2, and (a - b)/(w - w') = a b
    return (2.0 / beta) * np.sum(a * a * b * b)


def rescaled_shift(scaling: EdgeScaling) -> float:
    """The additive constant of Y in rescaled coordinates."""
    return scaling.chi * scaling.stieltjes_shift


def rescaled_particles(particles: np.ndarray, scaling: EdgeScaling):
    return (np.asarray(particles, dtype=float) - scaling.E) / scaling.chi


def check_process_kind(spec: ProcessSpec, allowed=("gaussian",)) -> None:
    if spec.kind not in allowed:
        raise ValueError(
            f"exact transport correction is only available for {allowed}, "
            f"got {spec.kind!r}")
