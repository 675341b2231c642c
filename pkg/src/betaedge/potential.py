"""Polynomial confining potentials V with explicit derivative access."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PotentialSpec:
    """V(x) = sum_k coeffs[k] x^k, degree <= 6.

    working_interval declares where convexity matters; V'' may not be
    negative there (the free case V = 0 is allowed for pure-repulsion
    dynamics, while the equilibrium-measure machinery separately demands
    strict convexity).
    """

    coeffs: tuple
    working_interval: tuple = (-10.0, 10.0)

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if len(c) > 7:
            raise ValueError("degree must be <= 6")
        object.__setattr__(self, "coeffs", c)
        xs = np.linspace(*self.working_interval, 512)
        if np.min(self.vpp(xs)) < 0:
            raise ValueError("V'' must be >= 0 on the working interval")

    @property
    def strictly_convex(self) -> bool:
        xs = np.linspace(*self.working_interval, 512)
        return bool(np.min(self.vpp(xs)) > 0)

    def v(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def vp(self, x):
        d = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(x, d)

    def vpp(self, x):
        d2 = np.polynomial.polynomial.polyder(self.coeffs, 2)
        return np.polynomial.polynomial.polyval(x, d2)

    @property
    def vp_coeffs(self) -> np.ndarray:
        return np.asarray(np.polynomial.polynomial.polyder(self.coeffs),
                          dtype=float)


def quadratic() -> PotentialSpec:
    """V = x^2/2, the Gaussian case."""
    return PotentialSpec(coeffs=(0.0, 0.0, 0.5))


def quartic(t: float) -> PotentialSpec:
    """V = x^2/2 + t x^4 for t >= 0."""
    if t < 0:
        raise ValueError("t must be >= 0 to stay convex")
    return PotentialSpec(coeffs=(0.0, 0.0, 0.5, 0.0, t))
