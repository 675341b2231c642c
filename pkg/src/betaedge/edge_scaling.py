"""Edge location and scaling constants, plus the centered Stieltjes observable.

For each process we compute the triple (E, zeta, chi): the spectral edge,
the time unit, and the space unit under which the top particles have
order-one fluctuations. Laguerre and Jacobi have closed forms; general
convex polynomial potentials go through a one-cut equilibrium-measure
solver that produces the support endpoints and the square-root edge
coefficient R.

The centered observable is

    Delta(w) = chi * (sum_i 1/(lambda_i - E - chi w) + shift) - sqrt(w),

a Herglotz function minus its deterministic leading part. In rescaled
particle coordinates tilde_lambda = (lambda - E)/chi the same quantity is
sum_i 1/(tilde_lambda_i - w) + chi*shift - sqrt(w).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import TrajectoryRecord
from .ensembles import ParticleState, ProcessSpec
from .potential import PotentialSpec


class EquilibriumError(Exception):
    """Endpoint solve failed or the one-cut assumption is violated."""


@dataclass(frozen=True)
class EdgeScaling:
    """Edge E, time unit zeta, space unit chi, and the Stieltjes shift.

    stieltjes_shift is the additive constant (in original spectral units)
    that centers the Stieltjes transform at the edge, i.e. -m(E) of the
    limiting density.
    """

    E: float
    zeta: float
    chi: float
    stieltjes_shift: float

    def __post_init__(self):
        if not (self.zeta > 0 and self.chi > 0):
            raise ValueError("zeta and chi must be positive")


_NODES = 256


def _cheb_nodes(A: float, B: float, n: int = _NODES):
    # Chebyshev-Gauss points: the 1/sqrt((x-A)(B-x)) weight integrates
    # any f as (pi/n) * sum f(x_k) exactly for polynomial f of degree < 2n
    theta = (np.arange(n) + 0.5) * np.pi / n
    return 0.5 * (A + B) + 0.5 * (B - A) * np.cos(theta)


def _divided_difference_coeffs(vp_coeffs: np.ndarray, z):
    # (V'(z) - V'(x)) / (z - x) as a polynomial in x:
    # coefficient of x^i is sum_{k>i} c_k z^(k-1-i)
    c = np.asarray(vp_coeffs)
    deg = len(c) - 1
    out = []
    for i in range(deg):
        acc = 0.0 * z
        for k in range(i + 1, deg + 1):
            acc = acc + c[k] * z ** (k - 1 - i)
        out.append(acc)
    return out


@dataclass(frozen=True)
class EquilibriumMeasure:
    """One-cut equilibrium density r(x) sqrt((x-A)(B-x)) / pi on [A, B]."""

    A: float
    B: float
    R_A: float
    R_B: float
    V: PotentialSpec

    def r(self, z):
        coeffs = _divided_difference_coeffs(self.V.vp_coeffs, z)
        xk = _cheb_nodes(self.A, self.B)
        total = 0.0 * z
        for i, ci in enumerate(coeffs):
            total = total + ci * np.mean(xk ** i)
        return total / 2.0

    def rho(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x - self.A) * (self.B - x)
        return np.where(inside > 0,
                        self.r(x) * np.sqrt(np.maximum(inside, 0.0)) / np.pi,
                        0.0)

    def _edge_sqrt(self, z):
        # branch of sqrt((z-A)(z-B)) that behaves like +z at infinity
        zc = np.asarray(z, dtype=complex)
        return np.sqrt(zc - self.A) * np.sqrt(zc - self.B)

    def m(self, z):
        return 0.5 * (-self.V.vp(z) + 2.0 * self.r(z) * self._edge_sqrt(z))


def _endpoint_residual(V: PotentialSpec, A: float, B: float):
    xk = _cheb_nodes(A, B)
    vpx = V.vp(xk)
    f1 = np.mean(vpx)                 # (1/pi) * int V'/sqrt = 0
    f2 = 0.5 * np.mean(xk * vpx) - 1  # (1/2pi) * int x V'/sqrt = 1
    return np.array([f1, f2])


def equilibrium_measure(V: PotentialSpec, a0: float = -2.0, b0: float = 2.0,
                        tol: float = 1e-12) -> EquilibriumMeasure:
    """Solve the one-cut endpoint conditions by damped Newton.

    The two moment conditions pin down the support [A, B]; the edge
    coefficients are R_A = r(A) sqrt(B-A) and R_B = r(B) sqrt(B-A).
    Raises EquilibriumError when Newton stalls or the density comes out
    negative somewhere on the support (multi-cut potential).
    """
    if not V.strictly_convex:
        raise EquilibriumError("potential must be strictly convex")
    ab = np.array([a0, b0], dtype=float)
    res = _endpoint_residual(V, *ab)
    for _ in range(80):
        if np.abs(res).max() < tol:
            break
        h = 1e-7 * max(1.0, ab[1] - ab[0])
        jac = np.empty((2, 2))
        for j in range(2):
            bumped = ab.copy()
            bumped[j] += h
            jac[:, j] = (_endpoint_residual(V, *bumped) - res) / h
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise EquilibriumError("singular Newton system") from exc
        lam = 1.0
        for _ in range(30):
            cand = ab + lam * step
            if cand[0] < cand[1]:
                cand_res = _endpoint_residual(V, *cand)
                if np.abs(cand_res).max() < np.abs(res).max():
                    ab, res = cand, cand_res
                    break
            lam /= 2
        else:
            raise EquilibriumError("Newton damping failed to make progress")
    else:
        raise EquilibriumError("endpoint Newton did not converge")

    A, B = float(ab[0]), float(ab[1])
    meas = EquilibriumMeasure(A=A, B=B, R_A=0.0, R_B=0.0, V=V)
    rk = np.real(meas.r(_cheb_nodes(A, B)))
    if np.min(rk) <= 0:
        raise EquilibriumError("negative density on the support: not one-cut")
    width = np.sqrt(B - A)
    return EquilibriumMeasure(A=A, B=B,
                              R_A=float(np.real(meas.r(A))) * width,
                              R_B=float(np.real(meas.r(B))) * width,
                              V=V)


def scaling_for(spec: ProcessSpec) -> EdgeScaling:
    """Closed-form (E, zeta, chi, shift) for the given process."""
    n = spec.n
    if spec.kind in ("gaussian", "dbm"):
        eq = equilibrium_measure(spec.V)
        R = eq.R_B
        return EdgeScaling(E=eq.B * np.sqrt(n),
                           zeta=R ** (-4 / 3) * n ** (-1 / 3),
                           chi=R ** (-2 / 3) * n ** (-1 / 6),
                           stieltjes_shift=np.sqrt(n) * float(eq.V.vp(eq.B)) / 2)
    if spec.kind == "laguerre":
        m = spec.m
        s = np.sqrt(m) + np.sqrt(n)
        return EdgeScaling(E=s ** 2,
                           zeta=0.5 * s ** (2 / 3) * (m * n) ** (-1 / 3),
                           chi=s ** (4 / 3) * (m * n) ** (-1 / 6),
                           stieltjes_shift=np.sqrt(n) / s)
    if spec.kind == "jacobi":
        m, p, q = spec.m, spec.p, spec.q
        E = ((np.sqrt(p * (m - n)) + np.sqrt(q * n)) / m) ** 2
        ee = E * (1 - E)
        return EdgeScaling(
            E=E,
            zeta=ee ** (1 / 3) / (2 * (p * q * (m - n)) ** (1 / 3)) * n ** (-1 / 3),
            chi=ee ** (2 / 3) / (p * q * (m - n)) ** (1 / 6) * n ** (-1 / 6),
            stieltjes_shift=(m * E - 2 * n * E + n - p) / (2 * ee))
    raise ValueError(f"unknown process kind {spec.kind!r}")


def rescale(traj: TrajectoryRecord, scaling: EdgeScaling,
            top_k: int) -> TrajectoryRecord:
    """Zoom a trajectory into edge coordinates, keeping the top_k particles.

    Times are reinterpreted in zeta units and particles become
    (lambda - E)/chi, largest first.
    """
    vals = (np.asarray(traj.values)[:, :top_k] - scaling.E) / scaling.chi
    return TrajectoryRecord(times=np.asarray(traj.times) / scaling.zeta,
                            values=vals, events=traj.events,
                            n_steps=traj.n_steps)


def unrescale(traj: TrajectoryRecord, scaling: EdgeScaling) -> TrajectoryRecord:
    """Inverse of rescale on the retained particles."""
    vals = np.asarray(traj.values) * scaling.chi + scaling.E
    return TrajectoryRecord(times=np.asarray(traj.times) * scaling.zeta,
                            values=vals, events=traj.events,
                            n_steps=traj.n_steps)


def delta_transform(state: ParticleState, scaling: EdgeScaling,
                    w: complex) -> complex:
    """Centered, rescaled Stieltjes transform at w (Im w > 0)."""
    if np.imag(w) <= 0:
        raise ValueError("delta_transform needs Im w > 0")
    lam = np.asarray(state.particles, dtype=float)
    z = scaling.E + scaling.chi * w
    return scaling.chi * (np.sum(1.0 / (lam - z)) + scaling.stieltjes_shift) \
        - np.sqrt(complex(w))


def delta_from_rescaled(particles: np.ndarray, scaling: EdgeScaling,
                        w: complex) -> complex:
    """Same observable computed from already-rescaled particles."""
    if np.imag(w) <= 0:
        raise ValueError("delta_from_rescaled needs Im w > 0")
    tl = np.asarray(particles, dtype=float)
    return np.sum(1.0 / (tl - w)) + scaling.chi * scaling.stieltjes_shift \
        - np.sqrt(complex(w))
