"""Stationary initial conditions for the particle dynamics.

Gaussian and Wishart-type ensembles come from their tridiagonal /
bidiagonal matrix models (any beta > 0); the unit-interval and
general-potential ensembles are produced by burning in their own SDEs,
which reuses the integrator and keeps a single dynamical convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import dynamics
from .potential import PotentialSpec, quadratic


@dataclass(frozen=True)
class ProcessSpec:
    kind: str  # gaussian | dbm | laguerre | jacobi
    n: int
    beta: float
    m: int | None = None
    p: int | None = None
    q: int | None = None
    V: PotentialSpec | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.kind == "laguerre":
            if self.m is None or self.m < self.n:
                raise ValueError("laguerre needs m >= n")
        elif self.kind == "jacobi":
            if None in (self.m, self.p, self.q):
                raise ValueError("jacobi needs m, p, q")
            if self.p + self.q != self.m:
                raise ValueError("jacobi needs p + q = m")
            if self.p < self.n + 1 or self.q < self.n + 1:
                raise ValueError("jacobi needs p, q >= n+1")
        elif self.kind in ("gaussian", "dbm"):
            if self.V is None:
                object.__setattr__(self, "V", quadratic())
        else:
            raise ValueError(f"unknown kind {self.kind!r}")


def gaussian_spec(n, beta):
    return ProcessSpec(kind="gaussian", n=n, beta=beta)


def laguerre_spec(n, m, beta):
    return ProcessSpec(kind="laguerre", n=n, beta=beta, m=m)


def jacobi_spec(n, m, p, q, beta):
    return ProcessSpec(kind="jacobi", n=n, beta=beta, m=m, p=p, q=q)


def dbm_spec(n, beta, V: PotentialSpec):
    return ProcessSpec(kind="dbm", n=n, beta=beta, V=V)


@dataclass
class ParticleState:
    t: float
    particles: np.ndarray  # non-increasing

    def __post_init__(self):
        self.particles = np.asarray(self.particles, dtype=float)


def _chi(stream: np.random.Generator, dof) -> np.ndarray:
    """chi_k variates for possibly non-integer k, via Gamma(k/2, 2)."""
    return np.sqrt(stream.gamma(shape=np.asarray(dof) / 2.0, scale=2.0))


def _gaussian_tridiag(n: int, beta: float, stream: np.random.Generator):
    # scaled so the n=1 marginal is N(0, 2/beta) and the bulk sits on
    # [-2 sqrt(n), 2 sqrt(n)]
    diag = stream.standard_normal(n) * math.sqrt(2.0) / math.sqrt(beta)
    off = _chi(stream, beta * np.arange(n - 1, 0, -1)) / math.sqrt(beta)
    return diag, off


def sample_gaussian_beta(n: int, beta: float,
                         stream: np.random.Generator) -> ParticleState:
    diag, off = _gaussian_tridiag(n, beta, stream)
    if n == 1:
        vals = diag
    else:
        vals = sla.eigvalsh_tridiagonal(diag, off)
    return ParticleState(t=0.0, particles=np.sort(vals)[::-1])


def sample_gaussian_edge(n: int, beta: float, stream: np.random.Generator,
                         k: int = 2) -> np.ndarray:
    """Top k eigenvalues only (descending); cheaper for edge statistics."""
    diag, off = _gaussian_tridiag(n, beta, stream)
    vals = sla.eigvalsh_tridiagonal(diag, off, select="i",
                                    select_range=(n - k, n - 1))
    return vals[::-1]


def sample_laguerre_beta(n: int, m: int, beta: float,
                         stream: np.random.Generator) -> ParticleState:
    # bidiagonal factor B: eigenvalues of B B^T / beta follow the
    # stationary positive ensemble
    d = _chi(stream, beta * (m - np.arange(n)))
    if n == 1:
        vals = d * d / beta
    else:
        e = _chi(stream, beta * (n - 1 - np.arange(n - 1)))
        tridiag_d = d * d
        tridiag_d[1:] += e * e
        tridiag_e = d[:-1] * e
        vals = sla.eigvalsh_tridiagonal(tridiag_d, tridiag_e) / beta
    return ParticleState(t=0.0, particles=np.sort(vals)[::-1])


def sample_laguerre_edge(n: int, m: int, beta: float,
                         stream: np.random.Generator, k: int = 2) -> np.ndarray:
    d = _chi(stream, beta * (m - np.arange(n)))
    e = _chi(stream, beta * (n - 1 - np.arange(n - 1)))
    tridiag_d = d * d
    tridiag_d[1:] += e * e
    tridiag_e = d[:-1] * e
    vals = sla.eigvalsh_tridiagonal(tridiag_d, tridiag_e, select="i",
                                    select_range=(n - k, n - 1)) / beta
    return vals[::-1]


def sample_jacobi_beta(n: int, m: int, p: int, q: int, beta: float,
                       stream: np.random.Generator,
                       burnin: float | None = None,
                       dt: float | None = None) -> ParticleState:
    """Burn in the unit-interval SDE from equally spaced deterministic
    initial data. The default burn-in is 10/m: the linear restoring rate
    of the drift is m, so this is ten relaxation times."""
    spec = jacobi_spec(n, m, p, q, beta)
    if burnin is None:
        burnin = 10.0 / m
    if dt is None:
        dt = min(1.0 / (4.0 * m * n), burnin / 200.0)
    x0 = np.linspace(n, 1, n) / (n + 1.0)
    steps = int(round(burnin / dt))
    seed = int(stream.integers(0, 2**63 - 1))
    noise = dynamics.NoiseBlock(master_seed=seed, replica_id=0,
                                purpose="jacobi-burnin", steps=steps, n=n)
    cfg = dynamics.IntegratorConfig(dt=dt, min_gap=0.0 if beta >= 1 else 1e-9)
    rec = dynamics.evolve(spec, x0, burnin, cfg, noise)
    return ParticleState(t=0.0, particles=rec.final)


def semicircle_quantiles(n: int) -> np.ndarray:
    """Descending quantiles of the semicircle on [-2, 2] at (i-1/2)/n."""
    from scipy.optimize import brentq

    probs = (np.arange(n, dtype=float)[::-1] + 0.5) / n
    return np.array([brentq(lambda x, pp=pp: float(semicircle_cdf(x)) - pp,
                            -2.0, 2.0) for pp in probs])


def sample_dbm_general_potential(n: int, V: PotentialSpec, beta: float,
                                 stream: np.random.Generator,
                                 burnin: float = 3.0,
                                 dt: float = 1e-3) -> ParticleState:
    """Burn in the confined repulsive SDE from semicircle-quantile
    initial data (scaled by sqrt(n)); the macroscopic density relaxes at
    rate O(1) in these units, so a few units of burn-in suffice."""
    spec = dbm_spec(n, beta, V)
    x0 = semicircle_quantiles(n) * math.sqrt(n)
    steps = int(round(burnin / dt))
    seed = int(stream.integers(0, 2**63 - 1))
    noise = dynamics.NoiseBlock(master_seed=seed, replica_id=0,
                                purpose="dbm-burnin", steps=steps, n=n)
    cfg = dynamics.IntegratorConfig(dt=dt, min_gap=0.0 if beta >= 1 else 1e-9)
    rec = dynamics.evolve(spec, x0, burnin, cfg, noise)
    return ParticleState(t=0.0, particles=rec.final)


def sample(spec: ProcessSpec, stream: np.random.Generator,
           **kwargs) -> ParticleState:
    if spec.kind == "gaussian":
        return sample_gaussian_beta(spec.n, spec.beta, stream)
    if spec.kind == "laguerre":
        return sample_laguerre_beta(spec.n, spec.m, spec.beta, stream)
    if spec.kind == "jacobi":
        return sample_jacobi_beta(spec.n, spec.m, spec.p, spec.q, spec.beta,
                                  stream, **kwargs)
    if spec.kind == "dbm":
        return sample_dbm_general_potential(spec.n, spec.V, spec.beta,
                                            stream, **kwargs)
    raise ValueError(f"unknown kind {spec.kind!r}")


# closed-form bulk densities used as sampling oracles

def semicircle_cdf(x: np.ndarray) -> np.ndarray:
    """CDF of the semicircle law on [-2, 2]."""
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + (x * np.sqrt(4.0 - x * x) + 4.0 * np.arcsin(x / 2.0)) \
        / (4.0 * math.pi)


def marchenko_pastur_edges(n: int, m: int) -> tuple[float, float]:
    return (math.sqrt(m) - math.sqrt(n)) ** 2, (math.sqrt(m) + math.sqrt(n)) ** 2


def marchenko_pastur_cdf(x: np.ndarray, n: int, m: int) -> np.ndarray:
    """CDF of the n-particle positive ensemble's bulk law (support
    [(sqrt m - sqrt n)^2, (sqrt m + sqrt n)^2], density
    sqrt((x-E-)(E+-x))/(2 pi x) per particle)."""
    from scipy.integrate import quad
    lo, hi = marchenko_pastur_edges(n, m)

    def dens(t):
        return math.sqrt(max((t - lo) * (hi - t), 0.0)) / (2 * math.pi * n * t)

    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.size)
    for j, v in enumerate(x):
        v = min(max(v, lo), hi)
        # full_output silences the endpoint-singularity warning; the
        # sqrt edges are integrable and quad handles them fine
        out[j] = quad(dens, lo, v, limit=200, full_output=1)[0]
    return out


def jacobi_density_cdf(x: np.ndarray, n: int, m: int, p: int, q: int) -> np.ndarray:
    """CDF of the unit-interval ensemble's bulk law, density
    m sqrt((x-E-)(E+-x))/(2 pi n x(1-x)) on its support."""
    from scipy.integrate import quad
    rt = math.sqrt(p * (m - n)) + math.sqrt(q * n)
    lo_rt = math.sqrt(p * (m - n)) - math.sqrt(q * n)
    hi = (rt / m) ** 2
    lo = (lo_rt / m) ** 2

    def dens(t):
        return m * math.sqrt(max((t - lo) * (hi - t), 0.0)) \
            / (2 * math.pi * n * t * (1.0 - t))

    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.size)
    for j, v in enumerate(x):
        v = min(max(v, lo), hi)
        # full_output silences the endpoint-singularity warning; the
        # sqrt edges are integrable and quad handles them fine
        out[j] = quad(dens, lo, v, limit=200, full_output=1)[0]
    return out
