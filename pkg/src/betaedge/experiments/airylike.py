"""Airy-like envelope fitting at equilibrium edges.

High in the half-plane a rescaled edge configuration should satisfy
|Delta(w)| <= C Im[sqrt(w)]^(1/2) / Im[w] on the region Im w >= sqrt(Re w
v 0 + 1), |w| <= n^(1/6). For each sample we report the smallest C that
makes the bound hold on a grid, i.e. the max of |Delta(w)| Im[w] /
Im[sqrt(w)]^(1/2).
"""

from __future__ import annotations

import numpy as np

from .. import rng
from ..edge_scaling import EdgeScaling, delta_from_rescaled, scaling_for
from ..ensembles import ProcessSpec, sample
from . import _observables as obs
from .report import ExperimentReport


def envelope_grid(cap: float, n_a: int = 16, n_b: int = 12):
    """Grid over the high region {b >= sqrt(a v 0 + 1), |w| <= cap} with
    w = a + ib."""
    pts = []
    for a in np.linspace(-0.9 * cap, 0.9 * cap, n_a):
        b_lo = np.sqrt(max(a, 0.0) + 1.0)
        b_hi = np.sqrt(max(cap ** 2 - a * a, 0.0))
        if b_hi <= b_lo:
            continue
        for b in np.geomspace(b_lo, b_hi, n_b):
            pts.append(a + 1j * b)
    return np.array(pts)


def fitted_envelope_constant(tilde: np.ndarray, scaling: EdgeScaling,
                             grid: np.ndarray) -> float:
    best = 0.0
    for w in grid:
        delta = delta_from_rescaled(tilde, scaling, w)
        weight = np.imag(w) / np.sqrt(np.imag(np.sqrt(w)))
        best = max(best, abs(delta) * weight)
    return best


def airy_like_at_equilibrium(spec: ProcessSpec, replicas: int,
                             master_seed: int,
                             envelope_threshold: float = None,
                             ) -> ExperimentReport:
    """Distribution of the fitted envelope constant over fresh samples."""
    scaling = scaling_for(spec)
    grid = envelope_grid(cap=spec.n ** (1.0 / 6.0) * 4.0)
    consts = np.empty(replicas)
    for j in range(replicas):
        stream = rng.derive_stream(master_seed, j, "airylike")
        st = sample(spec, stream)
        tilde = obs.rescaled_particles(st.particles, scaling)
        consts[j] = fitted_envelope_constant(tilde, scaling, grid)
    stats = {"c_median": float(np.median(consts)),
             "c_p95": float(np.percentile(consts, 95)),
             "c_max": float(consts.max()),
             "grid_points": int(grid.size)}
    rep = ExperimentReport(
        name="airy_like_at_equilibrium",
        parameters={"kind": spec.kind, "n": spec.n, "beta": spec.beta,
                    "replicas": replicas, "seed": master_seed},
        statistics=stats)
    if envelope_threshold is not None:
        rep.add_check("c_p95_below_envelope", stats["c_p95"],
                      envelope_threshold)
    return rep


def envelope_trend_in_n(n_values, beta: float, replicas: int,
                        master_seed: int, slope_tol: float = 0.2,
                        ) -> ExperimentReport:
    """The 95th percentile of the fitted constant should not grow with n;
    we fit its slope against log n and require it near zero."""
    from ..ensembles import gaussian_spec
    p95 = []
    for n in n_values:
        r = airy_like_at_equilibrium(gaussian_spec(n, beta), replicas,
                                     master_seed)
        p95.append(r.statistics["c_p95"])
    slope = np.polyfit(np.log(np.asarray(n_values, float)),
                       np.asarray(p95), 1)[0]
    rep = ExperimentReport(
        name="envelope_trend_in_n",
        parameters={"n_values": list(n_values), "beta": beta,
                    "replicas": replicas, "seed": master_seed},
        statistics={"c_p95_by_n": dict(zip(map(str, n_values),
                                           map(float, p95))),
                    "slope_vs_log_n": float(slope)})
    rep.add_check("no_growth_trend", abs(float(slope)), slope_tol)
    return rep
