"""Drift and quadratic-variation checks of the rescaled Stieltjes SDE.

In edge time the centered transform Delta_t(w) should satisfy

    d Delta = dM + [ (2-beta)/(2 beta) Y'' + (1/2)(Y^2)' - 1/2 ] dt + err,

with Y = Delta + sqrt(w) and d<M(w), M(w')>/dt given by the exact particle
sums in _observables. We simulate the particle system, form per-step
residuals r_j = (Delta increment) - drift * dt, and check three things:
the residual mean is zero within Monte-Carlo error, the realized variation
sum r_j^2 matches the predicted bracket integral, and the cross-bracket at
(w, w') matches its own prediction. All w-derivatives are term-wise exact.
"""

from __future__ import annotations

import math

import numpy as np

from .. import rng
from ..dynamics import IntegratorConfig, NoiseBlock, evolve
from ..edge_scaling import scaling_for
from ..ensembles import ProcessSpec, sample
from . import _observables as obs
from .report import ExperimentReport


def _replica_residuals(spec: ProcessSpec, w: complex, wp: complex,
                       T: float, dt_rescaled: float, master_seed: int,
                       replica: int, include_transport_correction: bool):
    """One replica: evolve a stationary sample over the rescaled window and
    accumulate residual statistics on the fly."""
    scaling = scaling_for(spec)
    shift = obs.rescaled_shift(scaling)
    dt = scaling.zeta * dt_rescaled
    n_steps = int(round(T / dt_rescaled))
    stream = rng.derive_stream(master_seed, replica, "residual/init")
    state0 = sample(spec, stream)
    noise = NoiseBlock(master_seed=master_seed, replica_id=replica,
                       purpose="residual/noise", steps=n_steps, n=spec.n)

    acc = {
        "sum_r": 0.0 + 0.0j, "sum_r2": 0.0 + 0.0j,
        "sum_rp": 0.0 + 0.0j, "sum_rrp": 0.0 + 0.0j,
        "pred_qv": 0.0 + 0.0j, "pred_cross": 0.0 + 0.0j,
        "pred_cross_dd": 0.0 + 0.0j,
    }
    carry = {}

    def measure(particles):
        tl = obs.rescaled_particles(particles, scaling)
        out = {
            "y": obs.y_value(tl, w, shift),
            "yp": obs.y_value(tl, wp, shift),
            "drift": obs.sde_drift(tl, w, shift, spec.beta),
            "driftp": obs.sde_drift(tl, wp, shift, spec.beta),
            "qv": obs.qv_rate(tl, w, spec.beta),
            "cross": obs.cross_qv_rate(tl, w, wp, spec.beta),
            "cross_dd": obs.cross_qv_rate_divided(tl, w, wp, spec.beta),
        }
        if include_transport_correction:
            out["drift"] += obs.transport_correction(tl, w, shift, spec.n)
            out["driftp"] += obs.transport_correction(tl, wp, shift, spec.n)
        return out

    carry.update(measure(state0.particles))

    def observer(j, t, particles):
        new = measure(particles)
        r = new["y"] - carry["y"] - carry["drift"] * dt_rescaled
        rp = new["yp"] - carry["yp"] - carry["driftp"] * dt_rescaled
        acc["sum_r"] += r
        acc["sum_r2"] += r * r
        acc["sum_rp"] += rp
        acc["sum_rrp"] += r * rp
        acc["pred_qv"] += carry["qv"] * dt_rescaled
        acc["pred_cross"] += carry["cross"] * dt_rescaled
        acc["pred_cross_dd"] += carry["cross_dd"] * dt_rescaled
        carry.update(new)

    # below beta=1 collisions are genuine, so the bridge refinement cannot
    # resolve them and would recurse to full depth on every colliding step;
    # a shallow budget hands those steps to the sort-and-accept repair
    # (the correct reflection) at a bounded cost
    retries = 12 if spec.beta >= 1 else 3
    evolve(spec, state0.particles, T=n_steps * dt, noise=noise,
           cfg=IntegratorConfig(dt=dt,
                                min_gap=0.0 if spec.beta >= 1 else 1e-9,
                                max_retries=retries),
           observer=observer)
    return acc


def sde_residual_check(spec: ProcessSpec, w: complex, replicas: int,
                       master_seed: int, T: float = 0.5,
                       dt_rescaled: float = 5e-4, w_cross: complex = None,
                       include_transport_correction: bool = False,
                       qv_tolerance: float = 0.15,
                       ) -> ExperimentReport:
    """Run the three SDE structure checks across independent replicas."""
    if include_transport_correction:
        obs.check_process_kind(spec)
    wp = w_cross if w_cross is not None else w + 0.5 + 0.25j
    sums_r = np.empty(replicas, dtype=complex)
    cross_ratios = np.empty(replicas, dtype=complex)
    real_qv = pred_qv = 0.0 + 0.0j
    real_cross = pred_cross = pred_cross_dd = 0.0 + 0.0j
    for rep in range(replicas):
        acc = _replica_residuals(spec, w, wp, T, dt_rescaled, master_seed,
                                 rep, include_transport_correction)
        sums_r[rep] = acc["sum_r"]
        cross_ratios[rep] = acc["sum_rrp"] / acc["pred_cross"]
        real_qv += acc["sum_r2"]
        pred_qv += acc["pred_qv"]
        real_cross += acc["sum_rrp"]
        pred_cross += acc["pred_cross"]
        pred_cross_dd += acc["pred_cross_dd"]

    # (a) drift: per-replica time-averaged residual should be mean zero
    means = sums_r / T
    grand = means.mean()
    se = math.sqrt((means.real.var(ddof=1) + means.imag.var(ddof=1))
                   / replicas)
    # (b)/(c) realized vs predicted brackets, as complex ratios. The cross
    # product r r' is signed and cancels heavily, so its ratio carries much
    # more Monte-Carlo noise than the diagonal one; the check widens to the
    # observed 3 sigma when that exceeds the nominal tolerance.
    qv_ratio = real_qv / pred_qv
    cross_ratio = real_cross / pred_cross
    se_cross = math.sqrt((cross_ratios.real.var(ddof=1)
                          + cross_ratios.imag.var(ddof=1)) / replicas)
    route_gap = abs(pred_cross - pred_cross_dd) / max(1.0, abs(pred_cross))

    rep = ExperimentReport(
        name="sde_residual_check",
        parameters={"kind": spec.kind, "n": spec.n, "beta": spec.beta,
                    "w": w, "w_cross": wp, "T": T,
                    "dt_rescaled": dt_rescaled, "replicas": replicas,
                    "seed": master_seed,
                    "transport_correction": include_transport_correction},
        statistics={"residual_mean_re": grand.real,
                    "residual_mean_im": grand.imag,
                    "residual_mean_se": se,
                    "qv_ratio_re": qv_ratio.real,
                    "qv_ratio_im": qv_ratio.imag,
                    "cross_ratio_re": cross_ratio.real,
                    "cross_ratio_im": cross_ratio.imag,
                    "cross_ratio_se": se_cross,
                    "cross_route_gap": route_gap})
    rep.add_check("drift_mean_zero", abs(grand), 3.0 * se)
    rep.add_check("qv_ratio", abs(qv_ratio - 1.0), qv_tolerance)
    rep.add_check("cross_qv_ratio", abs(cross_ratio - 1.0),
                  max(qv_tolerance, 3.0 * se_cross))
    rep.add_check("cross_routes_agree", route_gap, 1e-10)
    return rep


def residual_scaling_in_n(n_values, beta: float, w: complex, replicas: int,
                          master_seed: int, T: float = 0.5,
                          dt_rescaled: float = 1e-3,
                          min_slope: float = 0.25) -> ExperimentReport:
    """Fit how fast the uncorrected drift-residual bias decays with n.

    Without the transport correction the residual mean at fixed w is the
    neglected sub-leading drift, expected to shrink like n^(-1/3); we fit
    the log-log slope across n and require it to be at least min_slope.
    """
    from ..ensembles import gaussian_spec
    mags = []
    for n in n_values:
        spec = gaussian_spec(n, beta)
        wp = w + 0.5 + 0.25j
        total = 0.0 + 0.0j
        for repn in range(replicas):
            acc = _replica_residuals(spec, w, wp, T, dt_rescaled,
                                     master_seed, repn, False)
            total += acc["sum_r"] / T
        mags.append(abs(total / replicas))
    slope = -np.polyfit(np.log(np.asarray(n_values, dtype=float)),
                        np.log(np.asarray(mags)), 1)[0]
    rep = ExperimentReport(
        name="residual_scaling_in_n",
        parameters={"n_values": list(n_values), "beta": beta, "w": w,
                    "T": T, "dt_rescaled": dt_rescaled,
                    "replicas": replicas, "seed": master_seed},
        statistics={"residual_magnitudes": dict(zip(map(str, n_values),
                                                    map(float, mags))),
                    "decay_exponent": float(slope)})
    rep.add_check("decay_exponent", float(slope), min_slope, comparison=">=")
    return rep
