"""Modulus-of-continuity measurement for the edge curves.

For curve k the paper-scale envelope is C k^(2/3) xi^(1/2) for the max
increment over a window of rescaled length xi. We regress the measured
max increment against xi in log-log to estimate the time exponent, and
regress the fitted prefactor against k for the k-exponent.
"""

from __future__ import annotations

import math

import numpy as np

from .report import ExperimentReport


class InsufficientDecadesError(Exception):
    pass


def max_increments(path: np.ndarray, dt: float, windows) -> np.ndarray:
    """path: one curve sampled every dt; returns max_{s<=xi}|x(s)-x(0)|
    per window length xi."""
    out = np.empty(len(windows))
    for j, xi in enumerate(windows):
        steps = max(1, int(round(xi / dt)))
        seg = path[: steps + 1]
        out[j] = np.abs(seg - path[0]).max()
    return out


def holder_exponent(paths: list, k_values, dt: float, windows,
                    slope_band=(0.4, 0.6), k_band=(0.4667, 0.8667),
                    ) -> ExperimentReport:
    """paths: list over replicas of arrays (steps+1, n_curves) holding the
    top curves of a rescaled trajectory recorded every dt; k_values are
    1-based curve indices to analyze."""
    windows = np.asarray(sorted(windows), dtype=float)
    if windows[-1] / windows[0] < 100.0:
        raise InsufficientDecadesError("window lengths must span >= 2 decades")
    if windows[-1] > 1.0 * max(k_values) ** (-4.0 / 3.0) * 50:
        # guard is loose on purpose; the envelope regime needs xi small
        # relative to the k-th curve's relaxation time
        raise ValueError("largest window too long for the largest k")

    mean_inc = {}  # k -> mean max increment per window
    for k in k_values:
        acc = np.zeros(windows.size)
        for path in paths:
            acc += max_increments(path[:, k - 1], dt, windows)
        mean_inc[k] = acc / len(paths)

    slopes, prefactors = {}, {}
    for k in k_values:
        coef = np.polyfit(np.log(windows), np.log(mean_inc[k]), 1)
        slopes[k] = float(coef[0])
        prefactors[k] = float(math.exp(coef[1]))
    k_arr = np.asarray(k_values, dtype=float)
    pref = np.array([prefactors[k] for k in k_values])
    k_slope = float(np.polyfit(np.log(k_arr), np.log(pref), 1)[0])
    mean_slope = float(np.mean(list(slopes.values())))

    rep = ExperimentReport(
        name="holder_exponent",
        parameters={"k_values": list(map(int, k_values)),
                    "windows": [float(x) for x in windows],
                    "dt": dt, "replicas": len(paths)},
        statistics={"slope_by_k": {str(k): slopes[k] for k in k_values},
                    "prefactor_by_k": {str(k): prefactors[k]
                                       for k in k_values},
                    "mean_time_exponent": mean_slope,
                    "k_exponent": k_slope})
    rep.add_check("time_exponent_low", mean_slope, slope_band[0],
                  comparison=">=")
    rep.add_check("time_exponent_high", mean_slope, slope_band[1])
    rep.add_check("k_exponent_low", k_slope, k_band[0], comparison=">=")
    rep.add_check("k_exponent_high", k_slope, k_band[1])
    return rep
