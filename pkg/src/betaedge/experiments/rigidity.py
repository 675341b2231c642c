"""Rigidity against the Airy zeros and Wegner-type interval counts.

For a rescaled edge trajectory the i-th particle should stay close to the
negated i-th Airy zero: we report sup over recorded times of
|x_i(t) - a_i| i^delta. The Wegner statistic is the particle count in
[y-1, y+1] normalized by sqrt(|y|+1), maximized over a y-grid and time.
"""

from __future__ import annotations

import numpy as np

from ..airy import airy_zeros
from ..dynamics import TrajectoryRecord
from .report import ExperimentReport


def rigidity_statistic(values: np.ndarray, delta: float) -> float:
    """values: (times, k) rescaled particles, largest first."""
    k = values.shape[1]
    anchors = airy_zeros(k).zeros
    idx = np.arange(1, k + 1, dtype=float)
    dev = np.abs(values - anchors[None, :]) * idx[None, :] ** delta
    return float(dev.max())


def wegner_statistic(values: np.ndarray, y_grid: np.ndarray = None) -> float:
    if y_grid is None:
        lo = float(values.min()) + 1.0
        y_grid = np.linspace(lo, 2.0, 33)
    worst = 0.0
    for row in values:
        for y in y_grid:
            cnt = np.count_nonzero((row >= y - 1.0) & (row <= y + 1.0))
            worst = max(worst, cnt / np.sqrt(abs(y) + 1.0))
    return float(worst)


def anchor_wegner_constant(k: int) -> float:
    """The same count statistic evaluated on the Airy zeros themselves;
    the natural baseline any equilibrium sample is compared against."""
    anchors = airy_zeros(k).zeros
    return wegner_statistic(anchors[None, :])


def rigidity_and_wegner(traj: TrajectoryRecord, delta: float,
                        rigidity_threshold: float = None,
                        wegner_threshold: float = None) -> ExperimentReport:
    """Both statistics over the recorded (already rescaled) trajectory."""
    values = np.asarray(traj.values)
    if values.shape[1] < 50:
        raise ValueError("need at least the top 50 particles")
    rig = rigidity_statistic(values, delta)
    weg = wegner_statistic(values)
    rep = ExperimentReport(
        name="rigidity_and_wegner",
        parameters={"delta": delta, "top_k": int(values.shape[1]),
                    "times": len(traj.times)},
        statistics={"rigidity_sup": rig, "wegner_sup": weg,
                    "anchor_wegner": anchor_wegner_constant(values.shape[1])})
    if rigidity_threshold is not None:
        rep.add_check("rigidity_bounded", rig, rigidity_threshold)
    if wegner_threshold is not None:
        rep.add_check("wegner_bounded", weg, wegner_threshold)
    return rep
