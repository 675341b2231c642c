"""Occupation measure of near-collision configurations.

We record the minimal gap at every step and estimate the Lebesgue measure
of {t : min gap <= threshold} for a sweep of thresholds. Collisions can
happen for beta < 2 but the collision set should still have measure zero,
which shows up as the measure vanishing with a positive power of the
threshold.
"""

from __future__ import annotations

import math

import numpy as np

from .report import ExperimentReport


def gap_occupation(min_gaps: np.ndarray, dt: float, thresholds) -> dict:
    return {float(thr): float(dt * np.count_nonzero(min_gaps <= thr))
            for thr in thresholds}


def collision_measure(min_gaps_by_replica: list, dt: float, thresholds,
                      zero_threshold: float = None,
                      require_positive_exponent: bool = False,
                      ) -> ExperimentReport:
    """min_gaps_by_replica: per replica, the per-step minimal gap series
    (rescaled units)."""
    thresholds = sorted(float(t) for t in thresholds)
    pooled = {thr: 0.0 for thr in thresholds}
    for gaps in min_gaps_by_replica:
        occ = gap_occupation(np.asarray(gaps), dt, thresholds)
        for thr in thresholds:
            pooled[thr] += occ[thr]
    R = len(min_gaps_by_replica)
    measures = {thr: pooled[thr] / R for thr in thresholds}

    # fit measure ~ threshold^p over the thresholds with positive mass
    pos = [(thr, m) for thr, m in measures.items() if m > 0]
    exponent = float("nan")
    if len(pos) >= 2:
        lt = np.log([p[0] for p in pos])
        lm = np.log([p[1] for p in pos])
        exponent = float(np.polyfit(lt, lm, 1)[0])

    rep = ExperimentReport(
        name="collision_measure",
        parameters={"thresholds": thresholds, "dt": dt, "replicas": R},
        statistics={"measure_by_threshold": {str(t): measures[t]
                                             for t in thresholds},
                    # None when fewer than two thresholds saw any mass
                    "fitted_exponent": None if math.isnan(exponent)
                    else exponent,
                    "n_positive": len(pos)})
    if zero_threshold is not None:
        below = max((m for thr, m in measures.items()
                     if thr <= zero_threshold), default=0.0)
        rep.add_check("measure_zero_at_threshold", below, 0.0)
    if require_positive_exponent:
        # a sweep with fewer than two occupied thresholds cannot certify
        # the decay, so it reads as a failure
        val = exponent if len(pos) >= 2 else -1.0
        rep.add_check("positive_exponent", val, 0.0, comparison=">=")
    return rep
