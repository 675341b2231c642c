"""Tracking the centered transform along the characteristic flow.

The flow w_t = (sqrt(w_0) - t/2)^2 transports the square-root coordinate
at constant speed -1/2, so kappa_t = Re sqrt(w_t) decreases linearly and
eta = Im sqrt(w_t) is constant. Along it we record Delta_t(w_t) and report
sup_t |Delta_t(w_t)| kappa_t eta^delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..edge_scaling import EdgeScaling, delta_from_rescaled
from .report import ExperimentReport


class FlowExitsDomainError(Exception):
    pass


def flow_point(w0: complex, t: float) -> complex:
    return (np.sqrt(complex(w0)) - t / 2.0) ** 2


@dataclass
class CharacteristicTrack:
    w0: complex
    eta: float
    samples: list = field(default_factory=list)  # (t, w_t, kappa_t, delta)

    def statistic(self, delta_exp: float) -> float:
        return max(abs(d) * kap * self.eta ** delta_exp
                   for (_, _, kap, d) in self.samples)


def characteristic_track(times: np.ndarray, configs: list,
                         scaling: EdgeScaling, w0: complex, delta_exp: float,
                         threshold: float = None):
    """times: rescaled sample times; configs: rescaled particle arrays at
    those times. Evaluates Delta along the exact flow started at w0."""
    root0 = np.sqrt(complex(w0))
    T = float(times[-1])
    if root0.real - T / 2.0 <= 0:
        raise FlowExitsDomainError(
            "need Re sqrt(w0) > T/2 to stay in the upper half-plane")
    track = CharacteristicTrack(w0=w0, eta=float(root0.imag))
    for t, tilde in zip(times, configs):
        root = root0 - t / 2.0
        wt = root ** 2
        d = delta_from_rescaled(tilde, scaling, wt)
        track.samples.append((float(t), complex(wt), float(root.real),
                              complex(d)))
    stat = track.statistic(delta_exp)
    rep = ExperimentReport(
        name="characteristic_track",
        parameters={"w0": w0, "T": T, "delta_exp": delta_exp,
                    "n_samples": len(track.samples)},
        statistics={"sup_weighted_delta": stat, "eta": track.eta})
    if threshold is not None:
        rep.add_check("track_bounded", stat, threshold)
    return track, rep
