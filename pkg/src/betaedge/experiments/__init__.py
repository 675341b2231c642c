"""Experiment drivers that turn edge-limit theory into measurable checks."""

from .airylike import airy_like_at_equilibrium, envelope_trend_in_n
from .characteristic import CharacteristicTrack, characteristic_track
from .collisions import collision_measure
from .coupling import coupling_contraction
from .drivers import edge_curves
from .holder import holder_exponent
from .report import Check, ExperimentReport
from .residual import residual_scaling_in_n, sde_residual_check
from .rigidity import rigidity_and_wegner
from .tw import sao_top_samples, tw_statistics

__all__ = [
    "airy_like_at_equilibrium", "envelope_trend_in_n",
    "CharacteristicTrack", "characteristic_track", "collision_measure",
    "coupling_contraction", "edge_curves", "holder_exponent", "Check",
    "ExperimentReport", "residual_scaling_in_n", "sde_residual_check",
    "rigidity_and_wegner", "sao_top_samples", "tw_statistics",
]
