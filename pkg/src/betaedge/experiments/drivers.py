"""Shared simulation drivers for the edge experiments.

Runs a stationary sample through the particle SDE for a window of
rescaled time and hands back the top curves in rescaled coordinates,
recorded every step, without storing the full configuration history.
"""

from __future__ import annotations

import numpy as np

from .. import rng
from ..dynamics import IntegratorConfig, NoiseBlock, evolve
from ..edge_scaling import EdgeScaling, scaling_for
from ..ensembles import ProcessSpec, sample


def edge_curves(spec: ProcessSpec, T_rescaled: float, dt_rescaled: float,
                master_seed: int, replica: int, top_k: int,
                purpose: str = "edge", extra_observer=None,
                ) -> tuple[np.ndarray, EdgeScaling]:
    """One replica: (steps+1, top_k) rescaled top curves sampled every
    rescaled step, plus the scaling used. extra_observer(j, tilde_full)
    sees the full rescaled configuration each step."""
    scaling = scaling_for(spec)
    dt = scaling.zeta * dt_rescaled
    n_steps = int(round(T_rescaled / dt_rescaled))
    stream = rng.derive_stream(master_seed, replica, purpose + "/init")
    st = sample(spec, stream)
    noise = NoiseBlock(master_seed=master_seed, replica_id=replica,
                       purpose=purpose + "/noise", steps=n_steps, n=spec.n)
    out = np.empty((n_steps + 1, top_k))
    out[0] = (st.particles[:top_k] - scaling.E) / scaling.chi

    def observer(j, t, particles):
        tilde = (particles - scaling.E) / scaling.chi
        out[j + 1] = tilde[:top_k]
        if extra_observer is not None:
            extra_observer(j, tilde)

    evolve(spec, st.particles, T=n_steps * dt, noise=noise,
           cfg=IntegratorConfig(dt=dt,
                                min_gap=0.0 if spec.beta >= 1 else 1e-9,
                                max_retries=12),
           observer=observer)
    return out, scaling
