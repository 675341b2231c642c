"""Euler-Maruyama time-stepping for the interacting particle SDEs.

Covers the repulsive-drift process with a polynomial confining potential,
the Wishart-type positive process, the unit-interval process, and a
localized top-k system with a caller-supplied external field. All steps
share one retry protocol: when a proposal breaks ordering or a state
constraint, the step is re-done as two half steps whose noise refines the
original increment by a Brownian bridge, recursively, up to a retry
budget; the final fallback repairs the state and logs an event.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

import numpy as np

from . import _kernels
from . import rng as rngmod
from .potential import PotentialSpec


class Constraint(Enum):
    NONE = "none"
    POSITIVE = "positive"
    UNIT_INTERVAL = "unit_interval"


@dataclass
class SdeState:
    t: float
    particles: np.ndarray  # non-increasing
    constraint: Constraint = Constraint.NONE

    def __post_init__(self):
        self.particles = np.asarray(self.particles, dtype=float)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    min_gap: float = 0.0
    max_retries: int = 8
    scheme: str = "euler_maruyama"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")


@dataclass(frozen=True)
class NoiseBlock:
    """Reproducible normal increments, indexed (step, particle).

    Rows are generated lazily from the seed lineage, so paired runs that
    hold the same block consume bit-identical noise without materializing
    steps x n doubles.
    """

    master_seed: int
    replica_id: int
    purpose: str
    steps: int
    n: int

    def rows(self) -> Iterator[np.ndarray]:
        stream = rngmod.derive_stream(self.master_seed, self.replica_id,
                                      self.purpose)
        for _ in range(self.steps):
            yield rngmod.normals(stream, self.n)

    def materialize(self) -> np.ndarray:
        return np.stack(list(self.rows()))


@dataclass(frozen=True)
class ArrayNoiseBlock:
    """Noise block backed by an explicit (steps, n) matrix; useful for
    deterministic tests and replaying recorded increments."""

    matrix: np.ndarray
    master_seed: int = 0
    replica_id: int = 0
    purpose: str = "array"

    @property
    def steps(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def rows(self) -> Iterator[np.ndarray]:
        for row in self.matrix:
            yield row

    def materialize(self) -> np.ndarray:
        return np.asarray(self.matrix)


class StepFailure(RuntimeError):
    def __init__(self, message, indices):
        self.indices = indices
        super().__init__(message)


def _violations(x: np.ndarray, constraint: Constraint, min_gap: float):
    """Indices of broken gaps/constraints in a proposed (descending) state."""
    bad = []
    if x.size > 1:
        gaps = x[:-1] - x[1:]
        bad.extend(np.nonzero(~(gaps > min_gap))[0].tolist())
    if constraint is Constraint.POSITIVE:
        bad.extend(np.nonzero(~(x > 0.0))[0].tolist())
    elif constraint is Constraint.UNIT_INTERVAL:
        bad.extend(np.nonzero(~((x > 0.0) & (x < 1.0)))[0].tolist())
    if not np.all(np.isfinite(x)):
        bad.extend(np.nonzero(~np.isfinite(x))[0].tolist())
    return sorted(set(bad))


def _repair(x: np.ndarray, constraint: Constraint, min_gap: float):
    """Last-resort state fix after the retry budget: enforce the
    constraint, then sort; used only on logged fallback events."""
    y = np.array(x, dtype=float)
    eps = max(min_gap, 1e-12)
    if constraint is Constraint.POSITIVE:
        y = np.abs(y)  # reflection at the hard edge
        y[y == 0.0] = eps
    elif constraint is Constraint.UNIT_INTERVAL:
        y = np.clip(y, eps, 1.0 - eps)
    y = np.sort(y)[::-1]
    if min_gap > 0 and y.size > 1:
        for i in range(1, y.size):
            if y[i - 1] - y[i] < min_gap:
                y[i] = y[i - 1] - min_gap
    return y


@dataclass
class _StepContext:
    drift: Callable[[np.ndarray], np.ndarray]
    sigma: Callable[[np.ndarray], np.ndarray]
    constraint: Constraint
    cfg: IntegratorConfig
    refine: np.random.Generator
    events: list = field(default_factory=list)


def _tamed_proposal(ctx: _StepContext, x: np.ndarray, dt: float,
                    db: np.ndarray) -> np.ndarray:
    """Fallback proposal with the drift move capped at the one-step noise
    scale. During a collision episode the raw Euler move dt/gap blows up
    and a sorted version of that overshoot would fling the pair apart;
    taming turns the crossing into a reflection-sized move instead. Away
    from near-singular configurations the cap is never binding."""
    move = ctx.drift(x) * dt
    cap = 4.0 * ctx.sigma(x) * math.sqrt(dt) + 1e-12
    return x + move / (1.0 + np.abs(move) / cap) + ctx.sigma(x) * db


def _advance(ctx: _StepContext, x: np.ndarray, t: float, dt: float,
             db: np.ndarray, depth: int) -> np.ndarray:
    prop = x + ctx.drift(x) * dt + ctx.sigma(x) * db
    bad = _violations(prop, ctx.constraint, ctx.cfg.min_gap)
    if not bad:
        return prop
    if depth >= ctx.cfg.max_retries:
        ctx.events.append({"t": t, "kind": "repair", "indices": bad})
        return _repair(_tamed_proposal(ctx, x, dt, db), ctx.constraint,
                       ctx.cfg.min_gap)
    # Brownian-bridge split of the increment: each half is
    # N(db/2, dt/4) conditionally on the whole
    ctx.events.append({"t": t, "kind": "retry", "indices": bad})
    xi = rngmod.normals(ctx.refine, x.size)
    db1 = 0.5 * db + 0.5 * math.sqrt(dt) * xi
    db2 = db - db1
    mid = _advance(ctx, x, t, 0.5 * dt, db1, depth + 1)
    return _advance(ctx, mid, t + 0.5 * dt, 0.5 * dt, db2, depth + 1)


def _advance_pair(ctxA: _StepContext, ctxB: _StepContext, xA: np.ndarray,
                  xB: np.ndarray, t: float, dt: float, db: np.ndarray,
                  depth: int):
    """Advance two copies on the same Brownian increment. A retry refines
    the shared path, so both copies must re-step on the same subdivision:
    refining only one of them would have the two copies integrating
    against different midpoints of what is supposed to be one path."""
    propA = xA + ctxA.drift(xA) * dt + ctxA.sigma(xA) * db
    propB = xB + ctxB.drift(xB) * dt + ctxB.sigma(xB) * db
    badA = _violations(propA, ctxA.constraint, ctxA.cfg.min_gap)
    badB = _violations(propB, ctxB.constraint, ctxB.cfg.min_gap)
    if not badA and not badB:
        return propA, propB
    if depth >= ctxA.cfg.max_retries:
        if badA:
            ctxA.events.append({"t": t, "kind": "repair", "indices": badA})
            propA = _repair(_tamed_proposal(ctxA, xA, dt, db),
                            ctxA.constraint, ctxA.cfg.min_gap)
        if badB:
            ctxB.events.append({"t": t, "kind": "repair", "indices": badB})
            propB = _repair(_tamed_proposal(ctxB, xB, dt, db),
                            ctxB.constraint, ctxB.cfg.min_gap)
        return propA, propB
    if badA:
        ctxA.events.append({"t": t, "kind": "retry", "indices": badA})
    if badB:
        ctxB.events.append({"t": t, "kind": "retry", "indices": badB})
    xi = rngmod.normals(ctxA.refine, xA.size)
    db1 = 0.5 * db + 0.5 * math.sqrt(dt) * xi
    db2 = db - db1
    midA, midB = _advance_pair(ctxA, ctxB, xA, xB, t, 0.5 * dt, db1,
                               depth + 1)
    return _advance_pair(ctxA, ctxB, midA, midB, t + 0.5 * dt, 0.5 * dt,
                         db2, depth + 1)


# ---------------------------------------------------------------------------
# drift/diffusion fields

def dbm_drift(x: np.ndarray, V: PotentialSpec, n: int) -> np.ndarray:
    sn = math.sqrt(n)
    return _kernels.pairwise_reciprocal(x) \
        - 0.5 * sn * _kernels.polyval(V.vp_coeffs, x / sn)


def laguerre_drift(x: np.ndarray, m: int, stationary: bool) -> np.ndarray:
    out = m + _kernels.pairwise_weighted(x, x)
    if stationary:
        out = out - x
    return out


def jacobi_drift(x: np.ndarray, m: int, p: int) -> np.ndarray:
    # pairwise numerator x_i(1-x_j) + x_j(1-x_i): the cross form is the
    # one whose generator is reversible for the Beta-type equilibrium
    return p - m * x + _kernels.pairwise_cross(x)


def _const_sigma(beta: float):
    s = math.sqrt(2.0 / beta)

    def sigma(x):
        return s

    return sigma


def _sqrt_sigma(beta: float):
    s = 2.0 / math.sqrt(beta)

    def sigma(x):
        return s * np.sqrt(np.maximum(x, 0.0))

    return sigma


def _interval_sigma(beta: float):
    s = 2.0 / math.sqrt(beta)

    def sigma(x):
        return s * np.sqrt(np.maximum(x * (1.0 - x), 0.0))

    return sigma


def _make_context(spec, cfg: IntegratorConfig, refine: np.random.Generator,
                  stationary: bool = True) -> _StepContext:
    kind = spec.kind
    if kind in ("gaussian", "dbm"):
        V = spec.V
        n = spec.n
        return _StepContext(drift=lambda x: dbm_drift(x, V, n),
                            sigma=_const_sigma(spec.beta),
                            constraint=Constraint.NONE, cfg=cfg,
                            refine=refine)
    if kind == "laguerre":
        return _StepContext(drift=lambda x: laguerre_drift(x, spec.m,
                                                           stationary),
                            sigma=_sqrt_sigma(spec.beta),
                            constraint=Constraint.POSITIVE, cfg=cfg,
                            refine=refine)
    if kind == "jacobi":
        return _StepContext(drift=lambda x: jacobi_drift(x, spec.m, spec.p),
                            sigma=_interval_sigma(spec.beta),
                            constraint=Constraint.UNIT_INTERVAL, cfg=cfg,
                            refine=refine)
    raise ValueError(f"unknown process kind {kind!r}")


def _single_step(ctx: _StepContext, state: SdeState, noise_row: np.ndarray,
                 dt: float | None = None) -> SdeState:
    dt = ctx.cfg.dt if dt is None else dt
    db = math.sqrt(dt) * np.asarray(noise_row, dtype=float)
    x = _advance(ctx, state.particles, state.t, dt, db, 0)
    return SdeState(t=state.t + dt, particles=x, constraint=ctx.constraint)


def step_dbm(state: SdeState, V: PotentialSpec, n: int, beta: float,
             cfg: IntegratorConfig, noise_row, refine=None,
             events: list | None = None) -> SdeState:
    ctx = _StepContext(drift=lambda x: dbm_drift(x, V, n),
                       sigma=_const_sigma(beta), constraint=Constraint.NONE,
                       cfg=cfg, refine=refine or np.random.default_rng(0))
    out = _single_step(ctx, state, noise_row)
    if events is not None:
        events.extend(ctx.events)
    return out


def step_laguerre(state: SdeState, n: int, m: int, beta: float,
                  stationary: bool, cfg: IntegratorConfig, noise_row,
                  refine=None, events: list | None = None) -> SdeState:
    ctx = _StepContext(drift=lambda x: laguerre_drift(x, m, stationary),
                       sigma=_sqrt_sigma(beta),
                       constraint=Constraint.POSITIVE, cfg=cfg,
                       refine=refine or np.random.default_rng(0))
    out = _single_step(ctx, state, noise_row)
    if events is not None:
        events.extend(ctx.events)
    return out


def step_jacobi(state: SdeState, n: int, m: int, p: int, q: int,
                beta: float, cfg: IntegratorConfig, noise_row,
                refine=None, events: list | None = None) -> SdeState:
    ctx = _StepContext(drift=lambda x: jacobi_drift(x, m, p),
                       sigma=_interval_sigma(beta),
                       constraint=Constraint.UNIT_INTERVAL, cfg=cfg,
                       refine=refine or np.random.default_rng(0))
    out = _single_step(ctx, state, noise_row)
    if events is not None:
        events.extend(ctx.events)
    return out


def step_localized_dbm(state: SdeState, W: Callable, beta: float,
                       cfg: IntegratorConfig, noise_row, refine=None,
                       events: list | None = None) -> SdeState:
    """One step of the k-particle system with external field W: the drift
    is the internal repulsion plus W evaluated at each particle."""

    def drift(x):
        ext = np.array([float(np.real(W(v))) for v in x])
        return _kernels.pairwise_reciprocal(x) + ext

    ctx = _StepContext(drift=drift, sigma=_const_sigma(beta),
                       constraint=Constraint.NONE, cfg=cfg,
                       refine=refine or np.random.default_rng(0))
    out = _single_step(ctx, state, noise_row)
    if events is not None:
        events.extend(ctx.events)
    return out


# ---------------------------------------------------------------------------
# trajectory driver

@dataclass
class TrajectoryRecord:
    times: np.ndarray  # process time units
    values: np.ndarray  # (len(times), n)
    events: list
    n_steps: int

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]


def evolve(spec, state0, T: float, cfg: IntegratorConfig,
           noise: NoiseBlock, record_times=None,
           observer: Callable | None = None,
           stationary: bool = True) -> TrajectoryRecord:
    """Step from t=0 to T, snapshotting at record_times (snapped to the
    step grid). `observer(step_index, t, particles)` is called after
    every accepted step for on-the-fly statistics."""
    x0 = state0.particles if isinstance(state0, SdeState) else \
        np.asarray(state0, dtype=float)
    n_steps = int(round(T / cfg.dt))
    if noise.steps < n_steps or noise.n != x0.size:
        raise ValueError("noise block shape does not cover this run")
    if record_times is None:
        record_times = [0.0, T]
    record_steps = sorted({min(n_steps, max(0, int(round(t / cfg.dt))))
                           for t in record_times})
    refine = rngmod.derive_stream(noise.master_seed, noise.replica_id,
                                  noise.purpose + "/refine")
    ctx = _make_context(spec, cfg, refine, stationary=stationary)
    state = SdeState(t=0.0, particles=x0, constraint=ctx.constraint)
    snaps, times = [], []
    rec = set(record_steps)
    if 0 in rec:
        snaps.append(state.particles.copy())
        times.append(0.0)
    rows = noise.rows()
    for j in range(n_steps):
        state = _single_step(ctx, state, next(rows))
        if observer is not None:
            observer(j, state.t, state.particles)
        if (j + 1) in rec:
            snaps.append(state.particles.copy())
            times.append(state.t)
    return TrajectoryRecord(times=np.array(times), values=np.stack(snaps),
                            events=ctx.events, n_steps=n_steps)


def evolve_paired(specA, specB, state0A, state0B, T: float,
                  cfg: IntegratorConfig, shared_noise: NoiseBlock,
                  record_times=None, observer=None, stationary: bool = True):
    """Two runs consuming the identical noise rows (shared Brownian
    motions); everything else as evolve. `observer(j, t, xA, xB)`."""
    xA = state0A.particles if isinstance(state0A, SdeState) else np.asarray(state0A, float)
    xB = state0B.particles if isinstance(state0B, SdeState) else np.asarray(state0B, float)
    n_steps = int(round(T / cfg.dt))
    ctxA = _make_context(specA, cfg, None, stationary=stationary)
    ctxB = _make_context(specB, cfg, None, stationary=stationary)
    stA = SdeState(0.0, xA, ctxA.constraint)
    stB = SdeState(0.0, xB, ctxB.constraint)
    if record_times is None:
        record_times = [0.0, T]
    rec = {min(n_steps, max(0, int(round(t / cfg.dt)))) for t in record_times}
    timesA, snapsA, snapsB = [], [], []
    if 0 in rec:
        timesA.append(0.0)
        snapsA.append(stA.particles.copy())
        snapsB.append(stB.particles.copy())
    rows = shared_noise.rows()
    for j in range(n_steps):
        row = next(rows)
        # a fresh per-step refine stream, consumed jointly, so retries on
        # one step never shift the refinement draws of later steps
        tag = f"{shared_noise.purpose}/refine/{j}"
        ctxA.refine = rngmod.derive_stream(shared_noise.master_seed,
                                           shared_noise.replica_id, tag)
        db = math.sqrt(cfg.dt) * np.asarray(row, dtype=float)
        pA, pB = _advance_pair(ctxA, ctxB, stA.particles, stB.particles,
                               stA.t, cfg.dt, db, 0)
        stA = SdeState(stA.t + cfg.dt, pA, ctxA.constraint)
        stB = SdeState(stB.t + cfg.dt, pB, ctxB.constraint)
        if observer is not None:
            observer(j, stA.t, stA.particles, stB.particles)
        if (j + 1) in rec:
            timesA.append(stA.t)
            snapsA.append(stA.particles.copy())
            snapsB.append(stB.particles.copy())
    ta = np.array(timesA)
    return (TrajectoryRecord(ta, np.stack(snapsA), ctxA.events, n_steps),
            TrajectoryRecord(ta, np.stack(snapsB), ctxB.events, n_steps))
