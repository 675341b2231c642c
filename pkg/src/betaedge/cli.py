"""Command line entry points.

Subcommands: airy, sample, evolve, scaling, nevanlinna, verify. Exit
codes: 0 success, 1 a checked criterion failed, 2 usage or configuration
problem, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import airy as airymod
from . import config as cfgmod
from . import io as iomod
from . import nevanlinna as nev
from . import rng as rngmod
from .config import Config, ConfigError
from .edge_scaling import EquilibriumError, equilibrium_measure, scaling_for
from .potential import PotentialSpec

EXIT_OK = 0
EXIT_CRITERION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (EquilibriumError, nev.QuadratureError,
                     airymod.AiryOverflowError, airymod.PoleProximityError,
                     airymod.InsufficientTableError, FloatingPointError,
                     np.linalg.LinAlgError)


def _common(sub):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--out", default=None)
    return sub


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="betaedge")
    subs = p.add_subparsers(dest="command", required=True)

    airy_p = _common(subs.add_parser("airy"))
    airy_sub = airy_p.add_subparsers(dest="airy_command", required=True)
    zeros_p = airy_sub.add_parser("zeros")
    zeros_p.add_argument("--count", type=int, required=True)
    zeros_p.add_argument("--out", required=True)

    sample_p = _common(subs.add_parser("sample"))
    sample_p.add_argument("--kind", required=True,
                          choices=["gaussian", "laguerre", "jacobi", "dbm"])
    sample_p.add_argument("--n", type=int, required=True)
    sample_p.add_argument("--beta", type=float, required=True)
    sample_p.add_argument("--m", type=int)
    sample_p.add_argument("--p", type=int)
    sample_p.add_argument("--q", type=int)
    sample_p.add_argument("--potential",
                          help="JSON file with polynomial coefficients")

    evolve_p = _common(subs.add_parser("evolve"))
    evolve_p.add_argument("--config", required=True)

    scaling_p = _common(subs.add_parser("scaling"))
    scaling_p.add_argument("--kind", required=True,
                           choices=["gaussian", "laguerre", "jacobi", "dbm"])
    scaling_p.add_argument("--n", type=int, required=True)
    scaling_p.add_argument("--beta", type=float, default=2.0)
    scaling_p.add_argument("--m", type=int)
    scaling_p.add_argument("--p", type=int)
    scaling_p.add_argument("--q", type=int)
    scaling_p.add_argument("--potential")

    nev_p = _common(subs.add_parser("nevanlinna"))
    nev_sub = nev_p.add_subparsers(dest="nev_command", required=True)
    check_p = nev_sub.add_parser("check")
    check_p.add_argument("--particles", required=True)
    check_p.add_argument("--dd", type=float, default=0.5)
    check_p.add_argument("--cstar", type=float, default=10.0)
    check_p.add_argument("--out", required=True)

    verify_p = _common(subs.add_parser("verify"))
    verify_p.add_argument("experiment",
                          choices=["tw", "airy_like", "rigidity", "holder",
                                   "residual", "residual_scaling",
                                   "characteristic", "collisions",
                                   "coupling"])
    verify_p.add_argument("--config", required=True)
    return p


def _potential_from_file(path: str) -> PotentialSpec:
    with open(path) as f:
        coeffs = json.load(f)
    if not isinstance(coeffs, list):
        raise ConfigError("potential file must hold a JSON list of "
                          "polynomial coefficients")
    return PotentialSpec(coeffs=tuple(float(c) for c in coeffs))


def _spec_from_args(args):
    from .ensembles import dbm_spec, gaussian_spec, jacobi_spec, laguerre_spec
    if args.kind == "gaussian":
        return gaussian_spec(args.n, args.beta)
    if args.kind == "laguerre":
        if args.m is None:
            raise ConfigError("laguerre requires --m")
        return laguerre_spec(args.n, args.m, args.beta)
    if args.kind == "jacobi":
        if None in (args.m, args.p, args.q):
            raise ConfigError("jacobi requires --m, --p, --q")
        return jacobi_spec(args.n, args.m, args.p, args.q, args.beta)
    if args.potential is None:
        raise ConfigError("dbm requires --potential FILE")
    return dbm_spec(args.n, args.beta, _potential_from_file(args.potential))


def _spec_from_config(cfg: Config):
    from .ensembles import dbm_spec, gaussian_spec, jacobi_spec, laguerre_spec
    if cfg.kind == "gaussian":
        return gaussian_spec(cfg.n, cfg.beta)
    if cfg.kind == "laguerre":
        return laguerre_spec(cfg.n, cfg.m, cfg.beta)
    if cfg.kind == "jacobi":
        return jacobi_spec(cfg.n, cfg.m, cfg.p, cfg.q, cfg.beta)
    return dbm_spec(cfg.n, cfg.beta,
                    PotentialSpec(coeffs=tuple(cfg.potential)))


def cmd_airy_zeros(args) -> int:
    table = airymod.airy_zeros(args.count)
    import csv
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["index", "zero", "asymptotic_guess", "residual"])
        for i, z in enumerate(table.zeros, start=1):
            guess = airymod._zero_guess(i)
            resid = abs(airymod.airy_eval(z).value)
            w.writerow([i, "%.17g" % z, "%.17g" % guess, "%.17g" % resid])
    return EXIT_OK


def cmd_sample(args) -> int:
    from .ensembles import sample
    spec = _spec_from_args(args)
    stream = rngmod.derive_stream(args.seed, 0, "cli/sample")
    st = sample(spec, stream)
    out = args.out or "particles.csv"
    iomod.write_particles(out, st.particles)
    return EXIT_OK


def cmd_scaling(args) -> int:
    spec = _spec_from_args(args)
    sc = scaling_for(spec)
    doc = {"E": sc.E, "zeta": sc.zeta, "chi": sc.chi,
           "shift": sc.stieltjes_shift}
    if spec.kind in ("gaussian", "dbm"):
        eq = equilibrium_measure(spec.V)
        doc.update({"A": eq.A, "B": eq.B, "R_A": eq.R_A, "R_B": eq.R_B})
    text = json.dumps(doc, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_evolve(args) -> int:
    import os

    from .dynamics import IntegratorConfig, NoiseBlock, evolve
    from .ensembles import sample
    cfg = cfgmod.load_config(args.config)
    if args.seed:
        cfg.seed = args.seed
    spec = _spec_from_config(cfg)
    stream = rngmod.derive_stream(cfg.seed, 0, "cli/evolve/init")
    st = sample(spec, stream)
    n_steps = int(round(cfg.T / cfg.dt))
    noise = NoiseBlock(master_seed=cfg.seed, replica_id=0,
                       purpose="cli/evolve/noise", steps=n_steps, n=cfg.n)
    t0 = time.time()
    rec = evolve(spec, st.particles, T=n_steps * cfg.dt,
                 cfg=IntegratorConfig(dt=cfg.dt,
                                      min_gap=cfg.resolved_min_gap(),
                                      max_retries=cfg.max_retries),
                 noise=noise,
                 record_times=np.linspace(0.0, n_steps * cfg.dt, 11))
    outdir = args.out or cfg.out or "."
    os.makedirs(outdir, exist_ok=True)
    traj_path = os.path.join(outdir, "trajectory.csv")
    iomod.write_trajectory(traj_path, rec.times, rec.values)
    events_path = os.path.join(outdir, "events.jsonl")
    open(events_path, "w").close()
    iomod.append_events(events_path, rec.events)
    man = iomod.RunManifest(tool_version=_version(),
                            config_hash=cfgmod.config_hash(cfg),
                            master_seed=cfg.seed,
                            stream_ids=["cli/evolve/init",
                                        "cli/evolve/noise"],
                            wall_clock_s=time.time() - t0)
    man.add_output(traj_path)
    man.add_output(events_path)
    man.write(os.path.join(outdir, "manifest.json"))
    return EXIT_OK


def cmd_nevanlinna_check(args) -> int:
    particles = iomod.read_particles(args.particles)
    fn = nev.airy_anchored_fn(np.sort(particles)[::-1], tail=True)
    params = nev.AiryLikeParams(frak_d=args.dd, c_star=args.cstar)
    rep = nev.check_airy_like(fn, params)
    doc = {"pass": rep.passed,
           "max_pole": float(particles.max()),
           "violations": [{"w": {"re": w.real, "im": w.imag},
                           "deviation": float(dev),
                           "bound": float(bound)}
                          for w, dev, bound in rep.envelope_violations[:100]],
           "fitted_constant": float(rep.fitted_constant)}
    iomod.write_report(args.out, doc)
    return EXIT_OK if rep.passed else EXIT_CRITERION


def cmd_verify(args) -> int:
    import os

    from .verify_runners import run_experiment
    cfg = cfgmod.load_config(args.config)
    if args.seed:
        cfg.seed = args.seed
    outdir = args.out or cfg.out or "."
    os.makedirs(outdir, exist_ok=True)
    t0 = time.time()
    report = run_experiment(args.experiment, cfg)
    report_path = os.path.join(outdir, "report.json")
    report.write(report_path)
    man = iomod.RunManifest(tool_version=_version(),
                            config_hash=cfgmod.config_hash(cfg),
                            master_seed=cfg.seed,
                            wall_clock_s=time.time() - t0)
    man.add_output(report_path)
    man.write(os.path.join(outdir, "manifest.json"))
    return EXIT_OK if report.passed else EXIT_CRITERION


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("betaedge")
    except Exception:
        return "unknown"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) and args.threads > 1:
        try:
            import numba
            numba.set_num_threads(args.threads)
        except Exception:
            pass
    try:
        if args.command == "airy":
            return cmd_airy_zeros(args)
        if args.command == "sample":
            return cmd_sample(args)
        if args.command == "scaling":
            return cmd_scaling(args)
        if args.command == "evolve":
            return cmd_evolve(args)
        if args.command == "nevanlinna":
            return cmd_nevanlinna_check(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERICAL_ERRORS as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
