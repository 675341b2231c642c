"""Flat, schema-validated run configuration.

Configs are JSON documents with a fixed key set; unknown keys are
rejected so typos fail loudly. Defaults are filled on load and the
cross-field constraints of each process kind are enforced here, not in
the samplers.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (maps to exit code 2)."""


_KINDS = ("gaussian", "laguerre", "jacobi", "dbm")
_SCHEMES = ("euler_maruyama", "split_step")


@dataclass
class Config:
    kind: str = "gaussian"
    n: int = 100
    beta: float = 2.0
    m: int | None = None
    p: int | None = None
    q: int | None = None
    # polynomial potential coefficients c_0 + c_1 x + ... (dbm kind only)
    potential: list[float] | None = None

    dt: float = 1e-4
    min_gap: float | None = None  # default depends on beta, see resolve
    max_retries: int = 8
    scheme: str = "euler_maruyama"

    seed: int = 0
    threads: int = 1
    replicas: int = 100
    T: float = 1.0
    top_k: int = 10
    burnin: float | None = None
    out: str | None = None

    def resolved_min_gap(self) -> float:
        if self.min_gap is not None:
            return self.min_gap
        return 0.0 if self.beta >= 1.0 else 1e-9

    def validate(self) -> "Config":
        if self.kind not in _KINDS:
            raise ConfigError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.beta <= 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.max_retries < 1:
            raise ConfigError("max_retries must be >= 1")
        if self.scheme not in _SCHEMES:
            raise ConfigError(f"scheme must be one of {_SCHEMES}")
        if self.kind == "laguerre":
            if self.m is None:
                raise ConfigError("laguerre requires m")
            if self.m < self.n:
                raise ConfigError(f"laguerre requires m >= n, got m={self.m} n={self.n}")
        if self.kind == "jacobi":
            for key in ("m", "p", "q"):
                if getattr(self, key) is None:
                    raise ConfigError(f"jacobi requires {key}")
            if self.p + self.q != self.m:
                raise ConfigError(
                    f"jacobi requires p+q=m, got p={self.p} q={self.q} m={self.m}")
            if self.p < self.n + 1 or self.q < self.n + 1:
                raise ConfigError("jacobi requires p >= n+1 and q >= n+1")
        if self.kind == "dbm" and self.potential is None:
            raise ConfigError("dbm requires potential coefficients")
        return self


_FIELDS = {f.name for f in dataclasses.fields(Config)}


def from_dict(doc: dict) -> Config:
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        cfg = Config(**doc)
    except TypeError as e:
        raise ConfigError(str(e)) from e
    return cfg.validate()


def load_config(path: str) -> Config:
    try:
        with open(path) as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config parse error in {path}: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return from_dict(doc)


def config_hash(cfg: Config) -> str:
    import hashlib
    blob = json.dumps(dataclasses.asdict(cfg), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()
