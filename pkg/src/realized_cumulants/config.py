"""Run configuration for the command-line tools."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .bell import N_MAX
from .recursion import DEFAULT_BIAS_CONSTANTS
from .report import DEFAULT_Z_GATE

SEED_ENV_VAR = "REALIZED_CUMULANTS_SEED"
DEFAULT_SEED = 20240607


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    z_gate: float = DEFAULT_Z_GATE
    n_max: int = N_MAX
    bias_constants: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_BIAS_CONSTANTS))
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        if not self.z_gate > 0:
            raise ValueError("z_gate must be positive")
        if not 1 <= self.n_max <= 20:
            # 21! no longer fits in a signed 64-bit integer
            raise ValueError("n_max must be in 1..20")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    @classmethod
    def load(cls, path=None, env=None) -> "RunConfig":
        """Defaults, then the JSON file at ``path``, then ``REALIZED_CUMULANTS_SEED``."""
        env = os.environ if env is None else env
        data = {}
        if path is not None:
            data = json.loads(Path(path).read_text())
            unknown = set(data) - set(cls.__dataclass_fields__)
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            if "bias_constants" in data:
                data["bias_constants"] = {**DEFAULT_BIAS_CONSTANTS, **data["bias_constants"]}
        if env.get(SEED_ENV_VAR):
            data["seed"] = int(env[SEED_ENV_VAR])
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)
