"""Run-time configuration knobs, overridable from the CLI and environment."""

import os
from dataclasses import dataclass, fields

ENV_PREFIX = "GKZINT_"


@dataclass
class ToolConfig:
    truncation_K: int = 12
    ansatz_degree: int = 4
    denominator_power: int = 2
    precision_digits: int = 50
    buchberger_step_limit: int = 200000
    contiguity_degree: int = 4
    workers: int = 1
    seed: int = 20240801

    @classmethod
    def from_env(cls, **overrides):
        cfg = cls()
        for f in fields(cls):
            env = os.environ.get(ENV_PREFIX + f.name.upper())
            if env is not None:
                setattr(cfg, f.name, f.type(env) if f.type is not int else int(env))
        for k, v in overrides.items():
            if not hasattr(cfg, k):
                raise KeyError(f"unknown config key: {k}")
            setattr(cfg, k, type(getattr(cfg, k))(v))
        return cfg


DEFAULT = ToolConfig()
