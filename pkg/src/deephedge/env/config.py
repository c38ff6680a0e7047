from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace
from typing import Mapping

from ..errors import ConfigError

_JSON_KEYS = {
    "window": "window",
    "pos_limit": "pos_limit",
    "cost_bps": "cost_bps",
    "slippage_bps": "slippage_bps",
    "rebalance_every": "rebalance_every",
    "psi": "psi",
    "lambda": "lam",
    "episode_len": "episode_len",
    "episode_stride": "episode_stride",
    "reward_scale": "reward_scale",
}


@dataclass(frozen=True)
class EnvConfig:
    """Environment parameters.

    Defaults follow the selected execution setting (10 bps cost, 8 bps
    slippage, rebalance every 25th step, position limit 2) with the impact
    hook switched off.
    """

    window: int = 10
    pos_limit: float = 2.0
    cost_bps: float = 10.0
    slippage_bps: float = 8.0
    rebalance_every: int = 25
    psi: float = 0.0
    lam: float = 0.0
    episode_len: int = 256
    episode_stride: int = 64
    reward_scale: float = 1e4

    def __post_init__(self):
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if not self.pos_limit > 0:
            raise ConfigError("pos_limit must be positive")
        for name in ("cost_bps", "slippage_bps", "psi", "lam"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.rebalance_every < 1:
            raise ConfigError("rebalance_every must be >= 1")
        if self.episode_len <= self.window:
            raise ConfigError("episode_len must exceed window")
        if self.episode_stride < 1:
            raise ConfigError("episode_stride must be >= 1")

    @property
    def total_bps(self) -> float:
        return self.cost_bps + self.slippage_bps

    def replace(self, **changes) -> "EnvConfig":
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, d: Mapping) -> "EnvConfig":
        unknown = set(d) - set(_JSON_KEYS)
        if unknown:
            raise ConfigError(f"unknown EnvConfig keys: {sorted(unknown)}")
        return cls(**{_JSON_KEYS[k]: v for k, v in d.items()})

    def to_dict(self) -> dict:
        own = asdict(self)
        return {k: own[attr] for k, attr in _JSON_KEYS.items()}

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()
