"""Rule-based reference policies.

Every rule reads raw panel columns through :meth:`Observation.past`, so it
only ever sees the decision row and earlier rows.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from ..errors import ConfigError
from .core import Observation

BASELINE_KINDS = ("no_hedge", "buy_hold", "momentum", "vol_target", "vix_band", "vix_vol_target")

_DEFAULTS = {
    "no_hedge": {},
    "buy_hold": {},
    "momentum": {"lookback": 21, "pos_limit": 2.0},
    "vol_target": {"target_vol": 0.15, "pos_limit": 2.0},
    "vix_band": {"vix_median": None, "band": 2.5, "a_hi": 1.0, "a_lo": 0.5},
    "vix_vol_target": {"target_vol": 0.15, "pos_limit": 2.0},
}


def _finite_or_zero(x):
    return np.where(np.isfinite(x), x, 0.0)


def baseline_policy(kind: str, params: Mapping | None = None):
    """Build a baseline policy callable ``policy(obs, rng=None) -> actions``.

    ``vix_band`` needs ``vix_median`` (the train-split median); the other
    parameters fall back to defaults.
    """
    if kind not in _DEFAULTS:
        raise ConfigError(f"unknown baseline kind '{kind}'; expected one of {BASELINE_KINDS}")
    p = dict(_DEFAULTS[kind])
    unknown = set(params or {}) - set(p)
    if unknown:
        raise ConfigError(f"unknown parameters for {kind}: {sorted(unknown)}")
    p.update(params or {})

    if kind == "no_hedge":
        def policy(obs: Observation, rng=None):
            return np.zeros(np.shape(obs.prev_position))

    elif kind == "buy_hold":
        def policy(obs: Observation, rng=None):
            return np.ones(np.shape(obs.prev_position))

    elif kind == "momentum":
        k = int(p["lookback"])
        if k < 1:
            raise ConfigError("momentum lookback must be >= 1")

        def policy(obs: Observation, rng=None):
            px = obs.past("spy_close", k)
            trailing = px[..., -1] / px[..., 0] - 1.0
            return p["pos_limit"] * np.sign(_finite_or_zero(trailing))

    elif kind == "vol_target":
        def policy(obs: Observation, rng=None):
            rv = obs.current("rv_21d")
            with np.errstate(divide="ignore", invalid="ignore"):
                a = np.clip(p["target_vol"] / rv, 0.0, p["pos_limit"])
            return _finite_or_zero(np.where(rv > 0, a, 0.0))

    elif kind == "vix_band":
        if p["vix_median"] is None:
            raise ConfigError("vix_band needs 'vix_median' from the train split")
        med, band = float(p["vix_median"]), float(p["band"])

        def policy(obs: Observation, rng=None):
            vix = obs.current("vix")
            a = np.where(vix > med + band, p["a_hi"], np.where(vix < med - band, p["a_lo"], 0.0))
            return np.where(np.isfinite(vix), a, 0.0)

    else:  # vix_vol_target
        def policy(obs: Observation, rng=None):
            implied = obs.current("vix") / 100.0
            with np.errstate(divide="ignore", invalid="ignore"):
                a = np.clip(p["target_vol"] / implied, 0.0, p["pos_limit"])
            return _finite_or_zero(np.where(implied > 0, a, 0.0))

    policy.kind = kind
    policy.params = p
    return policy
