from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import LOG_STD_MAX, LOG_STD_MIN, PolicyParams, zeros_like


def cosine_lr(update: int, total: int, lr0: float, lr_min: float) -> float:
    """Learning rate for 0-based ``update`` annealed from ``lr0`` toward ``lr_min``."""
    frac = min(max(update / max(total, 1), 0.0), 1.0)
    return lr_min + 0.5 * (lr0 - lr_min) * (1.0 + math.cos(math.pi * frac))


@dataclass
class AdamState:
    m: PolicyParams
    v: PolicyParams
    step: int = 0

    @classmethod
    def zeros(cls, params: PolicyParams) -> "AdamState":
        return cls(zeros_like(params), zeros_like(params), 0)


def adam_update(
    params: PolicyParams,
    grads: PolicyParams,
    state: AdamState,
    lr: float,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> tuple[PolicyParams, AdamState]:
    """One bias-corrected Adam step; ``log_std`` is projected back into its clamp range."""
    b1, b2 = betas
    t = state.step + 1
    m, v, new = {}, {}, {}
    for name, p in params.items():
        g = grads[name]
        m[name] = b1 * state.m[name] + (1 - b1) * g
        v[name] = b2 * state.v[name] + (1 - b2) * g * g
        m_hat = m[name] / (1 - b1**t)
        v_hat = v[name] / (1 - b2**t)
        new[name] = p - lr * m_hat / (np.sqrt(v_hat) + eps)
    new["log_std"] = np.clip(new["log_std"], LOG_STD_MIN, LOG_STD_MAX)
    return PolicyParams(new), AdamState(PolicyParams(m), PolicyParams(v), t)
