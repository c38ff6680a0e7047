from __future__ import annotations

import numpy as np


def compute_gae(rewards, values, gamma: float, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and value targets.

    ``values`` carries one more entry than ``rewards``: the bootstrap value of
    the state after the last reward (0 for a terminal state).
    """
    r = np.asarray(rewards, dtype=float)
    v = np.asarray(values, dtype=float)
    if v.shape != (r.size + 1,):
        raise ValueError(f"values must have length len(rewards) + 1 = {r.size + 1}, got {v.size}")
    delta = r + gamma * v[1:] - v[:-1]
    adv = np.empty_like(r)
    acc = 0.0
    decay = gamma * lam
    for t in range(r.size - 1, -1, -1):
        acc = delta[t] + decay * acc
        adv[t] = acc
    return adv, adv + v[:-1]


def normalize_advantages(adv: np.ndarray, mask: np.ndarray | None = None, min_std: float = 1e-8) -> np.ndarray:
    """Zero-mean, unit-std advantages over ``mask``; left unscaled when the spread is tiny."""
    a = np.asarray(adv, dtype=float)
    sel = a if mask is None else a[mask]
    if sel.size == 0:
        return a.copy()
    sd = sel.std()
    if sd < min_std:
        return a.copy()
    return (a - sel.mean()) / sd
