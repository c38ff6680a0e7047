"""Autocorrelation-robust standard errors and block-bootstrap Sharpe intervals."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .metrics import ANNUALIZATION, sharpe, sharpe_rows


def autocovariances(x, max_lag: int) -> np.ndarray:
    """Biased (divide by n) sample autocovariances for lags 0..max_lag."""
    d = np.asarray(x, dtype=float) - np.mean(x)
    n = d.size
    return np.array([d[l:] @ d[: n - l] / n for l in range(max_lag + 1)])


def naive_se(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sqrt(autocovariances(x, 0)[0] / x.size))


def newey_west_se(x, lag: int = 21) -> float:
    """Standard error of the mean with a Bartlett-weighted long-run variance."""
    x = np.asarray(x, dtype=float).ravel()
    if lag < 0:
        raise ValueError("lag must be >= 0")
    if x.size <= lag:
        raise ValueError(f"series of length {x.size} is too short for lag {lag}")
    g = autocovariances(x, lag)
    weights = 1.0 - np.arange(1, lag + 1) / (lag + 1.0)
    lrv = g[0] + 2.0 * np.sum(weights * g[1:])
    return float(np.sqrt(max(lrv, 0.0) / x.size))


def sharpe_nw_se(x, lag: int = 21) -> float:
    """Newey-West SE of the annualized Sharpe, treating the sample std as known."""
    x = np.asarray(x, dtype=float)
    s = x.std(ddof=1)
    if not s > 0:
        return 0.0
    return float(ANNUALIZATION * newey_west_se(x, lag) / s)


@dataclass(frozen=True)
class SharpeCI:
    point: float
    nw_se: float
    lo: float
    hi: float
    block_len: int
    n_resamples: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def circular_block_indices(n: int, block_len: int, rng: np.random.Generator) -> np.ndarray:
    n_blocks = -(-n // block_len)
    starts = rng.integers(0, n, size=n_blocks)
    idx = (starts[:, None] + np.arange(block_len)) % n
    return idx.ravel()[:n]


def block_bootstrap_ci(
    series,
    block_len: int = 21,
    n_resamples: int = 1000,
    seed: int = 0,
    level: float = 0.95,
    statistic: Callable | None = None,
    nw_lag: int = 21,
) -> SharpeCI:
    """Percentile interval from a circular block bootstrap.

    Resample ``i`` draws its block starts from a generator seeded with
    ``seed + i``, so any partition of the resamples across workers
    reproduces the serial result.
    """
    x = np.asarray(series, dtype=float).ravel()
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    if x.size <= 2 * block_len:
        raise ValueError(f"series of length {x.size} is too short for block_len {block_len}")
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")
    idx = np.stack([
        circular_block_indices(x.size, block_len, np.random.default_rng(seed + i))
        for i in range(n_resamples)
    ])
    samples = x[idx]
    if statistic is None:
        stats = sharpe_rows(samples)
        point = sharpe(x)
    else:
        stats = np.array([statistic(row) for row in samples])
        point = float(statistic(x))
    alpha = 1.0 - level
    lo, hi = np.quantile(stats, [alpha / 2, 1 - alpha / 2])
    nw = sharpe_nw_se(x, nw_lag) if x.size > nw_lag else float("nan")
    return SharpeCI(float(point), nw, float(lo), float(hi), int(block_len), int(n_resamples), int(seed))
