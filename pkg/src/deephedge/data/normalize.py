"""Train-split feature standardization."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .panel import FEATURE_COLUMNS, FeaturePanel


@dataclass(frozen=True)
class NormStats:
    columns: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    clip_bound: float = 5.0
    degenerate: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.clip_bound > 0:
            raise ValueError("clip_bound must be positive")
        if np.any(~(self.std > 0)):
            raise ValueError("std entries must be > 0")

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "mean": [float(x) for x in self.mean],
            "std": [float(x) for x in self.std],
            "clip_bound": float(self.clip_bound),
            "degenerate": list(self.degenerate),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "NormStats":
        return cls(
            columns=tuple(d["columns"]),
            mean=np.asarray(d["mean"], dtype=float),
            std=np.asarray(d["std"], dtype=float),
            clip_bound=float(d["clip_bound"]),
            degenerate=tuple(d.get("degenerate", ())),
        )

    def fingerprint(self) -> str:
        """Content hash of the feature schema and the fitted statistics."""
        payload = json.dumps(
            {
                "columns": list(self.columns),
                "mean": [float(x).hex() for x in self.mean],
                "std": [float(x).hex() for x in self.std],
                "clip_bound": float(self.clip_bound).hex(),
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def fit_norm_stats(
    train: FeaturePanel, clip_bound: float = 5.0, columns: Sequence[str] = FEATURE_COLUMNS
) -> NormStats:
    """Per-feature mean and sample std over present train values.

    A feature with zero (or undefined) spread keeps std = 1 and is listed in
    ``degenerate``.
    """
    if len(train) == 0:
        raise ValueError("train split is empty")
    x = train.frame[list(columns)].to_numpy(dtype=float)
    x = np.where(np.isfinite(x), x, np.nan)
    means, stds, flagged = [], [], []
    for j, col in enumerate(columns):
        v = x[:, j][~np.isnan(x[:, j])]
        m = float(v.mean()) if v.size else 0.0
        s = float(v.std(ddof=1)) if v.size > 1 else 0.0
        if not s > 0:
            s = 1.0
            flagged.append(col)
        means.append(m)
        stds.append(s)
    return NormStats(tuple(columns), np.array(means), np.array(stds), float(clip_bound), tuple(flagged))


def apply_norm(panel: FeaturePanel, stats: NormStats) -> np.ndarray:
    """Standardize, clip to +/- clip_bound, and zero out missing or non-finite cells."""
    x = panel.frame[list(stats.columns)].to_numpy(dtype=float)
    return normalize_array(x, stats)


def normalize_array(x: np.ndarray, stats: NormStats) -> np.ndarray:
    with np.errstate(invalid="ignore", over="ignore"):
        z = (x - stats.mean) / stats.std
    z = np.clip(z, -stats.clip_bound, stats.clip_bound)
    return np.where(np.isfinite(x) & np.isfinite(z), z, 0.0)
