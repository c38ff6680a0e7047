"""Option quote selection and staleness-guarded filling."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class QuoteRecord:
    date: dt.date
    tenor_days: int
    delta: float
    iv_mid: float
    spread: float
    is_put: bool

    def __post_init__(self):
        if self.tenor_days < 1:
            raise ValueError(f"tenor_days must be >= 1, got {self.tenor_days}")
        if abs(self.delta) > 1:
            raise ValueError(f"|delta| must be <= 1, got {self.delta}")
        if not self.iv_mid >= 0:
            raise ValueError(f"iv_mid must be >= 0, got {self.iv_mid}")
        if not self.spread >= 0:
            raise ValueError(f"spread must be >= 0, got {self.spread}")


def select_quote(
    quotes: Sequence[QuoteRecord],
    target_tenor: float,
    target_delta: float,
    tenor_tol: float,
    delta_tol: float,
) -> QuoteRecord | None:
    """Pick the quote closest to ``target_delta`` within both tolerances.

    Ties on delta distance go to the tighter spread, then the closer tenor,
    then the earlier position in ``quotes``. Returns None when nothing is
    within tolerance.
    """
    if tenor_tol <= 0 or delta_tol <= 0:
        raise ValueError("tolerances must be positive")
    best_key = None
    best = None
    for i, q in enumerate(quotes):
        d_delta = abs(q.delta - target_delta)
        d_tenor = abs(q.tenor_days - target_tenor)
        if d_delta > delta_tol or d_tenor > tenor_tol:
            continue
        key = (d_delta, q.spread, d_tenor, i)
        if best_key is None or key < best_key:
            best_key, best = key, q
    return best


def forward_fill_guarded(series: pd.Series, max_stale_days: int) -> tuple[pd.Series, pd.Series]:
    """Forward-fill missing values only across short calendar gaps.

    Parameters
    ----------
    series : pd.Series
        Values on a strictly increasing DatetimeIndex; NaN marks missing.
    max_stale_days : int
        Largest calendar-day distance to the last present observation that
        may still be filled.

    Returns
    -------
    filled : pd.Series
    was_filled : pd.Series of bool
    """
    idx = pd.DatetimeIndex(series.index)
    if len(idx) > 1 and not (np.diff(idx.asi8) > 0).all():
        raise ValueError("dates must be strictly increasing")
    present = series.notna()
    last_date = pd.Series(idx, index=series.index).where(present).ffill()
    gap_days = (idx - pd.DatetimeIndex(last_date)).days
    gap = pd.Series(np.asarray(gap_days, dtype=float), index=series.index)
    fillable = ~present & gap.notna() & (gap <= max_stale_days)
    out = series.copy()
    out[fillable] = series.ffill()[fillable]
    return out, fillable.astype(bool)
