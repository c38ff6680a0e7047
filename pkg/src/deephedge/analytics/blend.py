"""Blends of the policy overlay with a long SPY sleeve."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from .metrics import ANNUALIZATION, drawdown_from_returns, sharpe

ROLLING_WINDOW = 63
FRONTIER_COLUMNS = ["weight", "ann_vol", "cagr", "sharpe"]
ATTRIBUTION_COLUMNS = ["year", "overlay", "spy_leg", "total"]


@dataclass(frozen=True)
class LegStats:
    sharpe: float
    ann_vol: float
    cagr: float
    max_drawdown: float
    mean_bps: float
    std_bps: float


def leg_stats(returns) -> LegStats:
    r = np.asarray(returns, dtype=float)
    nav_end = float(np.prod(1.0 + r))
    cagr = nav_end ** (252.0 / r.size) - 1.0 if nav_end > 0 else -1.0
    std = float(r.std(ddof=1))
    return LegStats(
        sharpe=sharpe(r),
        ann_vol=std * ANNUALIZATION,
        cagr=cagr,
        max_drawdown=drawdown_from_returns(r),
        mean_bps=float(r.mean()) * 1e4,
        std_bps=std * 1e4,
    )


def rolling_vol(returns: pd.Series, window: int = ROLLING_WINDOW) -> pd.Series:
    return returns.rolling(window, min_periods=window).std(ddof=1) * ANNUALIZATION


def rolling_drawdown(returns: pd.Series, window: int = ROLLING_WINDOW) -> pd.Series:
    """``NAV / max(NAV over the trailing window) - 1``."""
    nav = (1.0 + returns).cumprod()
    return nav / nav.rolling(window, min_periods=1).max() - 1.0


@dataclass(frozen=True)
class BlendReport:
    weight: float
    returns: pd.Series
    nav: pd.Series
    stats: LegStats
    rolling: pd.DataFrame
    attribution: pd.DataFrame

    @property
    def sharpe(self) -> float:
        return self.stats.sharpe

    @property
    def ann_vol(self) -> float:
        return self.stats.ann_vol

    @property
    def cagr(self) -> float:
        return self.stats.cagr

    @property
    def max_drawdown(self) -> float:
        return self.stats.max_drawdown


def _aligned(policy_pnl: pd.Series, spy_returns: pd.Series) -> tuple[pd.Series, pd.Series]:
    p, s = pd.Series(policy_pnl, dtype=float), pd.Series(spy_returns, dtype=float)
    pi, si = pd.DatetimeIndex(p.index), pd.DatetimeIndex(s.index)
    if len(pi) != len(si) or not (pi == si).all():
        raise ValueError("policy and SPY series are not date-aligned")
    if pi.has_duplicates:
        raise ValueError("blend inputs must have one row per date")
    if len(pi) < 2:
        raise ValueError("blend needs at least two dates")
    return p, s


def blend(policy_pnl: pd.Series, spy_returns: pd.Series, w: float) -> BlendReport:
    """Daily ``w * policy + (1 - w) * spy`` compounded into a NAV.

    ``policy_pnl`` is the overlay's per-step pnl as a fraction (reward bps
    times 1e-4).
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {w}")
    p, s = _aligned(policy_pnl, spy_returns)
    overlay = w * p
    spy_leg = (1.0 - w) * s
    r = overlay + spy_leg
    nav = (1.0 + r).cumprod()

    rv_b, rv_p, rv_s = rolling_vol(r), rolling_vol(p), rolling_vol(s)
    dd_b, dd_p, dd_s = rolling_drawdown(r), rolling_drawdown(p), rolling_drawdown(s)
    rolling = pd.DataFrame({
        "vol_blend": rv_b, "vol_policy": rv_p, "vol_spy": rv_s,
        "vol_diff_policy": rv_b - rv_p, "vol_diff_spy": rv_b - rv_s,
        "dd_blend": dd_b, "dd_policy": dd_p, "dd_spy": dd_s,
        "dd_diff_policy": dd_b - dd_p, "dd_diff_spy": dd_b - dd_s,
    })
    years = pd.DatetimeIndex(r.index).year
    attribution = pd.DataFrame({
        "overlay": overlay.groupby(years).sum() * 100.0,
        "spy_leg": spy_leg.groupby(years).sum() * 100.0,
    })
    attribution["total"] = attribution["overlay"] + attribution["spy_leg"]
    attribution = attribution.rename_axis("year").reset_index()[ATTRIBUTION_COLUMNS]
    return BlendReport(float(w), r, nav, leg_stats(r), rolling, attribution)


def blend_sweep(policy_pnl: pd.Series, spy_returns: pd.Series, weights: Sequence[float]) -> list[BlendReport]:
    w = [float(x) for x in weights]
    if any(b < a for a, b in zip(w, w[1:])):
        raise ValueError("weights must be sorted")
    return [blend(policy_pnl, spy_returns, x) for x in w]


def frontier_frame(reports: Sequence[BlendReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"weight": r.weight, "ann_vol": r.ann_vol, "cagr": r.cagr, "sharpe": r.sharpe} for r in reports],
        columns=FRONTIER_COLUMNS,
    )


def min_variance_weight(policy_pnl, spy_returns) -> float:
    """Closed-form policy weight minimising blend variance, clipped to [0, 1]."""
    c = np.cov(np.asarray(policy_pnl, dtype=float), np.asarray(spy_returns, dtype=float), ddof=1)
    denom = c[0, 0] + c[1, 1] - 2.0 * c[0, 1]
    if not denom > 0:
        return 0.5
    return float(np.clip((c[1, 1] - c[0, 1]) / denom, 0.0, 1.0))
