"""Deterministic per-split evaluation metrics."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
import pandas as pd

ANNUALIZATION = np.sqrt(252.0)
EVAL_COLUMNS = [
    "policy", "split", "sharpe", "mean_bps", "std_bps", "max_drawdown",
    "turnover", "hit_rate", "cost_normalized_profit", "steps",
]


def _degenerate_std(mean: float, std: float) -> bool:
    return not std > 1e-12 * max(1.0, abs(mean))


def sharpe(rewards, with_flag: bool = False):
    """Annualized mean/std of per-step rewards (sample std).

    A series with no spread has Sharpe 0 and is flagged degenerate.
    """
    x = np.asarray(rewards, dtype=float).ravel()
    if x.size < 2:
        raise ValueError(f"sharpe needs at least 2 observations, got {x.size}")
    m, s = float(x.mean()), float(x.std(ddof=1))
    degenerate = _degenerate_std(m, s)
    value = 0.0 if degenerate else float(m / s * ANNUALIZATION)
    return (value, degenerate) if with_flag else value


def sharpe_rows(samples: np.ndarray) -> np.ndarray:
    """Row-wise :func:`sharpe` for a 2-D array of resamples."""
    m = samples.mean(axis=1)
    s = samples.std(axis=1, ddof=1)
    ok = s > 1e-12 * np.maximum(1.0, np.abs(m))
    out = np.zeros(len(samples))
    out[ok] = m[ok] / s[ok] * ANNUALIZATION
    return out


def drawdown_from_returns(returns) -> float:
    """Worst ``NAV / running peak - 1`` of a NAV compounded from 1."""
    r = np.asarray(returns, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("empty return series")
    nav = np.concatenate([[1.0], np.cumprod(1.0 + r)])
    peak = np.maximum.accumulate(nav)
    dd = float(np.min(nav / peak - 1.0))
    return max(-1.0, min(0.0, dd))


def max_drawdown(rewards, scale: float = 1e4) -> float:
    """Drawdown of the reward equity; rewards are per-step bps unless ``scale`` says otherwise."""
    return drawdown_from_returns(np.asarray(rewards, dtype=float) / scale)


def turnover_and_hit_rate(trace) -> tuple[float, float]:
    """Total ``|trade|`` and the share of active steps whose position sign matched the next return.

    Steps with a flat position or a zero return are left out of the hit
    rate; with none left the hit rate is NaN.
    """
    pos, ret = np.asarray(trace.position), np.asarray(trace.ret_fwd)
    turnover = float(np.sum(np.abs(trace.trade)))
    active = (pos != 0) & (ret != 0)
    if not active.any():
        return turnover, float("nan")
    return turnover, float(np.mean(pos[active] * ret[active] > 0))


def cost_normalized_profit(trace) -> float:
    """``sum(pnl) / sum(cost)``; NaN when nothing was paid."""
    total_cost = float(np.sum(trace.cost))
    if not total_cost > 0:
        return float("nan")
    return float(np.sum(trace.pnl)) / total_cost


@dataclass(frozen=True)
class EvalReport:
    split: str
    sharpe: float
    mean_bps: float
    std_bps: float
    max_drawdown: float
    turnover: float
    hit_rate: float
    cost_normalized_profit: float
    steps: int
    policy: str = "policy"

    def as_row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in EVAL_COLUMNS}


class _Joined:
    """Concatenation of several traces exposing the same columns."""

    def __init__(self, traces):
        for col in ("position", "trade", "cost", "pnl", "reward", "ret_fwd"):
            setattr(self, col, np.concatenate([np.asarray(getattr(t, col)) for t in traces]))


def evaluate_traces(traces: Sequence, split: str, policy: str = "policy") -> EvalReport:
    """Metrics over all episodes of a split, steps concatenated in episode order."""
    if not traces:
        raise ValueError("no traces to evaluate")
    j = _Joined(traces)
    steps = j.reward.size
    if steps == 0:
        raise ValueError("traces contain no steps")
    turnover, hit = turnover_and_hit_rate(j)
    return EvalReport(
        split=split,
        sharpe=sharpe(j.reward) if steps > 1 else 0.0,
        mean_bps=float(j.reward.mean()),
        std_bps=float(j.reward.std(ddof=1)) if steps > 1 else 0.0,
        max_drawdown=max_drawdown(j.reward),
        turnover=turnover,
        hit_rate=hit,
        cost_normalized_profit=cost_normalized_profit(j),
        steps=steps,
        policy=policy,
    )


def reports_frame(reports: Sequence[EvalReport]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in reports], columns=EVAL_COLUMNS)
