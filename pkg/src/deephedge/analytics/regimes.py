"""Sharpe attribution by VIX tercile or by named calendar period."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from .metrics import sharpe

TERCILE_LABELS = ("low", "mid", "high")

# (label, first day, last day)
PAPER_PERIODS = (
    ("GFC 08-09", "2008-01-01", "2009-12-31"),
    ("Eurozone 10-12", "2010-01-01", "2012-12-31"),
    ("Calm 17-19", "2017-01-01", "2019-12-31"),
    ("COVID 20-21", "2020-01-01", "2021-12-31"),
    ("Post COVID 22-23", "2022-01-01", "2023-12-31"),
)


def vix_terciles(vix: pd.Series) -> pd.Series:
    """Label each date low/mid/high by the 1/3 and 2/3 quantiles of the given VIX values.

    Boundaries come only from ``vix`` itself, so pass the evaluated split.
    Dates with missing VIX get no bucket.
    """
    v = pd.Series(vix, dtype=float)
    present = v.dropna()
    if present.empty:
        raise ValueError("no VIX observations")
    q1, q2 = np.quantile(present.to_numpy(), [1 / 3, 2 / 3])
    labels = np.where(v <= q1, "low", np.where(v <= q2, "mid", "high"))
    out = pd.Series(labels, index=v.index, dtype=object)
    out[v.isna()] = None
    return out


def period_buckets(dates, periods=PAPER_PERIODS, split_labels: pd.Series | None = None) -> pd.Series:
    """Named-period label per date (None outside all periods).

    With ``split_labels`` the label becomes ``"<period> | <split>"`` so a
    period straddling a split boundary yields one bucket per split.
    """
    idx = pd.DatetimeIndex(dates)
    out = pd.Series([None] * len(idx), index=idx, dtype=object)
    for name, start, end in periods:
        inside = (idx >= pd.Timestamp(start)) & (idx <= pd.Timestamp(end))
        out[inside] = name
    if split_labels is not None:
        sl = pd.Series(split_labels).reindex(idx)
        keep = out.notna()
        out[keep] = out[keep] + " | " + sl[keep].astype(str)
    return out


@dataclass(frozen=True)
class RegimeTable:
    frame: pd.DataFrame

    def to_csv_text(self) -> str:
        return self.frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def regime_attribution(
    rewards: Mapping[str, pd.Series],
    buckets: pd.Series,
    benchmark: str | None = None,
    order: Sequence[str] | None = None,
) -> RegimeTable:
    """Per-bucket Sharpe for each policy.

    ``rewards`` maps policy name to per-step rewards indexed by date (dates
    may repeat across overlapping episodes). ``buckets`` maps each date to a
    label. Buckets with fewer than two steps report NaN. With a benchmark,
    ``delta_<policy>`` columns hold ``policy - benchmark``.
    """
    if benchmark is not None and benchmark not in rewards:
        raise KeyError(f"benchmark '{benchmark}' not among policies {list(rewards)}")
    labels = pd.Series(buckets)
    if order is None:
        seen = []
        for lab in labels:
            if lab is not None and lab == lab and lab not in seen:
                seen.append(lab)
        order = seen
    rows = []
    for lab in order:
        row = {"bucket": lab}
        for name, series in rewards.items():
            s = pd.Series(series)
            step_labels = labels.reindex(pd.DatetimeIndex(s.index)).to_numpy()
            vals = s.to_numpy()[step_labels == lab]
            row[name] = sharpe(vals) if vals.size >= 2 else float("nan")
            row.setdefault("steps", int(vals.size))
        rows.append(row)
    frame = pd.DataFrame(rows, columns=["bucket", "steps", *rewards])
    if benchmark is not None:
        for name in rewards:
            frame[f"delta_{name}"] = frame[name] - frame[benchmark]
    if frame["bucket"].astype(str).str.contains(r" \| ").any():
        parts = frame["bucket"].astype(str).str.split(" | ", n=1, regex=False)
        frame.insert(1, "split", parts.str[1])
        frame["bucket"] = parts.str[0]
    return RegimeTable(frame)
