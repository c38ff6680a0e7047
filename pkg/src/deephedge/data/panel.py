"""Daily feature panel: construction, CSV interchange and date splits."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
import pandas as pd

from ..errors import ConfigError, InsufficientDataError, SchemaError, SplitError
from .quotes import QuoteRecord, forward_fill_guarded, select_quote

TRADING_DAYS = 252

INPUT_COLUMNS = ["iv_30d", "iv_91d", "iv_25d_put", "iv_25d_call", "vix", "y10", "spy_close"]
DERIVED_COLUMNS = ["ts_slope", "skew", "rv_21d", "hvol_30d", "hvol_91d", "ret_fwd"]
PANEL_COLUMNS = INPUT_COLUMNS + DERIVED_COLUMNS
IV_COLUMNS = ["iv_30d", "iv_91d", "iv_25d_put", "iv_25d_call"]
# observation features, in column order; ret_fwd and the raw price level never enter
FEATURE_COLUMNS = [
    "iv_30d", "iv_91d", "ts_slope", "iv_25d_put", "iv_25d_call", "skew",
    "vix", "y10", "rv_21d", "hvol_30d", "hvol_91d",
]


@dataclass(frozen=True)
class PanelSpec:
    """Fill and quote-selection parameters for :func:`build_panel`."""

    max_stale_days: int = 3
    min_rows: int = 300
    iv_max: float = 5.0
    tenor_tol: float = 7.0
    delta_tol: float = 0.05
    atm_delta: float = 0.5
    wing_delta: float = 0.25
    short_tenor: int = 30
    long_tenor: int = 91

    @classmethod
    def from_dict(cls, d: Mapping) -> "PanelSpec":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown PanelSpec keys: {sorted(unknown)}")
        return cls(**dict(d))

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class FeaturePanel:
    """Date-indexed panel rows plus the guarded-fill mask for the IV columns."""

    frame: pd.DataFrame
    filled: pd.DataFrame = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.filled is None:
            mask = pd.DataFrame(False, index=self.frame.index, columns=IV_COLUMNS)
            object.__setattr__(self, "filled", mask)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def dates(self) -> pd.DatetimeIndex:
        return pd.DatetimeIndex(self.frame.index)

    def features(self) -> np.ndarray:
        """Raw feature matrix of shape (rows, len(FEATURE_COLUMNS)); NaN where missing."""
        return self.frame[FEATURE_COLUMNS].to_numpy(dtype=float)

    @property
    def ret_fwd(self) -> np.ndarray:
        return self.frame["ret_fwd"].to_numpy(dtype=float)

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy(dtype=float)

    def select(self, mask: np.ndarray) -> "FeaturePanel":
        return FeaturePanel(self.frame.loc[mask].copy(), self.filled.loc[mask].copy())


def compute_forward_return(prices: pd.Series) -> pd.Series:
    """Next-day simple return aligned to the current row; the last row is NaN."""
    p = pd.Series(prices, dtype=float)
    if not np.all(np.isfinite(p.to_numpy())) or (p <= 0).any():
        bad = p.index[~(np.isfinite(p.to_numpy()) & (p.to_numpy() > 0))][0]
        raise SchemaError(f"spy_close must be positive and finite (row {bad})")
    out = p.shift(-1) / p - 1.0
    out.name = "ret_fwd"
    return out


def realized_vol(returns, window: int) -> pd.Series:
    """Trailing sample standard deviation over ``window`` returns, annualized."""
    if window < 2:
        raise ValueError("window must be >= 2")
    r = pd.Series(returns, dtype=float)
    return r.rolling(window, min_periods=window).std(ddof=1) * np.sqrt(TRADING_DAYS)


def _as_dated_frame(raw: pd.DataFrame) -> pd.DataFrame:
    df = raw.copy()
    if "date" in df.columns:
        df["date"] = pd.to_datetime(df["date"])
        df = df.set_index("date")
    elif not isinstance(df.index, pd.DatetimeIndex):
        raise SchemaError("missing required column 'date'")
    df.index = pd.DatetimeIndex(df.index, name="date")
    for col in INPUT_COLUMNS:
        if col not in df.columns:
            raise SchemaError(f"missing required column '{col}'")
    df = df[INPUT_COLUMNS].apply(pd.to_numeric, errors="coerce").astype(float)
    if len(df) > 1:
        steps = np.diff(df.index.asi8)
        if (steps <= 0).any():
            i = int(np.argmax(steps <= 0)) + 1
            raise SchemaError(f"dates must be strictly increasing (row {i}, {df.index[i].date()})")
    return df


def build_panel(raw: pd.DataFrame, spec: PanelSpec | None = None) -> FeaturePanel:
    """Turn per-day inputs (the input CSV columns) into a feature panel.

    IV columns outside ``(0, iv_max]`` and non-positive VIX prints are treated
    as missing, then IVs are forward-filled within ``spec.max_stale_days``.
    """
    spec = spec or PanelSpec()
    df = _as_dated_frame(raw)
    if len(df) < spec.min_rows:
        raise InsufficientDataError(f"need at least {spec.min_rows} rows, got {len(df)}")
    spy = df["spy_close"]
    bad = ~(np.isfinite(spy.to_numpy()) & (spy.to_numpy() > 0))
    if bad.any():
        i = int(np.argmax(bad))
        raise SchemaError(f"column 'spy_close' must be positive at row {i} ({df.index[i].date()})")

    for col in IV_COLUMNS:
        v = df[col]
        df[col] = v.where((v > 0) & (v <= spec.iv_max))
    df["vix"] = df["vix"].where(df["vix"] > 0)

    filled = pd.DataFrame(False, index=df.index, columns=IV_COLUMNS)
    for col in IV_COLUMNS:
        df[col], filled[col] = forward_fill_guarded(df[col], spec.max_stale_days)

    df["ts_slope"] = df["iv_91d"] - df["iv_30d"]
    df["skew"] = df["iv_25d_put"] - df["iv_25d_call"]
    daily = df["spy_close"] / df["spy_close"].shift(1) - 1.0
    df["rv_21d"] = realized_vol(daily, 21)
    df["hvol_30d"] = realized_vol(daily, 30)
    df["hvol_91d"] = realized_vol(daily, 91)
    df["ret_fwd"] = compute_forward_return(df["spy_close"])
    return FeaturePanel(df[PANEL_COLUMNS], filled)


def features_from_quotes(
    chains: Mapping[dt.date, Sequence[QuoteRecord]],
    market: pd.DataFrame,
    spec: PanelSpec | None = None,
) -> pd.DataFrame:
    """Reduce daily option chains to the IV input columns.

    ``market`` supplies ``vix``, ``y10`` and ``spy_close`` per date (indexed or
    with a ``date`` column). The ATM legs use call deltas near ``atm_delta``;
    the 25-delta wings use the short tenor.
    """
    spec = spec or PanelSpec()
    mkt = market.copy()
    if "date" in mkt.columns:
        mkt = mkt.set_index(pd.to_datetime(mkt["date"])).drop(columns="date")
    mkt.index = pd.DatetimeIndex(mkt.index, name="date")

    def pick(quotes, tenor, delta, puts):
        pool = [q for q in quotes if q.is_put == puts]
        q = select_quote(pool, tenor, delta, spec.tenor_tol, spec.delta_tol)
        return np.nan if q is None else q.iv_mid

    rows = []
    for ts in mkt.index:
        quotes = chains.get(ts.date(), ())
        rows.append({
            "iv_30d": pick(quotes, spec.short_tenor, spec.atm_delta, False),
            "iv_91d": pick(quotes, spec.long_tenor, spec.atm_delta, False),
            "iv_25d_put": pick(quotes, spec.short_tenor, -spec.wing_delta, True),
            "iv_25d_call": pick(quotes, spec.short_tenor, spec.wing_delta, False),
        })
    out = pd.DataFrame(rows, index=mkt.index)
    for col in ("vix", "y10", "spy_close"):
        out[col] = mkt[col].astype(float)
    return out[INPUT_COLUMNS]


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    train_end: dt.date
    valid_end: dt.date

    def __post_init__(self):
        te, ve = pd.Timestamp(self.train_end).date(), pd.Timestamp(self.valid_end).date()
        object.__setattr__(self, "train_end", te)
        object.__setattr__(self, "valid_end", ve)
        if not te < ve:
            raise SplitError(f"train_end {te} must precede valid_end {ve}")

    @classmethod
    def from_dict(cls, d: Mapping) -> "SplitSpec":
        return cls(d["train_end"], d["valid_end"])

    def to_dict(self) -> dict:
        return {"train_end": self.train_end.isoformat(), "valid_end": self.valid_end.isoformat()}


PAPER_SPLIT = SplitSpec(dt.date(2017, 12, 31), dt.date(2019, 12, 31))
SPLIT_NAMES = ("train", "valid", "test")


class PanelSplits(NamedTuple):
    train: FeaturePanel
    valid: FeaturePanel
    test: FeaturePanel


def split_labels(dates: Iterable, spec: SplitSpec) -> np.ndarray:
    """Split name for each date; boundaries are inclusive on the earlier side."""
    d = pd.DatetimeIndex(dates)
    te, ve = pd.Timestamp(spec.train_end), pd.Timestamp(spec.valid_end)
    return np.where(d <= te, "train", np.where(d <= ve, "valid", "test"))


def split_panel(panel: FeaturePanel, spec: SplitSpec) -> PanelSplits:
    labels = split_labels(panel.dates, spec)
    parts = {}
    for name in SPLIT_NAMES:
        mask = labels == name
        if not mask.any():
            raise SplitError(f"{name} split is empty under {spec.to_dict()}")
        parts[name] = panel.select(mask)
    return PanelSplits(**parts)


# ---------------------------------------------------------------------------
# CSV interchange
# ---------------------------------------------------------------------------

def read_input_csv(path) -> pd.DataFrame:
    df = pd.read_csv(path, float_precision="round_trip")
    for col in ["date"] + INPUT_COLUMNS:
        if col not in df.columns:
            raise SchemaError(f"{path}: missing required column '{col}'")
    for col in INPUT_COLUMNS:
        vals = pd.to_numeric(df[col], errors="coerce")
        bad = vals.isna() & df[col].notna()
        if bad.any():
            i = int(np.argmax(bad.to_numpy()))
            raise SchemaError(f"{path}: non-numeric value in column '{col}' at row {i}")
        df[col] = vals
    return df[["date"] + INPUT_COLUMNS]


def panel_to_csv_text(panel: FeaturePanel) -> str:
    out = panel.frame[PANEL_COLUMNS].copy()
    out.index = out.index.strftime("%Y-%m-%d")
    return out.to_csv(index_label="date", float_format="%.17g", lineterminator="\n")


def input_to_csv_text(raw: pd.DataFrame) -> str:
    out = _as_dated_frame(raw)
    out.index = out.index.strftime("%Y-%m-%d")
    return out.to_csv(index_label="date", float_format="%.17g", lineterminator="\n")


def read_panel_csv(path) -> FeaturePanel:
    df = pd.read_csv(path, float_precision="round_trip")
    for col in ["date"] + PANEL_COLUMNS:
        if col not in df.columns:
            raise SchemaError(f"{path}: missing panel column '{col}'")
    df = df.set_index(pd.DatetimeIndex(pd.to_datetime(df["date"]), name="date"))
    return FeaturePanel(df[PANEL_COLUMNS].astype(float))
