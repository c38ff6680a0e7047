"""Two-regime synthetic market used in place of a vendor option panel.

The generator draws a calm/stress Markov chain, a persistent AR(1) signal
that is published through the IV term-structure slope, and daily log-returns
whose next-day mean loads on that signal with a correlation proportional to
``signal_strength``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import pandas as pd

from ..errors import ConfigError
from .panel import INPUT_COLUMNS, TRADING_DAYS, FeaturePanel, PanelSpec, build_panel

# correlation between the signal and the next-day shock at signal_strength = 1
MAX_SIGNAL_CORR = 0.4


@dataclass(frozen=True)
class SynthConfig:
    n_days: int = 4000
    seed: int = 0
    transition: tuple[tuple[float, float], tuple[float, float]] = ((0.99, 0.01), (0.03, 0.97))
    drift: tuple[float, float] = (0.10, -0.10)
    vol: tuple[float, float] = (0.12, 0.35)
    signal_strength: float = 0.5
    signal_persistence: float = 0.95
    rate_mean: float = 0.03
    rate_reversion: float = 0.5
    rate_vol: float = 0.008
    rate_start: float = 0.03
    missing_rate: float = 0.02
    end_date: str = "2023-12-29"
    start_price: float = 100.0

    def __post_init__(self):
        p = np.asarray(self.transition, dtype=float)
        if p.shape != (2, 2) or (p < 0).any() or not np.allclose(p.sum(axis=1), 1.0, atol=1e-12):
            raise ConfigError("transition must be a 2x2 row-stochastic matrix")
        if min(self.vol) <= 0:
            raise ConfigError("regime vols must be positive")
        if self.n_days < 300:
            raise ConfigError(f"n_days must be >= 300, got {self.n_days}")
        if not 0 <= self.signal_strength <= 1:
            raise ConfigError("signal_strength must lie in [0, 1]")
        if not 0 <= self.signal_persistence < 1:
            raise ConfigError("signal_persistence must lie in [0, 1)")
        if not 0 <= self.missing_rate < 1:
            raise ConfigError("missing_rate must lie in [0, 1)")
        if self.rate_vol < 0 or self.rate_reversion < 0:
            raise ConfigError("rate parameters must be non-negative")

    @classmethod
    def from_dict(cls, d: Mapping) -> "SynthConfig":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown SynthConfig keys: {sorted(unknown)}")
        if "transition" in d:
            d["transition"] = tuple(tuple(float(x) for x in row) for row in d["transition"])
        for k in ("drift", "vol"):
            if k in d:
                d[k] = tuple(float(x) for x in d[k])
        return cls(**d)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["transition"] = [list(r) for r in self.transition]
        d["drift"] = list(self.drift)
        d["vol"] = list(self.vol)
        return d


@dataclass
class SyntheticMarket:
    raw: pd.DataFrame  # input CSV columns, DatetimeIndex
    regime: np.ndarray  # 0 calm, 1 stress
    signal: np.ndarray  # AR(1) driver, unit variance
    log_return: np.ndarray  # log return from row t-1 to t (0 at row 0)


def simulate_market(cfg: SynthConfig) -> SyntheticMarket:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_days
    P = np.asarray(cfg.transition, dtype=float)
    drift = np.asarray(cfg.drift, dtype=float)
    vol = np.asarray(cfg.vol, dtype=float)

    u = rng.random(n)
    regime = np.zeros(n, dtype=np.int64)
    for t in range(1, n):
        regime[t] = int(u[t] >= P[regime[t - 1], 0])

    phi = cfg.signal_persistence
    eta = rng.standard_normal(n)
    signal = np.empty(n)
    signal[0] = eta[0]
    for t in range(1, n):
        signal[t] = phi * signal[t - 1] + np.sqrt(1 - phi**2) * eta[t]

    # the move into day t loads on the signal published on day t-1 and takes
    # its drift and vol from the regime of day t-1
    rho = MAX_SIGNAL_CORR * cfg.signal_strength
    eps = rng.standard_normal(n)
    sig_d = vol[regime] / np.sqrt(TRADING_DAYS)
    mu_d = drift[regime] / TRADING_DAYS - 0.5 * sig_d**2
    logret = np.zeros(n)
    logret[1:] = mu_d[:-1] + sig_d[:-1] * (rho * signal[:-1] + np.sqrt(1 - rho**2) * eps[1:])
    spy = cfg.start_price * np.exp(np.cumsum(logret))

    noise = rng.standard_normal((n, 5))
    stress = regime == 1
    iv_30 = vol[regime] * (1 + 0.05 * noise[:, 0])
    term_premium = np.where(stress, -0.005, 0.005)
    iv_91 = iv_30 + term_premium + 0.01 * signal
    skew = np.where(stress, 0.08, 0.04) + 0.005 * noise[:, 1]
    iv_put = iv_30 + 0.5 * skew
    iv_call = iv_30 - 0.5 * skew
    vix = vol[regime] * 100 + 1.5 * noise[:, 2]

    dt = 1.0 / TRADING_DAYS
    y10 = np.empty(n)
    y10[0] = cfg.rate_start
    for t in range(1, n):
        y10[t] = (y10[t - 1] + cfg.rate_reversion * (cfg.rate_mean - y10[t - 1]) * dt
                  + cfg.rate_vol * np.sqrt(dt) * noise[t, 3])

    dates = pd.bdate_range(end=pd.Timestamp(cfg.end_date), periods=n, name="date")
    raw = pd.DataFrame(
        {
            "iv_30d": iv_30, "iv_91d": iv_91, "iv_25d_put": iv_put, "iv_25d_call": iv_call,
            "vix": vix, "y10": y10, "spy_close": spy,
        },
        index=dates,
    )[INPUT_COLUMNS]
    if cfg.missing_rate > 0:
        drop = rng.random((n, 4)) < cfg.missing_rate
        iv = raw[["iv_30d", "iv_91d", "iv_25d_put", "iv_25d_call"]].to_numpy()
        iv[drop] = np.nan
        raw[["iv_30d", "iv_91d", "iv_25d_put", "iv_25d_call"]] = iv
    return SyntheticMarket(raw=raw, regime=regime, signal=signal, log_return=logret)


def generate_synthetic(cfg: SynthConfig, spec: PanelSpec | None = None) -> FeaturePanel:
    """Simulate a market and run it through :func:`build_panel`."""
    return build_panel(simulate_market(cfg).raw, spec)
