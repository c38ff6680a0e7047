"""Leak-free episodic hedging environment.

At step ``k`` of an episode starting at split row ``s`` the decision row is
``t = s + W - 1 + k``. The observation holds normalized feature rows
``t-W+1 .. t`` plus the position carried into the step, and the step pays
``a_t * ret_fwd[t]``, i.e. the move from ``t`` to ``t+1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Protocol, Sequence

import numpy as np
import pandas as pd

from ..data.normalize import NormStats, apply_norm
from ..data.panel import FeaturePanel
from ..errors import EpisodeRangeError, ProtocolError
from .config import EnvConfig

TRACE_COLUMNS = ["episode", "t", "date", "action", "trade", "cost", "pnl", "reward_bps", "executed", "ret_fwd"]


def episode_starts(n_rows: int, cfg: EnvConfig) -> np.ndarray:
    """Start rows of the stride-enumerated episodes, ``floor((T-L)/stride) + 1`` of them.

    A split shorter than one episode yields a single episode spanning the
    whole split, provided it has room for at least one step.
    """
    L = cfg.episode_len
    if n_rows >= L:
        return np.arange((n_rows - L) // cfg.episode_stride + 1, dtype=np.int64) * cfg.episode_stride
    if n_rows > cfg.window:
        return np.zeros(1, dtype=np.int64)
    return np.zeros(0, dtype=np.int64)


def episode_length(n_rows: int, cfg: EnvConfig) -> int:
    return min(cfg.episode_len, n_rows)


@dataclass(frozen=True)
class PanelView:
    """Read-only arrays of one split shared by every environment on it."""

    z: np.ndarray  # normalized features (T, F)
    ret: np.ndarray  # ret_fwd with non-finite values zeroed
    raw: dict
    dates: pd.DatetimeIndex

    @classmethod
    def build(cls, split: FeaturePanel, norm: NormStats) -> "PanelView":
        ret = split.ret_fwd
        raw = {c: split.column(c) for c in split.frame.columns}
        return cls(
            z=apply_norm(split, norm),
            ret=np.where(np.isfinite(ret), ret, 0.0),
            raw=raw,
            dates=split.dates,
        )

    def __len__(self) -> int:
        return len(self.ret)


@dataclass(frozen=True)
class Observation:
    """Feature window, carried position and decision row; optionally batched.

    ``window`` is ``(W, F)`` or ``(B, W, F)``. :meth:`past` gives policies
    access to raw panel columns up to the decision row and never beyond it.
    """

    window: np.ndarray
    prev_position: np.ndarray
    row: np.ndarray
    view: PanelView

    def flat(self) -> np.ndarray:
        lead = self.window.shape[:-2]
        w = self.window.reshape(*lead, -1)
        return np.concatenate([w, np.asarray(self.prev_position)[..., None]], axis=-1)

    def past(self, column: str, lookback: int = 0) -> np.ndarray:
        """Raw ``column`` at rows ``row-lookback .. row``; NaN before the split starts."""
        rows = np.asarray(self.row)[..., None] + np.arange(-lookback, 1)
        vals = self.view.raw[column]
        out = vals[np.clip(rows, 0, None)]
        return np.where(rows >= 0, out, np.nan)

    def current(self, column: str) -> np.ndarray:
        return self.past(column, 0)[..., 0]


@dataclass(frozen=True)
class StepOutcome:
    t: int
    row: int
    date: pd.Timestamp
    position: float
    trade: float
    cost: float
    pnl: float
    reward: float
    executed: bool
    ret_fwd: float


class Policy(Protocol):
    def __call__(self, obs: Observation, rng: np.random.Generator | None = None) -> np.ndarray: ...


def step_economics(prev, requested, ret, executed, cfg: EnvConfig):
    """Clip, apply the cadence gate and price the trade. Vectorized over episodes."""
    a_req = np.clip(requested, -cfg.pos_limit, cfg.pos_limit)
    pos = np.where(executed, a_req, prev)
    trade = pos - prev
    cost = (cfg.total_bps * 1e-4 * np.abs(trade)
            + 0.5 * cfg.psi * trade**2
            + cfg.lam * pos * trade)
    pnl = pos * ret - cost
    return pos, trade, cost, pnl, cfg.reward_scale * pnl


class VecHedgingEnv:
    """Runs several equal-length episodes of one split in lockstep."""

    def __init__(self, split: FeaturePanel | PanelView, norm: NormStats | None, cfg: EnvConfig):
        self.view = split if isinstance(split, PanelView) else PanelView.build(split, norm)
        self.cfg = cfg
        self.starts = episode_starts(len(self.view), cfg)
        self.length = episode_length(len(self.view), cfg)
        self.n_steps = self.length - cfg.window
        self._active: np.ndarray | None = None
        self._k = 0
        self._prev: np.ndarray | None = None
        self._done = True

    @property
    def n_episodes(self) -> int:
        return len(self.starts)

    def _observe(self) -> Observation:
        W = self.cfg.window
        first = self.starts[self._active] + self._k
        rows = first[:, None] + np.arange(W)
        return Observation(
            window=self.view.z[rows],
            prev_position=self._prev.copy(),
            row=first + W - 1,
            view=self.view,
        )

    def reset(self, episode_indices: Sequence[int] | None = None) -> Observation:
        idx = np.arange(self.n_episodes) if episode_indices is None else np.asarray(episode_indices, dtype=np.int64)
        if idx.size == 0 or (idx < 0).any() or (idx >= self.n_episodes).any():
            raise EpisodeRangeError(
                f"episode index out of range: split has {self.n_episodes} episode(s) "
                f"of length {self.cfg.episode_len} with stride {self.cfg.episode_stride}"
            )
        self._active = idx
        self._k = 0
        self._prev = np.zeros(idx.size)
        self._done = False
        return self._observe()

    def step(self, requested) -> tuple[Observation, dict, bool]:
        if self._done:
            raise ProtocolError("step() called on a finished episode; call reset() first")
        req = np.broadcast_to(np.asarray(requested, dtype=float), self._prev.shape)
        if not np.all(np.isfinite(req)):
            raise ValueError("requested action must be finite")
        rows = self.starts[self._active] + self.cfg.window - 1 + self._k
        executed = self._k % self.cfg.rebalance_every == 0
        ret = self.view.ret[rows]
        pos, trade, cost, pnl, reward = step_economics(
            self._prev, req, ret, np.full(req.shape, executed), self.cfg)
        outcome = {
            "t": self._k, "row": rows, "position": pos, "trade": trade, "cost": cost,
            "pnl": pnl, "reward": reward, "executed": executed, "ret_fwd": ret,
        }
        self._prev = pos
        self._k += 1
        self._done = self._k >= self.n_steps
        obs = self._observe()
        return obs, outcome, self._done


class HedgingEnv:
    """Single-episode interface over :class:`VecHedgingEnv`."""

    def __init__(self, split: FeaturePanel | PanelView, norm: NormStats | None, cfg: EnvConfig):
        self._vec = VecHedgingEnv(split, norm, cfg)
        self.cfg = cfg

    @property
    def n_episodes(self) -> int:
        return self._vec.n_episodes

    @property
    def n_steps(self) -> int:
        return self._vec.n_steps

    @staticmethod
    def _squeeze(obs: Observation) -> Observation:
        return Observation(obs.window[0], obs.prev_position[0], obs.row[0], obs.view)

    def reset(self, episode_index: int = 0) -> Observation:
        return self._squeeze(self._vec.reset([episode_index]))

    def step(self, action: float) -> tuple[Observation, StepOutcome, bool]:
        obs, o, done = self._vec.step(np.array([float(action)]))
        row = int(o["row"][0])
        out = StepOutcome(
            t=o["t"], row=row, date=self._vec.view.dates[row],
            position=float(o["position"][0]), trade=float(o["trade"][0]),
            cost=float(o["cost"][0]), pnl=float(o["pnl"][0]), reward=float(o["reward"][0]),
            executed=bool(o["executed"]), ret_fwd=float(o["ret_fwd"][0]),
        )
        return self._squeeze(obs), out, done


@dataclass
class EpisodeTrace:
    """Column-oriented record of one episode."""

    episode: int
    t: np.ndarray
    row: np.ndarray
    date: pd.DatetimeIndex
    position: np.ndarray
    trade: np.ndarray
    cost: np.ndarray
    pnl: np.ndarray
    reward: np.ndarray
    executed: np.ndarray
    ret_fwd: np.ndarray
    terminal: bool = True

    def __len__(self) -> int:
        return len(self.t)

    def outcomes(self) -> Iterator[StepOutcome]:
        for i in range(len(self)):
            yield StepOutcome(
                int(self.t[i]), int(self.row[i]), self.date[i], float(self.position[i]),
                float(self.trade[i]), float(self.cost[i]), float(self.pnl[i]),
                float(self.reward[i]), bool(self.executed[i]), float(self.ret_fwd[i]),
            )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "episode": self.episode, "t": self.t, "date": self.date.strftime("%Y-%m-%d"),
            "action": self.position, "trade": self.trade, "cost": self.cost,
            "pnl": self.pnl, "reward_bps": self.reward, "executed": self.executed,
            "ret_fwd": self.ret_fwd,
        }, columns=TRACE_COLUMNS)


def traces_to_csv_text(traces: Sequence[EpisodeTrace]) -> str:
    frame = pd.concat([tr.to_frame() for tr in traces], ignore_index=True)
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def rollout(
    policy: Policy,
    split: FeaturePanel | PanelView,
    norm: NormStats | None,
    cfg: EnvConfig,
    deterministic: bool = True,
    seed: int = 0,
    episodes: Sequence[int] | None = None,
) -> list[EpisodeTrace]:
    """Run ``policy`` over every episode of the split (or ``episodes``), in order.

    Deterministic mode calls the policy with ``rng=None``; stochastic mode
    passes one generator seeded with ``seed``.
    """
    env = VecHedgingEnv(split, norm, cfg)
    rng = None if deterministic else np.random.default_rng(seed)
    obs = env.reset(episodes)
    cols: dict[str, list] = {k: [] for k in ("t", "row", "position", "trade", "cost", "pnl", "reward", "executed", "ret_fwd")}
    done = False
    while not done:
        action = np.asarray(policy(obs, rng), dtype=float)
        obs, o, done = env.step(action)
        for k in cols:
            v = o[k]
            cols[k].append(np.broadcast_to(v, env._prev.shape))
    stacked = {k: np.stack(v, axis=1) for k, v in cols.items()}
    out = []
    for j, ep in enumerate(env._active):
        rows = stacked["row"][j]
        out.append(EpisodeTrace(
            episode=int(ep), t=stacked["t"][j].astype(np.int64), row=rows,
            date=env.view.dates[rows], position=stacked["position"][j],
            trade=stacked["trade"][j], cost=stacked["cost"][j], pnl=stacked["pnl"][j],
            reward=stacked["reward"][j], executed=stacked["executed"][j].astype(bool),
            ret_fwd=stacked["ret_fwd"][j],
        ))
    return out


def replay_split(
    policy: Policy,
    split: FeaturePanel | PanelView,
    norm: NormStats | None,
    cfg: EnvConfig,
    deterministic: bool = True,
    seed: int = 0,
) -> EpisodeTrace:
    """One continuous episode over the whole split, one step per decision date.

    Overlapping training episodes repeat dates; date-indexed analytics
    (blends, regime tables, bootstrap intervals) use this replay instead.
    """
    n = len(split)
    if n <= cfg.window:
        raise EpisodeRangeError(f"split of {n} rows is too short for window {cfg.window}")
    return rollout(policy, split, norm, cfg.replace(episode_len=n), deterministic, seed)[0]


def constant_policy(value: float) -> Callable:
    def policy(obs: Observation, rng=None):
        return np.full(np.shape(obs.prev_position), float(value))
    return policy
