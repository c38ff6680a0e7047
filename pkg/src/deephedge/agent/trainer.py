"""On-policy actor-critic training with GAE and best-validation checkpointing."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

import numpy as np

from ..analytics.metrics import sharpe
from ..data.normalize import NormStats
from ..data.panel import PanelSplits
from ..env.config import EnvConfig
from ..env.core import PanelView, VecHedgingEnv, rollout, step_economics
from ..errors import CheckpointError, ConfigError
from .checkpoint import Checkpoint, feature_fingerprint
from .gae import compute_gae, normalize_advantages
from .loss import Batch, loss_and_grads
from .network import init_params
from .optim import AdamState, adam_update, cosine_lr
from .policy import GaussianPolicy

log = logging.getLogger(__name__)

LOG_COLUMNS = [
    "update", "episode", "lr", "loss", "actor_loss", "critic_loss", "entropy",
    "log_std", "grad_norm", "episode_reward_bps",
]
EVAL_LOG_COLUMNS = ["update", "train_sharpe", "valid_sharpe", "best"]


@dataclass(frozen=True)
class TrainConfig:
    gamma: float = 0.99
    gae_lambda: float = 0.95
    entropy_coef: float = 0.01
    value_coef: float = 0.5
    value_scale: float = 1000.0  # critic regresses returns / value_scale
    grad_clip: float = 1.0
    lr0: float = 3e-4
    lr_min: float = 1e-5
    updates_total: int = 1000
    eval_every: int = 50
    seed: int = 0
    hidden: tuple[int, ...] = (256, 256)
    log_std_init: float = -0.5
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0, 1]")
        if not 0 <= self.gae_lambda <= 1:
            raise ConfigError("gae_lambda must lie in [0, 1]")
        if not self.value_scale > 0:
            raise ConfigError("value_scale must be positive")
        if not self.grad_clip > 0:
            raise ConfigError("grad_clip must be positive")
        if self.eval_every < 1 or self.updates_total < self.eval_every:
            raise ConfigError("need eval_every >= 1 and updates_total >= eval_every")
        if not self.hidden or min(self.hidden) < 1:
            raise ConfigError("hidden widths must be positive")

    @classmethod
    def from_dict(cls, d: Mapping) -> "TrainConfig":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown TrainConfig keys: {sorted(unknown)}")
        for k in ("hidden", "adam_betas"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hidden"] = list(self.hidden)
        d["adam_betas"] = list(self.adam_betas)
        return d

    def replace(self, **kw) -> "TrainConfig":
        return TrainConfig.from_dict({**self.to_dict(), **kw})


@dataclass
class TrainResult:
    best: Checkpoint
    last: Checkpoint
    log: list = field(default_factory=list)
    evals: list = field(default_factory=list)


def episode_for_update(update: int, n_episodes: int, seed: int) -> int:
    """Episode sampled at 1-based ``update``: a fresh seeded permutation per pass."""
    epoch, pos = divmod(update - 1, n_episodes)
    perm = np.random.default_rng([seed, 2, epoch]).permutation(n_episodes)
    return int(perm[pos])


def collect_episode(params, view: PanelView, env_cfg: EnvConfig, episode: int, rng: np.random.Generator):
    """Stochastic rollout of one episode, keeping what the update needs.

    Feature windows do not depend on actions, so the first layer is applied
    to all of them at once; only the carried-position input is added per
    step. Produces the same transitions as stepping :class:`VecHedgingEnv`
    with :class:`GaussianPolicy`, up to float summation order.
    """
    env = VecHedgingEnv(view, None, env_cfg)
    if not 0 <= episode < env.n_episodes:
        raise ValueError(f"episode {episode} out of range")
    n, W, a_max = env.n_steps, env_cfg.window, env_cfg.pos_limit
    first = env.starts[episode] + np.arange(n)
    windows = view.z[first[:, None] + np.arange(W)].reshape(n, -1)
    ret = view.ret[first + W - 1]
    w0 = params["trunk.0.w"]
    pre0 = windows @ w0[:-1] + params["trunk.0.b"]
    w_prev = w0[-1]
    deeper = [(params[f"trunk.{i}.w"], params[f"trunk.{i}.b"]) for i in range(1, params.n_layers)]
    w_mu, b_mu = params["mean.w"], float(params["mean.b"])
    w_v, b_v = params["value.w"], float(params["value.b"])
    sigma = float(np.exp(params.log_std))
    eps = rng.standard_normal(n)

    prevs, zs, vals, rews = np.zeros(n), np.zeros(n), np.zeros(n), np.zeros(n)
    executed = np.arange(n) % env_cfg.rebalance_every == 0
    prev = 0.0
    for k in range(n):
        h = np.tanh(pre0[k] + prev * w_prev)
        for w, b in deeper:
            h = np.tanh(h @ w + b)
        mu = float(h @ w_mu) + b_mu
        z = mu + sigma * eps[k]
        pos, _, _, _, reward = step_economics(prev, a_max * np.tanh(z), ret[k], executed[k], env_cfg)
        prevs[k], zs[k], vals[k], rews[k] = prev, z, float(h @ w_v) + b_v, float(reward)
        prev = float(pos)
    X = np.concatenate([windows, prevs[:, None]], axis=1)
    return X, zs, vals, rews, executed


def evaluate_sharpe(params, view: PanelView, env_cfg: EnvConfig) -> float:
    traces = rollout(GaussianPolicy(params, env_cfg.pos_limit), view, None, env_cfg, deterministic=True)
    return sharpe(np.concatenate([t.reward for t in traces]))


def train(
    splits: PanelSplits,
    norm: NormStats,
    env_cfg: EnvConfig,
    cfg: TrainConfig,
    resume: tuple[Checkpoint, Checkpoint] | None = None,
    on_update: Callable[[dict], None] | None = None,
    on_eval: Callable[[dict], None] | None = None,
    stop_after: int | None = None,
) -> TrainResult:
    """Train from scratch or continue from ``resume = (last, best)``.

    ``stop_after`` ends the run early at that update while keeping the
    learning-rate schedule of the full run, so that a later resume is
    equivalent to never having stopped.

    Each update samples one training episode, rolls it out stochastically,
    computes GAE targets and takes one Adam step. Every ``eval_every``
    updates the mean-action policy is replayed on the train and validation
    splits; the parameters with the highest validation Sharpe are kept.
    """
    if len(splits.train) == 0:
        raise ConfigError("train split is empty")
    train_view = PanelView.build(splits.train, norm)
    valid_view = PanelView.build(splits.valid, norm)
    n_eps = VecHedgingEnv(train_view, None, env_cfg).n_episodes
    if n_eps == 0:
        raise ConfigError("train split is too short for a single episode")
    input_dim = env_cfg.window * len(norm.columns) + 1
    feat_fp = feature_fingerprint(norm.fingerprint(), env_cfg.window)
    env_fp = env_cfg.fingerprint()

    def snapshot(params, update, vs, ts, opt=None, extra=None) -> Checkpoint:
        return Checkpoint(
            params=params.copy(), update=update, valid_sharpe=vs, train_sharpe=ts,
            seed=cfg.seed, env_config=env_cfg.to_dict(), train_config=cfg.to_dict(),
            feature_fingerprint=feat_fp, env_fingerprint=env_fp, optimizer=opt,
            extra=dict(extra or {}),
        )

    if resume is None:
        params = init_params(input_dim, cfg.hidden, np.random.default_rng([cfg.seed, 0]), cfg.log_std_init)
        opt = AdamState.zeros(params)
        start = 0
        best: Checkpoint | None = None
    else:
        last, best = resume
        if last.optimizer is None:
            raise CheckpointError("resume checkpoint carries no optimizer state")
        if last.train_config != cfg.to_dict() or last.env_fingerprint != env_fp:
            raise CheckpointError("resume checkpoint was produced under a different configuration")
        last.check_compatible(feat_fp, input_dim)
        params, opt, start = last.params.copy(), last.optimizer, last.update
        if best is not None and best.update > start:
            raise CheckpointError("best checkpoint is newer than the resume point")

    end = cfg.updates_total if stop_after is None else min(stop_after, cfg.updates_total)
    log_rows, eval_rows = [], []
    for u in range(start + 1, end + 1):
        ep = episode_for_update(u, n_eps, cfg.seed)
        rng = np.random.default_rng([cfg.seed, 1, u])
        X, Z, V, R, executed = collect_episode(params, train_view, env_cfg, ep, rng)
        adv, ret = compute_gae(R, np.append(V * cfg.value_scale, 0.0), cfg.gamma, cfg.gae_lambda)
        adv = normalize_advantages(adv, executed)
        batch = Batch(X, Z, adv, ret / cfg.value_scale, env_cfg.pos_limit, executed)
        info, grads = loss_and_grads(params, batch, cfg.entropy_coef, cfg.value_coef, cfg.grad_clip)
        lr = cosine_lr(u - 1, cfg.updates_total, cfg.lr0, cfg.lr_min)
        params, opt = adam_update(params, grads, opt, lr, cfg.adam_betas, cfg.adam_eps)
        row = {
            "update": u, "episode": ep, "lr": lr, "loss": info.total, "actor_loss": info.actor,
            "critic_loss": info.critic, "entropy": info.entropy, "log_std": params.log_std,
            "grad_norm": info.grad_norm, "episode_reward_bps": float(R.sum()),
        }
        log_rows.append(row)
        if on_update:
            on_update(row)

        if u % cfg.eval_every == 0:
            ts = evaluate_sharpe(params, train_view, env_cfg)
            vs = evaluate_sharpe(params, valid_view, env_cfg)
            is_best = best is None or vs > best.valid_sharpe
            if is_best:
                best = snapshot(params, u, vs, ts)
            erow = {"update": u, "train_sharpe": ts, "valid_sharpe": vs, "best": bool(is_best)}
            eval_rows.append(erow)
            if on_eval:
                on_eval(erow)
            log.info("update %d: train Sharpe %.3f, valid Sharpe %.3f%s", u, ts, vs, " (best)" if is_best else "")

    final_update = max(start, end)
    last = snapshot(
        params, final_update, None, None, opt,
        extra={"best_update": best.update if best else None,
               "best_valid_sharpe": best.valid_sharpe if best else None},
    )
    return TrainResult(best=best, last=last, log=log_rows, evals=eval_rows)
