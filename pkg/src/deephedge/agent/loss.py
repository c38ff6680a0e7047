"""Entropy-regularized actor-critic loss with analytic gradients."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError
from .distribution import normal_entropy, squashed_log_prob
from .network import PolicyParams, backward, clip_by_global_norm, forward_cached, global_norm


@dataclass
class Batch:
    obs: np.ndarray  # (N, D)
    z: np.ndarray  # pre-squash samples, (N,)
    advantages: np.ndarray  # already normalized
    returns: np.ndarray
    a_max: float
    actor_mask: np.ndarray | None = None  # steps whose action reached the market

    def __len__(self) -> int:
        return len(self.z)


@dataclass
class LossInfo:
    total: float
    actor: float
    critic: float
    entropy: float
    grad_norm: float
    clipped: bool


def loss_and_grads(
    params: PolicyParams,
    batch: Batch,
    entropy_coef: float = 0.01,
    value_coef: float = 0.5,
    grad_clip: float | None = 1.0,
) -> tuple[LossInfo, PolicyParams]:
    """``actor + value_coef * critic`` and its gradient.

    actor  = -mean(log_prob * A) - entropy_coef * H(pre-squash Normal)
    critic = mean((V - return)^2)

    Actor means run over ``actor_mask`` steps only. The tanh correction in
    the log-density depends on the stored sample alone, so it contributes no
    parameter gradient. Gradients are clipped to global norm ``grad_clip``.
    """
    n = len(batch)
    mask = np.ones(n, dtype=bool) if batch.actor_mask is None else np.asarray(batch.actor_mask, dtype=bool)
    n_actor = int(mask.sum())
    mu, value, acts = forward_cached(params, batch.obs)
    log_std = params.log_std
    var = np.exp(2.0 * log_std)
    z, adv = batch.z, batch.advantages

    logp = squashed_log_prob(z, mu, log_std, batch.a_max)
    entropy = float(normal_entropy(log_std))
    if n_actor:
        w = mask / n_actor
        actor = -float(np.sum(w * logp * adv)) - entropy_coef * entropy
        d_mu = -w * adv * (z - mu) / var
        d_log_std = -float(np.sum(w * adv * ((z - mu) ** 2 / var - 1.0))) - entropy_coef
    else:
        actor = 0.0
        d_mu = np.zeros(n)
        d_log_std = 0.0
    err = value - batch.returns
    critic = float(np.mean(err * err))
    total = actor + value_coef * critic
    if not np.isfinite(total):
        raise TrainingError(
            f"non-finite loss (actor={actor}, critic={critic}, log_std={log_std}); update aborted"
        )
    d_value = value_coef * 2.0 * err / n
    grads = backward(params, acts, d_mu, d_value, d_log_std)
    if grad_clip is None:
        norm, clipped = global_norm(grads), False
    else:
        grads, norm = clip_by_global_norm(grads, grad_clip)
        clipped = norm > grad_clip
    return LossInfo(total, actor, critic, entropy, norm, clipped), grads
