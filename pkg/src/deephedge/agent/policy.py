from __future__ import annotations

import numpy as np

from .distribution import deterministic_action, sample_action
from .network import PolicyParams, forward


class GaussianPolicy:
    """Environment policy backed by network parameters.

    With ``rng=None`` it returns ``a_max * tanh(mu)``; otherwise a squashed
    Gaussian draw.
    """

    def __init__(self, params: PolicyParams, a_max: float):
        self.params = params
        self.a_max = float(a_max)

    def __call__(self, obs, rng: np.random.Generator | None = None) -> np.ndarray:
        mu, log_std, _ = forward(self.params, obs.flat())
        if rng is None:
            return deterministic_action(mu, self.a_max)
        eps = rng.standard_normal(np.shape(mu))
        action, _, _ = sample_action(mu, log_std, self.a_max, eps)
        return action
