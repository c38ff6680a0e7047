"""Tanh-squashed Gaussian on ``(-a_max, a_max)``."""
from __future__ import annotations

import numpy as np

_LOG_2PI = np.log(2.0 * np.pi)


def normal_log_pdf(z, mu, log_std):
    s = np.exp(log_std)
    return -0.5 * ((z - mu) / s) ** 2 - log_std - 0.5 * _LOG_2PI


def log_one_minus_tanh_sq(z):
    """``log(1 - tanh(z)^2)`` without cancellation for large ``|z|``."""
    z = np.abs(z)
    return 2.0 * (np.log(2.0) - z - np.logaddexp(0.0, -2.0 * z))


def squashed_log_prob(z, mu, log_std, a_max):
    """Log density of ``a_max * tanh(z)`` evaluated at the pre-squash value ``z``."""
    return normal_log_pdf(z, mu, log_std) - log_one_minus_tanh_sq(z) - np.log(a_max)


def action_log_prob(action, mu, log_std, a_max):
    """Log density at an action; ``-inf`` on the boundary, where the density vanishes."""
    u = np.asarray(action, dtype=float) / a_max
    inside = np.abs(u) < 1.0
    z = np.arctanh(np.where(inside, u, 0.0))
    return np.where(inside, squashed_log_prob(z, mu, log_std, a_max), -np.inf)


def sample_action(mu, log_std, a_max, eps):
    """Reparameterized draw: ``z = mu + sigma * eps``, action ``a_max * tanh(z)``.

    Returns ``(action, log_prob, z)``.
    """
    z = mu + np.exp(log_std) * eps
    return a_max * np.tanh(z), squashed_log_prob(z, mu, log_std, a_max), z


def deterministic_action(mu, a_max):
    return a_max * np.tanh(mu)


def normal_entropy(log_std):
    return 0.5 + 0.5 * _LOG_2PI + log_std
