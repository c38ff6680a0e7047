"""Shared-trunk tanh MLP with mean, scalar log-std and value heads.

Forward and backward passes are written out by hand; activations from the
forward pass are kept in a cache for the backward pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

LOG_STD_MIN, LOG_STD_MAX = -5.0, 2.0


@dataclass(frozen=True)
class PolicyParams:
    """Named parameter arrays, in a fixed order.

    Trunk layer ``i`` is ``trunk.{i}.w`` / ``trunk.{i}.b``; heads are
    ``mean.w``, ``mean.b``, ``value.w``, ``value.b`` and the scalar ``log_std``.
    """

    arrays: dict

    @property
    def n_layers(self) -> int:
        return sum(1 for k in self.arrays if k.startswith("trunk.") and k.endswith(".w"))

    @property
    def input_dim(self) -> int:
        return self.arrays["trunk.0.w"].shape[0]

    @property
    def hidden(self) -> tuple[int, ...]:
        return tuple(self.arrays[f"trunk.{i}.w"].shape[1] for i in range(self.n_layers))

    @property
    def log_std(self) -> float:
        return float(self.arrays["log_std"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.arrays[name]

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        return iter(self.arrays.items())

    def shapes(self) -> dict:
        return {k: list(v.shape) for k, v in self.arrays.items()}

    def map(self, fn) -> "PolicyParams":
        return PolicyParams({k: fn(k, v) for k, v in self.arrays.items()})

    def copy(self) -> "PolicyParams":
        return self.map(lambda k, v: np.array(v, dtype=float, copy=True))

    def equals(self, other: "PolicyParams") -> bool:
        if list(self.arrays) != list(other.arrays):
            return False
        return all(
            a.shape == b.shape and a.tobytes() == b.tobytes()
            for a, b in zip(self.arrays.values(), other.arrays.values())
        )


def param_names(n_layers: int) -> list[str]:
    names = []
    for i in range(n_layers):
        names += [f"trunk.{i}.w", f"trunk.{i}.b"]
    return names + ["mean.w", "mean.b", "log_std", "value.w", "value.b"]


def init_params(
    input_dim: int,
    hidden: Sequence[int] = (256, 256),
    rng: np.random.Generator | None = None,
    log_std_init: float = -0.5,
) -> PolicyParams:
    """Glorot-uniform trunk, near-zero mean head so the initial policy is centred."""
    rng = rng if rng is not None else np.random.default_rng(0)
    arrays = {}
    fan_in = input_dim
    for i, h in enumerate(hidden):
        limit = np.sqrt(6.0 / (fan_in + h))
        arrays[f"trunk.{i}.w"] = rng.uniform(-limit, limit, size=(fan_in, h))
        arrays[f"trunk.{i}.b"] = np.zeros(h)
        fan_in = h
    arrays["mean.w"] = rng.normal(0.0, 0.01 / np.sqrt(fan_in), size=fan_in)
    arrays["mean.b"] = np.array(0.0)
    arrays["log_std"] = np.array(float(np.clip(log_std_init, LOG_STD_MIN, LOG_STD_MAX)))
    arrays["value.w"] = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=fan_in)
    arrays["value.b"] = np.array(0.0)
    return PolicyParams(arrays)


def zeros_like(params: PolicyParams) -> PolicyParams:
    return params.map(lambda k, v: np.zeros_like(v))


def forward_cached(params: PolicyParams, x: np.ndarray):
    """Batched forward pass. Returns ``(mu, value, cache)`` with mu, value of shape (N,)."""
    acts = [x]
    h = x
    for i in range(params.n_layers):
        h = np.tanh(h @ params[f"trunk.{i}.w"] + params[f"trunk.{i}.b"])
        acts.append(h)
    mu = h @ params["mean.w"] + params["mean.b"]
    value = h @ params["value.w"] + params["value.b"]
    return mu, value, acts


def forward(params: PolicyParams, obs) -> tuple[np.ndarray, float, np.ndarray]:
    """Mean, log-std and value for one observation or a batch of them."""
    x = np.asarray(obs, dtype=float)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if x2.shape[-1] != params.input_dim:
        raise ValueError(f"observation has length {x2.shape[-1]}, network expects {params.input_dim}")
    mu, value, _ = forward_cached(params, x2)
    if single:
        return mu[0], params.log_std, value[0]
    return mu, params.log_std, value


def backward(params: PolicyParams, acts: list, d_mu: np.ndarray, d_value: np.ndarray, d_log_std: float) -> PolicyParams:
    """Gradients of a loss given its derivatives w.r.t. the head outputs."""
    grads = {}
    h = acts[-1]
    grads["mean.w"] = h.T @ d_mu
    grads["mean.b"] = np.array(d_mu.sum())
    grads["value.w"] = h.T @ d_value
    grads["value.b"] = np.array(d_value.sum())
    grads["log_std"] = np.array(float(d_log_std))
    dh = np.outer(d_mu, params["mean.w"]) + np.outer(d_value, params["value.w"])
    for i in reversed(range(params.n_layers)):
        h = acts[i + 1]
        dpre = dh * (1.0 - h * h)
        grads[f"trunk.{i}.w"] = acts[i].T @ dpre
        grads[f"trunk.{i}.b"] = dpre.sum(axis=0)
        if i > 0:
            dh = dpre @ params[f"trunk.{i}.w"].T
    return PolicyParams({k: grads[k] for k in params.arrays})


def global_norm(grads: PolicyParams) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for _, g in grads.items())))


def clip_by_global_norm(grads: PolicyParams, max_norm: float) -> tuple[PolicyParams, float]:
    """Rescale so the global L2 norm is at most ``max_norm``; returns the pre-clip norm."""
    norm = global_norm(grads)
    if norm <= max_norm:
        return grads, norm
    scale = max_norm / norm
    return grads.map(lambda k, g: g * scale), norm


def flatten(params: PolicyParams) -> np.ndarray:
    return np.concatenate([np.ravel(v) for _, v in params.items()])


def unflatten(vector: np.ndarray, like: PolicyParams) -> PolicyParams:
    out, i = {}, 0
    for k, v in like.items():
        n = v.size
        out[k] = np.asarray(vector[i:i + n], dtype=float).reshape(v.shape)
        i += n
    if i != vector.size:
        raise ValueError("vector length does not match parameter layout")
    return PolicyParams(out)


def from_arrays(arrays: Mapping[str, np.ndarray]) -> PolicyParams:
    n = sum(1 for k in arrays if k.startswith("trunk.") and k.endswith(".w"))
    names = param_names(n)
    missing = set(names) - set(arrays)
    if missing:
        raise ValueError(f"missing parameter arrays: {sorted(missing)}")
    return PolicyParams({k: np.asarray(arrays[k], dtype=float) for k in names})
