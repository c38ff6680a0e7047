"""Independent reference implementations used by unit and acceptance tests.

Each oracle is written the slow, obvious way (Python loops, no shared code
with the package) so that agreement is meaningful.
"""
import math

import numpy as np


def reward_oracle(requested, rets, cost_bps, slippage_bps, pos_limit, rebalance_every, psi=0.0, lam=0.0, scale=1e4):
    """Positions, trades and rewards of one episode, stepped by hand."""
    kappa = (cost_bps + slippage_bps) * 1e-4
    prev = 0.0
    out = []
    for k, (req, r) in enumerate(zip(requested, rets)):
        a = min(max(float(req), -pos_limit), pos_limit)
        pos = a if k % rebalance_every == 0 else prev
        q = pos - prev
        pnl = pos * r - kappa * abs(q) - 0.5 * psi * q * q - lam * pos * q
        out.append((pos, q, scale * pnl))
        prev = pos
    return out


def gae_bruteforce(rewards, values, gamma, lam):
    """A_t = sum_l (gamma*lam)^l delta_{t+l}, with values[T] the bootstrap value."""
    T = len(rewards)
    deltas = [rewards[t] + gamma * values[t + 1] - values[t] for t in range(T)]
    adv = []
    for t in range(T):
        total = 0.0
        for l in range(T - t):
            total += (gamma * lam) ** l * deltas[t + l]
        adv.append(total)
    return np.array(adv), np.array(adv) + np.asarray(values[:T])


def max_drawdown_oracle(rewards_bps):
    nav, peak, worst = 1.0, 1.0, 0.0
    for r in rewards_bps:
        nav *= 1.0 + r / 1e4
        peak = max(peak, nav)
        worst = min(worst, nav / peak - 1.0)
    return worst


def sharpe_oracle(x):
    n = len(x)
    m = sum(x) / n
    sd = math.sqrt(sum((v - m) ** 2 for v in x) / (n - 1))
    return m / sd * math.sqrt(252)


def central_difference(f, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(x.size):
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (f(up) - f(dn)) / (2 * h)
    return g


def random_loss_batch(rng, input_dim=6, width=8, n=24):
    """Width-``width`` network and a random batch for gradient checks."""
    from deephedge.agent import Batch, init_params
    params = init_params(input_dim, (width, width), rng, log_std_init=rng.uniform(-1.5, 0.5))
    # perturb heads away from their near-zero init so every term is exercised
    params = params.map(lambda k, v: v + 0.3 * rng.standard_normal(v.shape) if k != "log_std" else v)
    mask = rng.random(n) < 0.6
    mask[0] = True
    batch = Batch(
        obs=rng.standard_normal((n, input_dim)),
        z=rng.standard_normal(n) * 1.5,
        advantages=rng.standard_normal(n),
        returns=rng.standard_normal(n),
        a_max=float(rng.uniform(0.5, 3.0)),
        actor_mask=mask,
    )
    return params, batch


def gradcheck_loss(params, batch, entropy_coef=0.01, value_coef=0.5):
    """Analytic and central-difference gradients of the full unclipped loss."""
    from deephedge.agent import flatten, loss_and_grads, unflatten
    _, grads = loss_and_grads(params, batch, entropy_coef, value_coef, grad_clip=None)
    x0 = flatten(params)

    def f(x):
        info, _ = loss_and_grads(unflatten(x, params), batch, entropy_coef, value_coef, grad_clip=None)
        return info.total

    return flatten(grads), central_difference(f, x0)


def squashed_density_integral(mu, log_std, a_max):
    """Quadrature of the action density over (-a_max, a_max).

    Breakpoints at a_max*tanh(z) on a z-grid keep every piece smooth, including
    the sharp rise near the bounds when sigma is large.
    """
    from scipy import integrate
    from deephedge.agent import action_log_prob
    s = math.exp(log_std)
    zs = np.concatenate([np.linspace(-18, 18, 73), mu + s * np.array([-8, -4, -2, -1, 0, 1, 2, 4, 8])])
    pts = np.unique(a_max * np.tanh(zs))
    pts = pts[np.abs(pts) < a_max]
    total, _ = integrate.quad(lambda a: float(np.exp(action_log_prob(a, mu, log_std, a_max))),
                              -a_max, a_max, points=pts, limit=2000)
    return total
