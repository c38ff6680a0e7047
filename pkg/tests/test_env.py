import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import reward_oracle
from deephedge.agent import GaussianPolicy, init_params
from deephedge.env import (
    EnvConfig,
    HedgingEnv,
    PanelView,
    VecHedgingEnv,
    baseline_policy,
    constant_policy,
    episode_starts,
    replay_split,
    rollout,
)
from deephedge.errors import ConfigError, EpisodeRangeError, ProtocolError


def run_actions(view, cfg, actions, episode=0):
    env = HedgingEnv(view, None, cfg)
    env.reset(episode)
    outs = []
    for a in actions:
        _, o, done = env.step(a)
        outs.append(o)
    return outs, done


@pytest.fixture(scope="module")
def view(small_panel, small_norm):
    return PanelView.build(small_panel, small_norm)


class TestEpisodes:
    def test_count_formula(self):
        cfg = EnvConfig(episode_len=256, episode_stride=64)
        assert len(episode_starts(1000, cfg)) == (1000 - 256) // 64 + 1
        assert list(episode_starts(256, cfg)) == [0]

    def test_short_split_single_short_episode(self, view):
        cfg = EnvConfig(episode_len=1000, episode_stride=64)
        env = VecHedgingEnv(view, None, cfg)
        assert env.n_episodes == 1
        assert env.n_steps == len(view) - cfg.window

    def test_steps_per_episode(self, view):
        cfg = EnvConfig(window=10, episode_len=64, episode_stride=32)
        env = VecHedgingEnv(view, None, cfg)
        assert env.n_steps == 54

    def test_episode_out_of_range(self, view):
        env = HedgingEnv(view, None, EnvConfig(episode_len=64, episode_stride=32))
        with pytest.raises(EpisodeRangeError):
            env.reset(env.n_episodes)
        with pytest.raises(EpisodeRangeError):
            env.reset(-1)

    def test_step_after_done(self, view):
        cfg = EnvConfig(window=5, episode_len=8)
        outs, done = run_actions(view, cfg, [0.0] * 3)
        assert done
        env = HedgingEnv(view, None, cfg)
        env.reset(0)
        for _ in range(3):
            env.step(0.0)
        with pytest.raises(ProtocolError):
            env.step(0.0)

    def test_rejects_non_finite_action(self, view):
        env = HedgingEnv(view, None, EnvConfig())
        env.reset(0)
        with pytest.raises(ValueError):
            env.step(float("nan"))

    def test_observation_layout(self, view):
        cfg = EnvConfig(window=10, episode_len=64)
        env = HedgingEnv(view, None, cfg)
        obs = env.reset(0)
        assert obs.flat().shape == (10 * view.z.shape[1] + 1,)
        assert obs.flat()[-1] == 0.0
        np.testing.assert_array_equal(obs.window, view.z[0:10])
        assert obs.row == 9

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            EnvConfig(pos_limit=0)
        with pytest.raises(ConfigError):
            EnvConfig(episode_len=5, window=10)
        with pytest.raises(ConfigError):
            EnvConfig.from_dict({"kappa": 1})
        cfg = EnvConfig(lam=0.1)
        assert cfg.to_dict()["lambda"] == 0.1
        assert EnvConfig.from_dict(cfg.to_dict()) == cfg


class TestEconomics:
    def test_single_step_examples(self, view):
        # one executed step with R forced by the view
        cfg = EnvConfig(window=1, cost_bps=10, slippage_bps=0, rebalance_every=1, episode_len=3)
        R = view.ret[0]
        outs, _ = run_actions(view, cfg, [1.0])
        assert outs[0].reward == pytest.approx(1e4 * (R - 0.001), abs=1e-10)

    def test_hold_unchanged_costs_nothing(self, view):
        cfg = EnvConfig(window=1, cost_bps=10, slippage_bps=0, rebalance_every=1, episode_len=4)
        outs, _ = run_actions(view, cfg, [1.0, 1.0])
        assert outs[1].cost == 0.0
        assert outs[1].reward == pytest.approx(1e4 * view.ret[1], abs=1e-10)

    def test_clipping(self, view):
        cfg = EnvConfig(window=1, pos_limit=2.0, rebalance_every=1, episode_len=4)
        outs, _ = run_actions(view, cfg, [3.0, -7.0])
        assert outs[0].position == 2.0 and outs[1].position == -2.0

    def test_cadence_gate(self, view):
        cfg = EnvConfig(window=1, rebalance_every=25, episode_len=60)
        outs, _ = run_actions(view, cfg, [1.5] + [0.3] * 24 + [-1.0] + [0.9] * 10)
        assert outs[0].position == 1.5
        assert all(o.position == 1.5 and o.trade == 0.0 for o in outs[1:25])
        assert outs[25].position == -1.0 and outs[25].executed

    def test_zero_policy_exact_zero(self, view):
        traces = rollout(constant_policy(0.0), view, None, EnvConfig(episode_len=64, episode_stride=16))
        total = sum(float(t.reward.sum()) for t in traces)
        assert total == 0.0
        assert all((t.cost == 0).all() for t in traces)

    @settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(0, 2**31),
        cost=st.floats(0, 50), slip=st.floats(0, 50),
        psi=st.floats(0, 1e-3), lam=st.floats(0, 1e-3),
        limit=st.floats(0.5, 3), cadence=st.integers(1, 30),
    )
    def test_reward_identity(self, view, seed, cost, slip, psi, lam, limit, cadence):
        cfg = EnvConfig(window=5, pos_limit=limit, cost_bps=cost, slippage_bps=slip, rebalance_every=cadence,
                        psi=psi, lam=lam, episode_len=80, episode_stride=40)
        rng = np.random.default_rng(seed)
        ep = int(rng.integers(VecHedgingEnv(view, None, cfg).n_episodes))
        actions = 4 * rng.standard_normal(cfg.episode_len - cfg.window)
        outs, _ = run_actions(view, cfg, actions, ep)
        rets = [o.ret_fwd for o in outs]
        expected = reward_oracle(actions, rets, cost, slip, limit, cadence, psi, lam)
        for o, (pos, q, r) in zip(outs, expected):
            assert o.position == pos
            assert abs(o.reward - r) <= 1e-12 * max(1.0, abs(r))
            assert abs(o.position) <= limit

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31), a=st.floats(-2, 2), b=st.floats(-2, 2))
    def test_cost_monotone_in_trade_size(self, seed, a, b):
        from deephedge.env import step_economics
        cfg = EnvConfig(cost_bps=10, slippage_bps=8, psi=1e-4, lam=0.0)
        _, _, c_small, _, _ = step_economics(0.0, min(abs(a), abs(b)), 0.0, True, cfg)
        _, _, c_big, _, _ = step_economics(0.0, max(abs(a), abs(b)), 0.0, True, cfg)
        assert c_big >= c_small >= 0


class TestCausality:
    def policies(self, view):
        params = init_params(10 * view.z.shape[1] + 1, (16, 16), np.random.default_rng(0))
        return {
            "network": GaussianPolicy(params, 2.0),
            "momentum": baseline_policy("momentum"),
            "vix_band": baseline_policy("vix_band", {"vix_median": 15.0}),
        }

    def test_garbage_future(self, view):
        cfg = EnvConfig(window=10, rebalance_every=1, episode_len=60, episode_stride=60)
        for name, pol in self.policies(view).items():
            base = rollout(pol, view, None, cfg, episodes=[1])[0]
            for k in range(len(base)):
                row = int(base.row[k])
                junk = np.random.default_rng(k)
                z = view.z.copy()
                z[row + 1:] = junk.normal(0, 50, z[row + 1:].shape)
                raw = {c: v.copy() for c, v in view.raw.items()}
                for v in raw.values():
                    v[row + 1:] = junk.normal(1e3, 1e3, v[row + 1:].shape)
                ret = view.ret.copy()
                ret[row + 1:] = junk.normal(0, 1, ret[row + 1:].shape)
                poisoned = PanelView(z=z, ret=ret, raw=raw, dates=view.dates)
                other = rollout(pol, poisoned, None, cfg, episodes=[1])[0]
                np.testing.assert_array_equal(other.position[: k + 1], base.position[: k + 1], err_msg=name)
                np.testing.assert_array_equal(other.reward[: k + 1], base.reward[: k + 1], err_msg=name)


class TestRollout:
    def test_batched_matches_single(self, view):
        cfg = EnvConfig(window=10, rebalance_every=3, episode_len=50, episode_stride=25)
        pol = baseline_policy("momentum")
        batched = rollout(pol, view, None, cfg)
        for tr in batched:
            single = rollout(pol, view, None, cfg, episodes=[tr.episode])[0]
            np.testing.assert_array_equal(single.reward, tr.reward)

    def test_deterministic_rollout_repeatable(self, view):
        params = init_params(10 * view.z.shape[1] + 1, (8, 8), np.random.default_rng(1))
        pol = GaussianPolicy(params, 2.0)
        cfg = EnvConfig(episode_len=64, episode_stride=32)
        a = rollout(pol, view, None, cfg, deterministic=False, seed=3)
        b = rollout(pol, view, None, cfg, deterministic=False, seed=3)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.reward, y.reward)

    def test_replay_covers_split_once(self, view):
        cfg = EnvConfig(window=10)
        tr = replay_split(constant_policy(1.0), view, None, cfg)
        assert len(tr) == len(view) - 10
        assert not tr.date.has_duplicates
        assert tr.date[0] == view.dates[9]

    def test_trace_frame(self, view):
        tr = rollout(constant_policy(0.5), view, None, EnvConfig(episode_len=64))[0]
        frame = tr.to_frame()
        assert list(frame.columns) == ["episode", "t", "date", "action", "trade", "cost", "pnl",
                                       "reward_bps", "executed", "ret_fwd"]
        assert len(list(tr.outcomes())) == len(tr)
