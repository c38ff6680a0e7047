import numpy as np
import pytest

from deephedge.data import SynthConfig, generate_synthetic, simulate_market
from deephedge.data.panel import panel_to_csv_text
from deephedge.errors import ConfigError


def test_no_signal_no_predictability():
    panel = generate_synthetic(SynthConfig(n_days=4000, seed=5, signal_strength=0.0))
    f = panel.frame[["ts_slope", "ret_fwd"]].dropna()
    corr = np.corrcoef(f["ts_slope"], f["ret_fwd"])[0, 1]
    assert abs(corr) < 3 / np.sqrt(len(f))


def test_signal_is_predictive():
    m = simulate_market(SynthConfig(n_days=4000, seed=5, signal_strength=1.0))
    corr = np.corrcoef(m.signal[:-1], m.log_return[1:])[0, 1]
    assert corr > 0.25


def test_same_seed_identical_bytes():
    cfg = SynthConfig(n_days=600, seed=42)
    assert panel_to_csv_text(generate_synthetic(cfg)) == panel_to_csv_text(generate_synthetic(cfg))


def test_different_seed_differs():
    a = generate_synthetic(SynthConfig(n_days=600, seed=1))
    b = generate_synthetic(SynthConfig(n_days=600, seed=2))
    assert panel_to_csv_text(a) != panel_to_csv_text(b)


def test_stress_more_volatile():
    m = simulate_market(SynthConfig(n_days=4000, seed=9))
    prev_regime = m.regime[:-1]
    moves = m.log_return[1:]
    assert moves[prev_regime == 1].var(ddof=1) > moves[prev_regime == 0].var(ddof=1)
    assert {0, 1} <= set(m.regime)


@pytest.mark.parametrize("bad", [
    {"n_days": 100},
    {"transition": ((0.5, 0.6), (0.1, 0.9))},
    {"vol": (0.1, 0.0)},
    {"signal_strength": 1.5},
])
def test_invalid_config(bad):
    with pytest.raises(ConfigError):
        SynthConfig(**bad)


def test_config_dict_round_trip():
    cfg = SynthConfig(n_days=500, seed=3, signal_strength=0.25)
    assert SynthConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError):
        SynthConfig.from_dict({"bogus": 1})
