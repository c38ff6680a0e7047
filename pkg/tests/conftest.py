import numpy as np
import pandas as pd
import pytest

from deephedge.data import (
    PAPER_SPLIT,
    SynthConfig,
    fit_norm_stats,
    generate_synthetic,
    split_panel,
)


@pytest.fixture(scope="session")
def synth_panel():
    # 4800 business days ending 2023-12-29 start in 2005
    return generate_synthetic(SynthConfig(n_days=4800, seed=11))


@pytest.fixture(scope="session")
def synth_splits(synth_panel):
    return split_panel(synth_panel, PAPER_SPLIT)


@pytest.fixture(scope="session")
def synth_norm(synth_splits):
    return fit_norm_stats(synth_splits.train)


def make_raw(n=400, seed=0, start="2015-01-01"):
    """Minimal valid input frame with random-walk prices."""
    rng = np.random.default_rng(seed)
    dates = pd.bdate_range(start, periods=n)
    iv30 = 0.15 + 0.02 * rng.standard_normal(n) ** 2
    return pd.DataFrame({
        "date": dates,
        "iv_30d": iv30,
        "iv_91d": iv30 + 0.01,
        "iv_25d_put": iv30 + 0.03,
        "iv_25d_call": iv30 - 0.01,
        "vix": 15 + rng.standard_normal(n),
        "y10": 0.03 + 0.001 * rng.standard_normal(n),
        "spy_close": 100 * np.exp(np.cumsum(0.01 * rng.standard_normal(n))),
    })


@pytest.fixture
def raw_frame():
    return make_raw()


@pytest.fixture(scope="session")
def small_panel():
    from deephedge.data import build_panel
    return build_panel(make_raw(400, seed=5))


@pytest.fixture(scope="session")
def small_norm(small_panel):
    return fit_norm_stats(small_panel)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append((number, line))
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
