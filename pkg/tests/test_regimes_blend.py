import numpy as np
import pandas as pd
import pytest

from deephedge.analytics import (
    PAPER_PERIODS,
    blend,
    blend_sweep,
    frontier_frame,
    leg_stats,
    min_variance_weight,
    period_buckets,
    regime_attribution,
    sharpe,
    vix_terciles,
)

DATES = pd.bdate_range("2020-01-01", periods=300)


class TestRegimes:
    def test_monotone_vix_contiguous_terciles(self):
        labels = vix_terciles(pd.Series(np.linspace(10, 40, 300), index=DATES))
        assert list(labels.iloc[:100].unique()) == ["low"]
        assert list(labels.iloc[100:200].unique()) == ["mid"]
        assert list(labels.iloc[200:].unique()) == ["high"]

    def test_terciles_partition(self):
        vix = pd.Series(np.random.default_rng(0).lognormal(3, 0.3, 300), index=DATES)
        labels = vix_terciles(vix)
        assert labels.notna().all() and set(labels) == {"low", "mid", "high"}
        counts = labels.value_counts()
        assert counts.max() - counts.min() <= 1

    def test_identical_policy_zero_delta(self):
        r = pd.Series(np.random.default_rng(1).normal(1, 10, 300), index=DATES)
        table = regime_attribution({"policy": r, "spy": r.copy()}, vix_terciles(pd.Series(np.arange(300.0), index=DATES)),
                                   benchmark="spy", order=["low", "mid", "high"])
        assert (table.frame["delta_policy"] == 0).all()
        assert (table.frame["delta_spy"] == 0).all()
        assert table.frame["steps"].sum() == 300

    def test_bucket_sharpe_oracle(self):
        r = pd.Series(np.random.default_rng(2).normal(1, 10, 300), index=DATES)
        labels = pd.Series(np.where(np.arange(300) < 120, "a", "b"), index=DATES)
        table = regime_attribution({"p": r}, labels).frame.set_index("bucket")
        assert table.loc["a", "p"] == sharpe(r.iloc[:120])
        assert table.loc["b", "p"] == sharpe(r.iloc[120:])

    def test_empty_bucket_missing(self):
        r = pd.Series(np.ones(300), index=DATES)
        labels = pd.Series(["a"] * 300, index=DATES)
        table = regime_attribution({"p": r}, labels, order=["a", "b"]).frame
        assert np.isnan(table.set_index("bucket").loc["b", "p"])

    def test_named_periods_layout(self):
        dates = pd.bdate_range("2005-01-03", "2023-12-29")
        split = pd.Series(np.where(dates <= "2017-12-31", "train", np.where(dates <= "2019-12-31", "valid", "test")),
                          index=dates)
        labels = period_buckets(dates, PAPER_PERIODS, split)
        r = pd.Series(np.random.default_rng(3).normal(0, 1, len(dates)), index=dates)
        table = regime_attribution({"p": r, "spy": r}, labels, benchmark="spy").frame
        assert [b.split()[0] for b in table["bucket"]] == ["GFC", "Eurozone", "Calm", "Calm", "COVID", "Post"]
        assert list(table["split"]) == ["train", "train", "train", "valid", "test", "test"]

    def test_overlapping_dates_counted_per_step(self):
        r = pd.Series([1.0, 2.0, 3.0, 4.0], index=pd.DatetimeIndex(["2020-01-01", "2020-01-02"] * 2))
        labels = pd.Series(["x", "x"], index=pd.DatetimeIndex(["2020-01-01", "2020-01-02"]))
        assert regime_attribution({"p": r}, labels).frame["steps"].iloc[0] == 4


def legs(seed=0, rho=-0.6, n=500):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n)
    b = rho * a + np.sqrt(1 - rho**2) * rng.standard_normal(n)
    idx = pd.bdate_range("2019-01-01", periods=n)
    return pd.Series(0.0002 + 0.004 * a, index=idx), pd.Series(0.0004 + 0.01 * b, index=idx)


class TestBlend:
    def test_endpoints_equal_pure_legs(self):
        p, s = legs()
        assert blend(p, s, 0.0).stats == leg_stats(s)
        assert blend(p, s, 1.0).stats == leg_stats(p)
        np.testing.assert_array_equal(blend(p, s, 1.0).returns, p)

    def test_hand_example(self):
        idx = pd.bdate_range("2021-12-30", periods=3)
        p = pd.Series([0.01, 0.0, -0.01], index=idx)
        s = pd.Series([0.02, 0.01, 0.0], index=idx)
        rep = blend(p, s, 0.5)
        np.testing.assert_allclose(rep.returns, [0.015, 0.005, -0.005])
        assert rep.nav.iloc[-1] == pytest.approx(1.015 * 1.005 * 0.995)
        att = rep.attribution.set_index("year")
        assert att.loc[2021, "overlay"] == pytest.approx(0.5)
        assert att.loc[2021, "spy_leg"] == pytest.approx(1.5)
        assert att.loc[2022, "overlay"] == pytest.approx(-0.5)
        assert att.loc[2022, "total"] == pytest.approx(-0.5)
        assert rep.cagr == pytest.approx(rep.nav.iloc[-1] ** (252 / 3) - 1)

    @pytest.mark.parametrize("w", [0.25, 0.5, 0.75])
    def test_variance_bounded_by_legs(self, w):
        p, s = legs(rho=0.3)
        v = blend(p, s, w).returns.var(ddof=1)
        c = np.cov(p, s, ddof=1)
        oracle = w**2 * c[0, 0] + (1 - w) ** 2 * c[1, 1] + 2 * w * (1 - w) * c[0, 1]
        assert v == pytest.approx(oracle, rel=1e-10)
        assert v <= max(c[0, 0], c[1, 1])

    def test_sweep_and_min_variance(self):
        p, s = legs()
        weights = [i / 10 for i in range(11)]
        reports = blend_sweep(p, s, weights)
        frame = frontier_frame(reports)
        assert list(frame["weight"]) == weights
        w_star = min_variance_weight(p, s)
        assert 0 < w_star < 1
        best = frame.loc[frame["ann_vol"].idxmin(), "weight"]
        assert abs(best - w_star) <= 0.1
        assert 0 < best < 1

    def test_rolling_window(self):
        p, s = legs()
        rep = blend(p, s, 0.5)
        assert rep.rolling["vol_blend"].iloc[:62].isna().all()
        assert rep.rolling["vol_blend"].iloc[62] == pytest.approx(rep.returns.iloc[:63].std(ddof=1) * np.sqrt(252))
        assert (rep.rolling["dd_blend"] <= 0).all()

    def test_misaligned(self):
        p, s = legs()
        with pytest.raises(ValueError):
            blend(p, s.iloc[1:], 0.5)
        with pytest.raises(ValueError):
            blend(p, s.set_axis(s.index + pd.Timedelta(days=1)), 0.5)
        with pytest.raises(ValueError):
            blend(p, s, 1.5)
        with pytest.raises(ValueError):
            blend_sweep(p, s, [0.5, 0.1])
