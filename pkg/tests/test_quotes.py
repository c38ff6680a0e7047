import datetime as dt
import itertools

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deephedge.data import QuoteRecord, forward_fill_guarded, select_quote

D = dt.date(2020, 1, 2)


def q(tenor, delta, spread, iv=0.2, put=False):
    return QuoteRecord(D, tenor, delta, iv, spread, put)


def brute_force_select(quotes, tt, td, ttol, dtol):
    """Enumerate all feasible candidates and sort by the full key."""
    feasible = [
        (abs(x.delta - td), x.spread, abs(x.tenor_days - tt), i, x)
        for i, x in enumerate(quotes)
        if abs(x.delta - td) <= dtol and abs(x.tenor_days - tt) <= ttol
    ]
    return min(feasible, key=lambda r: r[:4])[4] if feasible else None


def test_spread_breaks_delta_tie():
    wide, tight = q(30, 0.52, 0.5), q(30, 0.48, 0.2)
    assert select_quote([wide, tight], 30, 0.5, 5, 0.05) is tight


def test_single_candidate():
    only = q(31, 0.51, 1.0)
    assert select_quote([only, q(60, 0.5, 0.1)], 30, 0.5, 5, 0.05) is only


def test_nothing_within_delta_tolerance():
    assert select_quote([q(30, 0.7, 0.1), q(30, 0.2, 0.1)], 30, 0.5, 5, 0.05) is None


def test_tenor_then_input_order_break_remaining_ties():
    a, b, c = q(33, 0.5, 0.2), q(29, 0.5, 0.2), q(29, 0.5, 0.2)
    assert select_quote([a, b, c], 30, 0.5, 5, 0.05) is b


def test_rejects_non_positive_tolerance():
    with pytest.raises(ValueError):
        select_quote([], 30, 0.5, 0, 0.05)


def test_quote_invariants():
    with pytest.raises(ValueError):
        QuoteRecord(D, 0, 0.5, 0.2, 0.1, False)
    with pytest.raises(ValueError):
        QuoteRecord(D, 30, 1.5, 0.2, 0.1, False)
    with pytest.raises(ValueError):
        QuoteRecord(D, 30, 0.5, -0.1, 0.1, False)


quote_st = st.builds(
    lambda tenor, delta, spread: q(tenor, delta, spread),
    st.integers(20, 40),
    st.sampled_from([0.40, 0.45, 0.48, 0.5, 0.52, 0.55, 0.6]),
    st.sampled_from([0.1, 0.2, 0.5]),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(quote_st, max_size=8))
def test_matches_enumeration(quotes):
    got = select_quote(quotes, 30, 0.5, 5, 0.05)
    assert got is brute_force_select(quotes, 30, 0.5, 5, 0.05)


def _series(values, dates):
    return pd.Series(values, index=pd.DatetimeIndex(dates), dtype=float)


def test_fill_within_window():
    s = _series([1.0, np.nan, np.nan, 4.0], pd.date_range("2020-01-01", periods=4))
    out, flag = forward_fill_guarded(s, 3)
    assert out.tolist() == [1.0, 1.0, 1.0, 4.0]
    assert flag.tolist() == [False, True, True, False]


def test_long_gap_stays_missing():
    dates = ["2020-01-01", "2020-01-06", "2020-01-07"]
    out, flag = forward_fill_guarded(_series([1.0, np.nan, 2.0], dates), 3)
    assert np.isnan(out.iloc[1]) and not flag.iloc[1]


def test_present_series_unchanged():
    s = _series([1.0, 2.0, 3.0], pd.date_range("2020-01-01", periods=3))
    out, flag = forward_fill_guarded(s, 3)
    pd.testing.assert_series_equal(out, s)
    assert not flag.any()


def test_leading_missing_not_filled():
    s = _series([np.nan, 1.0], pd.date_range("2020-01-01", periods=2))
    out, _ = forward_fill_guarded(s, 3)
    assert np.isnan(out.iloc[0])


def test_requires_increasing_dates():
    with pytest.raises(ValueError):
        forward_fill_guarded(_series([1.0, 2.0], ["2020-01-02", "2020-01-01"]), 3)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 6), st.booleans()), min_size=1, max_size=40),
    st.integers(0, 7),
)
def test_never_fills_across_long_gaps(steps, max_stale):
    offsets = list(itertools.accumulate(s for s, _ in steps))
    dates = pd.Timestamp("2020-01-01") + pd.to_timedelta(offsets, unit="D")
    values = [float(i) if present else np.nan for i, (_, present) in enumerate(steps)]
    s = _series(values, dates)
    out, flag = forward_fill_guarded(s, max_stale)
    last_date, last_val = None, np.nan
    for d, v, o, f in zip(dates, values, out, flag):
        if not np.isnan(v):
            assert o == v and not f
            last_date, last_val = d, v
        elif last_date is not None and (d - last_date).days <= max_stale:
            assert o == last_val and f
        else:
            assert np.isnan(o) and not f
