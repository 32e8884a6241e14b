import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from p2ptransient.ensemble import (ENSEMBLE_COLUMNS, EmptySample, child_seed, empirical_cdf,
                                   ensemble_on_grid, run_ensemble)
from p2ptransient.model import FixedRateParams, GeneralParams

P = GeneralParams(100, 0.02, 1.0, 1, 60, 39)


def test_child_seed_reference():
    # SplitMix64 with state 0: first outputs of the reference generator
    assert child_seed(0, 0) == 0xE220A8397B1DCDAF
    assert child_seed(0, 1) == 0x6E789E6AA1B965F4


@settings(max_examples=200)
@given(st.integers(0, 2**64 - 1), st.integers(0, 10**6))
def test_child_seed_range_and_spread(master, i):
    a, b = child_seed(master, i), child_seed(master, i + 1)
    assert 0 <= a < 2**64 and a != b


def test_worker_count_does_not_change_results():
    a = run_ensemble("general", P, 17, 64)
    b = run_ensemble("general", P, 17, 64, workers=4)
    assert a.to_csv() == b.to_csv()
    assert np.array_equal(a.seed, [child_seed(17, i) for i in range(64)])


def test_ensemble_layout():
    res = run_ensemble("general", P, 17, 5)
    lines = res.to_csv().splitlines()
    assert lines[0] == ",".join(ENSEMBLE_COLUMNS)
    assert len(lines) == 6 and len(res) == 5
    assert np.all(res.final_xc + res.final_xf <= 99)


def test_fixed_rate_ensemble():
    res = run_ensemble("fixed_rate", FixedRateParams(50, 2.0, 1.0, 5), 3, 10)
    assert np.all(res.final_xf == 0)


def test_grid_matches_ensemble_seeds():
    grid = np.array([0.0, 1.0, 1e6])
    y = ensemble_on_grid("general", P, 17, 8, grid)
    assert y.shape == (8, 3) and np.all(y[:, 0] == 1) and np.all(y[:, 2] == 0)


def test_rejects_zero_replicates():
    with pytest.raises(ValueError):
        run_ensemble("general", P, 1, 0)


def test_empirical_cdf():
    f = empirical_cdf([3.0, 1.0, 2.0, np.inf])
    assert f(0.5) == 0.0 and f(1.0) == 0.25 and f(2.5) == 0.5 and f(1e300) == 0.75
    assert f.standard_error(2.5) == pytest.approx(np.sqrt(0.25 / 4))
    with pytest.raises(EmptySample):
        empirical_cdf([])


@settings(max_examples=100)
@given(st.lists(st.floats(0, 100), min_size=1, max_size=50), st.floats(-1, 101), st.floats(-1, 101))
def test_empirical_cdf_is_monotone(xs, a, b):
    f = empirical_cdf(xs)
    lo, hi = sorted((a, b))
    assert 0 <= f(lo) <= f(hi) <= 1
