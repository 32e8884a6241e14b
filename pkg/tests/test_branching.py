import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import kolmogorov_g1, rk4
from p2ptransient.branching import (BranchingParams, Supercritical, branching_validity_horizon,
                                    expected_extinction_time, extinction_cdf, extinction_probability,
                                    survival_upper_bound)
from p2ptransient.ctmc import simulate_branching
from p2ptransient.ensemble import child_seed
from p2ptransient.model import GeneralParams


@pytest.mark.parametrize("rho", [0.3, 0.9, 1.0, 1.5, 2.394])
def test_cdf_solves_backward_equation(rho):
    mu = 0.7
    p = BranchingParams(rho * mu, mu)
    ts, g = rk4(kolmogorov_g1(rho * mu, mu), [0.0], 20.0, 20000)
    assert np.max(np.abs(extinction_cdf(p, ts) - g[:, 0])) < 1e-10


def test_critical_value():
    assert extinction_cdf(BranchingParams(1.0, 1.0), 1.0) == pytest.approx(0.25 ** 0.5)
    assert extinction_cdf(BranchingParams(1.0, 1.0, 2), 1.0) == pytest.approx(0.25, abs=1e-12)


def test_continuity_across_critical_point():
    t = np.linspace(0, 30, 301)
    mid = extinction_cdf(BranchingParams(1.0, 1.0), t)
    for rho in (1 - 1e-6, 1 + 1e-6, 1 - 1e-9, 1 + 1e-9):
        assert np.max(np.abs(extinction_cdf(BranchingParams(rho, 1.0), t) - mid)) < 1e-5


def test_limits_and_domain():
    p = BranchingParams(2.0, 1.0, 2)
    assert extinction_cdf(p, 0.0) == 0.0
    assert extinction_cdf(p, 1e3) == pytest.approx(0.25, abs=1e-12)
    assert extinction_probability(p) == 0.25
    assert extinction_probability(BranchingParams(0.5, 1.0, 3)) == 1.0
    with pytest.raises(ValueError):
        extinction_cdf(p, -1.0)
    assert survival_upper_bound(p, 2.0) == pytest.approx(1 - extinction_cdf(p, 2.0))


@pytest.mark.parametrize("kwargs", [dict(lambda_nc=-1.0, mu=1.0), dict(lambda_nc=1.0, mu=0.0),
                                    dict(lambda_nc=1.0, mu=1.0, k=0), dict(lambda_nc=1.0, mu=1.0, k=1.5)])
def test_params_rejected(kwargs):
    with pytest.raises(ValueError):
        BranchingParams(**kwargs)


def test_from_general_uses_cooperative_birth_rate():
    p = BranchingParams.from_general(GeneralParams(400, 0.006, 1.0, 3, 239, 158))
    assert p.lambda_nc == pytest.approx(0.006 * 239) and p.k == 3


def test_expected_time_values():
    # reference values from 50-digit arithmetic
    assert expected_extinction_time(BranchingParams(0.5, 1.0)) == pytest.approx(1.3862943611198906, rel=1e-12)
    assert expected_extinction_time(BranchingParams(0.5, 1.0, 3)) == pytest.approx(2.7040605278392343, rel=1e-8)
    assert expected_extinction_time(BranchingParams(0.0, 2.0)) == 0.5
    with pytest.raises(Supercritical):
        expected_extinction_time(BranchingParams(1.0, 1.0))


def test_monte_carlo_extinction_probability():
    p = BranchingParams(2.0, 1.0, 2)
    runs = [simulate_branching(p, child_seed(7, i), y_cap=500) for i in range(4000)]
    frac = np.mean([r.extinct for r in runs])
    assert abs(frac - 0.25) < 3 * math.sqrt(0.25 * 0.75 / 4000)


def test_monte_carlo_mean_extinction_time_k3():
    p = BranchingParams(0.5, 1.0, 3)
    times = np.array([simulate_branching(p, child_seed(11, i)).time for i in range(20000)])
    se = times.std(ddof=1) / math.sqrt(len(times))
    assert abs(times.mean() - expected_extinction_time(p)) < 3 * se


def test_validity_horizon():
    p = BranchingParams(2.394, 1.0)
    tb = branching_validity_horizon(p)
    assert extinction_cdf(p, tb) == pytest.approx(0.99 * extinction_probability(p), rel=1e-10)
    assert branching_validity_horizon(p, t_cap=0.5) == 0.5


rates = st.floats(0.01, 5.0)


@settings(max_examples=150, deadline=None)
@given(lam=rates, mu=rates, k=st.integers(1, 6), t=st.floats(0, 50))
def test_power_identity(lam, mu, k, t):
    g1 = extinction_cdf(BranchingParams(lam, mu), t)
    assert extinction_cdf(BranchingParams(lam, mu, k), t) == pytest.approx(g1 ** k, rel=1e-12, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(lam=rates, mu=rates, k=st.integers(1, 6))
def test_cdf_monotone_and_bounded(lam, mu, k):
    p = BranchingParams(lam, mu, k)
    g = extinction_cdf(p, np.linspace(0, 100 / mu, 200))
    assert np.all(np.diff(g) >= -1e-15)
    assert g[0] == 0 and np.all(g <= extinction_probability(p) + 1e-12)


@settings(max_examples=100, deadline=None)
@given(lam=st.floats(0.01, 0.95), k=st.integers(1, 4))
def test_expected_time_matches_survival_integral(lam, k):
    from scipy.integrate import quad
    p = BranchingParams(lam, 1.0, k)
    val, _ = quad(lambda s: 1 - extinction_cdf(p, s), 0, np.inf, epsrel=1e-11, limit=500)
    assert expected_extinction_time(p) == pytest.approx(val, rel=1e-6)
