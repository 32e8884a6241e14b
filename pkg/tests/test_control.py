import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from p2ptransient.control import (NoInteriorMax, acquisition_cdf, delay_curve, expected_delay,
                                  integrate_control_ode, optimize_alpha, utility)
from p2ptransient.ensemble import ensemble_on_grid
from p2ptransient.model import ControlParams, InvalidFractions, validate

N = 500
BASE = ControlParams(N, 2.0, 0.5, 2.0, 2 / N, 0.0, 498 / N)


def delay_oracle(p):
    """Integrate (y, x, I) with an explicit high-order scheme, then take the
    outer integral by adaptive quadrature on the dense solution."""
    mu, ys = p.mu_of_alpha, p.y_star

    def f(t, u):
        src = u[0] + ys
        return [p.beta * src * u[1] - mu * u[0], -p.beta * src * u[1], src]

    t_end = 40.0 / (p.beta * ys)
    sol = integrate.solve_ivp(f, (0, t_end), [p.y0, p.x0, 0.0], method="DOP853",
                              rtol=1e-12, atol=1e-14, dense_output=True)
    kinks = np.linspace(0, t_end, 401)
    return sum(integrate.quad(lambda t: math.exp(-p.beta * sol.sol(t)[2]), a, b, epsrel=1e-12)[0]
               for a, b in zip(kinks[:-1], kinks[1:]))


def test_path_shape():
    p = BASE
    path = integrate_control_ode(p, 40.0)
    i = int(np.argmax(path.y))
    assert path.y[0] == 0 and 0 < i < len(path.t) - 1
    assert path.y[-1] < 0.01 * path.y.max()
    assert np.all(np.diff(path.x) <= 1e-15)


def test_path_against_explicit_integrator():
    p = BASE
    path = integrate_control_ode(p, 30.0, dt=0.1)
    mu = p.mu_of_alpha

    def f(t, u):
        src = u[0] + p.y_star
        return [p.beta * src * u[1] - mu * u[0], -p.beta * src * u[1]]

    ref = integrate.solve_ivp(f, (0, 30), [p.y0, p.x0], method="DOP853", rtol=1e-12,
                              atol=1e-14, t_eval=path.t)
    assert np.max(np.abs(ref.y[0] - path.y)) < 1e-7
    assert np.max(np.abs(ref.y[1] - path.x)) < 1e-7


def test_no_waiting_peers_gives_pure_decay():
    p = ControlParams(N, 2.0, 0.5, 2.0, 2 / N, 498 / N, 0.0)
    path = integrate_control_ode(p, 5.0)
    assert np.allclose(path.x, 0.0)
    assert np.allclose(path.y, 498 / N * np.exp(-path.t), rtol=1e-7)


def test_zero_publishers_rejected():
    with pytest.raises(InvalidFractions):
        validate(ControlParams(N, 2.0, 0.5, 2.0, 0.0, 0.0, 1.0))


@pytest.mark.parametrize("alpha", [0.0, 1.0, 4.0, 20.0])
def test_delay_matches_oracle(alpha):
    p = BASE.with_alpha(alpha)
    assert expected_delay(p) == pytest.approx(delay_oracle(p), rel=1e-6)


def test_delay_limit_for_instant_departures():
    p = BASE.with_alpha(1e7)
    assert expected_delay(p) == pytest.approx(1 / (p.beta * p.y_star), rel=1e-4)


def test_delay_non_decreasing_in_alpha():
    t = [expected_delay(BASE.with_alpha(a)) for a in np.linspace(0, 40, 10)]
    assert np.all(np.diff(t) >= -1e-9)


def test_utility_and_curve():
    p = BASE.with_alpha(0.0)
    assert utility(p) == pytest.approx(expected_delay(p))
    assert utility(BASE.with_alpha(1e4)) < 0
    curve = delay_curve(BASE, [0.0, 1.0, 2.0])
    assert curve.beta_over_mu_alpha[0] == math.inf
    assert curve.beta_over_mu_alpha[2] == pytest.approx(2.0)
    assert np.allclose(curve.h, curve.t_bar - curve.alpha)
    with pytest.raises(ValueError):
        delay_curve(BASE, [1.0, 1.0])


def test_optimizer():
    a_star, h_star = optimize_alpha(BASE, (0.5, 40.0))
    assert 0.5 < a_star < 40
    for a in np.linspace(0.5, 40, 15):
        assert utility(BASE.with_alpha(a)) <= h_star + 1e-9
    assert h_star >= utility(BASE.with_alpha(0.5))


def test_optimizer_endpoint_and_degenerate():
    with pytest.raises(NoInteriorMax) as err:
        optimize_alpha(BASE, (60.0, 200.0))
    assert err.value.alpha == 60.0
    assert optimize_alpha(BASE, (3.0, 3.0)) == (3.0, utility(BASE.with_alpha(3.0)))


def test_acquisition_cdf_limits():
    assert acquisition_cdf(BASE, 0.0) == 0.0
    assert acquisition_cdf(BASE, 1e4) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        acquisition_cdf(BASE, -1.0)


def test_acquisition_cdf_against_finite_network():
    # a tagged waiting peer is served by t with probability E[1 - X(t)/X(0)]
    grid = np.linspace(0, 15, 61)
    p = BASE
    x = ensemble_on_grid("publishers", p, 2024, 500, grid, column="x")
    empirical = 1 - x.mean(axis=0) / x[:, 0].mean()
    assert np.max(np.abs(empirical - acquisition_cdf(p, grid))) < 0.05


control_params = st.builds(
    lambda beta, mu, alpha, ys, y0: ControlParams(N, beta, mu, alpha, ys, y0 * (1 - ys), (1 - y0) * (1 - ys)),
    st.floats(0.2, 5), st.floats(0.05, 2), st.floats(0, 30), st.floats(1e-3, 0.2), st.floats(0, 0.5))


@settings(max_examples=40, deadline=None)
@given(control_params)
def test_delay_bounds(p):
    t = expected_delay(p)
    assert 1 / p.beta - 1e-9 <= t <= 1 / (p.beta * p.y_star) * (1 + 1e-9)


@settings(max_examples=30, deadline=None)
@given(control_params)
def test_acquisition_cdf_monotone(p):
    f = acquisition_cdf(p, np.linspace(0, 20, 50))
    assert np.all(np.diff(f) >= -1e-12) and np.all((0 <= f) & (f <= 1))
