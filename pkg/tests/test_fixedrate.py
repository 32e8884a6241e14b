import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rk4
from p2ptransient.fixedrate import (FixedRateMeanField, TimeOutOfRange, max_torrent, scaled_trajectory,
                                    stop_time, sweep_phase_diagram, terminal_uninfected_fraction)
from p2ptransient.model import FixedRateParams


def test_reference_values():
    p = FixedRateMeanField(2.0, 1.0, 0.8)
    assert scaled_trajectory(p, 0.5) == pytest.approx((0.3, 0.2), abs=1e-15)
    assert max_torrent(p) == pytest.approx((0.3125, 0.375), abs=1e-14)
    assert stop_time(FixedRateMeanField(0.5, 1.0, 0.8)) == pytest.approx(0.36, abs=1e-14)
    assert terminal_uninfected_fraction(FixedRateMeanField(0.5, 1.0, 0.8)) == pytest.approx(0.64, abs=1e-14)
    assert terminal_uninfected_fraction(FixedRateMeanField(1.0, 1.0, 0.8)) == 0.0


def test_trajectory_solves_scaled_ode():
    xi, mu, x0 = 0.7, 1.3, 0.6
    p = FixedRateMeanField(xi, mu, x0)

    def f(t, u):
        y, x = u
        return np.array([-mu + xi * mu * x / (x + y), -xi * mu * x / (x + y)])

    t_end = 0.9 * stop_time(p)
    ts, u = rk4(f, [1 - x0, x0], t_end, 4000)
    y, x = scaled_trajectory(p, ts)
    assert np.allclose(y, u[:, 0], atol=1e-10) and np.allclose(x, u[:, 1], atol=1e-10)


def test_out_of_range_time():
    p = FixedRateMeanField(2.0, 2.0, 0.8)
    with pytest.raises(TimeOutOfRange):
        scaled_trajectory(p, 0.6)
    with pytest.raises(TimeOutOfRange):
        scaled_trajectory(p, -0.1)


def test_peak_kink_at_inverse_x0():
    x0 = 0.8
    left = max_torrent(FixedRateMeanField(1.25 * (1 - 1e-9), 1.0, x0))
    right = max_torrent(FixedRateMeanField(1.25 * (1 + 1e-9), 1.0, x0))
    assert left[0] == pytest.approx(right[0], abs=1e-9)
    assert left[1] == 0.0 and right[1] < 1e-6
    assert max_torrent(FixedRateMeanField(3.0, 1.0, x0))[0] > 0.2


def test_sweep():
    out = sweep_phase_diagram(0.8, [0.5, 1.0, 2.0])
    assert out["terminal_fraction"] == pytest.approx([0.64, 0.0, 0.0])
    with pytest.raises(ValueError):
        sweep_phase_diagram(0.8, [2.0, 1.0])


def test_from_params():
    p = FixedRateMeanField.from_params(FixedRateParams(100, 1.5, 0.5, 20))
    assert (p.xi, p.x0) == pytest.approx((3.0, 0.8))


@settings(max_examples=200, deadline=None)
@given(xi=st.floats(0.05, 10), mu=st.floats(0.1, 5), x0=st.floats(0.01, 0.99), frac=st.floats(0, 1))
def test_sum_identity(xi, mu, x0, frac):
    p = FixedRateMeanField(xi, mu, x0)
    t = frac / mu
    y, x = scaled_trajectory(p, t)
    assert y + x == pytest.approx(1 - mu * t, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(xi=st.floats(0.05, 10), x0=st.floats(0.01, 0.99))
def test_peak_is_maximum_of_trajectory(xi, x0):
    p = FixedRateMeanField(xi, 1.0, x0)
    y_max, t_peak = max_torrent(p)
    y, _ = scaled_trajectory(p, np.linspace(0, stop_time(p), 2001))
    assert y_max >= y.max() - 1e-12
    assert scaled_trajectory(p, t_peak)[0] == pytest.approx(y_max, abs=1e-12)
