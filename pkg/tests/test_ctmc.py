import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from p2ptransient.ctmc import (InvalidThreshold, simulate_fixed_rate, simulate_fully_cooperative,
                               simulate_general, simulate_hybrid, simulate_with_publishers)
from p2ptransient.ensemble import child_seed
from p2ptransient.model import ControlParams, FixedRateParams, GeneralParams, InvalidRate, ParameterError

STEPS = {(1, -1, 0), (-1, 0, 0), (0, 0, -1)}


def check_general_path(traj):
    d = np.diff(traj.states, axis=0)
    assert {tuple(r) for r in d} <= STEPS
    assert np.all(np.diff(traj.t) >= 0)
    assert np.all(traj.states >= 0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 60), lam=st.floats(0.005, 0.5), mu=st.floats(0.1, 3),
       share=st.floats(0, 1), seed=st.integers(0, 2**64 - 1))
def test_general_path_transitions(n, lam, mu, share, seed):
    nc = int(share * (n - 1))
    p = GeneralParams(n, lam, mu, 1, nc, n - 1 - nc)
    traj = simulate_general(p, seed)
    check_general_path(traj)
    total = traj.states.sum(axis=1)
    assert np.all(np.diff(total) <= 0)
    if traj.terminal_reason == "absorbed_y_zero":
        assert traj.y[-1] == 0 and traj.extinction_time == traj.t[-1]


def test_single_holder_leaves_after_exponential_time():
    p = GeneralParams(1, 0.1, 2.0, 1, 0, 0)
    times = np.array([simulate_general(p, child_seed(3, i)).extinction_time for i in range(20000)])
    assert abs(times.mean() - 0.5) < 3 * 0.5 / math.sqrt(len(times))


def test_two_peer_first_event_split():
    # from (1, 1, 0) the first event is an infection with probability lam / (lam + mu)
    p = GeneralParams(2, 3.0, 1.0, 1, 1, 0)
    served = np.array([simulate_general(p, child_seed(5, i)).final("xc") == 0 for i in range(20000)])
    assert abs(served.mean() - 0.75) < 3 * math.sqrt(0.75 * 0.25 / 20000)


def test_same_seed_same_path():
    p = GeneralParams(100, 0.02, 1.0, 2, 60, 38)
    a, b = simulate_general(p, 99), simulate_general(p, 99)
    assert np.array_equal(a.t, b.t) and np.array_equal(a.states, b.states)
    assert a.to_csv() == b.to_csv()


def test_time_limit():
    p = GeneralParams(400, 0.006, 1.0, 1, 399, 0)
    traj = simulate_general(p, 1, t_max=0.5)
    assert traj.t[-1] <= 0.5
    assert traj.extinction_time == math.inf or traj.y[-1] == 0


def test_csv_layout(tmp_path):
    traj = simulate_general(GeneralParams(10, 0.2, 1.0, 1, 5, 4), 8)
    text = traj.to_csv()
    lines = text.splitlines()
    assert lines[0] == "t,y,xc,xf"
    assert lines[1] == "0.0,1,5,4"
    assert len(lines) == len(traj) + 1
    traj.to_csv(tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text() == text
    first = next(traj.events())
    assert (first.y, first.xc, first.xf) == (1, 5, 4)


def test_fully_cooperative_reaches_everyone():
    p = GeneralParams(50, 0.05, 0.0, 1, 49, 0)
    traj = simulate_fully_cooperative(p, 4)
    assert traj.y[-1] == 50 and np.all(np.diff(traj.y) == 1)
    assert traj.terminal_reason != "absorbed_y_zero"
    with pytest.raises(InvalidRate):
        simulate_fully_cooperative(GeneralParams(50, 0.05, 1.0, 1, 49, 0), 4)


def test_fully_cooperative_mean_completion_time():
    # sum of exponential holding times with rates lam * k * (N - k)
    n, lam = 20, 0.1
    p = GeneralParams(n, lam, 0.0, 1, n - 1, 0)
    exact = sum(1 / (lam * k * (n - k)) for k in range(1, n))
    t = np.array([simulate_fully_cooperative(p, child_seed(1, i)).t[-1] for i in range(5000)])
    assert abs(t.mean() - exact) < 3 * t.std(ddof=1) / math.sqrt(len(t))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 80), lam=st.floats(0.1, 5), mu=st.floats(0.1, 3), seed=st.integers(0, 2**64 - 1))
def test_fixed_rate_transitions(n, lam, mu, seed):
    traj = simulate_fixed_rate(FixedRateParams(n, lam, mu, 1), seed)
    d = {tuple(r) for r in np.diff(traj.states, axis=0)}
    assert d <= {(1, -1), (-1, 0)}
    assert traj.y[-1] == 0 or traj.terminal_reason != "absorbed_y_zero"


def test_publishers_never_lose_the_file():
    p = ControlParams(100, 2.0, 0.5, 2.0, 0.02, 0.0, 0.98)
    traj = simulate_with_publishers(p, 3)
    assert traj.final("x") == 0
    assert {tuple(r) for r in np.diff(traj.states, axis=0)} <= {(1, -1), (-1, 0)}


def test_hybrid():
    p = GeneralParams(400, 0.006, 1.0, 1, 399, 0)
    out = [simulate_hybrid(p, child_seed(2, i), 10) for i in range(400)]
    early = np.mean([o.early_extinction for o in out])
    q = 1 / p.rho
    assert abs(early - q) < 3 * math.sqrt(q * (1 - q) / 400)
    late = [o for o in out if not o.early_extinction]
    assert all(o.xc_final < o.xc_switch for o in late)
    with pytest.raises(InvalidThreshold):
        simulate_hybrid(p, 1, 1)


def test_rejects_empty_start():
    with pytest.raises(ParameterError):
        simulate_general(GeneralParams(5, 0.1, 1.0, 0, 3, 2), 1)
