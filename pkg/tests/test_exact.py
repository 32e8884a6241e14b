import numpy as np
import pytest
from scipy.linalg import expm

from p2ptransient.ensemble import child_seed, empirical_cdf, run_ensemble
from p2ptransient.exact import StateSpaceTooLarge, exact_small_n
from p2ptransient.model import GeneralParams, ParameterError


def test_two_peer_terminal_distribution():
    sol = exact_small_n(GeneralParams(2, 3.0, 1.0, 1, 1, 0))
    assert sol.terminal[(0, 0)] == pytest.approx(0.75, abs=1e-14)
    assert sol.terminal[(1, 0)] == pytest.approx(0.25, abs=1e-14)


def test_two_peer_free_rider():
    # (1, 0, 1): serve at rate lam, leave at rate mu
    sol = exact_small_n(GeneralParams(2, 1.0, 2.0, 1, 0, 1))
    assert sol.terminal[(0, 0)] == pytest.approx(1 / 3, abs=1e-14)


def test_extinction_cdf_against_matrix_exponential():
    p = GeneralParams(5, 1.0, 1.0, 1, 2, 2)
    grid = np.linspace(0, 6, 13)
    sol = exact_small_n(p, grid)
    start = sol.states.index((1, 2, 2))
    absorbing = np.array([s[0] == 0 for s in sol.states])
    ref = [expm(sol.Q * t)[start, absorbing].sum() for t in grid]
    assert np.max(np.abs(sol.extinction_cdf - ref)) < 1e-9
    assert np.all(np.diff(sol.extinction_cdf) >= -1e-12)


def test_probabilities_sum_to_one():
    sol = exact_small_n(GeneralParams(8, 0.7, 1.0, 2, 3, 3))
    assert sum(sol.terminal.values()) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sol.Q.sum(axis=1), 0.0)


def test_limits():
    with pytest.raises(StateSpaceTooLarge):
        exact_small_n(GeneralParams(9, 1.0, 1.0, 1, 4, 4))
    with pytest.raises(ParameterError):
        exact_small_n(GeneralParams(4, 1.0, 0.0, 1, 3, 0))


def test_monte_carlo_agreement():
    p = GeneralParams(4, 1.0, 1.0, 1, 2, 1)
    sol = exact_small_n(p, [1.0, 3.0])
    R = 20000
    ens = run_ensemble("general", p, child_seed(9, 4), R)
    for (xc, xf), prob in sol.terminal.items():
        frac = np.mean((ens.final_xc == xc) & (ens.final_xf == xf))
        assert abs(frac - prob) < 4 * np.sqrt(prob * (1 - prob) / R) + 1e-12
    f = empirical_cdf(ens.extinction_time)
    for t, prob in zip(sol.t_grid, sol.extinction_cdf):
        assert abs(f(t) - prob) < 4 * np.sqrt(prob * (1 - prob) / R)
