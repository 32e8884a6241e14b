"""One test per acceptance criterion.

Each test runs the matching suite from :mod:`p2ptransient.validation`,
prints a PASS/FAIL line and asserts the suite's verdict.  A summary of all
lines is repeated at the end of the pytest run.
"""

import json

import pytest

from conftest import ACCEPTANCE
from p2ptransient.validation import run_suite


def _failed_checks(result):
    return {k: v for k, v in result["checks"].items() if not v["passed"]}


def _verdict(num, title, suite):
    result = run_suite(suite)
    passed = bool(result["passed"])
    ACCEPTANCE[num] = (title, passed)
    print(f"{'PASS' if passed else 'FAIL'}  criterion {num}: {title}")
    assert passed, json.dumps(_failed_checks(result), indent=1, default=str)[:4000]


def test_c01_branching_extinction_probability():
    _verdict(1, "branching extinction frequency equals 1/rho", "branching_extinction")


def test_c02_expected_extinction_time_identity():
    _verdict(2, "closed-form mean extinction time equals survival integral", "expected_time")


def test_c03_stochastic_dominance():
    _verdict(3, "general-model survival below branching survival", "dominance")


def test_c04_early_extinction_cdf():
    _verdict(4, "early-extinction CDF within 0.05 of G on [0, T_B], late rise", "early_cdf")


def test_c05_early_mean_extinction_time():
    _verdict(5, "early mean extinction time matches E[T_b(k)]", "early_mean")


def test_c06_fully_cooperative_bound():
    _verdict(6, "fully cooperative mean below logistic curve", "prop1_bound")


def test_c07_meanfield_terminal_accuracy():
    _verdict(7, "terminal uninfected fraction within 3% / 8% of fluid limit", "meanfield_accuracy")


def test_c08_phase_transition():
    _verdict(8, "terminal fraction collapses across theta*xc0 = 1", "phase_transition")


def test_c09_fixed_rate_transitions():
    _verdict(9, "fixed-rate terminal fraction, peak formula and continuity", "fixed_rate")


def test_c10_small_n_oracle():
    _verdict(10, "exact small-N solution matches Monte Carlo", "small_n_oracle")


def test_c11_control_problem():
    _verdict(11, "delay bounds, interior optimum, beta/mu(alpha*) in [1.5, 3.5]", "control")


def test_c12_determinism():
    _verdict(12, "figure presets rerun to byte-identical CSVs", "determinism")
