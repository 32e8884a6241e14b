"""Investment against cooperation, with permanent publishers.

The content owner spends ``alpha`` to raise the departure rate to
``mu(alpha)``.  Holders ``y`` and peers still waiting ``x`` follow

    y' = beta (y + y*) x - mu(alpha) y
    x' = -beta (y + y*) x

and a tagged waiting peer gets the file at rate ``beta (y + y*)``, so its
mean delay is ``T(alpha) = int_0^inf exp(-beta I(t)) dt`` with
``I(t) = int_0^t (y + y*) ds``.  The owner maximises ``T(alpha) - alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .model import ControlParams, validate

__all__ = [
    "ControlPath",
    "DelayCurve",
    "NoInteriorMax",
    "integrate_control_ode",
    "expected_delay",
    "utility",
    "delay_curve",
    "optimize_alpha",
    "acquisition_cdf",
]

RTOL = 1e-10
ATOL = 1e-14
# Outer integrand cut-off.
INTEGRAND_FLOOR = 1e-12


class NoInteriorMax(RuntimeError):
    """The utility peaks at an end of the search range."""

    def __init__(self, alpha: float, value: float):
        super().__init__(f"utility is maximised at the range endpoint alpha={alpha:g} (h={value:g})")
        self.alpha = alpha
        self.value = value


@dataclass(frozen=True)
class ControlPath:
    t: np.ndarray
    y: np.ndarray
    x: np.ndarray
    cumulative: np.ndarray  # I(t)


def _rhs(beta, mu, y_star):
    def f(t, u):
        y, x = u[0], u[1]
        src = y + y_star
        inf = beta * src * x
        return (inf - mu * y, -inf, src, math.exp(-beta * u[2]))
    return f


def _solve(p: ControlParams, t_end: float | None, dense: bool):
    beta, y_star = p.beta, p.y_star
    mu = p.mu_of_alpha
    cutoff = -math.log(INTEGRAND_FLOOR) / beta

    def small_integrand(t, u):
        return u[2] - cutoff
    small_integrand.terminal = True
    small_integrand.direction = 1

    # Until the cut-off, I(t) >= y* t, so this horizon is never reached.
    horizon = cutoff / y_star * 1.01 if t_end is None else t_end
    return integrate.solve_ivp(_rhs(beta, mu, y_star), (0.0, horizon), (p.y0, p.x0, 0.0, 0.0),
                               method="LSODA", rtol=RTOL, atol=ATOL, dense_output=dense,
                               events=None if t_end is not None else small_integrand)


def integrate_control_ode(p: ControlParams, t_end: float, dt: float = 0.01) -> ControlPath:
    """Sample ``(y, x, I)`` on a uniform grid over ``[0, t_end]``."""
    validate(p)
    sol = _solve(p, t_end, dense=True)
    grid = np.linspace(0.0, t_end, max(int(math.ceil(t_end / dt)), 1) + 1)
    y, x, cum, _ = sol.sol(grid)
    return ControlPath(grid, y, x, cum)


def expected_delay(p: ControlParams) -> float:
    """``T(alpha)``: mean time for a tagged waiting peer to get the file.

    The outer integral is carried as a fourth ODE component and truncated
    once ``exp(-beta I) < 1e-12``.  Beyond that point ``I`` grows at least
    at rate ``y*``, which bounds the remainder by
    ``exp(-beta I(T)) / (beta y*)``; that bound is added.
    """
    validate(p)
    sol = _solve(p, None, dense=False)
    i_end, j_end = sol.y[2, -1], sol.y[3, -1]
    return float(j_end + math.exp(-p.beta * i_end) / (p.beta * p.y_star))


def utility(p: ControlParams, cost_scale: float = 1.0) -> float:
    """``T(alpha) - cost_scale * alpha``.  ``cost_scale`` converts money to
    time units and defaults to 1."""
    return expected_delay(p) - cost_scale * p.alpha


@dataclass(frozen=True)
class DelayCurve:
    alpha: np.ndarray
    t_bar: np.ndarray
    h: np.ndarray
    beta_over_mu_alpha: np.ndarray

    def as_columns(self) -> dict[str, np.ndarray]:
        return {"alpha": self.alpha, "T_bar": self.t_bar, "h": self.h,
                "beta_over_mu_alpha": self.beta_over_mu_alpha}


def delay_curve(p_template: ControlParams, alpha_grid, cost_scale: float = 1.0) -> DelayCurve:
    alpha = np.asarray(alpha_grid, dtype=float)
    if np.any(np.diff(alpha) <= 0):
        raise ValueError("alpha grid must be strictly increasing")
    t_bar = np.array([expected_delay(p_template.with_alpha(a)) for a in alpha])
    mu = np.array([p_template.with_alpha(a).mu_of_alpha for a in alpha])
    with np.errstate(divide="ignore"):
        ratio = np.where(mu > 0, p_template.beta / np.where(mu > 0, mu, 1.0), np.inf)
    return DelayCurve(alpha, t_bar, t_bar - cost_scale * alpha, ratio)


def optimize_alpha(p_template: ControlParams, alpha_range: tuple[float, float],
                   cost_scale: float = 1.0, n_coarse: int = 32,
                   tol: float = 1e-4) -> tuple[float, float]:
    """Maximise the utility over ``alpha_range``.

    A coarse scan brackets the best grid point; golden-section search then
    refines it to ``tol`` in ``alpha``.  Raises :class:`NoInteriorMax` if the
    scan peaks at an end of the range.
    """
    lo, hi = map(float, alpha_range)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad alpha range {alpha_range}")

    def h(a):
        return utility(p_template.with_alpha(a), cost_scale)

    if hi == lo:
        return lo, h(lo)
    grid = np.linspace(lo, hi, n_coarse)
    values = np.array([h(a) for a in grid])
    i = int(np.argmax(values))
    if i == 0 or i == n_coarse - 1:
        raise NoInteriorMax(grid[i], values[i])
    a_star = optimize.golden(lambda a: -h(a), brack=(grid[i - 1], grid[i], grid[i + 1]),
                             tol=tol / max(abs(grid[i]), 1.0) / 2)
    h_star = h(a_star)
    if h_star < values[i]:
        return float(grid[i]), float(values[i])
    return float(a_star), float(h_star)


def acquisition_cdf(p: ControlParams, t):
    """Fluid-limit probability ``1 - exp(-beta I(t))`` that a tagged waiting
    peer holds the file by time ``t``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    t_max = float(t_arr.max()) if t_arr.size else 0.0
    if t_max == 0:
        out = np.zeros_like(t_arr)
    else:
        sol = _solve(validate(p), t_max, dense=True)
        cum = sol.sol(t_arr.ravel())[2].reshape(t_arr.shape)
        out = -np.expm1(-p.beta * cum)
    return float(out) if out.ndim == 0 else out
