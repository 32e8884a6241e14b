"""Fluid limit of the free-rider epidemic.

With ``lambda = beta / N`` the rescaled counts follow

    y'  = y (beta xc - mu)
    xc' = -beta y xc
    xf' = -beta y xf

and ``xc + y - log(xc) / theta`` (``theta = beta / mu``) is a first integral.
The terminal uninfected fraction, the peak of ``y`` and the terminal time
all follow from that integral without integrating the ODEs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .model import GeneralParams, validate

__all__ = [
    "MeanFieldParams",
    "MeanFieldPath",
    "BracketFailure",
    "NonPositiveXc",
    "fully_coop_closed_form",
    "integrate_ode",
    "conserved_quantity",
    "peak_fraction",
    "terminal_uninfected",
    "terminal_time",
    "phase_transition_theta",
    "phase_sweep",
]

Y_FLOOR = 1e-14


class BracketFailure(RuntimeError):
    pass


class NonPositiveXc(ValueError):
    pass


@dataclass(frozen=True)
class MeanFieldParams:
    """Initial fractions and rates.  The fractions may sum to less than one
    (peers that already left), never more."""

    beta: float
    mu: float
    y0: float
    xc0: float
    xf0: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be non-negative, got {self.mu}")
        if not 0 < self.y0 <= 1:
            raise ValueError(f"y0 must lie in (0, 1], got {self.y0}")
        if self.xc0 < 0 or self.xf0 < 0:
            raise ValueError("initial fractions must be non-negative")
        if self.y0 + self.xc0 + self.xf0 > 1 + 1e-12:
            raise ValueError("initial fractions sum to more than 1")

    @classmethod
    def from_general(cls, params: GeneralParams) -> "MeanFieldParams":
        validate(params)
        n = params.n_total
        return cls(params.beta, params.mu, params.y0 / n, params.nc / n, params.nf / n)

    @property
    def theta(self) -> float:
        if self.mu == 0:
            raise ZeroDivisionError("theta is undefined for mu = 0")
        return self.beta / self.mu

    @property
    def phi(self) -> float:
        return self.xc0 + self.y0 - math.log(self.xc0) / self.theta


@dataclass(frozen=True)
class MeanFieldPath:
    t: np.ndarray
    y: np.ndarray
    xc: np.ndarray
    xf: np.ndarray

    def states(self):
        from .model import MeanFieldState
        for row in zip(self.t, self.y, self.xc, self.xf):
            yield MeanFieldState(*map(float, row))


def fully_coop_closed_form(beta: float, y0: float, t):
    """Logistic solution ``y0 / (y0 + (1 - y0) exp(-beta t))`` of
    ``y' = beta y (1 - y)``."""
    if not 0 < y0 <= 1:
        raise ValueError(f"y0 must lie in (0, 1], got {y0}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    out = y0 / (y0 + (1.0 - y0) * np.exp(-beta * t))
    return float(out) if out.ndim == 0 else out


def _rhs(beta, mu):
    def f(t, u):
        y, xc, xf = u
        return (y * (beta * xc - mu), -beta * y * xc, -beta * y * xf)
    return f


def integrate_ode(p: MeanFieldParams, t_end: float, dt_hint: float = 0.01,
                  rtol: float = 1e-11, atol: float = 1e-13) -> MeanFieldPath:
    """Integrate the fluid ODEs on ``[0, t_end]`` and sample on a uniform grid
    of spacing at most ``dt_hint``.

    Integration stops once ``y`` drops below 1e-14; later samples hold the
    uninfected fractions fixed and decay ``y`` by the linearised equation.
    """
    if not p.mu > 0:
        raise ValueError("integrate_ode requires mu > 0")
    n = max(int(math.ceil(t_end / dt_hint)), 1)
    grid = np.linspace(0.0, t_end, n + 1)

    def y_small(t, u):
        return u[0] - Y_FLOOR
    y_small.terminal = True
    y_small.direction = -1

    sol = integrate.solve_ivp(_rhs(p.beta, p.mu), (0.0, t_end), (p.y0, p.xc0, p.xf0),
                              method="DOP853", rtol=rtol, atol=atol, dense_output=True,
                              events=y_small)
    t_stop = sol.t[-1]
    inside = grid <= t_stop
    y = np.empty_like(grid)
    xc = np.empty_like(grid)
    xf = np.empty_like(grid)
    y[inside], xc[inside], xf[inside] = sol.sol(grid[inside])
    if not inside.all():
        ys, xcs, xfs = sol.y[:, -1]
        rest = grid[~inside]
        y[~inside] = ys * np.exp((p.beta * xcs - p.mu) * (rest - t_stop))
        xc[~inside] = xcs
        xf[~inside] = xfs
    return MeanFieldPath(grid, y, xc, xf)


def conserved_quantity(state, p: MeanFieldParams):
    """``xc + y - log(xc) / theta``; equals ``p.phi`` along exact solutions.

    ``state`` is anything with ``y`` and ``xc`` attributes (a
    :class:`MeanFieldState` or a :class:`MeanFieldPath`).
    """
    xc = np.asarray(state.xc, dtype=float)
    if np.any(xc <= 0):
        raise NonPositiveXc("conserved quantity needs xc > 0")
    out = xc + np.asarray(state.y, dtype=float) - np.log(xc) / p.theta
    return float(out) if out.ndim == 0 else out


def peak_fraction(p: MeanFieldParams) -> tuple[float, float]:
    """Largest fraction of holders and the value of ``xc`` where it occurs.

    ``y`` rises while ``beta xc > mu``, so an interior peak at ``xc = 1/theta``
    exists only when ``theta * xc0 > 1``; otherwise the peak is at ``t = 0``.
    """
    theta = p.theta
    if theta * p.xc0 > 1:
        return -(1.0 + math.log(theta)) / theta + p.phi, 1.0 / theta
    return p.y0, p.xc0


def terminal_uninfected(p: MeanFieldParams) -> tuple[float, float]:
    """Fractions ``(xc_inf, xf_inf)`` of peers that never get the file.

    ``xc_inf`` is the root in ``(0, xc0)`` of ``x - log(x)/theta = phi``.
    The solve runs on ``log x`` so that roots far below the smallest normal
    double are still bracketed; the result then underflows to 0.
    """
    if not p.mu > 0:
        raise ValueError("terminal_uninfected requires mu > 0")
    if p.xc0 <= 0:
        # y decays as y0 exp(-mu t); free riders see int y dt = y0 / mu
        return 0.0, p.xf0 * math.exp(-p.theta * p.y0)
    theta, phi = p.theta, p.phi

    def g(u):
        return math.exp(u) - u / theta - phi

    hi = math.log(p.xc0)
    lo = -theta * phi - 1.0  # g(lo) = exp(lo) + 1/theta > 0
    if not (g(lo) > 0 > g(hi)):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    u = optimize.bisect(g, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=2000)
    x = math.exp(u)
    return x, p.xf0 * x / p.xc0


def terminal_time(p: MeanFieldParams) -> float:
    """Root ``tau > 0`` of ``xc0 + y0 = xc0 exp(-beta tau) + mu tau``.

    In the time-changed system (rates divided by ``y``) every uninfected
    fraction decays as ``exp(-beta s)`` and holders are exhausted at
    ``s = tau``, so ``xc0 exp(-beta tau)`` equals the terminal fraction.
    """
    if not p.mu > 0:
        raise ValueError("terminal_time requires mu > 0")

    def h(tau):
        return p.xc0 * math.exp(-p.beta * tau) + p.mu * tau - p.xc0 - p.y0

    hi = (p.xc0 + p.y0) / p.mu + 1.0 / p.beta
    return optimize.bisect(h, 0.0, hi, xtol=1e-10, maxiter=500)


def phase_transition_theta(xc0: float) -> float:
    """Location ``theta = 1/xc0`` of the jump in the terminal fraction."""
    if not 0 < xc0 <= 1:
        raise ValueError(f"xc0 must lie in (0, 1], got {xc0}")
    return 1.0 / xc0


def phase_sweep(y0: float, xc0: float, theta_xc0, mu: float = 1.0) -> dict[str, np.ndarray]:
    """Tabulate terminal fractions, peak and terminal time against
    ``theta * xc0``.  Free riders make up the rest of the population."""
    theta_xc0 = np.asarray(theta_xc0, dtype=float)
    xf0 = max(1.0 - y0 - xc0, 0.0)
    cols = {k: np.empty_like(theta_xc0) for k in ("xc_inf", "xf_inf", "y_max", "tau")}
    for i, s in enumerate(theta_xc0):
        p = MeanFieldParams(beta=s / xc0 * mu, mu=mu, y0=y0, xc0=xc0, xf0=xf0)
        cols["xc_inf"][i], cols["xf_inf"][i] = terminal_uninfected(p)
        cols["y_max"][i] = peak_fraction(p)[0]
        cols["tau"][i] = terminal_time(p)
    return {"theta_xc0": theta_xc0, **cols}
