"""Closed-form fluid limit of the fixed request-rate model.

After dividing every rate by the number of holders, the scaled fractions
satisfy ``y + x = 1 - mu t`` and ``x = x0 (1 - mu t)**xi`` with
``xi = lambda / mu``.  Both phase transitions (terminal fraction at
``xi = 1``, interior torrent peak at ``xi = 1/x0``) are read off these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import FixedRateParams, validate

__all__ = [
    "FixedRateMeanField",
    "TimeOutOfRange",
    "scaled_trajectory",
    "stop_time",
    "terminal_uninfected_fraction",
    "max_torrent",
    "sweep_phase_diagram",
]


class TimeOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class FixedRateMeanField:
    xi: float
    mu: float
    x0: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError(f"xi must be positive, got {self.xi}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not 0 < self.x0 < 1:
            raise ValueError(f"x0 must lie in (0, 1), got {self.x0}")

    @classmethod
    def from_params(cls, params: FixedRateParams) -> "FixedRateMeanField":
        validate(params)
        return cls(params.xi, params.mu, params.x0 / params.n_total)

    @property
    def y0(self) -> float:
        return 1.0 - self.x0


def scaled_trajectory(p: FixedRateMeanField, t):
    """``(y_tilde, x_tilde)`` at time(s) ``t`` in ``[0, 1/mu]``.

    ``y_tilde`` is evaluated as ``s - x0 s**xi`` with ``s = 1 - mu t``, the
    same quantity as ``s (1 - x0 s**(xi-1))`` without the singular power at
    ``s = 0``.  It turns negative after :func:`stop_time` when ``xi < 1``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > 1.0 / p.mu * (1 + 1e-12)):
        raise TimeOutOfRange("t must lie in [0, 1/mu]")
    s = np.clip(1.0 - p.mu * t, 0.0, 1.0)
    x = p.x0 * np.power(s, p.xi)  # 0**xi == 0 for xi > 0
    y = s - x
    if t.ndim == 0:
        return float(y), float(x)
    return y, x


def stop_time(p: FixedRateMeanField) -> float:
    """First zero of ``y_tilde`` on ``[0, 1/mu]``."""
    if p.xi < 1:
        return (1.0 - p.x0 ** (1.0 / (1.0 - p.xi))) / p.mu
    return 1.0 / p.mu


def terminal_uninfected_fraction(p: FixedRateMeanField) -> float:
    """``x0**(1/(1 - xi))`` below ``xi = 1``, zero at and above it."""
    if p.xi < 1:
        return math.exp(math.log(p.x0) / (1.0 - p.xi))
    return 0.0


def max_torrent(p: FixedRateMeanField) -> tuple[float, float]:
    """``(y_max, t_peak)`` of ``y_tilde`` on ``[0, tau]``.

    Interior peak only when ``xi > 1/x0``, at ``s = (xi x0)**(1/(1-xi))``
    where ``d y_tilde / ds = 1 - xi x0 s**(xi-1)`` vanishes.
    """
    xi, x0 = p.xi, p.x0
    if xi * x0 <= 1:
        return 1.0 - x0, 0.0
    expo = 1.0 / (1.0 - xi)
    log_ymax = expo * math.log(x0) + xi * expo * math.log(xi) + math.log(xi - 1.0)
    s_peak = math.exp(expo * math.log(xi * x0))
    return math.exp(log_ymax), (1.0 - s_peak) / p.mu


def sweep_phase_diagram(x0: float, xi_grid, mu: float = 1.0) -> dict[str, np.ndarray]:
    """Terminal fraction, peak size, peak time and stop time over ``xi_grid``."""
    xi_grid = np.asarray(xi_grid, dtype=float)
    if np.any(xi_grid <= 0) or np.any(np.diff(xi_grid) < 0):
        raise ValueError("xi_grid must be positive and sorted")
    out = {k: np.empty_like(xi_grid) for k in ("terminal_fraction", "y_max", "t_peak", "tau")}
    for i, xi in enumerate(xi_grid):
        p = FixedRateMeanField(xi, mu, x0)
        out["terminal_fraction"][i] = terminal_uninfected_fraction(p)
        out["y_max"][i], out["t_peak"][i] = max_torrent(p)
        out["tau"][i] = stop_time(p)
    return {"xi": xi_grid, "x0": np.full_like(xi_grid, x0), **out}
