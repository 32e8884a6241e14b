"""Linear birth-death branching approximation.

Replacing the shrinking pool of cooperative peers without the file by its
initial size ``nc`` turns the epidemic into a branching process where each
holder independently recruits at rate ``lambda * nc`` and leaves at rate
``mu``.  Everything here is closed form apart from the expected extinction
time with more than one initial holder, which is a quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .model import GeneralParams, validate

__all__ = [
    "BranchingParams",
    "Supercritical",
    "extinction_probability",
    "extinction_cdf",
    "expected_extinction_time",
    "survival_upper_bound",
    "branching_validity_horizon",
]

# |rho - 1| below this uses the critical closed form.
CRITICAL_TOL = 1e-9


class Supercritical(ValueError):
    """Raised for quantities only defined when extinction is certain."""


@dataclass(frozen=True)
class BranchingParams:
    lambda_nc: float
    mu: float
    k: int = 1

    def __post_init__(self):
        if not self.lambda_nc >= 0:
            raise ValueError(f"lambda_nc must be non-negative, got {self.lambda_nc}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")

    @classmethod
    def from_general(cls, params: GeneralParams, k: int | None = None) -> "BranchingParams":
        validate(params)
        return cls(params.lam * params.nc, params.mu, params.y0 if k is None else k)

    @property
    def rho(self) -> float:
        return self.lambda_nc / self.mu

    @property
    def u(self) -> float:
        """Total per-object event rate."""
        return self.lambda_nc + self.mu

    @property
    def p_death(self) -> float:
        return self.mu / self.u

    @property
    def p_birth(self) -> float:
        return self.lambda_nc / self.u


def extinction_probability(p: BranchingParams) -> float:
    """``min(1, 1/rho)**k``."""
    if p.rho <= 1:
        return 1.0
    return (1.0 / p.rho) ** p.k


def _cdf_one(p: BranchingParams, t: np.ndarray) -> np.ndarray:
    eps = 1.0 - p.rho
    if abs(eps) < CRITICAL_TOL:
        mt = p.mu * t
        return mt / (1.0 + mt)
    a = p.mu * eps
    if eps > 0:
        # (1 - e^{-at}) / (1 - rho e^{-at}), written so that both terms
        # carry the factor eps explicitly and nothing cancels near rho = 1.
        num = -np.expm1(-a * t)
        return num / (num + eps * np.exp(-a * t))
    # Supercritical: multiply through by e^{at}, which decays here.
    num = np.expm1(a * t)
    return num / (num + eps)


def extinction_cdf(p: BranchingParams, t):
    """``G_k(t) = P(T_b(k) <= t)``; accepts scalars or arrays."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("extinction_cdf requires t >= 0")
    g = _cdf_one(p, t_arr) ** p.k
    return float(g) if g.ndim == 0 else g


def survival_upper_bound(p: BranchingParams, t):
    """``1 - G_k(t)``.  Upper bound on ``P(T(k) > t)`` for the full epidemic
    started from ``k`` holders."""
    g = extinction_cdf(p, t)
    return 1.0 - g


def expected_extinction_time(p: BranchingParams) -> float:
    """Mean extinction time, subcritical only.

    One initial holder has the closed form ``-log(1 - rho) / (mu rho)``; for
    ``k > 1`` the survival function is integrated numerically.
    """
    rho = p.rho
    if rho >= 1:
        raise Supercritical(f"expected extinction time needs rho < 1, got {rho}")
    if p.k == 1:
        if rho == 0:
            return 1.0 / p.mu
        return -math.log1p(-rho) / (p.mu * rho)

    a = p.mu * (1.0 - rho)
    # 1 - G_k <= k e^{-a t}; pick T so the integrand is below 1e-12.
    t_end = (math.log(p.k) + 12 * math.log(10)) / a
    val, _ = integrate.quad(lambda s: 1.0 - extinction_cdf(p, s), 0.0, t_end,
                            epsabs=0.0, epsrel=1e-10, limit=400)
    # Far tail: 1 - G_k ~ k (1 - rho) e^{-a t} / (1 - rho e^{-a t}) ~ k e^{-a t} (1 - rho)
    tail = p.k * (1.0 - rho) * math.exp(-a * t_end) / a
    return val + tail


def branching_validity_horizon(p: BranchingParams, level: float = 0.99, t_cap: float | None = None) -> float:
    """Earliest ``t`` with ``G_k(t) >= level * q_k``.

    Used as the end of the window where the branching CDF is compared with
    simulated extinction times.
    """
    q = extinction_probability(p)
    target = level * q
    hi = 1.0 / p.mu
    while extinction_cdf(p, hi) < target:
        hi *= 2.0
        if t_cap is not None and hi > t_cap:
            return t_cap
    return optimize.bisect(lambda s: extinction_cdf(p, s) - target, 0.0, hi, xtol=1e-12)
