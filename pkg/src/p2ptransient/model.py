"""Parameter containers and state records shared by every model.

Counts are exact integers and fractions are floats.  Containers are frozen
dataclasses; call :func:`validate` before handing one to a simulator or an
analytic routine (all public entry points in this package do so).

The JSON form uses the field names listed on each class, except that the
contact rate attribute ``lam`` is written as ``"lambda"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, NamedTuple

import numpy as np

__all__ = [
    "ParameterError",
    "InvalidCounts",
    "InvalidRate",
    "InvalidFractions",
    "GeneralParams",
    "GeneralState",
    "FixedRateParams",
    "FixedRateState",
    "ControlParams",
    "MeanFieldState",
    "validate",
    "derived_quantities",
    "params_to_json",
    "params_from_json",
]

FRACTION_TOL = 1e-12


class ParameterError(ValueError):
    """Base class for rejected parameter sets."""


class InvalidCounts(ParameterError):
    pass


class InvalidRate(ParameterError):
    pass


class InvalidFractions(ParameterError):
    pass


def _is_count(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= 0


@dataclass(frozen=True)
class GeneralParams:
    """Free-rider epidemic: ``n_total`` peers, ``y0`` holding the file,
    ``nc`` cooperative peers and ``nf`` free riders without it.

    ``lam`` is the pairwise contact rate, ``mu`` the departure rate of a
    cooperative peer holding the file.  ``mu = 0`` is the fully cooperative
    network and requires ``nf = 0``.
    """

    n_total: int
    lam: float
    mu: float
    y0: int
    nc: int
    nf: int = 0

    @classmethod
    def from_ratio(cls, n_total: int, lam: float, mu: float, y0: int, r: float) -> "GeneralParams":
        """Build from the cooperative ratio ``r = (y0 + nc) / n_total``."""
        coop = int(round(r * n_total))
        return cls(n_total, lam, mu, y0, coop - y0, n_total - coop)

    @property
    def beta(self) -> float:
        return self.lam * self.n_total

    @property
    def rho(self) -> float:
        if self.mu == 0:
            raise ZeroDivisionError("rho is undefined for mu = 0")
        return self.lam * self.nc / self.mu

    @property
    def theta(self) -> float:
        if self.mu == 0:
            raise ZeroDivisionError("theta is undefined for mu = 0")
        return self.beta / self.mu

    @property
    def r(self) -> float:
        return (self.y0 + self.nc) / self.n_total


class GeneralState(NamedTuple):
    t: float
    y: int
    xc: int
    xf: int


@dataclass(frozen=True)
class FixedRateParams:
    """Each peer without the file requests it at rate ``lam`` from a peer
    picked uniformly among those present (itself included)."""

    n_total: int
    lam: float
    mu: float
    y0: int

    @property
    def x0(self) -> int:
        return self.n_total - self.y0

    @property
    def xi(self) -> float:
        return self.lam / self.mu


class FixedRateState(NamedTuple):
    t: float
    y: int
    x: int


@dataclass(frozen=True)
class ControlParams:
    """Content-owner investment problem.

    ``y0``, ``x0`` and ``y_star`` are fractions of ``n_total`` (peers holding
    the file, peers without it, permanent publishers).  The departure rate
    under investment ``alpha`` is ``mu_base * alpha`` unless ``mu_table``
    supplies a non-decreasing tabulated response ``((alpha, mu), ...)``.
    """

    n_total: int
    beta: float
    mu_base: float
    alpha: float
    y_star: float
    y0: float
    x0: float
    mu_table: tuple[tuple[float, float], ...] | None = None

    @property
    def mu_of_alpha(self) -> float:
        if self.mu_table is None:
            return self.mu_base * self.alpha
        a, m = np.asarray(self.mu_table, dtype=float).T
        return float(np.interp(self.alpha, a, m))

    def with_alpha(self, alpha: float) -> "ControlParams":
        return ControlParams(self.n_total, self.beta, self.mu_base, float(alpha),
                             self.y_star, self.y0, self.x0, self.mu_table)


class MeanFieldState(NamedTuple):
    t: float
    y: float
    xc: float
    xf: float


def _check_general(p: GeneralParams) -> None:
    for name in ("n_total", "y0", "nc", "nf"):
        if not _is_count(getattr(p, name)):
            raise InvalidCounts(f"{name} must be a non-negative integer, got {getattr(p, name)!r}")
    if p.y0 + p.nc + p.nf != p.n_total:
        raise InvalidCounts(
            f"y0 + nc + nf = {p.y0 + p.nc + p.nf} does not equal n_total = {p.n_total}")
    if not (p.lam > 0 and math.isfinite(p.lam)):
        raise InvalidRate(f"lambda must be positive, got {p.lam}")
    if not (p.mu >= 0 and math.isfinite(p.mu)):
        raise InvalidRate(f"mu must be non-negative, got {p.mu}")
    if p.mu == 0 and p.nf > 0:
        raise InvalidRate("mu = 0 is only allowed without free riders")


def _check_fixed(p: FixedRateParams) -> None:
    for name in ("n_total", "y0"):
        if not _is_count(getattr(p, name)):
            raise InvalidCounts(f"{name} must be a non-negative integer, got {getattr(p, name)!r}")
    if not 1 <= p.y0 <= p.n_total:
        raise InvalidCounts(f"need 1 <= y0 <= n_total, got y0={p.y0}, n_total={p.n_total}")
    if not (p.lam > 0 and math.isfinite(p.lam)):
        raise InvalidRate(f"lambda must be positive, got {p.lam}")
    if not (p.mu > 0 and math.isfinite(p.mu)):
        raise InvalidRate(f"mu must be positive, got {p.mu}")


def _check_control(p: ControlParams) -> None:
    if not _is_count(p.n_total) or p.n_total < 1:
        raise InvalidCounts(f"n_total must be a positive integer, got {p.n_total!r}")
    if not (p.beta > 0 and math.isfinite(p.beta)):
        raise InvalidRate(f"beta must be positive, got {p.beta}")
    if not (p.mu_base >= 0 and math.isfinite(p.mu_base)):
        raise InvalidRate(f"mu must be non-negative, got {p.mu_base}")
    if not (p.alpha >= 0 and math.isfinite(p.alpha)):
        raise InvalidRate(f"alpha must be non-negative, got {p.alpha}")
    if p.mu_table is not None:
        a, m = np.asarray(p.mu_table, dtype=float).T
        if np.any(np.diff(a) <= 0) or np.any(np.diff(m) < 0) or np.any(m < 0):
            raise InvalidRate("mu_table must be strictly increasing in alpha and non-decreasing in mu")
    if p.y_star <= 0:
        raise InvalidFractions(f"y_star must be positive, got {p.y_star}")
    if p.y0 < 0 or p.x0 < 0:
        raise InvalidFractions("initial fractions must be non-negative")
    if abs(p.y0 + p.x0 + p.y_star - 1.0) > 1e-9:
        raise InvalidFractions(
            f"y0 + x0 + y_star = {p.y0 + p.x0 + p.y_star} must equal 1")


_CHECKS = {
    GeneralParams: _check_general,
    FixedRateParams: _check_fixed,
    ControlParams: _check_control,
}


def validate(params):
    """Return ``params`` unchanged if every invariant holds, else raise a
    :class:`ParameterError` subclass."""
    try:
        check = _CHECKS[type(params)]
    except KeyError:
        raise TypeError(f"cannot validate {type(params).__name__}") from None
    check(params)
    return params


def derived_quantities(params: GeneralParams) -> tuple[float, float, float]:
    """``(rho, beta, theta)`` with ``rho = lam*nc/mu``, ``beta = lam*N`` and
    ``theta = beta/mu``.  Raises ``ZeroDivisionError`` when ``mu = 0``."""
    validate(params)
    return params.rho, params.beta, params.theta


# --- JSON ---------------------------------------------------------------

_KINDS = {"general": GeneralParams, "fixed_rate": FixedRateParams, "control": ControlParams}
_KIND_OF = {v: k for k, v in _KINDS.items()}


def params_to_dict(params) -> dict[str, Any]:
    d = asdict(params)
    if "lam" in d:
        d["lambda"] = d.pop("lam")
    if d.get("mu_table") is None:
        d.pop("mu_table", None)
    return d


def params_from_dict(d: dict[str, Any], kind: str):
    cls = _KINDS[kind]
    d = dict(d)
    if "lambda" in d:
        d["lam"] = d.pop("lambda")
    names = {f.name for f in fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ParameterError(f"unknown {kind} fields: {sorted(unknown)}")
    if d.get("mu_table") is not None:
        d["mu_table"] = tuple(tuple(map(float, row)) for row in d["mu_table"])
    return cls(**d)


def params_to_json(params) -> str:
    return json.dumps({"kind": _KIND_OF[type(params)], **params_to_dict(params)}, sort_keys=True)


def params_from_json(text: str):
    d = json.loads(text)
    kind = d.pop("kind")
    return validate(params_from_dict(d, kind))
