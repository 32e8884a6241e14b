"""Exact sample paths of the swarm jump processes.

All simulators are event driven: the holding time is exponential with the
total rate of the current state and the transition is picked with
probability proportional to its rate.  A path is fully determined by its
64-bit ``seed``, which seeds a PCG64 generator.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .branching import BranchingParams
from .meanfield import MeanFieldParams, terminal_uninfected
from .model import (ControlParams, FixedRateParams, FixedRateState, GeneralParams,
                    GeneralState, InvalidRate, ParameterError, validate)

__all__ = [
    "Trajectory",
    "BranchingRun",
    "HybridOutcome",
    "InvalidThreshold",
    "make_rng",
    "default_t_max",
    "simulate_general",
    "simulate_fully_cooperative",
    "simulate_fixed_rate",
    "simulate_with_publishers",
    "simulate_branching",
    "simulate_hybrid",
]


class InvalidThreshold(ParameterError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def default_t_max(mu: float) -> float:
    """``50 / mu``; infinite when nobody leaves."""
    return 50.0 / mu if mu > 0 else math.inf


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One sample path.

    ``t[0] = 0`` holds the initial state; every further row is one event.
    ``states`` has one integer column per entry of ``columns``.
    """

    params: object
    seed: int
    t: np.ndarray
    states: np.ndarray
    columns: tuple[str, ...]
    terminal_reason: str

    def __len__(self) -> int:
        return len(self.t)

    @property
    def n_events(self) -> int:
        return len(self.t) - 1

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]

    @property
    def y(self) -> np.ndarray:
        return self.column("y")

    def final(self, name: str) -> int:
        return int(self.column(name)[-1])

    @property
    def extinction_time(self) -> float:
        """First time with no holder left; ``inf`` if the path never got there."""
        if self.terminal_reason == "absorbed_y_zero":
            return float(self.t[-1])
        return math.inf

    @property
    def max_y(self) -> int:
        return int(self.y.max())

    @property
    def peak_time(self) -> float:
        return float(self.t[int(np.argmax(self.y))])

    def at(self, times, name: str = "y") -> np.ndarray:
        """Value of column ``name`` at the given times (right-continuous)."""
        idx = np.searchsorted(self.t, np.asarray(times, dtype=float), side="right") - 1
        return self.column(name)[np.maximum(idx, 0)]

    def events(self) -> Iterator[GeneralState | FixedRateState]:
        if self.columns == ("y", "xc", "xf"):
            for t, row in zip(self.t, self.states):
                yield GeneralState(float(t), int(row[0]), int(row[1]), int(row[2]))
        else:
            for t, row in zip(self.t, self.states):
                yield FixedRateState(float(t), int(row[0]), int(row[1]))

    def to_csv(self, dest=None) -> str | None:
        """Write ``t,<columns>`` with one row per event.  Returns the text when
        ``dest`` is None, otherwise writes to the path or open file."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t",) + self.columns)
        for t, row in zip(self.t, self.states):
            w.writerow([repr(float(t))] + [int(v) for v in row])
        text = buf.getvalue()
        if dest is None:
            return text
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return None


def _wrap(params, seed, ts, states, reason, columns):
    return Trajectory(params, int(seed), ts, states, columns, _kernels.REASONS[reason])


def simulate_general(params: GeneralParams, seed: int, t_max: float | None = None) -> Trajectory:
    """Free-rider epidemic path from ``(y0, nc, nf)``.

    Infection of a cooperative peer at rate ``lam*y*xc``, departure at rate
    ``mu*y``, service of a free rider at rate ``lam*y*xf``.  Once nobody is
    left to serve the path keeps running (pure departures) until ``y = 0``,
    so the extinction time is defined unless ``t_max`` cuts it short.
    """
    validate(params)
    if params.y0 < 1:
        raise ParameterError("simulation needs y0 >= 1")
    if params.mu == 0:
        return simulate_fully_cooperative(params, seed)
    t_max = default_t_max(params.mu) if t_max is None else t_max
    ts, states, reason = _kernels.general_path(make_rng(seed), float(params.lam), float(params.mu),
                                               params.y0, params.nc, params.nf, float(t_max))
    return _wrap(params, seed, ts, states, reason, ("y", "xc", "xf"))


def simulate_fully_cooperative(params: GeneralParams, seed: int) -> Trajectory:
    """Pure-birth path with rate ``lam*y*(N - y)``, absorbed at ``y = N``."""
    validate(params)
    if params.mu != 0 or params.nf != 0:
        raise InvalidRate("the fully cooperative network needs mu = 0 and nf = 0")
    if params.y0 < 1:
        raise ParameterError("simulation needs y0 >= 1")
    ts, states, reason = _kernels.general_path(make_rng(seed), float(params.lam), 0.0,
                                               params.y0, params.nc, 0, math.inf)
    return _wrap(params, seed, ts, states, reason, ("y", "xc", "xf"))


def simulate_fixed_rate(params: FixedRateParams, seed: int, t_max: float | None = None) -> Trajectory:
    """Fixed request-rate path: infection at ``lam*y*x/(y + x)`` (a peer may
    pick itself), departure at ``mu*y``; absorbed at ``y = 0``."""
    validate(params)
    t_max = default_t_max(params.mu) if t_max is None else t_max
    ts, states, reason = _kernels.fixed_rate_path(make_rng(seed), float(params.lam), float(params.mu),
                                                  params.y0, params.x0, float(t_max))
    return _wrap(params, seed, ts, states, reason, ("y", "x"))


def publisher_counts(p: ControlParams) -> tuple[int, int, int]:
    """Integer (permanent seeds, initial holders, initial waiting peers)."""
    seeds = int(round(p.y_star * p.n_total))
    y0 = int(round(p.y0 * p.n_total))
    return seeds, y0, p.n_total - seeds - y0


def simulate_with_publishers(p: ControlParams, seed: int, t_max: float = math.inf) -> Trajectory:
    """Finite-N counterpart of the investment model: ``round(y* N)``
    permanent publishers, contact rate ``beta/N`` and departure rate
    ``mu(alpha)`` for the other holders.  Stops once everyone is served."""
    validate(p)
    seeds, y0, x0 = publisher_counts(p)
    if seeds < 1:
        raise ParameterError("need at least one permanent publisher")
    ts, states, reason = _kernels.publisher_path(make_rng(seed), p.beta / p.n_total, float(p.mu_of_alpha),
                                                 seeds, y0, x0, float(t_max))
    return _wrap(p, seed, ts, states, reason, ("y", "x"))


@dataclass(frozen=True)
class BranchingRun:
    seed: int
    time: float
    size: int
    births: int
    reason: str

    @property
    def extinct(self) -> bool:
        return self.reason == "absorbed_y_zero"


def simulate_branching(p: BranchingParams, seed: int, y_cap: int = 2**62,
                       t_max: float = math.inf) -> BranchingRun:
    """Run the linear birth-death process until extinction, until it holds
    ``y_cap`` objects, or until ``t_max``."""
    t, y, births, reason = _kernels.branching_run(make_rng(seed), float(p.lambda_nc), float(p.mu),
                                                  int(p.k), int(y_cap), float(t_max))
    return BranchingRun(int(seed), float(t), int(y), int(births), _kernels.REASONS[reason])


@dataclass(frozen=True)
class HybridOutcome:
    """Result of one branching-then-fluid run.  Fractions are of ``N``.

    ``time`` is the extinction time for early extinctions and the switch
    time otherwise.
    """

    seed: int
    early_extinction: bool
    time: float
    xc_switch: float
    xf_switch: float
    xc_final: float
    xf_final: float


def simulate_hybrid(params: GeneralParams, seed: int, n0: int) -> HybridOutcome:
    """Branching phase until ``n0`` holders, then the fluid limit.

    The branching phase ignores depletion; each birth still consumes one
    cooperative peer so the fluid phase starts from
    ``(n0, nc - births, nf) / N``.
    """
    validate(params)
    if params.mu <= 0:
        raise InvalidRate("the hybrid scheme needs mu > 0")
    if not params.y0 < n0 < params.n_total:
        raise InvalidThreshold(f"need y0 < n0 < N, got n0={n0}")
    run = simulate_branching(BranchingParams.from_general(params), seed, y_cap=n0)
    n = params.n_total
    xc = max(params.nc - run.births, 0) / n
    xf = params.nf / n
    if run.extinct:
        return HybridOutcome(int(seed), True, run.time, xc, xf, xc, xf)
    mf = MeanFieldParams(params.beta, params.mu, n0 / n, xc, xf)
    xc_inf, xf_inf = terminal_uninfected(mf)
    return HybridOutcome(int(seed), False, run.time, xc, xf, xc_inf, xf_inf)
