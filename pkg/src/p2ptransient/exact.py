"""Exact transient analysis of the free-rider epidemic for tiny swarms.

The reachable state space is enumerated from ``(y0, nc, nf)``.  Terminal
probabilities come from solving the first-step equations on the transient
states; the extinction-time CDF comes from uniformization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .model import GeneralParams, ParameterError, validate

__all__ = ["StateSpaceTooLarge", "ExactSolution", "exact_small_n", "generator"]

MAX_N = 8
TRUNCATION = 1e-10
UNIFORMIZATION_FACTOR = 1.1


class StateSpaceTooLarge(ParameterError):
    pass


@dataclass(frozen=True, eq=False)
class ExactSolution:
    states: list[tuple[int, int, int]]
    Q: np.ndarray
    terminal: dict[tuple[int, int], float]  # (xc, xf) at absorption -> probability
    t_grid: np.ndarray
    extinction_cdf: np.ndarray
    rate: float  # uniformization rate


def _reachable(p: GeneralParams) -> list[tuple[int, int, int]]:
    start = (p.y0, p.nc, p.nf)
    seen = {start}
    stack = [start]
    while stack:
        y, xc, xf = stack.pop()
        if y == 0:
            continue
        for nxt, ok in (((y + 1, xc - 1, xf), xc > 0), ((y - 1, xc, xf), True),
                        ((y, xc, xf - 1), xf > 0)):
            if ok and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return sorted(seen)


def generator(p: GeneralParams) -> tuple[list[tuple[int, int, int]], np.ndarray]:
    """Reachable states and the generator matrix built from the three
    transitions (infect cooperative, depart, serve free rider)."""
    states = _reachable(p)
    index = {s: i for i, s in enumerate(states)}
    Q = np.zeros((len(states), len(states)))
    for i, (y, xc, xf) in enumerate(states):
        for nxt, rate in (((y + 1, xc - 1, xf), p.lam * y * xc), ((y - 1, xc, xf), p.mu * y),
                          ((y, xc, xf - 1), p.lam * y * xf)):
            if rate > 0:
                Q[i, index[nxt]] += rate
                Q[i, i] -= rate
    return states, Q


def exact_small_n(p: GeneralParams, t_grid=()) -> ExactSolution:
    """Terminal distribution of ``(xc, xf)`` and ``P(T <= t)`` on ``t_grid``."""
    validate(p)
    if p.n_total > MAX_N:
        raise StateSpaceTooLarge(f"N={p.n_total} exceeds the exact-solver limit {MAX_N}")
    if p.mu <= 0:
        raise ParameterError("exact_small_n needs mu > 0")
    states, Q = generator(p)
    absorbing = np.array([s[0] == 0 for s in states])
    trans = ~absorbing
    start = states.index((p.y0, p.nc, p.nf))

    # First-step equations: Q_TT B = -Q_TA
    B = np.zeros((len(states), int(absorbing.sum())))
    B[absorbing] = np.eye(int(absorbing.sum()))
    if trans.any():
        B[trans] = linalg.solve(Q[np.ix_(trans, trans)], -Q[np.ix_(trans, absorbing)])
    abs_states = [s for s, a in zip(states, absorbing) if a]
    terminal = {(s[1], s[2]): float(B[start, j]) for j, s in enumerate(abs_states)}

    t_grid = np.asarray(t_grid, dtype=float)
    rate = UNIFORMIZATION_FACTOR * float(np.max(-np.diag(Q)))
    cdf = np.zeros_like(t_grid)
    if t_grid.size and rate > 0:
        P = np.eye(len(states)) + Q / rate
        lam_t = rate * t_grid
        n_max = int(stats.poisson.isf(TRUNCATION, lam_t.max())) + 1
        v = np.zeros(len(states))
        v[start] = 1.0
        for n in range(n_max + 1):
            cdf += stats.poisson.pmf(n, lam_t) * v[absorbing].sum()
            v = v @ P
    elif t_grid.size:
        cdf[:] = 1.0 if states[start][0] == 0 else 0.0
    return ExactSolution(states, Q, terminal, t_grid, cdf, rate)
