"""Seeded replicate ensembles and their summaries.

Replicate ``i`` of an ensemble always uses ``child_seed(master_seed, i)``,
so results do not depend on how replicates are spread over workers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ctmc import (simulate_fixed_rate, simulate_fully_cooperative, simulate_general,
                   simulate_with_publishers)

__all__ = [
    "child_seed",
    "EnsembleResult",
    "EmpiricalCdf",
    "EmptySample",
    "run_ensemble",
    "ensemble_on_grid",
    "empirical_cdf",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def child_seed(master_seed: int, index: int) -> int:
    """SplitMix64 output for counter ``index`` of stream ``master_seed``.

    ``z = master + (index + 1) * 0x9E3779B97F4A7C15`` (mod 2**64), then
    ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31``.
    """
    z = (int(master_seed) + (int(index) + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


_SIMULATORS = {
    "general": lambda p, s, t_max: simulate_general(p, s, t_max),
    "fully_cooperative": lambda p, s, t_max: simulate_fully_cooperative(p, s),
    "fixed_rate": lambda p, s, t_max: simulate_fixed_rate(p, s, t_max),
    "publishers": lambda p, s, t_max: simulate_with_publishers(p, s, math.inf if t_max is None else t_max),
}

_UNINFECTED = {
    "general": ("xc", "xf"),
    "fully_cooperative": ("xc", "xf"),
    "fixed_rate": ("x", None),
    "publishers": ("x", None),
}

ENSEMBLE_COLUMNS = ("replicate", "seed", "extinction_time", "final_xc", "final_xf", "max_y", "peak_time")


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Per-replicate summaries in replicate order.

    For single-class models (fixed request rate) ``final_xc`` holds the
    final number of peers without the file and ``final_xf`` is zero.
    ``extinction_time`` is ``inf`` for replicates that never lost the file.
    """

    model: str
    params: object
    master_seed: int
    seed: np.ndarray
    extinction_time: np.ndarray
    final_xc: np.ndarray
    final_xf: np.ndarray
    max_y: np.ndarray
    peak_time: np.ndarray
    terminal_reason: tuple[str, ...]

    @property
    def replicates(self) -> int:
        return len(self.seed)

    def __len__(self) -> int:
        return self.replicates

    def records(self):
        for i in range(self.replicates):
            yield (i, int(self.seed[i]), float(self.extinction_time[i]), int(self.final_xc[i]),
                   int(self.final_xf[i]), int(self.max_y[i]), float(self.peak_time[i]))

    def to_csv(self, dest=None) -> str | None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ENSEMBLE_COLUMNS)
        for rec in self.records():
            w.writerow([rec[0], rec[1], repr(rec[2]), rec[3], rec[4], rec[5], repr(rec[6])])
        text = buf.getvalue()
        if dest is None:
            return text
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return None


def _summarise(model, traj):
    c_name, f_name = _UNINFECTED[model]
    return (traj.extinction_time, traj.final(c_name), traj.final(f_name) if f_name else 0,
            traj.max_y, traj.peak_time, traj.terminal_reason)


def _map(fn, n, workers):
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(n)))


def run_ensemble(model: str, params, master_seed: int, replicates: int,
                 t_max: float | None = None, workers: int = 1) -> EnsembleResult:
    """Simulate ``replicates`` independent paths of ``model`` (one of
    ``general``, ``fully_cooperative``, ``fixed_rate``, ``publishers``)."""
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    sim = _SIMULATORS[model]
    seeds = [child_seed(master_seed, i) for i in range(replicates)]
    rows = _map(lambda i: _summarise(model, sim(params, seeds[i], t_max)), replicates, workers)
    ext, fxc, fxf, my, pt, reasons = zip(*rows)
    return EnsembleResult(model, params, int(master_seed), np.array(seeds, dtype=np.uint64),
                          np.array(ext, dtype=float), np.array(fxc, dtype=np.int64),
                          np.array(fxf, dtype=np.int64), np.array(my, dtype=np.int64),
                          np.array(pt, dtype=float), tuple(reasons))


def ensemble_on_grid(model: str, params, master_seed: int, replicates: int, grid,
                     column: str = "y", t_max: float | None = None, workers: int = 1) -> np.ndarray:
    """``(replicates, len(grid))`` array of one state column sampled on a
    time grid; same seeds as :func:`run_ensemble`."""
    sim = _SIMULATORS[model]
    grid = np.asarray(grid, dtype=float)
    rows = _map(lambda i: sim(params, child_seed(master_seed, i), t_max).at(grid, column),
                replicates, workers)
    return np.vstack(rows)


class EmptySample(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous step function ``F(x) = #{samples <= x} / n``.
    Infinite samples count in ``n`` but never below any finite ``x``."""

    samples: np.ndarray

    @property
    def n(self) -> int:
        return len(self.samples)

    def __call__(self, x):
        out = np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / self.n
        return float(out) if np.ndim(out) == 0 else out

    def standard_error(self, x):
        f = np.asarray(self(x))
        return np.sqrt(f * (1 - f) / self.n)


def empirical_cdf(samples) -> EmpiricalCdf:
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    if s.size == 0:
        raise EmptySample("empirical_cdf needs at least one sample")
    return EmpiricalCdf(s)
