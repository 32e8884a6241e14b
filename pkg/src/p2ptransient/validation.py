"""Cross-module validation suites.

Each suite checks one acceptance property against an independent route
(Monte Carlo against closed forms, root solves against ODE integration,
exact linear algebra against simulation) and returns a JSON-ready dict.
A failed check is reported in the result, it never raises.
"""

from __future__ import annotations

import filecmp
import math
import tempfile
from pathlib import Path

import numpy as np
from scipy import integrate, optimize

from .branching import (BranchingParams, branching_validity_horizon, expected_extinction_time,
                        extinction_cdf, extinction_probability)
from .ctmc import simulate_branching
from .ensemble import child_seed, empirical_cdf, ensemble_on_grid, run_ensemble
from .experiments import (DEFAULT_SEED, FIGURES, ExperimentConfig, _jsonable, figure,
                          general_params, run, sup_distance)
from .fixedrate import FixedRateMeanField, max_torrent, terminal_uninfected_fraction
from .meanfield import MeanFieldParams, fully_coop_closed_form, integrate_ode, terminal_uninfected
from .model import FixedRateParams, GeneralParams

__all__ = ["SUITES", "report", "run_suite"]


def _result(name, criterion, checks, **extra) -> dict:
    checks = _jsonable(checks)
    return {"suite": name, "criterion": criterion,
            "passed": all(c["passed"] for c in checks.values()), "checks": checks, **_jsonable(extra)}


def branching_extinction(seed: int = DEFAULT_SEED, replicates: int = 10_000) -> dict:
    """Extinction frequency of the birth-death chain against ``1/rho``."""
    bp = BranchingParams(lambda_nc=0.006 * 399, mu=1.0)
    q = extinction_probability(bp)
    # from 1000 objects the chance of dying out is rho**-1000
    runs = [simulate_branching(bp, child_seed(seed, i), y_cap=1000) for i in range(replicates)]
    freq = float(np.mean([r.extinct for r in runs]))
    se = math.sqrt(q * (1 - q) / replicates)
    ok = abs(freq - q) <= 3 * se
    return _result("branching_extinction", 1,
                   {"frequency_vs_q": {"passed": ok, "frequency": freq, "q": q, "se": se,
                                       "z": (freq - q) / se}})


def expected_time(rhos=(0.2, 0.5, 0.9)) -> dict:
    """Closed-form mean extinction time against ``int (1 - G_1)``."""
    checks = {}
    for rho in rhos:
        bp = BranchingParams(lambda_nc=rho, mu=1.0)
        closed = expected_extinction_time(bp)
        numeric, _ = integrate.quad(lambda t: 1.0 - float(extinction_cdf(bp, t)), 0, np.inf,
                                    epsabs=1e-13, epsrel=1e-12, limit=500)
        rel = abs(closed - numeric) / numeric
        checks[f"rho_{rho:g}"] = {"passed": rel <= 1e-6, "closed_form": closed, "quadrature": numeric,
                                  "rel_err": rel}
    return _result("expected_time", 2, checks)


_SETS = ((1, 1.0), (1, 0.6), (3, 1.0), (3, 0.6))


def _cdf_config(y0, r, seed, t_grid=None):
    d = {"kind": "extinction_cdf", "seed": seed, "params": {"y0": y0, "r_values": [r]}}
    if t_grid is not None:
        d["t_grid"] = t_grid
    return ExperimentConfig.from_dict(d)


def dominance(seed: int = DEFAULT_SEED) -> dict:
    """Empirical survival of the general model below ``1 - G_k + 3 SE`` on a
    50-point grid over ``[0, 50]``."""
    checks = {}
    for y0, r in _SETS:
        res = run(_cdf_config(y0, r, seed, {"start": 0.0, "stop": 50.0, "num": 50}), write=False)
        (name, c), = res.summary["checks"].items()
        checks[f"y0_{y0}_{name}"] = c
    return _result("dominance", 3, checks)


def early_cdf(seed: int = DEFAULT_SEED, late_rise: float = 0.3, tol: float = 0.05) -> dict:
    """Sup distance to ``G_k`` on ``[0, T_B]`` and the late rise for r = 1."""
    checks = {}
    for y0, r in _SETS:
        cfg = _cdf_config(y0, r, seed)
        p = general_params(cfg.params["n_total"], cfg.params["lambda"], 1.0, y0, r=r)
        bp = BranchingParams.from_general(p)
        # same stream as the extinction_cdf experiment (first curve)
        ens = run_ensemble("general", p, child_seed(seed, 0), cfg.replicates)
        F = empirical_cdf(ens.extinction_time)
        t_b = branching_validity_horizon(bp)
        d = sup_distance(F, lambda t: extinction_cdf(bp, t), t_b)
        tag = f"y0_{y0}_r{r:g}"
        checks[f"sup_distance_{tag}"] = {"passed": d <= tol, "sup_distance": d, "T_B": t_b}
        if r == 1.0:
            q = extinction_probability(bp)
            t_max = 50.0 / p.mu
            rise = F(t_max) - q
            checks[f"late_rise_{tag}"] = {"passed": rise >= late_rise, "cdf_at_t_max": F(t_max),
                                          "plateau_q": q, "rise": rise}
    return _result("early_cdf", 4, checks)


def early_mean(seed: int = DEFAULT_SEED) -> dict:
    """Mean extinction time below threshold against ``E[T_b(k)]``."""
    checks = {}
    for k in (1, 3):
        for r in (1.0, 0.5):
            cfg = ExperimentConfig.from_dict({"kind": "early_extinction_mean", "seed": seed,
                                             "params": {"y0": k, "r": r}})
            res = run(cfg, write=False)
            c = res.summary["checks"]["within_3se"]
            c["z"] = res.tables[cfg.stem]["z"]
            checks[f"k{k}_r{r:g}"] = c
    return _result("early_mean", 5, checks)


def prop1_bound(seed: int = DEFAULT_SEED, replicates: int = 500) -> dict:
    """Fully cooperative mean below the logistic curve ``N y(t)``."""
    n = 300
    checks = {}
    for i, beta in enumerate((1.0, 2.0)):
        for j, y0 in enumerate((0.05, 0.1)):
            p = GeneralParams(n, beta / n, 0.0, int(round(y0 * n)), n - int(round(y0 * n)), 0)
            t = np.linspace(0.0, 10.0 / beta, 41)
            Y = ensemble_on_grid("fully_cooperative", p, child_seed(seed, 10 * i + j), replicates, t)
            mean = Y.mean(axis=0)
            se = Y.std(axis=0, ddof=1) / math.sqrt(replicates)
            bound = n * np.asarray(fully_coop_closed_form(beta, p.y0 / n, t))
            excess = mean - bound - 3 * se
            checks[f"beta_{beta:g}_y0_{y0:g}"] = {"passed": bool(np.all(excess <= 1e-9)),
                                                  "worst_excess": float(excess.max())}
    return _result("prop1_bound", 6, checks)


def meanfield_accuracy(seed: int = DEFAULT_SEED) -> dict:
    """Terminal uninfected fraction at N = 300 against the fluid limit."""
    (res,) = figure("7", seed=seed, write=False)
    table = res.tables["fig7"]
    return _result("meanfield_accuracy", 7, res.summary["checks"],
                   table={k: list(v) for k, v in table.items()})


def phase_transition(ode_points=(0.1, 0.5, 2.0, 10.0, 100.0)) -> dict:
    """Shape of ``xc_inf(theta*xc0)`` and an ODE cross-check of the root."""
    (res,) = figure("1", write=False)
    checks = dict(res.summary["checks"])
    y0 = res.config.params["y0"]
    for stem, tab in res.tables.items():
        s, ratio = np.asarray(tab["theta_xc0"]), np.asarray(tab["xc_inf_over_xc0"])
        tag = stem.split("_", 1)[1]
        lo, hi = ratio[np.argmin(abs(s - 0.1))], ratio[np.argmin(abs(s - 100.0))]
        checks[f"ends_{tag}"] = {"passed": lo >= 0.5 and hi <= 0.05, "ratio_at_0.1": lo,
                                 "ratio_at_100": hi}
    for xc0 in res.config.params["xc0_values"]:
        worst = 0.0
        for sx in ode_points:
            mf = MeanFieldParams(beta=sx / xc0, mu=1.0, y0=y0, xc0=xc0, xf0=1 - y0 - xc0)
            root = terminal_uninfected(mf)[0]
            path = integrate_ode(mf, 200.0)
            worst = max(worst, abs(path.xc[-1] - root))
        checks[f"ode_oracle_xc0_{xc0:g}"] = {"passed": worst <= 1e-3, "max_abs_diff": worst}
    return _result("phase_transition", 8, checks)


def _fixed_rate_ode_max(xi, x0, mu=1.0):
    """Peak of ``y`` from direct integration of the fluid ODEs on the
    original clock (a time change leaves the peak height unchanged)."""
    lam = xi * mu

    def f(t, u):
        y, x = u
        inf = lam * y * x / (y + x) if y + x > 0 else 0.0
        return (inf - mu * y, -inf)

    def dy(t, u):
        return f(t, u)[0]
    dy.terminal = True
    dy.direction = -1
    y0 = 1 - x0
    if f(0.0, (y0, x0))[0] <= 0:
        return y0
    # unscaled clock: the peak comes later than in the time-changed system
    sol = integrate.solve_ivp(f, (0, 1000.0 / mu), (y0, x0), method="DOP853", rtol=1e-13, atol=1e-15,
                              events=dy, dense_output=True)
    t_peak = sol.t_events[0][0]
    # polish on the dense interpolant around the event
    m = optimize.minimize_scalar(lambda t: -sol.sol(t)[0], bounds=(0.9 * t_peak, min(1.1 * t_peak, sol.t[-1])),
                                 method="bounded", options={"xatol": 1e-12})
    return max(float(-m.fun), float(sol.y_events[0][0][0]))


def fixed_rate(seed: int = DEFAULT_SEED, n: int = 10_000, replicates: int = 200) -> dict:
    """Terminal fraction against simulation, peak formula against ODE
    integration and continuity of the peak at ``xi = 1/x0``."""
    checks = {}
    x0 = 0.8
    worst = 0.0
    for i, xi in enumerate((0.3, 0.5, 0.8, 1.5, 3.0)):
        p = FixedRateParams(n, xi, 1.0, int(round((1 - x0) * n)))
        ens = run_ensemble("fixed_rate", p, child_seed(seed, i), replicates)
        sim = float(np.mean(ens.final_xc)) / n
        exact = terminal_uninfected_fraction(FixedRateMeanField(xi, 1.0, x0))
        worst = max(worst, abs(sim - exact))
        checks[f"terminal_xi_{xi:g}"] = {"passed": abs(sim - exact) <= 0.02, "simulation": sim,
                                         "closed_form": exact}
    err = 0.0
    for x0 in (0.95, 0.8, 0.5):
        for xi in (0.5, 1.2, 1.5, 2.0, 3.0, 5.0):
            formula = max_torrent(FixedRateMeanField(xi, 1.0, x0))[0]
            err = max(err, abs(formula - _fixed_rate_ode_max(xi, x0)))
    checks["y_max_vs_ode"] = {"passed": err <= 1e-6, "max_abs_diff": err}
    (res,) = figure("1bis", write=False)
    for k, c in res.summary["checks"].items():
        checks[k] = c
    return _result("fixed_rate", 9, checks)


ORACLE_CASES = {3: (1, 1, 1), 4: (1, 2, 1), 5: (1, 2, 2)}


def small_n_oracle(seed: int = DEFAULT_SEED, replicates: int = 100_000) -> dict:
    checks = {}
    for n, (y0, nc, nf) in ORACLE_CASES.items():
        cfg = ExperimentConfig.from_dict({"kind": "oracle_check", "seed": child_seed(seed, n),
                                         "replicates": replicates,
                                         "params": {"n_total": n, "y0": y0, "nc": nc, "nf": nf}})
        res = run(cfg, write=False)
        checks[f"n_{n}"] = res.summary["checks"]["within_3se"]
    return _result("small_n_oracle", 10, checks)


def control() -> dict:
    """Delay bounds, interior maximum and the ratio band for each preset."""
    checks = {}
    for res in figure("9", write=False):
        for k, c in res.summary["checks"].items():
            checks[f"{res.config.stem}_{k}"] = c
    return _result("control", 11, checks)


def determinism(seed: int = DEFAULT_SEED, figures=FIGURES) -> dict:
    """Every figure preset twice with the same seed: CSVs must be identical."""
    checks = {}
    with tempfile.TemporaryDirectory() as tmp:
        for fig in figures:
            a, b = Path(tmp, f"{fig}_a"), Path(tmp, f"{fig}_b")
            fa = [f for r in figure(fig, seed=seed, out=str(a)) for f in r.files if f.endswith(".csv")]
            figure(fig, seed=seed, out=str(b))
            names = [Path(f).name for f in fa]
            same = all(filecmp.cmp(a / nm, b / nm, shallow=False) for nm in names)
            checks[f"figure_{fig}"] = {"passed": same and bool(names), "files": names}
    return _result("determinism", 12, checks)


SUITES = {
    "branching_extinction": branching_extinction,
    "expected_time": expected_time,
    "dominance": dominance,
    "early_cdf": early_cdf,
    "early_mean": early_mean,
    "prop1_bound": prop1_bound,
    "meanfield_accuracy": meanfield_accuracy,
    "phase_transition": phase_transition,
    "fixed_rate": fixed_rate,
    "small_n_oracle": small_n_oracle,
    "control": control,
    "determinism": determinism,
}


def run_suite(name: str) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
    return SUITES[name]()


def report(name: str = "all") -> dict:
    """Run one suite (or all of them in order) and return a pass/fail map."""
    names = list(SUITES) if name == "all" else [name]
    results = {nm: run_suite(nm) for nm in names}
    return {"suite": name, "passed": all(r["passed"] for r in results.values()), "results": results}
