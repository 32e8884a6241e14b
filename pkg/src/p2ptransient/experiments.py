"""Experiment configurations, runners and figure presets.

Every run writes plot-ready CSV files plus a JSON sidecar holding the fully
resolved configuration, the package version, derived quantities and the
outcome of the checks embedded in the experiment.  Nothing in a CSV depends
on the wall clock, so a fixed master seed gives byte-identical files.
"""

from __future__ import annotations

import copy
import csv
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .branching import (BranchingParams, branching_validity_horizon, expected_extinction_time,
                        extinction_cdf, extinction_probability)
from .control import NoInteriorMax, delay_curve, optimize_alpha
from .ctmc import simulate_hybrid
from .ensemble import child_seed, empirical_cdf, run_ensemble
from .exact import exact_small_n
from .fixedrate import sweep_phase_diagram
from .meanfield import MeanFieldParams, phase_sweep, terminal_uninfected
from .model import ControlParams, GeneralParams, ParameterError, validate

__all__ = [
    "KINDS",
    "FIGURES",
    "ConfigError",
    "UnknownFigure",
    "ExperimentConfig",
    "RunResult",
    "run",
    "figure",
    "figure_configs",
    "general_params",
    "late_survival_mask",
    "sup_distance",
]

KINDS = ("extinction_cdf", "early_extinction_mean", "terminal_fraction", "phase_sweep",
         "fixed_rate_sweep", "control_utility", "hybrid", "oracle_check")
FIGURES = ("1", "1bis", "3", "4", "5", "6", "7", "8", "9")

DEFAULT_SEED = 20100


class ConfigError(ValueError):
    pass


class UnknownFigure(ConfigError):
    pass


# Kind-specific defaults.  A config only has to name the kind; anything it
# sets replaces the value here.
DEFAULTS = {
    "extinction_cdf": {
        "params": {"n_total": 400, "lambda": 0.006, "mu_values": [1.0], "y0": 1, "r_values": [1.0, 0.6]},
        "replicates": 1000,
        "t_grid": {"start": 0.0, "stop": 50.0, "num": 501},
    },
    "early_extinction_mean": {
        "params": {"n_total": 300, "mu": 1.0, "y0": 1, "r": 1.0, "rho_grid": [0.2, 0.4, 0.6, 0.8]},
        "replicates": 1000,
    },
    "terminal_fraction": {
        "params": {"n_total": 300, "y0": 10, "r_values": [1.0, 0.5], "vary": "lambda",
                   "lambda": 0.006, "mu": 1.0, "values": [0.002, 0.004, 0.006, 0.008, 0.010],
                   "tolerance": {"1": 0.03, "0.5": 0.08}},
        "replicates": 500,
    },
    "phase_sweep": {
        "params": {"y0": 0.05, "xc0_values": [0.01, 0.1, 0.3, 0.5, 0.9], "mu": 1.0},
        "t_grid": {"start": -1.0, "stop": 2.0, "num": 61, "log": True},
    },
    "fixed_rate_sweep": {
        "params": {"x0_values": [0.95, 0.8], "mu": 1.0},
        "t_grid": {"start": 0.05, "stop": 3.0, "num": 60},
    },
    "control_utility": {
        "params": {"n_total": 500, "beta": 2.0, "mu": 0.5, "y_star_count": 2, "y0_count": 0,
                   "cost_scale": 1.0},
        "t_grid": {"start": 0.5, "stop": 40.0, "num": 80},
    },
    "hybrid": {
        "params": {"n_total": 400, "lambda": 0.006, "mu": 1.0, "y0": 1, "r": 1.0, "n0": 10,
                   "tolerance": 0.05},
        "replicates": 2000,
    },
    "oracle_check": {
        "params": {"n_total": 4, "lambda": 1.0, "mu": 1.0, "y0": 1, "nc": 2, "nf": 1},
        "replicates": 100_000,
        "t_grid": {"start": 0.0, "stop": 5.0, "num": 21},
    },
}


@dataclass
class ExperimentConfig:
    """One experiment.

    ``params`` holds model parameters and kind-specific knobs; ``t_grid`` is
    either an explicit list or ``{"start", "stop", "num"}`` (with
    ``"log": true`` for a base-10 log grid).  The grid axis depends on the
    kind: time for ``extinction_cdf`` and ``oracle_check``, ``theta*xc0``
    for ``phase_sweep``, ``xi`` for ``fixed_rate_sweep`` and ``alpha`` for
    ``control_utility``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    replicates: int = 1
    seed: int = DEFAULT_SEED
    out: str = "."
    t_grid: object = None
    name: str | None = None
    implementer_choice: bool = False
    notes: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        """Fill gaps from the kind's defaults (explicit values win)."""
        d = dict(d)
        kind = d.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {kind!r}; expected one of {KINDS}")
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        base = copy.deepcopy(DEFAULTS[kind])
        params = base.pop("params")
        params.update(d.pop("params", None) or {})
        merged = {**base, **d, "params": params}
        cfg = cls(**merged)
        cfg.check()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def check(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise ConfigError("replicates must be an integer >= 1")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        missing = [k for k in REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise ConfigError(f"{self.kind} needs params {missing}")

    @property
    def stem(self) -> str:
        return self.name or self.kind


REQUIRED = {
    "extinction_cdf": ("n_total", "lambda", "mu_values", "y0", "r_values"),
    "early_extinction_mean": ("n_total", "mu", "y0", "r", "rho_grid"),
    "terminal_fraction": ("n_total", "y0", "r_values", "vary", "lambda", "mu", "values"),
    "phase_sweep": ("y0", "xc0_values", "mu"),
    "fixed_rate_sweep": ("x0_values", "mu"),
    "control_utility": ("n_total", "beta", "mu", "y_star_count", "y0_count"),
    "hybrid": ("n_total", "lambda", "mu", "y0", "r", "n0"),
    "oracle_check": ("n_total", "lambda", "mu", "y0", "nc", "nf"),
}


@dataclass
class RunResult:
    """Outcome of :func:`run`: written files, the sidecar content and the
    in-memory tables keyed by CSV stem."""

    config: ExperimentConfig
    files: list
    summary: dict
    tables: dict

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.summary["checks"].values())

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1


# ---------------------------------------------------------------- helpers

def grid(spec) -> np.ndarray:
    if spec is None:
        raise ConfigError("this experiment needs a t_grid")
    if isinstance(spec, dict):
        try:
            start, stop, num = float(spec["start"]), float(spec["stop"]), int(spec["num"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid spec {spec!r}") from exc
        if spec.get("log"):
            return np.logspace(start, stop, num)
        return np.linspace(start, stop, num)
    return np.asarray(spec, dtype=float)


def r_tag(r: float) -> str:
    """Column suffix for a cooperative ratio: 1 -> r1, 0.6 -> r06."""
    text = f"{float(r):g}"
    return "r" + text.replace(".", "")


def mu_tag(mu: float) -> str:
    return "mu" + f"{float(mu):g}".replace(".", "")


def general_params(n_total, lam, mu, y0, r=None, nc=None, nf=None) -> GeneralParams:
    """Build general-model parameters from ``(nc, nf)`` or, failing that, ``r``.

    Explicit counts win over the ratio; ``nf`` defaults to the peers left
    over once ``y0`` and ``nc`` are placed.
    """
    if nc is not None:
        nf = int(n_total) - int(y0) - int(nc) if nf is None else nf
        p = GeneralParams(int(n_total), float(lam), float(mu), int(y0), int(nc), int(nf))
    elif r is not None:
        p = GeneralParams.from_ratio(int(n_total), float(lam), float(mu), int(y0), float(r))
    else:
        raise ConfigError("give either r or nc")
    try:
        return validate(p)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def meanfield_served(p: GeneralParams) -> float:
    """Number of cooperative peers the fluid limit predicts will be served."""
    xc_inf, _ = terminal_uninfected(MeanFieldParams.from_general(p))
    return p.nc - p.n_total * xc_inf


def late_survival_mask(p: GeneralParams, final_xc) -> np.ndarray:
    """Runs counted as 'the file took off'.

    Above the threshold (``rho > 1``) a run qualifies when it served at least
    half of the cooperative peers the fluid limit predicts.  At or below the
    threshold there is no take-off mode and every run is kept.
    """
    final_xc = np.asarray(final_xc)
    if p.rho <= 1:
        return np.ones(final_xc.shape, dtype=bool)
    return (p.nc - final_xc) >= 0.5 * meanfield_served(p)


def sup_distance(ecdf, cdf_fn, t_hi: float) -> float:
    """Exact ``sup |F_emp(t) - G(t)|`` over ``[0, t_hi]`` for a continuous
    non-decreasing ``G``: only jump points and the end points matter."""
    s = ecdf.samples
    jumps = s[(s >= 0) & (s <= t_hi)]
    pts = np.concatenate(([0.0], jumps, [t_hi]))
    g = np.asarray(cdf_fn(pts), dtype=float)
    right = np.searchsorted(s, pts, side="right") / ecdf.n
    left = np.searchsorted(s, pts, side="left") / ecdf.n
    return float(max(np.max(np.abs(right - g)), np.max(np.abs(left - g))))


def _check(passed, **detail) -> dict:
    return {"passed": bool(passed), **_jsonable(detail)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, columns: dict) -> None:
    """Write equal-length columns with a header row."""
    names = list(columns)
    rows = zip(*(columns[n] for n in names))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------- runners

def _extinction_cdf(cfg: ExperimentConfig):
    P = cfg.params
    t = grid(cfg.t_grid)
    mus, rs = list(P["mu_values"]), list(P["r_values"])
    cols = {"t": t}
    branch_cols = {}
    checks, derived = {}, {}
    for j, mu in enumerate(mus):
        for i, r in enumerate(rs):
            tag = r_tag(r) if len(mus) == 1 else f"{r_tag(r)}_{mu_tag(mu)}"
            p = general_params(P["n_total"], P["lambda"], mu, P["y0"], r=r)
            bp = BranchingParams.from_general(p)
            # each curve gets its own stream so adding a curve leaves the others intact
            seed = child_seed(cfg.seed, 1000 * j + i)
            ens = run_ensemble("general", p, seed, cfg.replicates, t_max=P.get("t_max"))
            F = empirical_cdf(ens.extinction_time)
            emp = F(t)
            G = extinction_cdf(bp, t)
            cols[f"empirical_cdf_{tag}"] = emp
            branch_cols[f"branching_cdf_{tag}"] = G
            # dominance: empirical survival <= branching survival + 3 SE, with the
            # SE taken at the bound (the plug-in SE vanishes where no run died yet)
            se = np.sqrt(G * (1 - G) / cfg.replicates)
            excess = (1 - emp) - (1 - G) - 3 * se
            checks[f"dominance_{tag}"] = _check(np.all(excess <= 1e-12), worst_excess=float(excess.max()))
            q = extinction_probability(bp)
            derived[tag] = {"rho": p.rho, "theta": p.theta, "nc": p.nc, "nf": p.nf, "q": q,
                            "T_B": branching_validity_horizon(bp), "ensemble_seed": seed,
                            "empirical_at_t_max": emp[-1]}
    cols.update(branch_cols)
    return {cfg.stem: cols}, checks, derived


def _early_extinction_mean(cfg: ExperimentConfig):
    P = cfg.params
    n, mu, k, r = int(P["n_total"]), float(P["mu"]), int(P["y0"]), float(P["r"])
    coop = int(round(r * n))
    nc = coop - k
    rhos = np.asarray(P["rho_grid"], dtype=float)
    if np.any(rhos >= 1) or np.any(rhos <= 0):
        raise ConfigError("rho_grid must lie in (0, 1): the branching mean is finite only there")
    cols = {k_: [] for k_ in ("lambda", "rho", "sim_mean", "sim_se", "n_early", "branching_mean", "z")}
    for i, rho in enumerate(rhos):
        lam = rho * mu / nc
        p = general_params(n, lam, mu, k, r=r)
        ens = run_ensemble("general", p, child_seed(cfg.seed, i), cfg.replicates)
        T = ens.extinction_time[late_survival_mask(p, ens.final_xc)]  # rho < 1: all runs
        T = T[np.isfinite(T)]
        mean = T.mean()
        se = T.std(ddof=1) / math.sqrt(len(T))
        eb = expected_extinction_time(BranchingParams.from_general(p))
        for key, v in (("lambda", lam), ("rho", p.rho), ("sim_mean", mean), ("sim_se", se),
                       ("n_early", len(T)), ("branching_mean", eb), ("z", (mean - eb) / se)):
            cols[key].append(v)
    z = np.asarray(cols["z"])
    checks = {"within_3se": _check(np.all(np.abs(z) <= 3), max_abs_z=float(np.abs(z).max()))}
    return {cfg.stem: cols}, checks, {"nc": nc}


def _terminal_fraction(cfg: ExperimentConfig):
    P = cfg.params
    vary = P["vary"]
    if vary not in ("lambda", "mu"):
        raise ConfigError("vary must be 'lambda' or 'mu'")
    values = np.asarray(P["values"], dtype=float)
    tol = {float(k): float(v) for k, v in (P.get("tolerance") or {}).items()}
    cols = {vary: values}
    checks, derived = {}, {}
    for j, r in enumerate(P["r_values"]):
        tag = r_tag(r)
        sim, se, kept, mf, rel = [], [], [], [], []
        for i, v in enumerate(values):
            lam, mu = (v, P["mu"]) if vary == "lambda" else (P["lambda"], v)
            p = general_params(P["n_total"], lam, mu, P["y0"], r=r)
            ens = run_ensemble("general", p, child_seed(cfg.seed, 1000 * j + i), cfg.replicates)
            mask = late_survival_mask(p, ens.final_xc)
            frac = ens.final_xc[mask] / p.n_total
            xc_inf, _ = terminal_uninfected(MeanFieldParams.from_general(p))
            sim.append(frac.mean())
            se.append(frac.std(ddof=1) / math.sqrt(len(frac)) if len(frac) > 1 else math.nan)
            kept.append(int(mask.sum()))
            mf.append(xc_inf)
            rel.append(abs(frac.mean() - xc_inf) / xc_inf)
        cols[f"sim_xc_{tag}"] = sim
        cols[f"sim_se_{tag}"] = se
        cols[f"late_runs_{tag}"] = kept
        cols[f"meanfield_xc_{tag}"] = mf
        cols[f"rel_err_{tag}"] = rel
        if float(r) in tol:
            checks[f"rel_err_{tag}"] = _check(max(rel) <= tol[float(r)], max_rel_err=max(rel),
                                              tolerance=tol[float(r)])
        p0 = general_params(P["n_total"], P["lambda"], P["mu"], P["y0"], r=r)
        derived[tag] = {"nc": p0.nc, "nf": p0.nf}
    return {cfg.stem: cols}, checks, derived


def _phase_sweep(cfg: ExperimentConfig):
    P = cfg.params
    s = grid(cfg.t_grid)
    tables, checks = {}, {}
    for xc0 in P["xc0_values"]:
        res = phase_sweep(float(P["y0"]), float(xc0), s, mu=float(P["mu"]))
        res["xc_inf_over_xc0"] = res["xc_inf"] / xc0
        tag = "xc0_" + f"{float(xc0):g}".replace(".", "")
        tables[f"{cfg.stem}_{tag}"] = res
        checks[f"monotone_{tag}"] = _check(np.all(np.diff(res["xc_inf"]) <= 0))
    return tables, checks, {"transition": "theta * xc0 = 1"}


def _fixed_rate_sweep(cfg: ExperimentConfig):
    from .fixedrate import FixedRateMeanField, max_torrent
    P = cfg.params
    xi = grid(cfg.t_grid)
    tables, checks = {}, {}
    for x0 in P["x0_values"]:
        x0 = float(x0)
        res = sweep_phase_diagram(x0, xi, mu=float(P["mu"]))
        tag = "x0_" + f"{x0:g}".replace(".", "")
        tables[f"{cfg.stem}_{tag}"] = res
        # y_max is continuous across xi = 1/x0, where the peak leaves t = 0
        xs = 1.0 / x0
        below = max_torrent(FixedRateMeanField(xs * (1 - 1e-12), float(P["mu"]), x0))[0]
        above = max_torrent(FixedRateMeanField(xs * (1 + 1e-12), float(P["mu"]), x0))[0]
        checks[f"continuity_{tag}"] = _check(abs(above - below) <= 1e-9, jump=abs(above - below))
    return tables, checks, {"transitions": ["xi = 1", "xi = 1/x0"]}


def control_params(P: dict, alpha: float = 1.0) -> ControlParams:
    n = int(P["n_total"])
    ys, y0 = int(P["y_star_count"]), int(P["y0_count"])
    p = ControlParams(n_total=n, beta=float(P["beta"]), mu_base=float(P["mu"]), alpha=float(alpha),
                      y_star=ys / n, y0=y0 / n, x0=(n - ys - y0) / n)
    try:
        return validate(p)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def _control_utility(cfg: ExperimentConfig):
    P = cfg.params
    alpha = grid(cfg.t_grid)
    c = float(P.get("cost_scale", 1.0))
    tpl = control_params(P)
    curve = delay_curve(tpl, alpha, cost_scale=c)
    lo_b, hi_b = 1.0 / tpl.beta, 1.0 / (tpl.beta * tpl.y_star)
    checks = {"delay_bounds": _check(np.all((curve.t_bar >= lo_b) & (curve.t_bar <= hi_b)),
                                     lower=lo_b, upper=hi_b, min=curve.t_bar.min(), max=curve.t_bar.max())}
    derived = {"y_star": tpl.y_star, "x0": tpl.x0, "cost_scale": c}
    try:
        a_star, h_star = optimize_alpha(tpl, (alpha[0], alpha[-1]), cost_scale=c)
        ratio = tpl.beta / tpl.with_alpha(a_star).mu_of_alpha
        checks["interior_max"] = _check(True, alpha_star=a_star, h_star=h_star)
        band = P.get("ratio_band", [1.5, 3.5])
        checks["ratio_band"] = _check(band[0] <= ratio <= band[1], beta_over_mu_alpha_star=ratio,
                                      band=band)
        derived.update(alpha_star=a_star, h_star=h_star, beta_over_mu_alpha_star=ratio)
    except NoInteriorMax as exc:
        checks["interior_max"] = _check(False, endpoint_alpha=exc.alpha, h=exc.value)
    return {cfg.stem: curve.as_columns()}, checks, derived


def _hybrid(cfg: ExperimentConfig):
    P = cfg.params
    p = general_params(P["n_total"], P["lambda"], P["mu"], P["y0"], r=P["r"])
    n0 = int(P["n0"])
    runs = [simulate_hybrid(p, child_seed(cfg.seed, i), n0) for i in range(cfg.replicates)]
    cols = {key: [getattr(h, key) for h in runs]
            for key in ("seed", "early_extinction", "time", "xc_switch", "xf_switch", "xc_final", "xf_final")}
    bp = BranchingParams.from_general(p)
    q = extinction_probability(bp)
    surv = np.array([not h.early_extinction for h in runs])
    frac = surv.mean()
    se = math.sqrt(q * (1 - q) / cfg.replicates)
    checks = {"survival_fraction": _check(abs(frac - (1 - q)) <= 3 * se + 1e-12,
                                          survival=frac, expected=1 - q, se=se)}
    derived = {"rho": p.rho, "q": q}
    if surv.any() and p.rho > 1:
        hyb = float(np.mean(np.asarray(cols["xc_final"])[surv]))
        # full chain at the same parameters, separate stream
        ens = run_ensemble("general", p, child_seed(cfg.seed, 2**32), cfg.replicates)
        mask = late_survival_mask(p, ens.final_xc)
        full = float(np.mean(ens.final_xc[mask])) / p.n_total
        rel = abs(hyb - full) / full
        tol = float(P.get("tolerance", 0.05))
        checks["terminal_vs_full_chain"] = _check(rel <= tol, hybrid=hyb, full_chain=full,
                                                  rel_err=rel, tolerance=tol)
        derived["meanfield_xc_inf"] = terminal_uninfected(MeanFieldParams.from_general(p))[0]
    return {cfg.stem: cols}, checks, derived


def _oracle_check(cfg: ExperimentConfig):
    P = cfg.params
    p = general_params(P["n_total"], P["lambda"], P["mu"], P["y0"], nc=P["nc"], nf=P["nf"])
    t = grid(cfg.t_grid)
    ex = exact_small_n(p, t)
    R = cfg.replicates
    ens = run_ensemble("general", p, cfg.seed, R, t_max=math.inf)
    cols = {k: [] for k in ("quantity", "key", "exact", "monte_carlo", "standard_error", "z")}

    def add(q, key, exact, mc):
        se = math.sqrt(max(exact * (1 - exact), 0.0) / R)
        z = 0.0 if mc == exact else ((mc - exact) / se if se > 0 else math.inf)
        for k_, v in zip(cols, (q, key, exact, mc, se, z)):
            cols[k_].append(v)

    for (xc, xf), prob in sorted(ex.terminal.items()):
        mc = float(np.mean((ens.final_xc == xc) & (ens.final_xf == xf)))
        add("terminal", f"xc={xc};xf={xf}", prob, mc)
    F = empirical_cdf(ens.extinction_time)
    for ti, g in zip(t, ex.extinction_cdf):
        add("extinction_cdf", f"t={ti:g}", float(g), float(F(ti)))
    z = np.abs(np.asarray(cols["z"], dtype=float))
    checks = {"within_3se": _check(np.all(z <= 3), max_abs_z=float(z.max()), comparisons=len(z))}
    return {cfg.stem: cols}, checks, {"states": len(ex.states), "uniformization_rate": ex.rate}


_RUNNERS = {
    "extinction_cdf": _extinction_cdf,
    "early_extinction_mean": _early_extinction_mean,
    "terminal_fraction": _terminal_fraction,
    "phase_sweep": _phase_sweep,
    "fixed_rate_sweep": _fixed_rate_sweep,
    "control_utility": _control_utility,
    "hybrid": _hybrid,
    "oracle_check": _oracle_check,
}


def run(config: ExperimentConfig | dict, write: bool = True) -> RunResult:
    """Execute one experiment and (by default) write its CSV and sidecar
    files into ``config.out``.  Embedded-check failures are reported in the
    result, never raised."""
    cfg = config if isinstance(config, ExperimentConfig) else ExperimentConfig.from_dict(config)
    cfg.check()
    tables, checks, derived = _RUNNERS[cfg.kind](cfg)
    summary = {
        "tool": "p2ptransient",
        "version": __version__,
        "config": _jsonable(cfg.to_dict()),
        "implementer_choice": cfg.implementer_choice,
        "derived": _jsonable(derived),
        "checks": checks,
        "passed": all(c["passed"] for c in checks.values()),
        "csv": [f"{stem}.csv" for stem in tables],
    }
    files = []
    if write:
        out = Path(cfg.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for stem, cols in tables.items():
                path = out / f"{stem}.csv"
                write_csv(path, cols)
                files.append(str(path))
            side = out / f"{cfg.stem}.json"
            side.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
            files.append(str(side))
        except OSError as exc:
            raise IOError(f"cannot write results to {out}: {exc}") from exc
    return RunResult(cfg, files, summary, tables)


# ---------------------------------------------------------------- figures

def figure_configs(fig_id, overrides: dict | None = None, seed: int | None = None,
                   out: str = ".", replicates: int | None = None) -> list[ExperimentConfig]:
    """Preset configurations for one figure.  ``overrides`` replace preset
    model parameters (and ``t_grid`` when given under that key)."""
    fig = str(fig_id)
    if fig not in FIGURES:
        raise UnknownFigure(f"unknown figure {fig_id!r}; expected one of {FIGURES}")
    overrides = dict(overrides or {})
    t_grid = overrides.pop("t_grid", None)
    seed = DEFAULT_SEED if seed is None else seed
    presets = {
        "1": [dict(kind="phase_sweep", name="fig1")],
        "1bis": [dict(kind="fixed_rate_sweep", name="fig1bis")],
        "3": [dict(kind="extinction_cdf", name="fig3", params={"y0": 1})],
        "4": [dict(kind="extinction_cdf", name="fig4", params={"y0": 3})],
        "5": [dict(kind="extinction_cdf", name="fig5", implementer_choice=True,
                   params={"y0": 1, "lambda": 0.0025, "mu_values": [0.5, 1.0]},
                   notes="mu values of the legend are not given; 0.5 and 1 are a choice")],
        "6": [dict(kind="extinction_cdf", name="fig6", implementer_choice=True,
                   params={"y0": 3, "lambda": 0.0025, "mu_values": [0.5, 1.0]},
                   notes="mu values of the legend are not given; 0.5 and 1 are a choice")],
        "7": [dict(kind="terminal_fraction", name="fig7")],
        "8": [dict(kind="terminal_fraction", name="fig8",
                   params={"vary": "mu", "lambda": 0.006, "values": [0.5, 1.0, 1.5, 2.0, 3.0]})],
        "9": [dict(kind="control_utility", name="fig9_beta2_mu05", implementer_choice=True,
                   params={"beta": 2.0, "mu": 0.5},
                   notes="beta and mu are not given for this figure; values are a choice"),
              dict(kind="control_utility", name="fig9_beta2_mu1", implementer_choice=True,
                   params={"beta": 2.0, "mu": 1.0},
                   notes="beta and mu are not given for this figure; values are a choice")],
    }[fig]
    configs = []
    for i, d in enumerate(presets):
        d = copy.deepcopy(d)
        params = d.setdefault("params", {})
        params.update(overrides)
        if overrides and len(presets) > 1:
            # overrides describe one curve; keep a single config
            if i > 0:
                continue
            d["name"] = f"fig{fig}"
        d["seed"] = seed
        d["out"] = out
        if replicates is not None:
            d["replicates"] = replicates
        if t_grid is not None:
            d["t_grid"] = t_grid
        configs.append(ExperimentConfig.from_dict(d))
    return configs


def figure(fig_id, overrides: dict | None = None, seed: int | None = None, out: str = ".",
           replicates: int | None = None, write: bool = True) -> list[RunResult]:
    """Run the preset(s) for ``fig_id`` in ``FIGURES``."""
    return [run(cfg, write=write) for cfg in figure_configs(fig_id, overrides, seed, out, replicates)]
