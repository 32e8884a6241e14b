"""Command-line front end.

    p2ptransient <command> [--config FILE] [--seed U64] [--out DIR]
                 [--replicates N] [key=value ...]

Commands: simulate, branching, meanfield, fixedrate, control, figure, report.
Values are resolved as flags > config file > defaults; ``key=value`` pairs
count as flags.  Exit status is 0 on success, 1 when an embedded check
fails and 2 on configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .branching import (BranchingParams, Supercritical, branching_validity_horizon,
                        expected_extinction_time, extinction_cdf, extinction_probability)
from .control import NoInteriorMax
from .ctmc import simulate_fixed_rate, simulate_fully_cooperative, simulate_general
from .ensemble import run_ensemble
from .experiments import (DEFAULT_SEED, ConfigError, ExperimentConfig, _jsonable, figure,
                          general_params, grid, run, write_csv)
from .fixedrate import (FixedRateMeanField, max_torrent, scaled_trajectory, stop_time,
                        terminal_uninfected_fraction)
from .meanfield import (BracketFailure, MeanFieldParams, integrate_ode, peak_fraction,
                        terminal_time, terminal_uninfected)
from .model import FixedRateParams, ParameterError, validate
from .validation import SUITES, report

EXIT_OK, EXIT_CHECKS, EXIT_CONFIG = 0, 1, 2

# experiment kinds each command may run besides its own basic action
COMMAND_KINDS = {
    "simulate": ("extinction_cdf", "early_extinction_mean", "terminal_fraction", "hybrid", "oracle_check"),
    "branching": (),
    "meanfield": ("phase_sweep",),
    "fixedrate": ("fixed_rate_sweep",),
    "control": ("control_utility",),
}
TOP_LEVEL = {"kind", "t_grid", "name", "replicates", "seed", "out"}

BASIC_DEFAULTS = {
    "simulate": {"params": {"model": "general", "n_total": 400, "lambda": 0.006, "mu": 1.0, "y0": 1,
                            "r": 1.0, "trajectory": False},
                 "replicates": 100},
    "branching": {"params": {"n_total": 400, "lambda": 0.006, "mu": 1.0, "y0": 1, "r": 1.0},
                  "t_grid": {"start": 0.0, "stop": 20.0, "num": 201}},
    "meanfield": {"params": {"beta": 2.4, "mu": 1.0, "y0": 0.0025, "xc0": 0.9975, "xf0": 0.0,
                             "t_end": 20.0, "dt": 0.05}},
    "fixedrate": {"params": {"xi": 2.0, "mu": 1.0, "x0": 0.8, "dt": 0.01}},
}


class CliError(Exception):
    pass


def parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(pairs) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {item!r}")
        out[key.strip()] = parse_value(value)
    return out


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigError("config file must hold a JSON object")
    return d


def resolve(file_cfg: dict, overrides: dict, args) -> dict:
    """Merge config file, ``key=value`` pairs and flags (later wins)."""
    cfg = {k: v for k, v in file_cfg.items() if k != "params"}
    params = dict(file_cfg.get("params") or {})
    for k, v in overrides.items():
        if k in TOP_LEVEL:
            cfg[k] = v
        else:
            params[k] = v
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.replicates is not None:
        cfg["replicates"] = args.replicates
    if args.out is not None:
        cfg["out"] = args.out
    cfg["params"] = params
    return cfg


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="p2ptransient", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "branching", "meanfield", "fixedrate", "control", "figure", "report"):
        p = sub.add_parser(name)
        if name == "figure":
            p.add_argument("fig_id", help="one of 1, 1bis, 3, 4, 5, 6, 7, 8, 9")
        if name == "report":
            p.add_argument("suite", nargs="?", default="all",
                           help="suite name or 'all': " + ", ".join(SUITES))
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=_seed, help="master seed (unsigned 64-bit)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--replicates", type=_positive)
        p.add_argument("overrides", nargs="*", metavar="key=value")
    return parser


# ---------------------------------------------------------------- basic actions

def _emit(out, stem, tables, summary) -> list[str]:
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for name, cols in tables.items():
            write_csv(out / f"{name}.csv", cols)
            files.append(str(out / f"{name}.csv"))
        (out / f"{stem}.json").write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
        files.append(str(out / f"{stem}.json"))
    except OSError as exc:
        raise CliError(f"cannot write results to {out}: {exc}") from exc
    return files


def _summary(command, cfg, derived, checks=None) -> dict:
    checks = checks or {}
    return {"tool": "p2ptransient", "version": __version__, "command": command, "config": cfg,
            "derived": derived, "checks": checks, "passed": all(c["passed"] for c in checks.values())}


def _basic(command, cfg) -> tuple[dict, dict, dict]:
    P = cfg["params"]
    if command == "simulate":
        return _simulate(cfg, P)
    if command == "branching":
        p = general_params(P["n_total"], P["lambda"], P["mu"], P["y0"], r=P.get("r"),
                           nc=P.get("nc"), nf=P.get("nf"))
        bp = BranchingParams.from_general(p)
        t = grid(cfg.get("t_grid"))
        derived = {"rho": bp.rho, "q": extinction_probability(bp),
                   "T_B": branching_validity_horizon(bp)}
        try:
            derived["expected_extinction_time"] = expected_extinction_time(bp)
        except Supercritical:
            derived["expected_extinction_time"] = math.inf
        return {"branching": {"t": t, "branching_cdf": extinction_cdf(bp, t)}}, derived, {}
    if command == "meanfield":
        mf = MeanFieldParams(float(P["beta"]), float(P["mu"]), float(P["y0"]), float(P["xc0"]),
                             float(P.get("xf0", 0.0)))
        path = integrate_ode(mf, float(P["t_end"]), float(P["dt"]))
        xc_inf, xf_inf = terminal_uninfected(mf)
        derived = {"theta": mf.theta, "xc_inf": xc_inf, "xf_inf": xf_inf,
                   "y_max": peak_fraction(mf)[0], "tau": terminal_time(mf)}
        return {"meanfield": {"t": path.t, "y": path.y, "xc": path.xc, "xf": path.xf}}, derived, {}
    if command == "fixedrate":
        fr = FixedRateMeanField(float(P["xi"]), float(P["mu"]), float(P["x0"]))
        tau = stop_time(fr)
        t = np.arange(0.0, tau, float(P["dt"]))
        y, x = scaled_trajectory(fr, t)
        y_max, t_peak = max_torrent(fr)
        derived = {"tau": tau, "y_max": y_max, "t_peak": t_peak,
                   "terminal_fraction": terminal_uninfected_fraction(fr)}
        return {"fixedrate": {"t": t, "y": y, "x": x}}, derived, {}
    raise CliError(f"no basic action for {command}")


def _simulate(cfg, P):
    model = P.get("model", "general")
    seed = int(cfg.get("seed", DEFAULT_SEED))
    if model == "fixed_rate":
        p = validate(FixedRateParams(int(P["n_total"]), float(P["lambda"]), float(P["mu"]), int(P["y0"])))
    elif model in ("general", "fully_cooperative"):
        mu = 0.0 if model == "fully_cooperative" else P["mu"]
        p = general_params(P["n_total"], P["lambda"], mu, P["y0"], r=P.get("r"), nc=P.get("nc"),
                           nf=P.get("nf"))
    else:
        raise ConfigError(f"unknown model {model!r}")
    t_max = P.get("t_max")
    if P.get("trajectory"):
        if model == "fixed_rate":
            traj = simulate_fixed_rate(p, seed, t_max)
        elif model == "fully_cooperative":
            traj = simulate_fully_cooperative(p, seed)
        else:
            traj = simulate_general(p, seed, t_max)
        cols = {"t": traj.t, **{c: traj.column(c) for c in traj.columns}}
        return {"trajectory": cols}, {"terminal_reason": traj.terminal_reason,
                                      "extinction_time": traj.extinction_time}, {}
    ens = run_ensemble(model, p, seed, int(cfg.get("replicates", 1)), t_max=t_max)
    recs = list(ens.records())
    names = ("replicate", "seed", "extinction_time", "final_xc", "final_xf", "max_y", "peak_time")
    cols = {n: [r[i] for r in recs] for i, n in enumerate(names)}
    finite = ens.extinction_time[np.isfinite(ens.extinction_time)]
    derived = {"replicates": len(ens), "extinct_runs": len(finite),
               "mean_final_xc": float(ens.final_xc.mean())}
    return {"ensemble": cols}, derived, {}


# ---------------------------------------------------------------- dispatch

def _run_command(args) -> int:
    overrides = parse_overrides(args.overrides)
    if args.command == "report":
        result = report(args.suite) if args.suite == "all" or args.suite in SUITES else None
        if result is None:
            raise ConfigError(f"unknown suite {args.suite!r}; expected one of {sorted(SUITES)} or 'all'")
        out = args.out or "."
        _emit(out, f"report_{args.suite}", {}, result)
        for name, r in result["results"].items():
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {name}")
        return EXIT_OK if result["passed"] else EXIT_CHECKS
    if args.command == "figure":
        file_cfg = load_config(args.config)
        cfg = resolve(file_cfg, overrides, args)
        params = dict(cfg.pop("params"))
        if "t_grid" in cfg:
            params["t_grid"] = cfg["t_grid"]
        try:
            results = figure(args.fig_id, params, seed=cfg.get("seed"), out=cfg.get("out", "."),
                             replicates=cfg.get("replicates"))
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        for r in results:
            _print_result(r.files, r.summary)
        return EXIT_OK if all(r.passed for r in results) else EXIT_CHECKS

    cfg = resolve(load_config(args.config), overrides, args)
    kind = cfg.get("kind")
    if kind is not None:
        if kind not in COMMAND_KINDS[args.command]:
            raise ConfigError(f"{args.command} cannot run kind {kind!r}; allowed: "
                              f"{COMMAND_KINDS[args.command] or 'none'}")
        try:
            result = run(ExperimentConfig.from_dict(cfg))
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        _print_result(result.files, result.summary)
        return result.exit_status
    if args.command == "control":
        result = run(ExperimentConfig.from_dict({**cfg, "kind": "control_utility"}))
        _print_result(result.files, result.summary)
        return result.exit_status
    base = json.loads(json.dumps(BASIC_DEFAULTS[args.command]))
    params = {**base.pop("params"), **cfg.pop("params")}
    merged = {**base, "seed": DEFAULT_SEED, "out": ".", **cfg, "params": params}
    unknown = set(merged) - TOP_LEVEL - {"params"}
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    try:
        tables, derived, checks = _basic(args.command, merged)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"missing or malformed parameter: {exc}") from exc
    summary = _summary(args.command, merged, derived, checks)
    files = _emit(merged["out"], merged.get("name") or args.command, tables, summary)
    _print_result(files, summary)
    return EXIT_OK if summary["passed"] else EXIT_CHECKS


def _print_result(files, summary):
    for f in files:
        print(f)
    for name, c in summary.get("checks", {}).items():
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {name}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # key=value pairs may also follow the flags
        bad = [e for e in extra if e.startswith("-") or "=" not in e]
        if bad:
            parser.error(f"unrecognized arguments: {' '.join(bad)}")
        args.overrides = list(args.overrides) + extra
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; keep --help at 0
        return int(exc.code or 0)
    try:
        return _run_command(args)
    except (ConfigError, ParameterError, CliError, BracketFailure, NoInteriorMax, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
