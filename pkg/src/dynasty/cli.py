"""Batch command-line front end.

Commands: scenario, solve, threshold, sweep, check.  Exit codes: 0 success,
2 configuration error, 3 failed self-check.  DYNASTY_SEED is the seed
fallback when --seed is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    Calibration,
    FamilyState,
    Household,
    Model,
    ProductionParams,
    RegimeSpec,
    calibration_from_dict,
)
from .dp import enumerate_policies_oracle, solve_dp
from .montecarlo import mc_expected_utility
from .scenarios import (
    DEFAULT_MASTER_SEED,
    REGISTRY,
    build_scenario,
    config_from_manifest,
    run_scenario,
    write_artifacts,
)
from .static_solver import rational_threshold, static_sweep
from .utility import (
    ChildPlan,
    m1_success_prob,
    m2_static_utility,
    m3_expected_utility,
    m4b_family_utility,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK_FAILED = 3


class ConfigError(Exception):
    pass


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DYNASTY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"DYNASTY_SEED is not an integer: {env!r}") from exc
    return DEFAULT_MASTER_SEED


def _load_config(args) -> Calibration:
    """defaults < --config file < --set key=value"""
    doc: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {args.config}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config JSON in {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config root must be a JSON object: {args.config}")
        doc.update(loaded)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            doc[key] = json.loads(raw)
        except json.JSONDecodeError:
            doc[key] = raw
    try:
        return calibration_from_dict(doc)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _household(args) -> Household:
    try:
        return Household(hc_parent=args.hc, budget=args.b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory not writable: {out} ({exc})") from exc
    return out


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


# ---------------------------------------------------------------------------
# Commands

def _cmd_scenario(args) -> int:
    out = _out_dir(args)
    if args.manifest:
        try:
            with open(args.manifest, "r", encoding="utf-8") as fh:
                manifest = json.load(fh)
            cfg = config_from_manifest(manifest)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot rerun from manifest {args.manifest}: {exc}") from exc
        grid = run_scenario(cfg, jobs=args.jobs)
        paths = write_artifacts(grid, out)
        _say(args, f"{cfg.id}: wrote {paths['csv']} and {paths['manifest']}")
        return EXIT_OK
    if args.id is None:
        raise ConfigError("scenario requires --id or --manifest")
    cal = _load_config(args)
    seed = _resolve_seed(args)
    ids = list(REGISTRY) if args.id == "all" else [args.id]
    for scenario_id in ids:
        try:
            cfg = build_scenario(scenario_id, cal, master_seed=seed)
        except KeyError as exc:
            raise ConfigError(f"unknown scenario id: {scenario_id!r}") from exc
        grid = run_scenario(cfg, jobs=args.jobs)
        paths = write_artifacts(grid, out)
        _say(args, f"{scenario_id}: wrote {paths['csv']} and {paths['manifest']}")
    return EXIT_OK


def _striver_regime(cal: Calibration, world: str) -> RegimeSpec:
    regime = cal.striver_regime()
    if world == "reality":
        regime = replace(regime, production=cal.reality_production())
    return regime


def _cmd_solve(args) -> int:
    cal = _load_config(args)
    h = _household(args)
    regime = _striver_regime(cal, args.world)
    table = solve_dp(h, regime)
    text = table.to_json()
    if args.out:
        out = _out_dir(args)
        path = out / f"solve_hc{args.hc:g}_b{args.b:g}.json"
        path.write_text(text + "\n", encoding="utf-8")
        _say(args, f"wrote {path}")
    else:
        print(text)
    return EXIT_OK


def _cmd_threshold(args) -> int:
    cal = _load_config(args)
    h = _household(args)
    regime = cal.survivor_regime()
    result = rational_threshold(h, regime)
    if not result.found:
        print(f"no switch within sigma range {result.bracket}")
        return EXIT_OK
    lo, hi = result.bracket
    print(f"sigma* = {result.sigma_star:.4f} (bracket [{lo:.4f}, {hi:.4f}])")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cal = _load_config(args)
    h = _household(args)
    try:
        models = [Model(m.strip()) for m in args.models.split(",") if m.strip()]
    except ValueError as exc:
        raise ConfigError(f"unknown model in --models: {args.models!r}") from exc
    regime = cal.survivor_regime()
    grid = [round(0.05 * k, 10) for k in range(1, 101)]
    rows = static_sweep(models, h, grid, regime)
    lines = ["model,sigma,hc,budget,n_star,invest_star,utility"]
    for r in rows:
        lines.append(
            f"{r['model']},{r['sigma']:.12g},{r['hc']:.12g},{r['budget']:.12g},"
            f"{r['n_star']},{r['invest_star']:.12g},{r['utility']:.12g}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        out = _out_dir(args)
        path = out / "sweep.csv"
        path.write_text(text, encoding="utf-8")
        _say(args, f"wrote {path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args) -> int:
    cal = _load_config(args)
    seed = _resolve_seed(args)
    draws = args.draws
    failures: list[str] = []
    rng = np.random.default_rng(seed)

    # analytic expectations vs Monte Carlo, all five models
    for trial in range(args.points):
        hc = float(rng.uniform(1.0, 14.0))
        budget = float(rng.uniform(120.0, 500.0))
        sigma = float(rng.uniform(0.1, 4.0))
        alpha = float(rng.uniform(0.3, 0.9))
        lam = float(rng.uniform(1.0, 4.0))
        h = Household(hc_parent=hc, budget=budget)
        production = ProductionParams(cal.tfp_A, alpha, 0.0, sigma)
        regime = replace(cal.striver_regime(), production=production, loss_aversion=lam)
        n = int(rng.integers(1, 4))
        invest = (budget - n * cal.k_son) / n
        if invest <= 0:
            continue
        for model in (Model.M1, Model.M2, Model.M3, Model.M4B, Model.M4C):
            p = production if model is not Model.M4C else replace(production, alpha2=0.02)
            reg = replace(regime, production=p, model=model)
            if model is Model.M1:
                analytic = m1_success_prob(n, invest, reg.refs.resolve_survival(h), p)
                plan = ChildPlan(invest, 0.0, FamilyState(n, 0))
            elif model is Model.M3:
                analytic = m3_expected_utility(n, invest, p)
                plan = ChildPlan(invest, 0.0, FamilyState(n, 0))
            elif model is Model.M2:
                analytic = m2_static_utility(n, invest, h, reg)
                plan = ChildPlan(invest, 0.0, FamilyState(n, 0))
            else:
                n_m, n_f = (1, n - 1) if n > 1 else (1, 0)
                plan = ChildPlan(invest, invest if n_f else 0.0, FamilyState(n_m, n_f))
                analytic = m4b_family_utility(
                    plan, reg.refs.resolve_son(h), reg.refs.resolve_dtr(h), p, lam
                )
            est, se = mc_expected_utility(model, plan, h, reg, draws=draws, seed=seed + trial)
            tol = 4.0 * max(se, 1e-12)
            if model is Model.M1:
                tol = max(tol, 5.0 / draws)  # exact-binomial floor when p-hat saturates
            if abs(est - analytic) > tol:
                failures.append(
                    f"MC mismatch {model.value}: analytic={analytic:.6g} mc={est:.6g} se={se:.2g}"
                )

    # recursion vs policy enumeration
    for trial in range(args.points * 2):
        hc = float(rng.uniform(1.0, 14.0))
        budget = float(rng.uniform(130.0, 500.0))
        sigma = float(rng.uniform(0.1, 1.5))
        alpha = float(rng.uniform(0.3, 0.9))
        lam = float(rng.uniform(1.0, 4.0))
        h = Household(hc_parent=hc, budget=budget)
        production = ProductionParams(cal.tfp_A, alpha, 0.0, sigma)
        regime = replace(cal.striver_regime(), production=production, loss_aversion=lam)
        root = solve_dp(h, regime).root_value
        best, _ = enumerate_policies_oracle(h, regime)
        if abs(root - best) > 1e-9 * max(1.0, abs(best)):
            failures.append(f"DP mismatch at hc={hc:.3g} b={budget:.4g}: {root!r} vs {best!r}")

    if failures:
        for f in failures:
            print(f"FAIL {f}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    _say(args, f"self-checks passed ({args.points} MC points, {args.points * 2} policy draws)")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynasty", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dynasty {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master seed (fallback: DYNASTY_SEED)")
        p.add_argument("--config", type=str, default=None, help="JSON calibration document")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="calibration override")
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("scenario", help="run a registered scenario to CSV + manifest")
    p.add_argument("--id", default=None, help=f"one of {', '.join(REGISTRY)} or 'all'")
    p.add_argument("--manifest", default=None, help="rerun from a previously written manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common(p)

    p = sub.add_parser("solve", help="dynamic policy for one household")
    p.add_argument("--hc", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--world", choices=("belief", "reality"), default="belief")
    p.add_argument("--out", default=None)
    common(p)

    p = sub.add_parser("threshold", help="risk threshold sigma* for one household")
    p.add_argument("--hc", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    common(p)

    p = sub.add_parser("sweep", help="static sweep over sigma for chosen models")
    p.add_argument("--hc", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--models", default="M1,M2,M3")
    p.add_argument("--out", default=None)
    common(p)

    p = sub.add_parser("check", help="run analytic-vs-MC and recursion-vs-enumeration suites")
    p.add_argument("--oracles", action="store_true", help="kept for compatibility; checks always run")
    p.add_argument("--draws", type=int, default=100_000)
    p.add_argument("--points", type=int, default=10)
    common(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "scenario": _cmd_scenario,
        "solve": _cmd_solve,
        "threshold": _cmd_threshold,
        "sweep": _cmd_sweep,
        "check": _cmd_check,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
