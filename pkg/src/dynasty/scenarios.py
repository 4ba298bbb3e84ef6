"""Named experiment registry: every figure and counterfactual as a
deterministic grid artifact (CSV + JSON manifest).

Cell scenarios assign each household a regime through a budget-threshold
rule (the cognitive boundary), then label the cell from the solver's
decisions.  Reruns with the same config are byte-identical; manifests carry
the full parameter record.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable

from . import __version__
from .core import (
    Calibration,
    CostParams,
    FamilyState,
    Household,
    InfeasibleError,
    Model,
    ProductionParams,
    RegimeSpec,
    max_feasible_children,
)
from .dp import Action, decision_at, solve_dp
from .static_solver import solve_static, static_sweep, threshold_curve

DEFAULT_MASTER_SEED = 42
A4_SIGMA = 4.922

B_GRID = tuple(float(b) for b in range(50, 501, 25))
HC_GRID_HEATMAP = tuple(float(hc) for hc in range(1, 13))
HC_GRID_CURVE = tuple(float(hc) for hc in range(1, 15))
FIG1_SIGMA_GRID = tuple((5 * k) / 100 for k in range(1, 101))
A2_ALPHA_GRID = tuple((300 + 25 * k) / 1000 for k in range(21))
A2_SIGMA_GRID = tuple((10 + 5 * k) / 100 for k in range(29))
FIG4_CASES = ((200.0, 2.0), (200.0, 12.0), (350.0, 10.0))  # (budget, hc)

CELL_CSV_HEADER = "scenario,b,hc,label,action_son_first,action_dtr_first,n_star_static,value_root"
STATIC_CSV_HEADER = "model,sigma,hc,budget,n_star,invest_star,utility"
THRESHOLD_CSV_HEADER = "scenario,hc,budget,sigma_star,bracket_low,bracket_high,status"


class Label(str, Enum):
    STOP = "Stop"
    GROW = "Grow"
    CONDITIONAL = "Conditional"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class RegimeRule:
    """Budget-threshold regime assignment; b_crit None means one regime for
    everyone."""

    above: RegimeSpec
    below: RegimeSpec | None = None
    b_crit: float | None = None

    def regime_for(self, h: Household) -> RegimeSpec:
        if self.b_crit is None or self.below is None or h.budget >= self.b_crit:
            return self.above
        return self.below


@dataclass(frozen=True)
class CellRecord:
    b: float
    hc: float
    label: Label
    action_son: Action | None = None
    action_dtr: Action | None = None
    n_star_static: int | None = None
    value_root: float | None = None
    value_son_first: float | None = None
    value_dtr_first: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    id: str
    kind: str  # cells | sensitivity | static_sweep | threshold_curve | cases
    master_seed: int = DEFAULT_MASTER_SEED
    rule: RegimeRule | None = None
    b_grid: tuple[float, ...] = ()
    hc_grid: tuple[float, ...] = ()
    alpha_grid: tuple[float, ...] = ()
    sigma_grid: tuple[float, ...] = ()
    household: Household | None = None
    models: tuple[Model, ...] = ()
    cases: tuple[tuple[float, float], ...] = ()
    sweep_regime: RegimeSpec | None = None
    axes: tuple[str, str] = ("b", "hc")
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DecisionGrid:
    config: ScenarioConfig
    cells: tuple[CellRecord, ...]
    static_rows: tuple[dict, ...] = ()
    threshold_rows: tuple[dict, ...] = ()
    case_policies: tuple[dict, ...] = ()

    def manifest(self) -> dict:
        cfg = self.config
        doc = {
            "scenario": cfg.id,
            "kind": cfg.kind,
            "engine_version": f"dynasty {__version__}",
            "master_seed": cfg.master_seed,
            "axes": list(cfg.axes),
            "grids": {
                "b": list(cfg.b_grid),
                "hc": list(cfg.hc_grid),
                "alpha": list(cfg.alpha_grid),
                "sigma": list(cfg.sigma_grid),
            },
            "cases": [list(c) for c in cfg.cases],
            "notes": dict(cfg.notes),
        }
        if cfg.rule is not None:
            doc["regime_rule"] = _rule_to_dict(cfg.rule)
        if cfg.household is not None:
            doc["household"] = {"hc_parent": cfg.household.hc_parent, "budget": cfg.household.budget}
        if cfg.sweep_regime is not None:
            doc["sweep_regime"] = _regime_to_dict(cfg.sweep_regime)
        if cfg.models:
            doc["models"] = [m.value for m in cfg.models]
        return doc


def _production_to_dict(p: ProductionParams) -> dict:
    return {"tfp_A": p.tfp_a, "alpha": p.alpha, "alpha2": p.alpha2, "sigma": p.sigma}


def _regime_to_dict(r: RegimeSpec) -> dict:
    return {
        "model": r.model.value,
        "production": _production_to_dict(r.production),
        "loss_aversion": r.loss_aversion,
        "refs": {"r_son": r.refs.r_son, "r_dtr": r.refs.r_dtr, "hc_average": r.refs.hc_average},
        "costs": {"k_son": r.costs.k_son, "k_dtr": r.costs.k_dtr},
        "n_max": r.n_max,
    }


def _rule_to_dict(rule: RegimeRule) -> dict:
    doc = {"b_crit": rule.b_crit, "above": _regime_to_dict(rule.above)}
    doc["below"] = _regime_to_dict(rule.below) if rule.below is not None else None
    return doc


def _production_from_dict(doc: dict) -> ProductionParams:
    return ProductionParams(doc["tfp_A"], doc["alpha"], doc["alpha2"], doc["sigma"])


def _regime_from_dict(doc: dict) -> RegimeSpec:
    from .core import ReferenceSpec

    refs = doc["refs"]
    costs = doc["costs"]
    return RegimeSpec(
        model=Model(doc["model"]),
        production=_production_from_dict(doc["production"]),
        loss_aversion=doc["loss_aversion"],
        refs=ReferenceSpec(refs["r_son"], refs["r_dtr"], refs["hc_average"]),
        costs=CostParams(costs["k_son"], costs["k_dtr"]),
        n_max=doc["n_max"],
    )


def config_from_manifest(manifest: dict) -> ScenarioConfig:
    """Rebuild a runnable config from a written manifest, so a run can be
    reproduced from its artifact alone."""
    rule = None
    if "regime_rule" in manifest:
        rdoc = manifest["regime_rule"]
        rule = RegimeRule(
            above=_regime_from_dict(rdoc["above"]),
            below=_regime_from_dict(rdoc["below"]) if rdoc.get("below") else None,
            b_crit=rdoc.get("b_crit"),
        )
    household = None
    if "household" in manifest:
        hdoc = manifest["household"]
        household = Household(hc_parent=hdoc["hc_parent"], budget=hdoc["budget"])
    grids = manifest.get("grids", {})
    return ScenarioConfig(
        id=manifest["scenario"],
        kind=manifest["kind"],
        master_seed=manifest["master_seed"],
        rule=rule,
        b_grid=tuple(grids.get("b", ())),
        hc_grid=tuple(grids.get("hc", ())),
        alpha_grid=tuple(grids.get("alpha", ())),
        sigma_grid=tuple(grids.get("sigma", ())),
        household=household,
        models=tuple(Model(m) for m in manifest.get("models", ())),
        cases=tuple((b, hc) for b, hc in manifest.get("cases", ())),
        sweep_regime=_regime_from_dict(manifest["sweep_regime"]) if "sweep_regime" in manifest else None,
        axes=tuple(manifest.get("axes", ("b", "hc"))),
        notes=dict(manifest.get("notes", {})),
    )


# ---------------------------------------------------------------------------
# Cell classification

def classify_cell(h: Household, rule: RegimeRule) -> CellRecord:
    """Label one household: static survival solve below the boundary,
    stop/grow dynamic program at or above it."""
    regime = rule.regime_for(h)
    if regime.model in (Model.M1, Model.M2, Model.M3):
        return _classify_static(h, regime)
    return _classify_dp(h, regime)


def _classify_static(h: Household, regime: RegimeSpec) -> CellRecord:
    if max_feasible_children(h, regime.costs) == 0:
        return CellRecord(h.budget, h.hc_parent, Label.INFEASIBLE)
    try:
        sol = solve_static(regime.model, h, regime)
    except InfeasibleError:
        return CellRecord(h.budget, h.hc_parent, Label.INFEASIBLE)
    label = Label.GROW if sol.n_star >= 2 else Label.STOP
    return CellRecord(
        h.budget,
        h.hc_parent,
        label,
        n_star_static=sol.n_star,
        value_root=sol.utility_star,
    )


def _classify_dp(h: Household, regime: RegimeSpec) -> CellRecord:
    try:
        table = solve_dp(h, regime)
    except InfeasibleError:
        return CellRecord(h.budget, h.hc_parent, Label.INFEASIBLE)
    son_first, dtr_first = FamilyState(1, 0), FamilyState(0, 1)
    a_son = decision_at(son_first, table)
    a_dtr = decision_at(dtr_first, table)
    if a_son is Action.STOP and a_dtr is Action.STOP:
        label = Label.STOP
    elif a_son is Action.GROW and a_dtr is Action.GROW:
        label = Label.GROW
    else:
        label = Label.CONDITIONAL
    return CellRecord(
        h.budget,
        h.hc_parent,
        label,
        action_son=a_son,
        action_dtr=a_dtr,
        value_root=table.root_value,
        value_son_first=table.records[son_first].value,
        value_dtr_first=table.records[dtr_first].value,
    )


def _cell_job(args: tuple[RegimeRule, float, float]) -> CellRecord:
    rule, b, hc = args
    return classify_cell(Household(hc_parent=hc, budget=b), rule)


def _sensitivity_job(args: tuple[RegimeSpec, Household, float, float]) -> CellRecord:
    base, h, alpha, sigma = args
    regime = replace(base, production=replace(base.production, alpha=alpha, sigma=sigma))
    rec = _classify_dp(h, regime)
    return replace(rec, b=alpha, hc=sigma)


# ---------------------------------------------------------------------------
# Running scenarios

def run_scenario(cfg: ScenarioConfig, jobs: int = 1) -> DecisionGrid:
    if cfg.kind == "cells":
        grids_ok = cfg.b_grid and cfg.hc_grid
        if not grids_ok:
            raise ValueError(f"scenario {cfg.id}: empty grid")
        tasks = [(cfg.rule, b, hc) for b in cfg.b_grid for hc in cfg.hc_grid]
        cells = tuple(_run_jobs(_cell_job, tasks, jobs))
        return DecisionGrid(cfg, cells)

    if cfg.kind == "sensitivity":
        tasks = [
            (cfg.sweep_regime, cfg.household, a, s)
            for a in cfg.alpha_grid
            for s in cfg.sigma_grid
        ]
        cells = tuple(_run_jobs(_sensitivity_job, tasks, jobs))
        return DecisionGrid(cfg, cells)

    if cfg.kind == "static_sweep":
        rows = static_sweep(list(cfg.models), cfg.household, list(cfg.sigma_grid), cfg.sweep_regime)
        return DecisionGrid(cfg, cells=(), static_rows=tuple(rows))

    if cfg.kind == "threshold_curve":
        curve = threshold_curve(list(cfg.hc_grid), cfg.household.budget, cfg.sweep_regime)
        rows = []
        for hc in cfg.hc_grid:
            res = curve[hc]
            rows.append(
                {
                    "scenario": cfg.id,
                    "hc": hc,
                    "budget": cfg.household.budget,
                    "sigma_star": res.sigma_star,
                    "bracket_low": res.bracket[0],
                    "bracket_high": res.bracket[1],
                    "status": "ok" if res.found else "not_found",
                }
            )
        return DecisionGrid(cfg, cells=(), threshold_rows=tuple(rows))

    if cfg.kind == "cases":
        cells = []
        policies = []
        for b, hc in cfg.cases:
            h = Household(hc_parent=hc, budget=b)
            rec = classify_cell(h, cfg.rule)
            cells.append(rec)
            table = solve_dp(h, cfg.rule.regime_for(h))
            policies.append({"b": b, "hc": hc, "label": rec.label.value, "policy": table.to_json_dict()})
        return DecisionGrid(cfg, tuple(cells), case_policies=tuple(policies))

    raise ValueError(f"unknown scenario kind {cfg.kind!r}")


def _run_jobs(fn: Callable, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) < 8:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=16))


# ---------------------------------------------------------------------------
# Artifacts

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def cell_csv_lines(grid: DecisionGrid) -> list[str]:
    lines = [CELL_CSV_HEADER]
    for c in grid.cells:
        lines.append(
            ",".join(
                [
                    grid.config.id,
                    _fmt(c.b),
                    _fmt(c.hc),
                    c.label.value,
                    c.action_son.value if c.action_son else "",
                    c.action_dtr.value if c.action_dtr else "",
                    _fmt(c.n_star_static),
                    _fmt(c.value_root),
                ]
            )
        )
    return lines


def static_csv_lines(grid: DecisionGrid) -> list[str]:
    lines = [STATIC_CSV_HEADER]
    for r in grid.static_rows:
        lines.append(
            ",".join(_fmt(r[k]) for k in ("model", "sigma", "hc", "budget", "n_star", "invest_star", "utility"))
        )
    return lines


def threshold_csv_lines(grid: DecisionGrid) -> list[str]:
    lines = [THRESHOLD_CSV_HEADER]
    for r in grid.threshold_rows:
        lines.append(
            ",".join(
                _fmt(r[k])
                for k in ("scenario", "hc", "budget", "sigma_star", "bracket_low", "bracket_high", "status")
            )
        )
    return lines


def grid_csv_text(grid: DecisionGrid) -> str:
    if grid.config.kind == "static_sweep":
        lines = static_csv_lines(grid)
    elif grid.config.kind == "threshold_curve":
        lines = threshold_csv_lines(grid)
    else:
        lines = cell_csv_lines(grid)
    return "\n".join(lines) + "\n"


def write_artifacts(grid: DecisionGrid, out_dir: str | Path) -> dict[str, Path]:
    """Write <id>.csv, <id>.manifest.json and, for case scenarios,
    <id>.cases.json.  Output bytes depend only on the config."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    csv_path = out / f"{grid.config.id}.csv"
    csv_path.write_text(grid_csv_text(grid), encoding="utf-8")
    paths["csv"] = csv_path

    manifest_path = out / f"{grid.config.id}.manifest.json"
    manifest_path.write_text(
        json.dumps(grid.manifest(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    paths["manifest"] = manifest_path

    if grid.case_policies:
        cases_path = out / f"{grid.config.id}.cases.json"
        cases_path.write_text(
            json.dumps({"cases": list(grid.case_policies)}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        paths["cases"] = cases_path
    return paths


# ---------------------------------------------------------------------------
# Registry

def hybrid_rule(
    cal: Calibration,
    b_crit: float = 200.0,
    reality_sigma: float | None = None,
    belief_sigma: float | None = None,
    striver_model: Model = Model.M4B,
    striver_production: ProductionParams | None = None,
) -> RegimeRule:
    """Survival/reality below the boundary, anxiety/belief at or above it."""
    from .core import REALITY_SIGMA

    below = cal.survivor_regime(sigma=REALITY_SIGMA if reality_sigma is None else reality_sigma)
    above = cal.striver_regime(model=striver_model)
    if striver_production is not None:
        above = replace(above, production=striver_production)
    elif belief_sigma is not None:
        above = above.with_sigma(belief_sigma)
    return RegimeRule(above=above, below=below, b_crit=b_crit)


def uniform_rule(regime: RegimeSpec) -> RegimeRule:
    return RegimeRule(above=regime)


def _fig1(cal: Calibration, seed: int) -> ScenarioConfig:
    regime = RegimeSpec(
        model=Model.M1,
        production=cal.reality_production(),
        loss_aversion=cal.lam,
        refs=cal.survivor_refs(),
        costs=cal.costs(),
        n_max=cal.n_max,
    )
    return ScenarioConfig(
        id="fig1",
        kind="static_sweep",
        master_seed=seed,
        household=Household(hc_parent=6.0, budget=200.0),
        models=(Model.M1, Model.M2, Model.M3),
        sigma_grid=FIG1_SIGMA_GRID,
        sweep_regime=regime,
        axes=("sigma", "model"),
        notes={"summary": "optimal static fertility vs uncertainty for the three archetypes"},
    )


def _fig2(cal: Calibration, seed: int) -> ScenarioConfig:
    regime = cal.survivor_regime()
    return ScenarioConfig(
        id="fig2",
        kind="threshold_curve",
        master_seed=seed,
        household=Household(hc_parent=6.0, budget=200.0),
        hc_grid=HC_GRID_CURVE,
        sweep_regime=regime,
        axes=("hc", "sigma_star"),
        notes={"summary": "risk threshold where the survival strategy leaves N=1, by parental HC"},
    )


def _fig3(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="fig3",
        kind="cells",
        master_seed=seed,
        rule=hybrid_rule(cal),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={"summary": "hybrid decision landscape: survival below B=200, anxiety above"},
    )


def _fig4(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="fig4",
        kind="cases",
        master_seed=seed,
        rule=hybrid_rule(cal),
        cases=FIG4_CASES,
        notes={"summary": "per-state decision logic for three striver households"},
    )


def _a1(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="A1",
        kind="cells",
        master_seed=seed,
        rule=uniform_rule(cal.striver_regime()),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={"summary": "uniform anxiety/belief counterfactual (poverty trap)"},
    )


def _a2(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="A2",
        kind="sensitivity",
        master_seed=seed,
        household=Household(hc_parent=6.0, budget=200.0),
        alpha_grid=A2_ALPHA_GRID,
        sigma_grid=A2_SIGMA_GRID,
        sweep_regime=cal.striver_regime(),
        axes=("alpha", "sigma"),
        notes={"summary": "belief-parameter sensitivity of the trap at HC=6, B=200"},
    )


def _a3(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="A3",
        kind="cells",
        master_seed=seed,
        rule=hybrid_rule(cal, belief_sigma=1.0),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={"summary": "hybrid with weakened risk bias (belief sigma = 1.0)"},
    )


def _a4(cal: Calibration, seed: int) -> ScenarioConfig:
    production = ProductionParams(cal.tfp_A, 0.665, 0.0, A4_SIGMA)
    regime = replace(cal.striver_regime(), production=production)
    return ScenarioConfig(
        id="A4",
        kind="cells",
        master_seed=seed,
        rule=uniform_rule(regime),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={"summary": "anxiety utility exposed to objective risk (universal stop)"},
    )


def _a5(cal: Calibration, seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        id="A5",
        kind="cells",
        master_seed=seed,
        rule=hybrid_rule(cal, b_crit=250.0),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={"summary": "cognitive boundary shifted to B=250"},
    )


def _b1(cal: Calibration, seed: int) -> ScenarioConfig:
    production = ProductionParams(cal.tfp_A, 0.665, 0.05, cal.sigma)
    return ScenarioConfig(
        id="B1",
        kind="cells",
        master_seed=seed,
        rule=hybrid_rule(cal, striver_model=Model.M4C, striver_production=production),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={
            "summary": "institutional variant, high curvature penalty",
            "assumption": "curvature isolates the returns channel: belief sigma and loss aversion kept",
        },
    )


def _b2(cal: Calibration, seed: int) -> ScenarioConfig:
    production = ProductionParams(cal.tfp_A, 0.665, 0.02, cal.sigma)
    return ScenarioConfig(
        id="B2",
        kind="cells",
        master_seed=seed,
        rule=hybrid_rule(cal, striver_model=Model.M4C, striver_production=production),
        b_grid=B_GRID,
        hc_grid=HC_GRID_HEATMAP,
        notes={
            "summary": "institutional variant, low curvature penalty",
            "assumption": "curvature isolates the returns channel: belief sigma and loss aversion kept",
        },
    )


REGISTRY: dict[str, Callable[[Calibration, int], ScenarioConfig]] = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "A1": _a1,
    "A2": _a2,
    "A3": _a3,
    "A4": _a4,
    "A5": _a5,
    "B1": _b1,
    "B2": _b2,
}


def build_scenario(
    scenario_id: str,
    cal: Calibration | None = None,
    master_seed: int = DEFAULT_MASTER_SEED,
) -> ScenarioConfig:
    if scenario_id not in REGISTRY:
        raise KeyError(f"unknown scenario id {scenario_id!r}")
    return REGISTRY[scenario_id](cal or Calibration(), master_seed)


def run_decision_cases(cal: Calibration | None = None) -> tuple[dict, ...]:
    """The three striver case studies with full per-state values/actions."""
    cfg = build_scenario("fig4", cal)
    return run_scenario(cfg).case_policies
