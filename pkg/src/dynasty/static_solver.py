"""Static one-shot choice of family size and uniform investment (M1/M2/M3),
and the risk threshold where the survival strategy switches away from a
single child."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Household, InfeasibleError, Model, RegimeSpec
from .utility import static_utility

DEFAULT_SIGMA_RANGE = (0.05, 5.0)
DEFAULT_SCAN_STEP = 0.05
DEFAULT_RESOLUTION = 0.01


@dataclass(frozen=True)
class StaticSolution:
    n_star: int
    invest_star: float
    utility_star: float
    per_n_values: dict[int, float] = field(repr=False)


@dataclass(frozen=True)
class ThresholdResult:
    """Switch point of the optimal family size, or the scanned range if the
    switch never happens."""

    sigma_star: float | None
    bracket: tuple[float, float]
    found: bool


def solve_static(model: Model, h: Household, regime: RegimeSpec) -> StaticSolution:
    """Enumerate N = 1..floor(B/K), set I = (B - N*K)/N, pick the argmax.

    Family size is capped only by the budget here; the n_max cap belongs to
    the dynamic program.  Ties break toward smaller N, which also resolves
    the saturated region where several sizes reach utility 1.0 exactly.
    """
    if model not in (Model.M1, Model.M2, Model.M3):
        raise ValueError(f"solve_static handles M1/M2/M3, got {model}")
    k = regime.costs.k_min
    if h.budget < k:
        raise InfeasibleError(f"budget {h.budget} below one fixed cost {k}")
    per_n: dict[int, float] = {}
    best_n = None
    best_u = None
    for n in range(1, int(h.budget // k) + 1):
        invest = (h.budget - n * k) / n
        if invest <= 0:
            continue
        u = static_utility(model, n, invest, h, regime)
        per_n[n] = u
        if best_u is None or u > best_u:
            best_n, best_u = n, u
    if best_n is None:
        raise InfeasibleError(f"budget {h.budget} leaves no positive investment")
    invest_star = (h.budget - best_n * k) / best_n
    return StaticSolution(best_n, invest_star, best_u, per_n)


def _n_star_at(h: Household, regime: RegimeSpec, sigma: float) -> int:
    return solve_static(Model.M1, h, regime.with_sigma(sigma)).n_star


def rational_threshold(
    h: Household,
    regime: RegimeSpec,
    sigma_range: tuple[float, float] = DEFAULT_SIGMA_RANGE,
    resolution: float = DEFAULT_RESOLUTION,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> ThresholdResult:
    """Locate the sigma where the survival-optimal N leaves 1.

    Coarse forward scan to bracket the first N >= 2, then bisection down to
    `resolution`.  Requires N* = 1 at the low end of the range.
    """
    lo, hi = sigma_range
    if _n_star_at(h, regime, lo) != 1:
        raise ValueError(f"optimal N at sigma={lo} is not 1")
    below = lo
    above = None
    s = lo + scan_step
    while s <= hi + 1e-12:
        if _n_star_at(h, regime, s) >= 2:
            above = s
            break
        below = s
        s += scan_step
    if above is None:
        return ThresholdResult(None, (lo, hi), found=False)
    while above - below > resolution:
        mid = 0.5 * (below + above)
        if _n_star_at(h, regime, mid) >= 2:
            above = mid
        else:
            below = mid
    return ThresholdResult(0.5 * (below + above), (below, above), found=True)


def static_sweep(
    models: list[Model],
    h: Household,
    sigma_grid: list[float],
    regime: RegimeSpec,
) -> list[dict]:
    """Optimal static plans over a sigma grid, one row per (model, sigma)."""
    if not sigma_grid:
        raise ValueError("sigma grid is empty")
    rows = []
    for model in models:
        for sigma in sigma_grid:
            sol = solve_static(model, h, regime.with_sigma(sigma))
            rows.append(
                {
                    "model": model.value,
                    "sigma": sigma,
                    "hc": h.hc_parent,
                    "budget": h.budget,
                    "n_star": sol.n_star,
                    "invest_star": sol.invest_star,
                    "utility": sol.utility_star,
                }
            )
    return rows


def threshold_curve(
    hc_grid: list[float],
    h_budget: float,
    regime: RegimeSpec,
    sigma_range: tuple[float, float] = DEFAULT_SIGMA_RANGE,
    resolution: float = DEFAULT_RESOLUTION,
) -> dict[float, ThresholdResult]:
    """sigma* as a function of parental HC; per-cell misses are recorded,
    not fatal."""
    if not hc_grid:
        raise ValueError("hc grid is empty")
    curve: dict[float, ThresholdResult] = {}
    for hc in hc_grid:
        household = Household(hc_parent=hc, budget=h_budget)
        try:
            curve[hc] = rational_threshold(household, regime, sigma_range, resolution)
        except ValueError:
            curve[hc] = ThresholdResult(None, sigma_range, found=False)
    return curve
