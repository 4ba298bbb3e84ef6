"""Monte Carlo estimation of every model's expected utility.

Serves as the independent cross-check oracle for the closed forms and for
the solvers' argmax decisions.  A ShockPanel holds one matrix of standard
normal draws that can be reused across candidate plans (common random
numbers), so that plan comparisons are not polluted by resampling noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Household, Model, RegimeSpec, log_mean_hc
from .utility import ChildPlan


@dataclass(frozen=True)
class ShockPanel:
    """draws x max_children standard normal variates, fixed by seed."""

    z: np.ndarray

    @classmethod
    def create(cls, seed: int, draws: int, max_children: int) -> "ShockPanel":
        if draws < 1 or max_children < 1:
            raise ValueError("draws and max_children must be >= 1")
        rng = np.random.default_rng(seed)
        return cls(rng.standard_normal((draws, max_children)))

    @property
    def draws(self) -> int:
        return self.z.shape[0]

    @property
    def max_children(self) -> int:
        return self.z.shape[1]


def _piecewise_value(g: np.ndarray, lam: float) -> np.ndarray:
    return np.where(g >= 0.0, g, lam * g)


def mc_expected_utility(
    model: Model,
    plan: ChildPlan,
    h: Household,
    regime: RegimeSpec,
    draws: int = 100_000,
    seed: int = 0,
    panel: ShockPanel | None = None,
) -> tuple[float, float]:
    """Sample-mean estimate of the model's expected utility and its standard
    error.  Deterministic under a fixed seed; pass a panel to reuse common
    random numbers across plans."""
    if draws < 1_000:
        raise ValueError(f"draws must be >= 1000, got {draws}")
    n_children = plan.state.total
    if n_children == 0:
        return 0.0, 0.0
    if panel is None:
        panel = ShockPanel.create(seed, draws, n_children)
    if panel.max_children < n_children or panel.draws != draws:
        raise ValueError("shock panel too small for this plan")

    p = regime.production
    z = panel.z[:, :n_children]
    # sons occupy the leading columns, daughters the rest
    mus = []
    for _ in range(plan.state.n_sons):
        mus.append(log_mean_hc(p, plan.invest_son))
    for _ in range(plan.state.n_dtrs):
        mus.append(log_mean_hc(p, plan.invest_dtr))
    ln_hc = np.asarray(mus) + p.sigma * z  # draws x n

    if model is Model.M1:
        ln_r = math.log(regime.refs.resolve_survival(h))
        sample = (ln_hc.max(axis=1) >= ln_r).astype(float)
    elif model is Model.M3:
        sample = ln_hc.sum(axis=1)
    elif model in (Model.M2, Model.M4B, Model.M4C):
        lam = regime.loss_aversion
        if model is Model.M2:
            ln_rs = ln_rd = math.log(regime.refs.resolve_son(h))
        else:
            ln_rs = math.log(regime.refs.resolve_son(h))
            ln_rd = math.log(regime.refs.resolve_dtr(h))
        ln_ref = np.asarray(
            [ln_rs] * plan.state.n_sons + [ln_rd] * plan.state.n_dtrs
        )
        sample = _piecewise_value(ln_hc - ln_ref, lam).sum(axis=1)
    else:
        raise ValueError(f"unsupported model {model}")

    estimate = float(sample.mean())
    std_error = float(sample.std(ddof=1) / math.sqrt(draws))
    return estimate, std_error
