"""Closed-form expected utilities for every model.

The loss-averse expectation uses the exact lognormal piecewise form: with
g ~ Normal(mu, sigma^2) and v(g) = g for g >= 0, lam*g otherwise,

    E[v(g)] = mu + (lam - 1) * (mu * Phi(-mu/sigma) - sigma * phi(mu/sigma)).

Monte Carlo counterparts (the independent cross-check) live in `montecarlo`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import FamilyState, Household, ProductionParams, RegimeSpec, log_mean_hc
from .normal import norm_cdf, norm_pdf


@dataclass(frozen=True)
class ChildPlan:
    """Per-gender investments for a given family composition."""

    invest_son: float
    invest_dtr: float
    state: FamilyState

    def __post_init__(self):
        if self.invest_son < 0 or self.invest_dtr < 0:
            raise ValueError("investments must be >= 0")
        if self.state.n_sons > 0 and self.invest_son <= 0:
            raise ValueError("sons present but invest_son is 0")
        if self.state.n_dtrs > 0 and self.invest_dtr <= 0:
            raise ValueError("daughters present but invest_dtr is 0")

    def spend(self) -> float:
        return self.state.n_sons * self.invest_son + self.state.n_dtrs * self.invest_dtr


@dataclass(frozen=True)
class GainValue:
    """Distribution of the gain g = ln HC - ln R: Normal(mu_g, sigma^2)."""

    mu_g: float
    sigma: float

    def expected_value(self, lam: float) -> float:
        """E[v(g)] under loss aversion lam."""
        if self.sigma == 0.0:
            return self.mu_g if self.mu_g >= 0 else lam * self.mu_g
        z = self.mu_g / self.sigma
        shortfall = self.mu_g * norm_cdf(-z) - self.sigma * norm_pdf(z)
        return self.mu_g + (lam - 1.0) * shortfall


def m1_success_prob(n: int, invest: float, threshold_r: float, p: ProductionParams) -> float:
    """P(max of n iid children clears threshold_r), uniform investment.

    Deliberately evaluated as a float64 probability (not in log space): once
    every candidate's failure probability drops below double-precision
    resolution the utility saturates at exactly 1.0, and the smaller-N
    tie-break keeps the single-child plan optimal.  That saturation behavior
    drives the low-aspiration branch of the risk-threshold curve and must not
    be "fixed" by comparing log-failure probabilities.
    """
    if threshold_r <= 0:
        raise ValueError(f"threshold_r must be > 0, got {threshold_r}")
    mu = log_mean_hc(p, invest)  # raises for invest <= 0
    ln_r = math.log(threshold_r)
    if p.sigma == 0.0:
        return 1.0 if mu >= ln_r else 0.0
    fail_one = norm_cdf((ln_r - mu) / p.sigma)
    return 1.0 - fail_one**n


def m3_expected_utility(n: int, invest: float, p: ProductionParams) -> float:
    """Altruism: E[sum of ln HC] = n * mean log output (E[ln eps] = 0)."""
    return n * log_mean_hc(p, invest)


def m4b_child_value(invest: float, ref_r: float, p: ProductionParams, lam: float) -> float:
    """Expected loss-averse value of one child against reference ref_r."""
    if ref_r <= 0:
        raise ValueError(f"ref_r must be > 0, got {ref_r}")
    mu_g = log_mean_hc(p, invest) - math.log(ref_r)
    return GainValue(mu_g, p.sigma).expected_value(lam)


def m4b_family_utility(
    plan: ChildPlan, r_son: float, r_dtr: float, p: ProductionParams, lam: float
) -> float:
    """Sum of per-child expected values; shocks are independent, so the
    expectation is additive over children."""
    total = 0.0
    if plan.state.n_sons:
        total += plan.state.n_sons * m4b_child_value(plan.invest_son, r_son, p, lam)
    if plan.state.n_dtrs:
        total += plan.state.n_dtrs * m4b_child_value(plan.invest_dtr, r_dtr, p, lam)
    return total


def m2_static_utility(n: int, invest: float, h: Household, regime: RegimeSpec) -> float:
    """Static anxiety model: N children with uniform investment, per-child
    reference equal to the parent's HC via the son-reference rule.  The
    static variant keeps one ungendered reference; a gendered split would be
    a modeling extension, not a calibration choice."""
    ref = regime.refs.resolve_son(h)
    return n * m4b_child_value(invest, ref, regime.production, regime.loss_aversion)


def static_utility(model, n: int, invest: float, h: Household, regime: RegimeSpec) -> float:
    """Utility of a static plan (N, uniform I) under the regime's model."""
    from .core import Model

    if model is Model.M1:
        return m1_success_prob(n, invest, regime.refs.resolve_survival(h), regime.production)
    if model is Model.M2:
        return m2_static_utility(n, invest, h, regime)
    if model is Model.M3:
        return m3_expected_utility(n, invest, regime.production)
    raise ValueError(f"no static utility for model {model}")
