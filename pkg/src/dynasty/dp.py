"""Stop/grow dynamic program over family composition.

Backward induction over states (n_sons, n_dtrs) with at most n_max children.
Stopping means optimizing the two per-gender investments on the remaining
budget; growing means a fair-coin draw over the next child's gender.  Per-
child expectations are the closed forms from `utility` (exact and noise-free,
so argmax decisions are deterministic); Monte Carlo stays available as a
cross-check.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from enum import Enum

from .core import FamilyState, Household, InfeasibleError, Model, RegimeSpec
from .utility import ChildPlan, m4b_child_value, m4b_family_utility

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden ratio step
_COARSE_POINTS = 201
_SHARE_TOL = 1e-5


class Action(str, Enum):
    STOP = "Stop"
    GROW = "Grow"


@dataclass(frozen=True)
class StopValue:
    value: float
    invest_son: float
    invest_dtr: float


@dataclass(frozen=True)
class StateRecord:
    value: float
    action: Action
    stop_detail: StopValue
    grow_value: float | None


@dataclass(frozen=True)
class PolicyTable:
    records: dict[FamilyState, StateRecord]
    root_value: float
    household: Household
    regime: RegimeSpec

    def to_json_dict(self) -> dict:
        """States keyed "Nm,Nf" with value/action/invest fields."""
        states = {}
        for state in sorted(self.records):
            rec = self.records[state]
            states[state.key()] = {
                "value": rec.value,
                "action": rec.action.value,
                "stop_value": rec.stop_detail.value,
                "grow_value": rec.grow_value,
                "invest_son": rec.stop_detail.invest_son,
                "invest_dtr": rec.stop_detail.invest_dtr,
            }
        return {
            "root_value": self.root_value,
            "hc_parent": self.household.hc_parent,
            "budget": self.household.budget,
            "model": self.regime.model.value,
            "states": states,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _remaining_budget(state: FamilyState, h: Household, regime: RegimeSpec) -> float:
    c = regime.costs
    return h.budget - (state.n_sons * c.k_son + state.n_dtrs * c.k_dtr)


def optimal_stop_value(state: FamilyState, h: Household, regime: RegimeSpec) -> StopValue:
    """Best split of the remaining budget between son and daughter investment.

    Per-child value is increasing in investment on the relevant range, so the
    budget binds and the problem is one-dimensional in the son share s with
    n_m * I_m = s * B_rem.  Coarse grid, then golden-section refinement.
    """
    n_m, n_f = state.n_sons, state.n_dtrs
    if n_m + n_f == 0:
        raise InfeasibleError("no children to invest in")
    b_rem = _remaining_budget(state, h, regime)
    if b_rem <= 0:
        raise InfeasibleError(f"fixed costs exhaust the budget at state {state}")
    p, lam = regime.production, regime.loss_aversion
    r_son = regime.refs.resolve_son(h)
    r_dtr = regime.refs.resolve_dtr(h)

    if n_f == 0:
        invest = b_rem / n_m
        return StopValue(n_m * m4b_child_value(invest, r_son, p, lam), invest, 0.0)
    if n_m == 0:
        invest = b_rem / n_f
        return StopValue(n_f * m4b_child_value(invest, r_dtr, p, lam), 0.0, invest)

    def value_at(s: float) -> float:
        if s <= 0.0 or s >= 1.0:
            return -math.inf
        i_m = s * b_rem / n_m
        i_f = (1.0 - s) * b_rem / n_f
        return n_m * m4b_child_value(i_m, r_son, p, lam) + n_f * m4b_child_value(
            i_f, r_dtr, p, lam
        )

    # coarse pass
    step = 1.0 / (_COARSE_POINTS - 1)
    best_s, best_v = 0.5, -math.inf
    for k in range(_COARSE_POINTS):
        s = k * step
        v = value_at(s)
        if v > best_v:
            best_s, best_v = s, v

    # golden-section refinement around the best coarse point
    a = max(best_s - step, 0.0)
    b = min(best_s + step, 1.0)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = value_at(c), value_at(d)
    while b - a > _SHARE_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = value_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = value_at(d)
        if fc > best_v:
            best_s, best_v = c, fc
        if fd > best_v:
            best_s, best_v = d, fd

    i_m = best_s * b_rem / n_m
    i_f = (1.0 - best_s) * b_rem / n_f
    return StopValue(best_v, i_m, i_f)


def _feasible_states(h: Household, regime: RegimeSpec) -> dict[FamilyState, StopValue]:
    """Stop values for every state with positive investable budget left."""
    table: dict[FamilyState, StopValue] = {}
    for total in range(1, regime.n_max + 1):
        for n_m in range(total + 1):
            state = FamilyState(n_m, total - n_m)
            if _remaining_budget(state, h, regime) <= 0:
                continue
            table[state] = optimal_stop_value(state, h, regime)
    return table


def solve_dp(h: Household, regime: RegimeSpec) -> PolicyTable:
    """Backward induction from n_max down to the first child.

    A grow branch is excluded when either gender outcome would leave no
    budget for positive investment; a state's value always satisfies
    V >= V_stop.  Ties break toward Stop.
    """
    if regime.model not in (Model.M4B, Model.M4C):
        raise ValueError(f"solve_dp requires M4b or M4c, got {regime.model}")
    stop = _feasible_states(h, regime)
    root_son, root_dtr = FamilyState(1, 0), FamilyState(0, 1)
    if root_son not in stop or root_dtr not in stop:
        raise InfeasibleError(f"budget {h.budget} cannot support the first child")

    records: dict[FamilyState, StateRecord] = {}
    values: dict[FamilyState, float] = {}
    for total in range(regime.n_max, 0, -1):
        for n_m in range(total + 1):
            state = FamilyState(n_m, total - n_m)
            if state not in stop:
                continue
            detail = stop[state]
            grow_value = None
            if total < regime.n_max:
                up_son, up_dtr = state.add_son(), state.add_dtr()
                if up_son in values and up_dtr in values:
                    grow_value = 0.5 * values[up_son] + 0.5 * values[up_dtr]
            if grow_value is not None and grow_value > detail.value:
                value, action = grow_value, Action.GROW
            else:
                value, action = detail.value, Action.STOP
            values[state] = value
            records[state] = StateRecord(value, action, detail, grow_value)

    root_value = 0.5 * values[root_son] + 0.5 * values[root_dtr]
    return PolicyTable(records, root_value, h, regime)


def decision_at(state: FamilyState, table: PolicyTable) -> Action:
    if state not in table.records:
        raise KeyError(f"state {state} not in policy table")
    return table.records[state].action


def enumerate_policies_oracle(h: Household, regime: RegimeSpec) -> tuple[float, str]:
    """Brute-force check of the recursion: enumerate every gender-contingent
    stopping rule over the birth tree and take the best expected value.

    Uses the same stop-value evaluator as solve_dp, so any disagreement
    isolates an error in the recursion itself.  Intended for n_max <= 4.
    """
    if regime.n_max > 4:
        raise ValueError("policy enumeration is for n_max <= 4")
    stop = _feasible_states(h, regime)
    root_son, root_dtr = FamilyState(1, 0), FamilyState(0, 1)
    if root_son not in stop or root_dtr not in stop:
        raise InfeasibleError(f"budget {h.budget} cannot support the first child")

    decision_states = sorted(s for s in stop if s.total < regime.n_max)

    def policy_value(state: FamilyState, choice: dict[FamilyState, Action]) -> float:
        if state not in stop:
            return -math.inf  # growing starved this branch: invalid policy
        if choice.get(state, Action.STOP) is Action.STOP:
            return stop[state].value
        up_son = policy_value(state.add_son(), choice)
        up_dtr = policy_value(state.add_dtr(), choice)
        return 0.5 * up_son + 0.5 * up_dtr

    best_value = -math.inf
    best_desc = ""
    for actions in itertools.product((Action.STOP, Action.GROW), repeat=len(decision_states)):
        choice = dict(zip(decision_states, actions))
        value = 0.5 * policy_value(root_son, choice) + 0.5 * policy_value(root_dtr, choice)
        if value > best_value:
            best_value = value
            best_desc = ";".join(f"{s.key()}:{a.value}" for s, a in choice.items())
    return best_value, best_desc


def stop_plan(state: FamilyState, h: Household, regime: RegimeSpec) -> ChildPlan:
    """The optimized plan behind a state's stop value (utility re-checkable
    via m4b_family_utility)."""
    detail = optimal_stop_value(state, h, regime)
    return ChildPlan(detail.invest_son, detail.invest_dtr, state)


def family_value(plan: ChildPlan, h: Household, regime: RegimeSpec) -> float:
    return m4b_family_utility(
        plan,
        regime.refs.resolve_son(h),
        regime.refs.resolve_dtr(h),
        regime.production,
        regime.loss_aversion,
    )
