"""Domain types, calibration constants, production technology, shock sampling.

All types are frozen dataclasses (immutable value objects), safe to share
across workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

import numpy as np

# Per-child reference rules: a fixed level, the parent's own human capital,
# or the population-average human capital.
PARENT_HC = "parent_hc"
AVERAGE_HC = "average_hc"
RefRule = Union[float, str]


class Model(str, Enum):
    M1 = "M1"  # survival: P(best child clears a threshold)
    M2 = "M2"  # static anxiety: one-shot loss-averse utility
    M3 = "M3"  # altruism: expected sum of log human capital
    M4B = "M4b"  # dynamic anxiety: sequential stop/grow, gendered references
    M4C = "M4c"  # institutional: M4b over quadratic-in-logs production


class InfeasibleError(ValueError):
    """Raised when a household cannot afford the requested family plan."""


@dataclass(frozen=True)
class ProductionParams:
    """Stochastic human-capital technology: HC = A * I^a1 * exp(-a2 ln(I)^2) * eps."""

    tfp_a: float = 1.0
    alpha: float = 0.665
    alpha2: float = 0.0  # quadratic log-space penalty, 0 for the linear model
    sigma: float = 0.0  # std dev of the log shock

    def __post_init__(self):
        if self.tfp_a <= 0:
            raise ValueError(f"tfp_a must be > 0, got {self.tfp_a}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.alpha2 < 0:
            raise ValueError(f"alpha2 must be >= 0, got {self.alpha2}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class Household:
    """Parental state: own human capital and total budget."""

    hc_parent: float
    budget: float

    def __post_init__(self):
        if self.hc_parent <= 0:
            raise ValueError(f"hc_parent must be > 0, got {self.hc_parent}")
        if self.budget <= 0:
            raise ValueError(f"budget must be > 0, got {self.budget}")


@dataclass(frozen=True)
class CostParams:
    """Gender-specific fixed cost per child."""

    k_son: float = 32.0
    k_dtr: float = 32.0

    def __post_init__(self):
        if self.k_son <= 0 or self.k_dtr <= 0:
            raise ValueError("child fixed costs must be > 0")

    @property
    def k_min(self) -> float:
        return min(self.k_son, self.k_dtr)


@dataclass(frozen=True)
class ReferenceSpec:
    """Aspiration references: sons benchmark against the parent by default,
    daughters against the population average."""

    r_son: RefRule = PARENT_HC
    r_dtr: RefRule = AVERAGE_HC
    hc_average: float = 5.0

    def __post_init__(self):
        if self.hc_average <= 0:
            raise ValueError("hc_average must be > 0")
        for rule in (self.r_son, self.r_dtr):
            if isinstance(rule, str):
                if rule not in (PARENT_HC, AVERAGE_HC):
                    raise ValueError(f"unknown reference rule {rule!r}")
            elif rule <= 0:
                raise ValueError("fixed reference must be > 0")

    def _resolve(self, rule: RefRule, household: Household) -> float:
        if rule == PARENT_HC:
            return household.hc_parent
        if rule == AVERAGE_HC:
            return self.hc_average
        return float(rule)

    def resolve_son(self, household: Household) -> float:
        return self._resolve(self.r_son, household)

    def resolve_dtr(self, household: Household) -> float:
        return self._resolve(self.r_dtr, household)

    def resolve_survival(self, household: Household) -> float:
        # The survival threshold follows the son rule (both survivor
        # references are the parent's HC in the baseline calibration).
        return self.resolve_son(household)


@dataclass(frozen=True)
class RegimeSpec:
    """Which utility model a population segment uses, and in which
    parameter world it believes it lives."""

    model: Model
    production: ProductionParams
    loss_aversion: float = 2.5  # unused for M1/M3
    refs: ReferenceSpec = field(default_factory=ReferenceSpec)
    costs: CostParams = field(default_factory=CostParams)
    n_max: int = 3

    def __post_init__(self):
        if self.loss_aversion < 1:
            raise ValueError(f"loss_aversion must be >= 1, got {self.loss_aversion}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")

    def with_sigma(self, sigma: float) -> "RegimeSpec":
        return replace(self, production=replace(self.production, sigma=sigma))


@dataclass(frozen=True, order=True)
class FamilyState:
    """Composition of the existing family: sons and daughters."""

    n_sons: int
    n_dtrs: int

    def __post_init__(self):
        if self.n_sons < 0 or self.n_dtrs < 0:
            raise ValueError("child counts must be >= 0")

    @property
    def total(self) -> int:
        return self.n_sons + self.n_dtrs

    def add_son(self) -> "FamilyState":
        return FamilyState(self.n_sons + 1, self.n_dtrs)

    def add_dtr(self) -> "FamilyState":
        return FamilyState(self.n_sons, self.n_dtrs + 1)

    def key(self) -> str:
        return f"{self.n_sons},{self.n_dtrs}"


# ---------------------------------------------------------------------------
# Calibration

CALIBRATION_KEYS = (
    "tfp_A",
    "alpha",
    "alpha2",
    "sigma",
    "lambda",
    "k_son",
    "k_dtr",
    "hc_average",
    "n_max",
)

# Objective world vs the strivers' perceived world.
REALITY_ALPHA = 0.665
REALITY_SIGMA = 4.9
BELIEF_ALPHA = 0.5
BELIEF_SIGMA = 0.4


@dataclass(frozen=True)
class Calibration:
    """Baseline constants; the production entries describe the belief world."""

    tfp_A: float = 1.0
    alpha: float = BELIEF_ALPHA
    alpha2: float = 0.0
    sigma: float = BELIEF_SIGMA
    lam: float = 2.5
    k_son: float = 32.0
    k_dtr: float = 32.0
    hc_average: float = 5.0
    n_max: int = 3

    def costs(self) -> CostParams:
        return CostParams(self.k_son, self.k_dtr)

    def striver_refs(self) -> ReferenceSpec:
        return ReferenceSpec(PARENT_HC, AVERAGE_HC, self.hc_average)

    def survivor_refs(self) -> ReferenceSpec:
        return ReferenceSpec(PARENT_HC, PARENT_HC, self.hc_average)

    def belief_production(self) -> ProductionParams:
        return ProductionParams(self.tfp_A, self.alpha, self.alpha2, self.sigma)

    def reality_production(self, sigma: float = REALITY_SIGMA) -> ProductionParams:
        return ProductionParams(self.tfp_A, REALITY_ALPHA, 0.0, sigma)

    def striver_regime(self, model: Model = Model.M4B) -> RegimeSpec:
        return RegimeSpec(
            model=model,
            production=self.belief_production(),
            loss_aversion=self.lam,
            refs=self.striver_refs(),
            costs=self.costs(),
            n_max=self.n_max,
        )

    def survivor_regime(self, sigma: float = REALITY_SIGMA) -> RegimeSpec:
        return RegimeSpec(
            model=Model.M1,
            production=self.reality_production(sigma),
            loss_aversion=self.lam,
            refs=self.survivor_refs(),
            costs=self.costs(),
            n_max=self.n_max,
        )

    def as_dict(self) -> dict:
        return {
            "tfp_A": self.tfp_A,
            "alpha": self.alpha,
            "alpha2": self.alpha2,
            "sigma": self.sigma,
            "lambda": self.lam,
            "k_son": self.k_son,
            "k_dtr": self.k_dtr,
            "hc_average": self.hc_average,
            "n_max": self.n_max,
        }


def calibration_from_dict(doc: dict) -> Calibration:
    """Build a Calibration from a JSON-style mapping.

    Accepts exactly the documented keys (all optional); anything else is
    rejected by name.
    """
    unknown = sorted(set(doc) - set(CALIBRATION_KEYS))
    if unknown:
        raise KeyError(f"unknown calibration key: {unknown[0]!r}")
    base = Calibration()
    kwargs = {}
    for key in CALIBRATION_KEYS:
        if key not in doc:
            continue
        attr = "lam" if key == "lambda" else key
        value = doc[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"calibration key {key!r} must be a number, got {value!r}")
        kwargs[attr] = int(value) if key == "n_max" else float(value)
    return replace(base, **kwargs)


def load_calibration(path: str) -> Calibration:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("calibration document must be a JSON object")
    return calibration_from_dict(doc)


# ---------------------------------------------------------------------------
# Production technology

def log_mean_hc(p: ProductionParams, invest: float) -> float:
    """Mean of ln(HC) before the shock: ln A + a1*ln I - a2*ln(I)^2."""
    if invest <= 0:
        raise ValueError(f"invest must be > 0, got {invest}")
    li = math.log(invest)
    return math.log(p.tfp_a) + p.alpha * li - p.alpha2 * li * li


def max_feasible_children(h: Household, c: CostParams, n_max: int | None = None) -> int:
    """Largest N whose fixed costs fit the budget, optionally capped at n_max."""
    n = int(h.budget // c.k_min)
    if n_max is not None:
        n = min(n, n_max)
    return n


# ---------------------------------------------------------------------------
# Randomness

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def cell_seed(master_seed: int, scenario_id: str, row: int, col: int) -> int:
    """Independent, order-insensitive per-cell seed.

    splitmix64 chain over (master seed, fnv1a64(scenario id), row, col).
    """
    s = _splitmix64((master_seed & _MASK64) ^ _fnv1a64(scenario_id))
    s = _splitmix64(s ^ (row & _MASK64))
    return _splitmix64(s ^ (col & _MASK64))


def sample_log_shocks(seed: int, count: int, sigma: float) -> np.ndarray:
    """count draws of ln(eps) ~ Normal(0, sigma^2); identical seed, identical
    sequence."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    return sigma * rng.standard_normal(count)
