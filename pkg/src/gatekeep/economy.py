"""Domain types and closed-form building blocks of the screening economy.

Entrepreneurs pay an experimentation cost ``f_n`` to observe a noisy log
signal ``t`` of their log productivity ``p`` (standard bivariate normal with
correlation ``rho``), then pay an activation cost ``f_b(rho)`` to enter.
Operating firms face CES demand with elasticity ``sigma`` and a per-period
fixed requirement ``f``; an exogenous shock kills firms at rate ``delta``.

All solver-facing computation lives in log space ``(t, p)``; exponentiation
to levels happens only at presentation boundaries.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import DomainError, NearSingularCorrelationError
from .normal import (
    NEAR_SINGULAR_RHO,
    bvn_cdf,
    log_std_normal_cdf,
    log_tilted_upper_tail2,
    std_normal_cdf,
)

# Assumption-level open interval for rho, clamped at machine-sensible bounds.
RHO_MIN = 1e-6
RHO_MAX = 1.0 - 1e-6


def clamp_rho(rho: float) -> float:
    """Clamp a precision parameter from (0, 1) into [RHO_MIN, RHO_MAX]."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"precision rho must lie in (0, 1), got {rho!r}")
    return min(max(rho, RHO_MIN), RHO_MAX)


def _check_interior_rho(rho: float) -> None:
    if not 0.0 < rho:
        raise DomainError(f"precision rho must be positive, got {rho!r}")
    if rho >= NEAR_SINGULAR_RHO:
        raise NearSingularCorrelationError(
            f"rho = {rho!r} is numerically indistinguishable from 1"
        )


@dataclass(frozen=True)
class Primitives:
    """Deep parameters of the economy.

    sigma : elasticity of substitution, > 1
    f     : per-period operating fixed requirement (labor units), > 0
    f_n   : experimentation cost (labor units), > 0
    delta : effective discount / exit rate per period, in (0, 1)
    L     : total labor endowment, > 0 (normalized to 1 by default)
    """

    sigma: float
    f: float
    f_n: float
    delta: float
    L: float = 1.0

    def __post_init__(self):
        if not self.sigma > 1.0:
            raise DomainError(f"sigma must exceed 1, got {self.sigma!r}")
        if not self.f > 0.0:
            raise DomainError(f"f must be positive, got {self.f!r}")
        if not self.f_n > 0.0:
            raise DomainError(f"f_n must be positive, got {self.f_n!r}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta!r}")
        if not self.L > 0.0:
            raise DomainError(f"L must be positive, got {self.L!r}")

    @property
    def k(self) -> float:
        """Revenue/profit curvature sigma - 1, the tilt exponent everywhere."""
        return self.sigma - 1.0


class CostSchedule(ABC):
    """Activation-cost schedule f_b(rho): continuous, weakly increasing, > 0."""

    @abstractmethod
    def cost(self, rho: float) -> float:
        """Evaluate f_b at a precision rho in (0, 1)."""


def _check_schedule_rho(rho: float) -> None:
    if not 0.0 < rho < 1.0:
        raise DomainError(f"cost schedules are defined on (0, 1), got rho = {rho!r}")


@dataclass(frozen=True)
class ConstantCost(CostSchedule):
    f_b: float

    def __post_init__(self):
        if not self.f_b > 0.0:
            raise DomainError(f"f_b must be positive, got {self.f_b!r}")

    def cost(self, rho: float) -> float:
        _check_schedule_rho(rho)
        return self.f_b


@dataclass(frozen=True)
class PowerBoundedCost(CostSchedule):
    """f_b(rho) = f_b0 * (1 + kappa * rho**alpha), bounded by f_b0 * (1 + kappa)."""

    f_b0: float
    kappa: float
    alpha: float

    def __post_init__(self):
        if not self.f_b0 > 0.0:
            raise DomainError(f"f_b0 must be positive, got {self.f_b0!r}")
        if self.kappa < 0.0:
            raise DomainError(f"kappa must be nonnegative, got {self.kappa!r}")
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")

    def cost(self, rho: float) -> float:
        _check_schedule_rho(rho)
        return self.f_b0 * (1.0 + self.kappa * rho**self.alpha)


@dataclass(frozen=True)
class PiecewiseLinearCost(CostSchedule):
    """Flat at f_low below rho_low, linear up to f_high at rho_high, flat after."""

    rho_low: float
    rho_high: float
    f_low: float
    f_high: float

    def __post_init__(self):
        if not 0.0 < self.rho_low < self.rho_high < 1.0:
            raise DomainError(
                f"need 0 < rho_low < rho_high < 1, got ({self.rho_low!r}, {self.rho_high!r})"
            )
        if not 0.0 < self.f_low <= self.f_high:
            raise DomainError(
                f"need 0 < f_low <= f_high, got ({self.f_low!r}, {self.f_high!r})"
            )

    def cost(self, rho: float) -> float:
        _check_schedule_rho(rho)
        if rho <= self.rho_low:
            return self.f_low
        if rho >= self.rho_high:
            return self.f_high
        w = (rho - self.rho_low) / (self.rho_high - self.rho_low)
        return self.f_low + (self.f_high - self.f_low) * w

    @property
    def breakpoints(self) -> tuple[float, float]:
        return (self.rho_low, self.rho_high)


@dataclass(frozen=True)
class HyperbolicCost(CostSchedule):
    """f_b(rho) = f_b0 / (1 - rho); diverges as rho -> 1."""

    f_b0: float

    def __post_init__(self):
        if not self.f_b0 > 0.0:
            raise DomainError(f"f_b0 must be positive, got {self.f_b0!r}")

    def cost(self, rho: float) -> float:
        _check_schedule_rho(rho)
        return self.f_b0 / (1.0 - rho)


def cost_at(schedule: CostSchedule, rho: float) -> float:
    """Evaluate an activation-cost schedule at rho in (0, 1)."""
    return schedule.cost(rho)


@dataclass(frozen=True)
class Regime:
    """A screening regime: precision rho plus its activation-cost schedule.

    rho is clamped into [RHO_MIN, RHO_MAX] at construction.
    """

    rho: float
    schedule: CostSchedule

    def __post_init__(self):
        object.__setattr__(self, "rho", clamp_rho(self.rho))

    @property
    def f_b(self) -> float:
        return self.schedule.cost(self.rho)


@dataclass(frozen=True)
class LogCutoffs:
    """Equilibrium cutoff pair in log space, with the activation intercept.

    t_star : log signal cutoff
    p_star : log productivity cutoff
    a      : activation-line intercept, p_star = rho * t_star + a
    """

    t_star: float
    p_star: float
    a: float


def flow_profit(prim: Primitives, phi: float, phi_star: float) -> float:
    """Per-period profit f * [(phi/phi_star)**(sigma-1) - 1]; zero at the cutoff."""
    if not phi > 0.0 or not phi_star > 0.0:
        raise DomainError(
            f"productivities must be positive, got phi={phi!r}, phi_star={phi_star!r}"
        )
    return prim.f * ((phi / phi_star) ** prim.k - 1.0)


def flow_revenue(prim: Primitives, phi: float, phi_star: float) -> float:
    """Per-period revenue sigma * f * (phi/phi_star)**(sigma-1)."""
    if not phi > 0.0 or not phi_star > 0.0:
        raise DomainError(
            f"productivities must be positive, got phi={phi!r}, phi_star={phi_star!r}"
        )
    return prim.sigma * prim.f * (phi / phi_star) ** prim.k


def expected_profit_given_signal(
    prim: Primitives, rho: float, p_star: float, t: float
) -> float:
    """Expected per-period profit of an activated firm with log signal t.

    Conditional on t, log productivity is N(rho * t, 1 - rho^2); the firm
    operates only above the cutoff p_star.  Depends on (t, p_star) only
    through the index rho * t - p_star, and is weakly increasing in t.
    """
    _check_interior_rho(rho)
    k = prim.k
    s2 = 1.0 - rho * rho
    sd = math.sqrt(s2)
    x = rho * t - p_star
    if math.isinf(p_star):
        if p_star > 0:
            return 0.0
        # No operating cutoff: the truncation disappears.
        return prim.f * (math.exp(k * rho * t + 0.5 * k * k * s2) - 1.0)
    log_lead = k * x + 0.5 * k * k * s2 + log_std_normal_cdf((x + k * s2) / sd)
    tail = std_normal_cdf(x / sd)
    lead = 0.0 if log_lead == -math.inf else math.exp(log_lead)
    return prim.f * (lead - tail)


def expected_joint_profit(prim: Primitives, rho: float, cutoffs: LogCutoffs) -> float:
    """Expected flow profit integrated over activated signals.

    Equals the integral of ``expected_profit_given_signal`` against the
    signal density above t_star; evaluated via the tilted bivariate moment
    S = E[exp(k p) 1{p >= p_star, t >= t_star}] as
    f * (exp(-k p_star) * S - P(p >= p_star, t >= t_star)).
    """
    _check_interior_rho(rho)
    k = prim.k
    t_star, p_star = cutoffs.t_star, cutoffs.p_star
    log_s = log_tilted_upper_tail2(k, p_star, t_star, rho)
    lead = 0.0 if log_s == -math.inf else math.exp(log_s - k * p_star)
    p_phi = bvn_cdf(-p_star, -t_star, rho)
    return prim.f * (lead - p_phi)
