"""Within-regime efficiency layer: planner cutoff, contracts, transfers.

Under CES the planner's marginal payoff from activating at log signal t
normalizes to expected lifetime profit minus the activation cost, so the
constrained-efficient cutoff solves the same indifference condition as the
market and the two coincide. The remaining operations decentralize arbitrary
cutoffs with budget-balanced transfers and trace welfare over per-activation
transfers (which is maximized at zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .economy import Primitives, Regime, expected_profit_given_signal
from .equilibrium import (
    BRACKET_BOUND,
    EquilibriumSolution,
    _bracket_decreasing,
    _solve_activation_intercept,
    fe_residual,
    solve_equilibrium,
)
from .errors import BracketFailureError, DomainError, InconsistentEquilibriumError
from .welfare import aggregates_from_cutoffs, compute_aggregates, welfare_selection_burden
from .normal import std_normal_cdf

#: minimum gap between a transfer and the activation cost; beyond it the
#: cutoff structure degenerates (activation becomes unconditional)
TRANSFER_GAP = 1e-6

_PLANNER_MARKET_TOL = 1e-8
_PIGOU_SCAN_STEP = 0.05


@dataclass(frozen=True)
class PolicyBundle:
    """Cutoff decentralization: per-activation transfer plus entry fee.

    Budget balance holds by construction: tau = s * P(t >= theta_p_log).
    """

    theta_p_log: float
    s: float
    tau: float


@dataclass(frozen=True)
class ContractPoint:
    """Intermediation contract at log signal t: financier's profit share b."""

    t: float
    b: float


def planner_kernel(prim: Primitives, regime: Regime, p_star: float, t: float) -> float:
    """Marginal social value of activating at log signal t (CES normalization).

    Expected lifetime profit minus the activation cost; weakly increasing in
    t, zero exactly at the market activation cutoff.
    """
    pi_tilde = expected_profit_given_signal(prim, regime.rho, p_star, t)
    return pi_tilde / prim.delta - regime.f_b


def planner_cutoff(prim: Primitives, regime: Regime, eq: EquilibriumSolution) -> float:
    """Constrained planner's activation cutoff at the equilibrium p_star.

    Solved by an independent root find on the kernel; verifies that it
    coincides with the market cutoff to 1e-8 (they are the same indifference
    condition under CES).
    """
    p_star = eq.cutoffs.p_star
    kernel = lambda t: planner_kernel(prim, regime, p_star, t)
    # The kernel increases in t; bracket its negation, which decreases.
    lo, hi = _bracket_decreasing(lambda t: -kernel(t), 0.0, BRACKET_BOUND, "planner cutoff")
    t_p = brentq(kernel, lo, hi, xtol=1e-12) if lo != hi else lo
    if abs(t_p - eq.cutoffs.t_star) > _PLANNER_MARKET_TOL:
        raise InconsistentEquilibriumError(
            f"planner cutoff {t_p!r} deviates from market cutoff {eq.cutoffs.t_star!r}"
        )
    return t_p


def intermediation_schedule(
    prim: Primitives, regime: Regime, eq: EquilibriumSolution, t_grid
) -> list[ContractPoint]:
    """Competitive financiers' profit-share schedule b(t) on the activated set.

    b(t) = delta * f_b / pi_tilde(t): the share that exactly recovers the
    activation cost in expectation. Equals 1 at the cutoff, decreasing in t.
    """
    t_star = eq.cutoffs.t_star
    p_star = eq.cutoffs.p_star
    points = []
    for t in t_grid:
        if t < t_star - 1e-12:
            raise DomainError(
                f"contract undefined below the activation cutoff: t={t!r} < t*={t_star!r}"
            )
        pi_tilde = expected_profit_given_signal(prim, regime.rho, p_star, t)
        points.append(ContractPoint(t=t, b=prim.delta * regime.f_b / pi_tilde))
    return points


def decentralize_cutoff(
    prim: Primitives, regime: Regime, eq: EquilibriumSolution, t_p: float
) -> PolicyBundle:
    """Transfers implementing an arbitrary activation cutoff t_p.

    The per-activation transfer makes the type at t_p exactly indifferent;
    the entry fee claws back its expected value so free entry is preserved
    and the budget balances.
    """
    if not math.isfinite(t_p):
        raise DomainError(f"policy cutoff must be finite, got {t_p!r}")
    pi_tilde = expected_profit_given_signal(prim, regime.rho, eq.cutoffs.p_star, t_p)
    s = regime.f_b - pi_tilde / prim.delta
    tau = s * std_normal_cdf(-t_p)
    return PolicyBundle(theta_p_log=t_p, s=s, tau=tau)


def pigouvian_welfare(prim: Primitives, regime: Regime, s: float) -> float:
    """Equilibrium welfare under a per-activation transfer s.

    The transfer shifts the activation condition to an effective cost
    f_b - s; the matching entry fee restores free entry at the original
    resource cost, so the free-entry residual keeps the true f_b. Welfare is
    evaluated through the selection-over-burden form.
    """
    f_b = regime.f_b
    if s >= f_b - TRANSFER_GAP:
        raise DomainError(
            f"transfer s={s!r} must stay below f_b - {TRANSFER_GAP} = {f_b - TRANSFER_GAP!r}; "
            "activation would become unconditional"
        )
    if s == 0.0:
        # The zero-transfer system is the baseline system; reuse the monotone
        # solver so the two paths agree exactly.
        eq = solve_equilibrium(prim, regime)
        agg = compute_aggregates(prim, regime, eq)
        return welfare_selection_burden(prim, agg.s_term, agg.b_term)
    rho = regime.rho
    a_s, _ = _solve_activation_intercept(prim, rho, f_b - s)

    def locus_residual(t: float) -> float:
        return fe_residual(rho * t + a_s, t, prim, regime)

    # Off s=0 the locus residual is not provably monotone: scan for the
    # first sign change before handing a bracket to Brent.
    t_lo = -BRACKET_BOUND
    r_lo = locus_residual(t_lo)
    t_star = None
    steps = int(round(2.0 * BRACKET_BOUND / _PIGOU_SCAN_STEP))
    for i in range(1, steps + 1):
        t_hi = -BRACKET_BOUND + i * _PIGOU_SCAN_STEP
        r_hi = locus_residual(t_hi)
        if r_lo == 0.0:
            t_star = t_lo
            break
        if r_lo * r_hi < 0.0:
            t_star = brentq(locus_residual, t_lo, t_hi, xtol=1e-12)
            break
        t_lo, r_lo = t_hi, r_hi
    if t_star is None:
        raise BracketFailureError(
            f"free entry admits no cutoff within [-{BRACKET_BOUND}, {BRACKET_BOUND}] "
            f"under transfer s={s!r}"
        )
    p_star = rho * t_star + a_s
    agg = aggregates_from_cutoffs(prim, regime, t_star, p_star)
    return welfare_selection_burden(prim, agg.s_term, agg.b_term)
