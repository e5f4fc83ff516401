"""Two-stage equilibrium solver.

The equilibrium cutoff pair solves a triangular system: the Activation
Condition pins down the intercept ``a`` of the log-linear activation locus
``p* = rho t* + a`` through a strictly decreasing one-dimensional residual,
and along that locus the Free-Entry residual ``J(t) = H(rho t + a, t)`` is
strictly decreasing in ``t``, so each stage is a bracketed 1-D root find
(geometric bracket expansion, then Brent).

Also provides the two degenerate-information limit economies (zero precision
and the perfect-information thought experiment), which are separate 1-D
solves because they live outside the maintained precision domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .economy import LogCutoffs, Primitives, Regime, expected_joint_profit, expected_profit_given_signal
from .errors import BracketFailureError, DomainError, InconsistentEquilibriumError
from .normal import log_std_normal_cdf, std_normal_cdf

#: log-space window beyond which tail probabilities underflow; treated as
#: parameter pathology rather than searched further
BRACKET_BOUND = 50.0

AC_RESIDUAL_TOL = 1e-12
FE_RESIDUAL_TOL = 1e-10
STATIONARITY_TOL = 1e-6
_STATIONARITY_STEP = 1e-5


@dataclass(frozen=True)
class EquilibriumSolution:
    """Solved cutoffs plus the diagnostics that certify them.

    fe_stationarity is the central-difference derivative of the free-entry
    residual in the signal cutoff at the solution; the equilibrium sits at
    the peak of the free-entry locus, so it must be ~0.
    iterations counts Brent iterations for the (activation, free-entry)
    stages.
    """

    cutoffs: LogCutoffs
    ac_residual: float
    fe_residual: float
    fe_stationarity: float
    iterations: tuple[int, int]


def _bracket_decreasing(fn, start: float, bound: float, what: str):
    """Bracket the root of a decreasing function by geometric expansion.

    Returns (lo, hi) with fn(lo) > 0 > fn(hi); raises BracketFailureError if
    no sign change is found within [-bound, bound].
    """
    f0 = fn(start)
    if f0 == 0.0:
        return start, start
    step = 1.0
    if f0 > 0.0:
        lo = start
        hi = start + step
        while fn(hi) > 0.0:
            lo = hi
            step *= 2.0
            hi = start + step
            if hi > bound:
                if fn(bound) > 0.0:
                    raise BracketFailureError(
                        f"{what}: no sign change up to +{bound} (no-entry pathology?)"
                    )
                hi = bound
                break
        return lo, hi
    hi = start
    lo = start - step
    while fn(lo) < 0.0:
        hi = lo
        step *= 2.0
        lo = start - step
        if lo < -bound:
            if fn(-bound) < 0.0:
                raise BracketFailureError(
                    f"{what}: no sign change down to -{bound} (no-entry pathology?)"
                )
            lo = -bound
            break
    return lo, hi


def _brent_root(fn, lo: float, hi: float, xtol: float):
    if lo == hi:
        return lo, 0
    root, info = brentq(fn, lo, hi, xtol=xtol, full_output=True)
    return root, info.iterations


def activation_residual(a: float, prim: Primitives, rho: float, activation_cost: float) -> float:
    """Expected-profit-over-f at activation index -a, minus delta*cost/f.

    Strictly decreasing in a. The cost argument lets policy counterfactuals
    shift the effective activation cost without touching free entry.
    """
    # On the activation locus the profit index rho*t - p* equals -a for all t.
    pi_over_f = expected_profit_given_signal(prim, rho, p_star=a, t=0.0) / prim.f
    return pi_over_f - prim.delta * activation_cost / prim.f


def ac_residual(a: float, prim: Primitives, regime: Regime) -> float:
    """Activation-condition residual at intercept a (zero at the solved a)."""
    return activation_residual(a, prim, regime.rho, regime.f_b)


def _solve_activation_intercept(
    prim: Primitives, rho: float, activation_cost: float, bound: float = BRACKET_BOUND
):
    if not activation_cost > 0.0:
        raise DomainError(f"activation cost must be positive, got {activation_cost!r}")
    fn = lambda a: activation_residual(a, prim, rho, activation_cost)
    lo, hi = _bracket_decreasing(fn, 0.0, bound, "activation intercept")
    a, iters = _brent_root(fn, lo, hi, xtol=1e-15)
    return a, iters


def solve_ac_intercept(prim: Primitives, regime: Regime) -> float:
    """Unique intercept a(rho) of the activation locus p* = rho t* + a."""
    a, _ = _solve_activation_intercept(prim, regime.rho, regime.f_b)
    return a


def fe_residual(p_star: float, t_star: float, prim: Primitives, regime: Regime) -> float:
    """Free-entry residual H(p*, t*); strictly decreasing in p_star.

    Expected lifetime profit per experimenter (in units of f) net of the
    expected activation outlay and the experimentation cost.
    """
    cutoffs = LogCutoffs(t_star=t_star, p_star=p_star, a=p_star - regime.rho * t_star)
    pi_breve_over_f = expected_joint_profit(prim, regime.rho, cutoffs) / prim.f
    gate = (prim.delta * regime.f_b / prim.f) * std_normal_cdf(-t_star)
    return pi_breve_over_f - gate - prim.delta * prim.f_n / prim.f


def fe_stationarity(
    p_star: float, t_star: float, prim: Primitives, regime: Regime, step: float = _STATIONARITY_STEP
) -> float:
    """Central-difference dH/dt at fixed p_star (zero at the locus peak)."""
    up = fe_residual(p_star, t_star + step, prim, regime)
    down = fe_residual(p_star, t_star - step, prim, regime)
    return (up - down) / (2.0 * step)


def fe_locus_profile(p_star, t_grid, prim: Primitives, regime: Regime):
    """Free-entry residual H(p_star, t) along a signal-cutoff grid."""
    return [fe_residual(p_star, t, prim, regime) for t in t_grid]


def solve_equilibrium(
    prim: Primitives, regime: Regime, t_bracket: tuple[float, float] | None = None
) -> EquilibriumSolution:
    """Solve for the unique cutoff pair (t*, p*).

    t_bracket optionally overrides the initial free-entry bracket (both
    endpoints must straddle the root); used to probe uniqueness from
    dispersed starts.
    """
    a, ac_iters = _solve_activation_intercept(prim, regime.rho, regime.f_b)

    def locus_residual(t: float) -> float:
        return fe_residual(regime.rho * t + a, t, prim, regime)

    if t_bracket is None:
        lo, hi = _bracket_decreasing(locus_residual, 0.0, BRACKET_BOUND, "free-entry cutoff")
    else:
        lo, hi = t_bracket
        if locus_residual(lo) * locus_residual(hi) > 0.0:
            raise BracketFailureError(
                f"free-entry cutoff: supplied bracket ({lo!r}, {hi!r}) does not straddle the root"
            )
    t_star, fe_iters = _brent_root(locus_residual, lo, hi, xtol=1e-12)
    p_star = regime.rho * t_star + a

    sol = EquilibriumSolution(
        cutoffs=LogCutoffs(t_star=t_star, p_star=p_star, a=a),
        ac_residual=ac_residual(a, prim, regime),
        fe_residual=fe_residual(p_star, t_star, prim, regime),
        fe_stationarity=fe_stationarity(p_star, t_star, prim, regime),
        iterations=(ac_iters, fe_iters),
    )
    # Residuals are differences of terms of size delta*f_b/f, so the drift
    # check scales with that size (it cannot beat float64 cancellation).
    scale = max(1.0, prim.delta * regime.f_b / prim.f)
    if abs(sol.ac_residual) > FE_RESIDUAL_TOL * scale or abs(sol.fe_residual) > FE_RESIDUAL_TOL * scale:
        raise InconsistentEquilibriumError(
            f"solver drift: residuals ({sol.ac_residual!r}, {sol.fe_residual!r}) "
            f"exceed {FE_RESIDUAL_TOL} x {scale}"
        )
    if abs(sol.fe_stationarity) > STATIONARITY_TOL * scale:
        raise InconsistentEquilibriumError(
            f"equilibrium is off the free-entry peak: dH/dt = {sol.fe_stationarity!r}"
        )
    return sol


@dataclass(frozen=True)
class MelitzLimit:
    """A degenerate-information limit economy (single log-productivity cutoff)."""

    p_star: float
    variant: str  # "zero_precision" | "perfect_info"
    effective_entry_cost: float
    effective_fixed_cost: float
    fe_residual: float


def _survivor_entry_residual(
    p_star: float, prim: Primitives, fixed_cost: float, entry_cost: float
) -> float:
    # Phi(-p*) * pi_bar / delta - entry_cost, with the truncated profit moment
    # written as fixed_cost * (exp(k^2/2 - k p*) Phi(k - p*) - Phi(-p*)).
    k = prim.k
    log_lead = 0.5 * k * k - k * p_star + log_std_normal_cdf(k - p_star)
    lead = 0.0 if log_lead == -math.inf else math.exp(log_lead)
    return fixed_cost * (lead - std_normal_cdf(-p_star)) / prim.delta - entry_cost


def _solve_limit(prim: Primitives, fixed_cost: float, entry_cost: float, variant: str) -> MelitzLimit:
    fn = lambda p: _survivor_entry_residual(p, prim, fixed_cost, entry_cost)
    lo, hi = _bracket_decreasing(fn, 0.0, BRACKET_BOUND, f"{variant} limit cutoff")
    p_star, _ = _brent_root(fn, lo, hi, xtol=1e-14)
    return MelitzLimit(
        p_star=p_star,
        variant=variant,
        effective_entry_cost=entry_cost,
        effective_fixed_cost=fixed_cost,
        fe_residual=fn(p_star),
    )


def melitz_limit_zero(prim: Primitives, f_e0: float) -> MelitzLimit:
    """Uninformative-signal limit: every experimenter activates.

    The whole entry cost f_e0 (experimentation plus limiting activation
    cost) is paid upfront; selection runs on productivity alone.
    """
    if not f_e0 > 0.0:
        raise DomainError(f"f_e0 must be positive, got {f_e0!r}")
    return _solve_limit(prim, prim.f, f_e0, "zero_precision")


def melitz_limit_perfect(prim: Primitives, f_b_bar: float) -> MelitzLimit:
    """Perfect-information limit at a fixed activation cost f_b_bar.

    Activation implements exact selection, so the activation cost acts as a
    higher effective operating requirement f + delta * f_b_bar.
    """
    if not f_b_bar > 0.0:
        raise DomainError(f"f_b_bar must be positive, got {f_b_bar!r}")
    return _solve_limit(prim, prim.f + prim.delta * f_b_bar, prim.f_n, "perfect_info")
