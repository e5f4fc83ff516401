"""Steady-state aggregates, welfare, and precision counterfactuals.

Welfare is computed three algebraically equivalent ways (variety x quality,
the master formula in the experimentation margin, and the selection-over-
burden ratio) and cross-checked at every solved point; disagreement signals
solver drift and raises.

The precision sweep, the local log-derivative identity, the interior-optimum
search, and the bounded-cost decline construction all build on the same
per-point solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .economy import (
    ConstantCost,
    CostSchedule,
    PiecewiseLinearCost,
    Primitives,
    Regime,
)
from .equilibrium import EquilibriumSolution, solve_equilibrium
from .errors import (
    BracketFailureError,
    DomainError,
    GatekeepError,
    InconsistentEquilibriumError,
    IterationCapError,
    KinkError,
)
from .normal import bvn_cdf, log_tilted_upper_tail2, std_normal_cdf

_IDENTITY_RTOL = 1e-8


@dataclass(frozen=True)
class Aggregates:
    """All steady-state objects of a solved regime.

    p_theta  : probability of passing the signal cutoff
    p_phi    : probability of passing both cutoffs
    s_term   : selection term E[phi^(sigma-1) 1{both cutoffs}]
    b_term   : labor absorbed per experimenter (variety channel)
    pi_breve : expected flow profit per experimenter
    r_bar    : average flow revenue per operating firm
    pi_bar   : average flow profit per operating firm
    m_e      : mass of experimenters
    m        : mass of operating firms
    phi_tilde: aggregate productivity (generalized mean of order sigma-1)
    welfare  : social welfare (inverse price index)
    """

    p_theta: float
    p_phi: float
    s_term: float
    b_term: float
    pi_breve: float
    r_bar: float
    pi_bar: float
    m_e: float
    m: float
    phi_tilde: float
    welfare: float


def welfare_selection_burden(prim: Primitives, s_term: float, b_term: float) -> float:
    """Welfare from the selection term and resources per experimenter:

    W = [((sigma-1)/sigma)^(sigma-1) * (L/delta) * S/B]^(1/(sigma-1))
    """
    k = prim.k
    base = ((prim.sigma - 1.0) / prim.sigma) ** k * (prim.L / prim.delta) * s_term / b_term
    return base ** (1.0 / k)


def _rel_close(x: float, y: float, rtol: float) -> bool:
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def aggregates_from_cutoffs(
    prim: Primitives, regime: Regime, t_star: float, p_star: float
) -> Aggregates:
    """Aggregates implied by a cutoff pair that satisfies free entry."""
    k = prim.k
    rho = regime.rho
    p_theta = std_normal_cdf(-t_star)
    p_phi = bvn_cdf(-p_star, -t_star, rho)
    log_s = log_tilted_upper_tail2(k, p_star, t_star, rho)
    s_term = 0.0 if log_s == -math.inf else math.exp(log_s)
    if p_phi <= 0.0 or s_term <= 0.0:
        raise InconsistentEquilibriumError(
            f"no surviving mass at cutoffs ({t_star!r}, {p_star!r})"
        )
    pi_breve = prim.f * (math.exp(log_s - k * p_star) - p_phi)
    phi_tilde = (s_term / p_phi) ** (1.0 / k)
    r_bar = prim.sigma * prim.f * math.exp(log_s - k * p_star) / p_phi
    pi_bar = r_bar / prim.sigma - prim.f
    b_term = prim.f_n + p_theta * regime.f_b + (p_phi / prim.delta) * (r_bar - pi_bar)
    m_e = prim.L / b_term
    m = p_phi * m_e / prim.delta

    w_variety_quality = (prim.sigma - 1.0) / prim.sigma * m ** (1.0 / k) * phi_tilde
    w_master = (((prim.sigma - 1.0) / prim.sigma) ** k * (m_e / prim.delta) * s_term) ** (1.0 / k)
    w_ratio = welfare_selection_burden(prim, s_term, b_term)
    if not (
        _rel_close(w_variety_quality, w_master, _IDENTITY_RTOL)
        and _rel_close(w_variety_quality, w_ratio, _IDENTITY_RTOL)
    ):
        raise InconsistentEquilibriumError(
            f"welfare formulas disagree: {w_variety_quality!r}, {w_master!r}, {w_ratio!r}"
        )
    free_entry_gap = pi_breve - prim.delta * (p_theta * regime.f_b + prim.f_n)
    if abs(free_entry_gap) > _IDENTITY_RTOL * max(1.0, abs(pi_breve)):
        raise InconsistentEquilibriumError(
            f"free-entry identity violated by {free_entry_gap!r}; cutoffs are not an equilibrium"
        )
    return Aggregates(
        p_theta=p_theta,
        p_phi=p_phi,
        s_term=s_term,
        b_term=b_term,
        pi_breve=pi_breve,
        r_bar=r_bar,
        pi_bar=pi_bar,
        m_e=m_e,
        m=m,
        phi_tilde=phi_tilde,
        welfare=w_variety_quality,
    )


def compute_aggregates(prim: Primitives, regime: Regime, eq: EquilibriumSolution) -> Aggregates:
    """All steady-state aggregates at a solved equilibrium."""
    return aggregates_from_cutoffs(prim, regime, eq.cutoffs.t_star, eq.cutoffs.p_star)


@dataclass(frozen=True)
class SweepRecord:
    """One precision grid point: solution and aggregates, or a failure marker."""

    rho: float
    eq: EquilibriumSolution | None
    agg: Aggregates | None
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class WelfareCurvePoint:
    rho: float
    welfare: float
    m: float
    phi_tilde: float
    t_star: float
    p_star: float
    s_term: float
    b_term: float
    status: str


def sweep_records(prim: Primitives, schedule: CostSchedule, rho_grid) -> list[SweepRecord]:
    """Solve every grid point; failures become explicit records, never dropped."""
    rho_grid = list(rho_grid)
    if any(b <= a for a, b in zip(rho_grid, rho_grid[1:])):
        raise DomainError("rho grid must be strictly increasing")
    records = []
    for rho in rho_grid:
        try:
            regime = Regime(rho, schedule)
            eq = solve_equilibrium(prim, regime)
            agg = compute_aggregates(prim, regime, eq)
            records.append(SweepRecord(rho=rho, eq=eq, agg=agg, status="ok"))
        except GatekeepError as exc:
            records.append(
                SweepRecord(rho=rho, eq=None, agg=None, status=f"failed: {type(exc).__name__}: {exc}")
            )
    return records


def welfare_curve(prim: Primitives, schedule: CostSchedule, rho_grid) -> list[WelfareCurvePoint]:
    """Welfare and its components along a precision grid (unnormalized)."""
    points = []
    for rec in sweep_records(prim, schedule, rho_grid):
        if rec.ok:
            points.append(
                WelfareCurvePoint(
                    rho=rec.rho,
                    welfare=rec.agg.welfare,
                    m=rec.agg.m,
                    phi_tilde=rec.agg.phi_tilde,
                    t_star=rec.eq.cutoffs.t_star,
                    p_star=rec.eq.cutoffs.p_star,
                    s_term=rec.agg.s_term,
                    b_term=rec.agg.b_term,
                    status="ok",
                )
            )
        else:
            nan = math.nan
            points.append(
                WelfareCurvePoint(
                    rho=rec.rho, welfare=nan, m=nan, phi_tilde=nan, t_star=nan,
                    p_star=nan, s_term=nan, b_term=nan, status=rec.status,
                )
            )
    return points


def _welfare_at(prim: Primitives, rho: float, schedule: CostSchedule) -> float:
    regime = Regime(rho, schedule)
    eq = solve_equilibrium(prim, regime)
    return compute_aggregates(prim, regime, eq).welfare


@dataclass(frozen=True)
class LogWelfareDerivative:
    """Central-difference elasticities of welfare, selection, and burden in rho."""

    dlogW: float
    dlogS: float
    dlogB: float


def log_welfare_derivative(prim: Primitives, regime: Regime, h: float = 1e-4) -> LogWelfareDerivative:
    """d log W / d rho and its decomposition terms at the regime's rho.

    Raises KinkError when rho sits within h of a piecewise-linear schedule
    breakpoint (the schedule is not differentiable there).
    """
    rho = regime.rho
    schedule = regime.schedule
    if not h > 0.0:
        raise DomainError(f"step h must be positive, got {h!r}")
    if isinstance(schedule, PiecewiseLinearCost):
        if any(abs(rho - bp) < h for bp in schedule.breakpoints):
            raise KinkError(
                f"rho = {rho!r} is within {h!r} of a schedule breakpoint; "
                "the derivative is not defined there"
            )
    if not (0.0 < rho - h and rho + h < 1.0):
        raise DomainError(f"rho +/- h must stay inside (0, 1), got rho={rho!r}, h={h!r}")

    def _solve(r):
        reg = Regime(r, schedule)
        return compute_aggregates(prim, reg, solve_equilibrium(prim, reg))

    up, down = _solve(rho + h), _solve(rho - h)
    scale = 1.0 / (2.0 * h)
    return LogWelfareDerivative(
        dlogW=(math.log(up.welfare) - math.log(down.welfare)) * scale,
        dlogS=(math.log(up.s_term) - math.log(down.s_term)) * scale,
        dlogB=(math.log(up.b_term) - math.log(down.b_term)) * scale,
    )


@dataclass(frozen=True)
class OptimalPrecision:
    """Argmax of welfare over precision; boundary marks a grid-edge argmax."""

    rho_w: float
    welfare: float
    boundary: bool


def _golden_section_max(fn, lo: float, hi: float, tol: float):
    """Golden-section maximization on [lo, hi]; returns (x, fn(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    width = hi - lo
    c = lo + invphi2 * width
    d = lo + invphi * width
    yc, yd = fn(c), fn(d)
    while width > tol:
        width *= invphi
        if yc > yd:
            hi, d, yd = d, c, yc
            c = lo + invphi2 * width
            yc = fn(c)
        else:
            lo, c, yc = c, d, yd
            d = lo + invphi * width
            yd = fn(d)
    x = c if yc > yd else d
    return x, max(yc, yd)


def find_optimal_precision(
    prim: Primitives, schedule: CostSchedule, grid, refine_tol: float = 1e-5
) -> OptimalPrecision:
    """Welfare-maximizing precision: coarse grid argmax, golden-section refined.

    Failure rows in the sweep are skipped deterministically. A grid-edge
    argmax is reported with boundary=True and not refined past the grid.
    """
    grid = list(grid)
    records = sweep_records(prim, schedule, grid)
    solved = [r for r in records if r.ok]
    if not solved:
        raise BracketFailureError("no grid point admits an equilibrium")
    best = max(solved, key=lambda r: r.agg.welfare)
    if best.rho == grid[0] or best.rho == grid[-1]:
        return OptimalPrecision(rho_w=best.rho, welfare=best.agg.welfare, boundary=True)
    idx = next(i for i, r in enumerate(solved) if r.rho == best.rho)
    lo = solved[idx - 1].rho if idx > 0 else grid[0]
    hi = solved[idx + 1].rho if idx + 1 < len(solved) else grid[-1]
    rho_w, w = _golden_section_max(lambda r: _welfare_at(prim, r, schedule), lo, hi, refine_tol)
    return OptimalPrecision(rho_w=rho_w, welfare=w, boundary=False)


@dataclass(frozen=True)
class DeclineCertificate:
    """A bounded increasing schedule under which welfare falls with precision.

    doubling_path records (cost level, welfare at rho_high) for each probe.
    """

    schedule: PiecewiseLinearCost
    w_low: float
    w_high: float
    doubling_path: tuple[tuple[float, float], ...]


def bounded_decline_certificate(
    prim: Primitives, rho_low: float, rho_high: float, f_low: float, max_doublings: int = 60
) -> DeclineCertificate:
    """Construct a bounded, weakly increasing cost schedule with W(rho_high) < W(rho_low).

    Doubles the high-end cost until welfare at rho_high under that constant
    cost drops below welfare at rho_low under f_low; the piecewise-linear
    schedule interpolating the two levels is the certificate.
    """
    if not 0.0 < rho_low < rho_high < 1.0:
        raise DomainError(f"need 0 < rho_low < rho_high < 1, got ({rho_low!r}, {rho_high!r})")
    if not f_low > 0.0:
        raise DomainError(f"f_low must be positive, got {f_low!r}")
    w_low = _welfare_at(prim, rho_low, ConstantCost(f_low))
    f_high = f_low
    path = []
    for _ in range(max_doublings + 1):
        w_high = _welfare_at(prim, rho_high, ConstantCost(f_high))
        path.append((f_high, w_high))
        if w_high < w_low:
            return DeclineCertificate(
                schedule=PiecewiseLinearCost(rho_low, rho_high, f_low, f_high),
                w_low=w_low,
                w_high=w_high,
                doubling_path=tuple(path),
            )
        f_high *= 2.0
    raise IterationCapError(
        f"welfare at rho_high={rho_high!r} did not drop below {w_low!r} after "
        f"{max_doublings} doublings; this indicates a bug"
    )
