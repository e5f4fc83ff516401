import math

import pytest

from gatekeep import (
    ConstantCost,
    PowerBoundedCost,
    Primitives,
    Regime,
    decentralize_cutoff,
    expected_profit_given_signal,
    intermediation_schedule,
    pigouvian_welfare,
    planner_cutoff,
    planner_kernel,
    quadrature_reference,
    solve_equilibrium,
    welfare_selection_burden,
)
from gatekeep.errors import DomainError
from gatekeep.normal import std_normal_cdf

PRIM = Primitives(sigma=2.0, f=0.15, f_n=0.005, delta=0.1)
SCHED = PowerBoundedCost(3.0, 2.0, 8.0)


def test_kernel_zero_at_market_cutoff(solved):
    regime, eq, _ = solved(0.5)
    val = planner_kernel(PRIM, regime, eq.cutoffs.p_star, eq.cutoffs.t_star)
    assert abs(val) <= 1e-8


def test_kernel_limit_at_low_signals(solved):
    regime, eq, _ = solved(0.5)
    val = planner_kernel(PRIM, regime, eq.cutoffs.p_star, -30.0)
    assert val == pytest.approx(-regime.f_b, abs=1e-12)


def test_kernel_weakly_increasing(solved):
    regime, eq, _ = solved(0.5)
    grid = [-3.0 + 0.5 * i for i in range(14)]
    vals = [planner_kernel(PRIM, regime, eq.cutoffs.p_star, t) for t in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_kernel_sign_pattern(solved):
    regime, eq, _ = solved(0.5)
    t_star = eq.cutoffs.t_star
    assert planner_kernel(PRIM, regime, eq.cutoffs.p_star, t_star - 0.5) < 0.0
    assert planner_kernel(PRIM, regime, eq.cutoffs.p_star, t_star + 0.5) > 0.0


@pytest.mark.parametrize("rho", [0.2, 0.5, 0.89])
def test_planner_cutoff_coincides_with_market(rho, solved):
    regime, eq, _ = solved(rho)
    t_p = planner_cutoff(PRIM, regime, eq)
    assert abs(t_p - eq.cutoffs.t_star) <= 1e-8


def test_planner_and_market_move_together():
    lo = Regime(0.5, ConstantCost(2.0))
    hi = Regime(0.5, ConstantCost(3.0))
    eq_lo, eq_hi = solve_equilibrium(PRIM, lo), solve_equilibrium(PRIM, hi)
    tp_lo, tp_hi = planner_cutoff(PRIM, lo, eq_lo), planner_cutoff(PRIM, hi, eq_hi)
    assert tp_hi > tp_lo
    assert abs(tp_lo - eq_lo.cutoffs.t_star) <= 1e-8
    assert abs(tp_hi - eq_hi.cutoffs.t_star) <= 1e-8


def test_contract_schedule_shape(solved):
    regime, eq, _ = solved(0.5)
    t_star = eq.cutoffs.t_star
    grid = [t_star + 0.4 * i for i in range(10)]
    points = intermediation_schedule(PRIM, regime, eq, grid)
    assert points[0].b == pytest.approx(1.0, abs=1e-8)
    bs = [c.b for c in points]
    assert all(0.0 < b <= 1.0 + 1e-12 for b in bs)
    assert all(b2 <= b1 for b1, b2 in zip(bs, bs[1:]))
    far = intermediation_schedule(PRIM, regime, eq, [t_star + 16.0])[0]
    assert far.b < 1e-2


def test_contract_undefined_below_cutoff(solved):
    regime, eq, _ = solved(0.5)
    with pytest.raises(DomainError):
        intermediation_schedule(PRIM, regime, eq, [eq.cutoffs.t_star - 0.1])


def test_contract_value_against_quadrature(solved):
    regime, eq, _ = solved(0.5)
    t = eq.cutoffs.t_star + 1.0
    point = intermediation_schedule(PRIM, regime, eq, [t])[0]
    pi_quad = quadrature_reference(
        "pi_tilde", {"prim": PRIM, "rho": regime.rho, "p_star": eq.cutoffs.p_star, "t": t}
    )
    assert point.b == pytest.approx(PRIM.delta * regime.f_b / pi_quad, rel=1e-8)


def test_decentralize_at_market_cutoff_is_laissez_faire(solved):
    regime, eq, _ = solved(0.5)
    bundle = decentralize_cutoff(PRIM, regime, eq, eq.cutoffs.t_star)
    assert bundle.s == pytest.approx(0.0, abs=1e-10)
    assert bundle.tau == pytest.approx(0.0, abs=1e-10)


def test_decentralize_taxes_above_market_cutoff(solved):
    regime, eq, _ = solved(0.5)
    bundle = decentralize_cutoff(PRIM, regime, eq, eq.cutoffs.t_star + 0.8)
    assert bundle.s < 0.0
    assert bundle.tau == bundle.s * std_normal_cdf(-bundle.theta_p_log)


def test_decentralized_activation_set_matches_cutoff(solved):
    regime, eq, _ = solved(0.5)
    t_p = eq.cutoffs.t_star + 0.6
    bundle = decentralize_cutoff(PRIM, regime, eq, t_p)
    for dt in (-0.5, -0.1, 0.1, 0.5, 2.0):
        t = t_p + dt
        value = (
            expected_profit_given_signal(PRIM, regime.rho, eq.cutoffs.p_star, t) / PRIM.delta
            - regime.f_b
            + bundle.s
        )
        assert (value >= -1e-12) == (t >= t_p)


def test_decentralize_rejects_nonfinite_cutoff(solved):
    regime, eq, _ = solved(0.5)
    with pytest.raises(DomainError):
        decentralize_cutoff(PRIM, regime, eq, math.inf)


def test_pigouvian_zero_reproduces_baseline_exactly(solved):
    regime, eq, agg = solved(0.5)
    baseline = welfare_selection_burden(PRIM, agg.s_term, agg.b_term)
    assert pigouvian_welfare(PRIM, regime, 0.0) == baseline


def test_pigouvian_sweep_peaks_at_zero(solved):
    regime, _, _ = solved(0.5)
    half = regime.f_b / 2.0
    n = 21
    transfers = [half * (2 * i - (n - 1)) / (n - 1) for i in range(n)]
    welfare = [pigouvian_welfare(PRIM, regime, s) for s in transfers]
    w0 = welfare[transfers.index(0.0)]
    assert max(welfare) == w0
    assert all(w <= w0 for w in welfare)


def test_pigouvian_concave_at_zero(solved):
    regime, _, _ = solved(0.5)
    h = 0.05
    second = (
        pigouvian_welfare(PRIM, regime, h)
        - 2.0 * pigouvian_welfare(PRIM, regime, 0.0)
        + pigouvian_welfare(PRIM, regime, -h)
    ) / (h * h)
    assert second <= 0.0


def test_pigouvian_transfer_domain(solved):
    regime, _, _ = solved(0.5)
    with pytest.raises(DomainError):
        pigouvian_welfare(PRIM, regime, regime.f_b)
    with pytest.raises(DomainError):
        pigouvian_welfare(PRIM, regime, regime.f_b - 1e-7)


def test_decentralization_fixed_point(solved):
    # transfers implementing the market cutoff leave welfare at the baseline
    regime, eq, agg = solved(0.5)
    bundle = decentralize_cutoff(PRIM, regime, eq, eq.cutoffs.t_star)
    w = pigouvian_welfare(PRIM, regime, bundle.s)
    baseline = welfare_selection_burden(PRIM, agg.s_term, agg.b_term)
    assert w == pytest.approx(baseline, rel=1e-8)
