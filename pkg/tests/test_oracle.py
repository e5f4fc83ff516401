import math

import numpy as np
import pytest

from gatekeep import (
    LogCutoffs,
    Primitives,
    bvn_cdf,
    estimate_aggregates,
    estimate_profit_given_signal,
    expected_joint_profit,
    expected_profit_given_signal,
    quadrature_reference,
    sample_log_population,
    simulate_operating_mass,
    tilted_upper_tail2,
)
from gatekeep.errors import DomainError

PRIM = Primitives(sigma=2.0, f=0.15, f_n=0.005, delta=0.1)


def test_sample_correlation_and_marginals():
    n = 10**6
    draws = sample_log_population(0.6, n, seed=42)
    corr = float(np.corrcoef(draws.p, draws.t)[0, 1])
    assert corr == pytest.approx(0.6, abs=0.005)
    for arr in (draws.p, draws.t):
        se_mean = 1.0 / math.sqrt(n)
        assert abs(float(arr.mean())) <= 4.0 * se_mean
        se_var = math.sqrt(2.0 / (n - 1))
        assert abs(float(arr.var(ddof=1)) - 1.0) <= 4.0 * se_var


def test_sampling_deterministic_under_seed():
    a = sample_log_population(0.5, 10**4, seed=7)
    b = sample_log_population(0.5, 10**4, seed=7)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.t, b.t)
    c = sample_log_population(0.5, 10**4, seed=8)
    assert not np.array_equal(a.p, c.p)


def test_sampling_validation():
    with pytest.raises(DomainError):
        sample_log_population(0.5, 0, seed=1)
    with pytest.raises(DomainError):
        sample_log_population(1.2, 10, seed=1)


def test_estimates_match_closed_forms(solved):
    regime, eq, _ = solved(0.5)
    draws = sample_log_population(regime.rho, 10**6, seed=314)
    report = estimate_aggregates(draws, PRIM, eq.cutoffs)
    assert {r.name for r in report.rows} == {"p_theta", "p_phi", "s_term", "pi_breve"}
    for row in report.rows:
        assert not row.degenerate
        assert abs(row.z_score) <= 4.0, row
        assert row.estimate.std_error > 0.0


def test_report_deterministic(solved):
    regime, eq, _ = solved(0.5)
    r1 = estimate_aggregates(sample_log_population(0.5, 10**5, seed=9), PRIM, eq.cutoffs)
    r2 = estimate_aggregates(sample_log_population(0.5, 10**5, seed=9), PRIM, eq.cutoffs)
    assert r1 == r2
    assert repr(r1) == repr(r2)


def test_full_mass_cutoffs():
    draws = sample_log_population(0.5, 1000, seed=3)
    report = estimate_aggregates(draws, PRIM, LogCutoffs(-math.inf, -math.inf, 0.0))
    by_name = {r.name: r for r in report.rows}
    assert by_name["p_theta"].estimate.mean == 1.0
    assert by_name["p_theta"].closed_form == 1.0
    assert by_name["p_phi"].estimate.mean == 1.0
    assert by_name["p_theta"].estimate.std_error == 0.0
    assert by_name["p_theta"].z_score == 0.0


def test_empty_activation_set_flagged_not_crashed():
    draws = sample_log_population(0.5, 1000, seed=3)
    report = estimate_aggregates(draws, PRIM, LogCutoffs(12.0, 0.0, 0.0))
    by_name = {r.name: r for r in report.rows}
    assert by_name["p_theta"].degenerate
    assert by_name["p_phi"].degenerate
    assert by_name["p_theta"].estimate.mean == 0.0


def test_profit_estimate_monotone_and_matched(solved):
    regime, eq, _ = solved(0.89)
    p_star = eq.cutoffs.p_star
    low = estimate_profit_given_signal(0.0, PRIM, regime.rho, p_star, 10**5, seed=5)
    high = estimate_profit_given_signal(2.0, PRIM, regime.rho, p_star, 10**5, seed=5)
    assert high.mean > low.mean
    closed = expected_profit_given_signal(PRIM, regime.rho, p_star, 1.0)
    est = estimate_profit_given_signal(1.0, PRIM, regime.rho, p_star, 10**6, seed=6)
    assert abs(closed - est.mean) <= 4.0 * est.std_error


def test_profit_estimate_degenerate_cutoff():
    est = estimate_profit_given_signal(1.0, PRIM, 0.5, math.inf, 1000, seed=1)
    assert est.mean == 0.0
    assert est.std_error == 0.0


def test_quadrature_bvn_arcsine():
    got = quadrature_reference("bvn", {"x": 0.0, "y": 0.0, "rho": 0.5})
    assert got == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_quadrature_unknown_quantity():
    with pytest.raises(DomainError):
        quadrature_reference("nope", {})


@pytest.mark.parametrize("rho", [0.1, 0.5, 0.89, 0.97])
def test_closed_forms_match_quadrature(rho, solved):
    _, eq, _ = solved(rho)
    c = eq.cutoffs
    k = PRIM.k
    checks = [
        (
            bvn_cdf(-c.p_star, -c.t_star, rho),
            quadrature_reference("bvn", {"x": -c.p_star, "y": -c.t_star, "rho": rho}),
        ),
        (
            tilted_upper_tail2(k, c.p_star, c.t_star, rho),
            quadrature_reference(
                "S", {"k": k, "rho": rho, "p_star": c.p_star, "t_star": c.t_star}
            ),
        ),
        (
            expected_joint_profit(PRIM, rho, c),
            quadrature_reference(
                "pi_breve", {"prim": PRIM, "rho": rho, "p_star": c.p_star, "t_star": c.t_star}
            ),
        ),
        (
            expected_profit_given_signal(PRIM, rho, c.p_star, 1.0),
            quadrature_reference(
                "pi_tilde", {"prim": PRIM, "rho": rho, "p_star": c.p_star, "t": 1.0}
            ),
        ),
    ]
    for closed, reference in checks:
        assert closed == pytest.approx(reference, abs=1e-8)


def test_tilted_moment_matches_mc_grid():
    # closed-form tilted truncated moments vs raw sample means
    n = 10**7
    for rho, seed in ((0.3, 100), (0.8, 101)):
        draws = sample_log_population(rho, n, seed=seed)
        for k, p_c, t_c in ((1.0, 0.2, -0.1), (1.5, -0.5, 0.6)):
            values = np.exp(k * draws.p) * ((draws.p >= p_c) & (draws.t >= t_c))
            mean = float(values.mean())
            se = float(values.std(ddof=1) / math.sqrt(n))
            closed = tilted_upper_tail2(k, p_c, t_c, rho)
            assert abs(closed - mean) <= 4.0 * se, (rho, k, p_c, t_c)


def test_steady_state_flow_condition(solved):
    regime, eq, _ = solved(0.5)
    n_exp = 200
    m_hat, se = simulate_operating_mass(
        PRIM, regime.rho, eq.cutoffs, experimenters_per_period=n_exp,
        periods=10_000, seed=77,
    )
    target = n_exp * bvn_cdf(-eq.cutoffs.p_star, -eq.cutoffs.t_star, regime.rho) / PRIM.delta
    assert abs(m_hat - target) <= 4.0 * se


def test_simulation_validation(solved):
    _, eq, _ = solved(0.5)
    with pytest.raises(DomainError):
        simulate_operating_mass(PRIM, 0.5, eq.cutoffs, periods=10, burn_in=10)
