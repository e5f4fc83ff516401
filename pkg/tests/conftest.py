import pytest

from gatekeep import PowerBoundedCost, Primitives, Regime, compute_aggregates, solve_equilibrium


@pytest.fixture(scope="session")
def fig3_primitives():
    return Primitives(sigma=2.0, f=0.15, f_n=0.005, delta=0.1, L=1.0)


@pytest.fixture(scope="session")
def fig3_schedule():
    return PowerBoundedCost(f_b0=3.0, kappa=2.0, alpha=8.0)


@pytest.fixture(scope="session")
def solved(fig3_primitives, fig3_schedule):
    """Cache of (rho -> (regime, solution, aggregates)) on the benchmark economy."""
    cache = {}

    def get(rho):
        if rho not in cache:
            regime = Regime(rho, fig3_schedule)
            eq = solve_equilibrium(fig3_primitives, regime)
            agg = compute_aggregates(fig3_primitives, regime, eq)
            cache[rho] = (regime, eq, agg)
        return cache[rho]

    return get
