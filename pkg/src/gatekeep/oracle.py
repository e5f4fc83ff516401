"""Independent validation of the closed forms.

Monte Carlo estimators work from raw bivariate-normal draws and adaptive
quadrature integrates the raw densities; neither route touches the
closed-form kernels in ``normal.py`` (quadrature integrands use their own
inline density and ``scipy.special.ndtr``), so agreement is evidence rather
than tautology.

Sampling uses numpy's PCG64 generator (``numpy.random.default_rng``) seeded
explicitly; identical (n, seed) reproduce identical draws and reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .economy import LogCutoffs, Primitives, expected_joint_profit
from .errors import DomainError, ToleranceNotMetError
from .normal import bvn_cdf, std_normal_cdf, tilted_upper_tail2

_SQRT_2PI = math.sqrt(2.0 * math.pi)
#: integration window in standard deviations; the omitted tail mass is < 1e-300
_TAIL = 40.0


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo sample mean with its standard error and provenance."""

    mean: float
    std_error: float
    n: int
    seed: int


@dataclass(frozen=True)
class OracleRow:
    """One quantity: closed form vs Monte Carlo, with the resulting z-score."""

    name: str
    closed_form: float
    estimate: McEstimate
    z_score: float
    degenerate: bool = False


@dataclass(frozen=True)
class OracleReport:
    rows: tuple[OracleRow, ...]
    rho: float
    n: int
    seed: int


@dataclass(frozen=True, eq=False)
class PopulationDraws:
    """Paired (log productivity, log signal) draws with their provenance."""

    p: np.ndarray
    t: np.ndarray
    rho: float
    seed: int

    @property
    def n(self) -> int:
        return int(self.t.size)


def sample_log_population(rho: float, n: int, seed: int) -> PopulationDraws:
    """Draw n pairs of standard bivariate normals with correlation rho.

    t ~ N(0,1) and p = rho*t + sqrt(1-rho^2)*z with independent z, so the
    construction itself encodes the conditional law p | t.
    """
    if n < 1:
        raise DomainError(f"need at least one draw, got n={n!r}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho!r}")
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(n)
    z = rng.standard_normal(n)
    p = rho * t + math.sqrt(1.0 - rho * rho) * z
    return PopulationDraws(p=p, t=t, rho=rho, seed=seed)


def _mc_estimate(values: np.ndarray, seed: int) -> McEstimate:
    n = int(values.size)
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean=mean, std_error=se, n=n, seed=seed)


def _z_score(closed_form: float, est: McEstimate) -> float:
    if est.std_error > 0.0:
        return (closed_form - est.mean) / est.std_error
    return 0.0 if closed_form == est.mean else math.inf


def estimate_aggregates(
    draws: PopulationDraws, prim: Primitives, cutoffs: LogCutoffs
) -> OracleReport:
    """Sample estimates of the tail probabilities, selection term, and profit.

    Compares each against its closed form; empty indicator sets are flagged
    as degenerate rather than crashing.
    """
    if draws.n < 1:
        raise DomainError("draws must be nonempty")
    p, t = draws.p, draws.t
    rho, seed = draws.rho, draws.seed
    t_star, p_star = cutoffs.t_star, cutoffs.p_star
    k = prim.k

    pass_t = t >= t_star
    pass_both = pass_t & (p >= p_star)
    t_empty = not bool(pass_t.any())
    both_empty = not bool(pass_both.any())

    rows = []

    est = _mc_estimate(pass_t.astype(float), seed)
    closed = std_normal_cdf(-t_star)
    rows.append(OracleRow("p_theta", closed, est, _z_score(closed, est), t_empty))

    est = _mc_estimate(pass_both.astype(float), seed)
    closed = bvn_cdf(-p_star, -t_star, rho)
    rows.append(OracleRow("p_phi", closed, est, _z_score(closed, est), both_empty))

    est = _mc_estimate(np.exp(k * p) * pass_both, seed)
    closed = tilted_upper_tail2(k, p_star, t_star, rho)
    rows.append(OracleRow("s_term", closed, est, _z_score(closed, est), both_empty))

    if math.isfinite(p_star):
        values = prim.f * (np.exp(k * (p - p_star)) - 1.0) * pass_both
        est = _mc_estimate(values, seed)
        closed = expected_joint_profit(prim, rho, cutoffs)
        rows.append(OracleRow("pi_breve", closed, est, _z_score(closed, est), both_empty))
    else:
        # Profit relative to a zero productivity cutoff is infinite.
        est = McEstimate(mean=math.inf, std_error=0.0, n=draws.n, seed=seed)
        rows.append(OracleRow("pi_breve", math.inf, est, 0.0, both_empty))

    return OracleReport(rows=tuple(rows), rho=rho, n=draws.n, seed=seed)


def estimate_profit_given_signal(
    t: float, prim: Primitives, rho: float, p_star: float, n: int, seed: int
) -> McEstimate:
    """Monte Carlo of expected flow profit conditional on a log signal t.

    Samples the conditional law p | t = N(rho t, 1 - rho^2) directly.
    """
    if n < 1:
        raise DomainError(f"need at least one draw, got n={n!r}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho!r}")
    rng = np.random.default_rng(seed)
    p = rho * t + math.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
    values = prim.f * (np.exp(prim.k * (p - p_star)) - 1.0) * (p >= p_star)
    return _mc_estimate(values, seed)


# ---------------------------------------------------------------------------
# Deterministic quadrature references (no shared code with the closed forms).


def _norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def _quad(fn, lo: float, hi: float, tol: float, what: str) -> float:
    # Inner integrals of iterated 2-D quadratures can be huge in magnitude;
    # their error budget is relative, while the caller's final result is
    # held to the absolute tolerance.
    value, abserr = integrate.quad(fn, lo, hi, epsabs=0.1 * tol, epsrel=1e-12, limit=200)
    if abserr > max(tol, 1e-11 * abs(value)):
        raise ToleranceNotMetError(
            f"{what}: quadrature error estimate {abserr!r} exceeds {tol!r}"
        )
    return value


def _quad_bvn(x: float, y: float, rho: float, tol: float) -> float:
    if x == -math.inf or y == -math.inf:
        return 0.0
    sd = math.sqrt(1.0 - rho * rho)
    hi = min(x, _TAIL)
    if hi <= -_TAIL:
        return 0.0

    def integrand(u: float) -> float:
        return _norm_pdf(u) * float(ndtr((y - rho * u) / sd))

    return _quad(integrand, -_TAIL, hi, tol, "bvn")


def _profit_inner(prim: Primitives, rho: float, p_star: float, t: float, tol: float) -> float:
    # E[f (e^{k(p - p*)} - 1) 1{p >= p*} | t] with p | t ~ N(rho t, 1 - rho^2)
    k = prim.k
    s2 = 1.0 - rho * rho
    sd = math.sqrt(s2)
    mean = rho * t
    hi = mean + k * s2 + _TAIL * sd
    if p_star >= hi:
        return 0.0

    def integrand(p: float) -> float:
        return prim.f * (math.exp(k * (p - p_star)) - 1.0) * _norm_pdf((p - mean) / sd) / sd

    return _quad(integrand, p_star, hi, tol, "pi_tilde")


def _tilt_inner(k: float, rho: float, p_star: float, t: float, tol: float) -> float:
    # E[e^{k p} 1{p >= p*} | t]
    s2 = 1.0 - rho * rho
    sd = math.sqrt(s2)
    mean = rho * t
    hi = mean + k * s2 + _TAIL * sd
    if p_star >= hi:
        return 0.0

    def integrand(p: float) -> float:
        return math.exp(k * p) * _norm_pdf((p - mean) / sd) / sd

    return _quad(integrand, max(p_star, mean - _TAIL * sd), hi, tol, "S inner")


def quadrature_reference(quantity: str, params: dict, tol: float = 1e-10) -> float:
    """Adaptive-quadrature value of a closed-form quantity.

    quantity is one of {"pi_tilde", "pi_breve", "S", "bvn"}; params carries
    the quantity's arguments (documented per branch below). Raises
    ToleranceNotMetError if the requested absolute tolerance is not reached.
    """
    if quantity == "bvn":
        return _quad_bvn(params["x"], params["y"], params["rho"], tol)
    if quantity == "pi_tilde":
        prim = params["prim"]
        return _profit_inner(prim, params["rho"], params["p_star"], params["t"], tol)
    if quantity == "pi_breve":
        prim = params["prim"]
        rho, p_star, t_star = params["rho"], params["p_star"], params["t_star"]
        k = prim.k
        lo = max(t_star, -_TAIL)
        hi = max(t_star, k * rho) + _TAIL

        def integrand(t: float) -> float:
            return _profit_inner(prim, rho, p_star, t, tol) * _norm_pdf(t)

        return _quad(integrand, lo, hi, tol, "pi_breve")
    if quantity == "S":
        k, rho = params["k"], params["rho"]
        p_star, t_star = params["p_star"], params["t_star"]
        lo = max(t_star, -_TAIL)
        hi = max(t_star, k * rho) + _TAIL

        def integrand(t: float) -> float:
            return _tilt_inner(k, rho, p_star, t, tol) * _norm_pdf(t)

        return _quad(integrand, lo, hi, tol, "S")
    raise DomainError(
        f"unknown quadrature quantity {quantity!r}; "
        "expected one of pi_tilde, pi_breve, S, bvn"
    )


def simulate_operating_mass(
    prim: Primitives,
    rho: float,
    cutoffs: LogCutoffs,
    experimenters_per_period: int = 200,
    periods: int = 10_000,
    burn_in: int = 1_000,
    seed: int = 0,
):
    """Simulate the death-renewal firm count at a fixed experimentation flow.

    Each period spawns a cohort of experimenters whose (p, t) pairs are drawn
    fresh; those passing both cutoffs become operating firms, and incumbents
    die with per-period probability delta. Returns (mean operating count
    after burn-in, batch-means standard error).
    """
    if periods <= burn_in:
        raise DomainError("periods must exceed burn_in")
    rng = np.random.default_rng(seed)
    n_exp = experimenters_per_period
    sd = math.sqrt(1.0 - rho * rho)
    counts = np.empty(periods - burn_in, dtype=float)
    stock = 0
    for period in range(periods):
        t = rng.standard_normal(n_exp)
        p = rho * t + sd * rng.standard_normal(n_exp)
        entrants = int(((t >= cutoffs.t_star) & (p >= cutoffs.p_star)).sum())
        deaths = rng.binomial(stock, prim.delta) if stock > 0 else 0
        stock = stock - deaths + entrants
        if period >= burn_in:
            counts[period - burn_in] = stock
    n_batches = 20
    batches = counts[: (counts.size // n_batches) * n_batches].reshape(n_batches, -1)
    means = batches.mean(axis=1)
    se = float(means.std(ddof=1) / math.sqrt(n_batches))
    return float(counts.mean()), se
