"""Command-line front door.

Subcommands: solve, sweep, optimum, pigouvian, limits, validate. Each reads
a plain-text config, applies flag overrides, runs, and writes an RFC-4180
style CSV whose first line is a provenance comment
(``# gatekeep <version> config_sha256=<hash> seed=<seed>``); given identical
config and seed the remaining bytes are identical across runs.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 validation failure (oracle mismatch).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace

from . import __version__
from .config import GridSpec, MODES, RunConfig, config_hash, parse_config
from .economy import Regime, expected_profit_given_signal
from .equilibrium import melitz_limit_perfect, melitz_limit_zero, solve_equilibrium
from .errors import GatekeepError, ParseError, ValidationError
from .oracle import estimate_aggregates, estimate_profit_given_signal, quadrature_reference, sample_log_population
from .policy import pigouvian_welfare
from .svgchart import line_chart_svg
from .welfare import find_optimal_precision, sweep_records

#: documented column schema for solve/sweep outputs
SWEEP_COLUMNS = (
    "rho", "t_star", "p_star", "a", "P_theta", "P_phi", "S", "B", "pi_breve",
    "r_bar", "pi_bar", "M_e", "M", "phi_tilde", "W", "status",
)

MC_Z_LIMIT = 4.0
QUAD_DELTA_LIMIT = 1e-8


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with exit code 2 (solver failure)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(config: RunConfig, columns, rows, path: str | None) -> None:
    buffer = io.StringIO()
    buffer.write(
        f"# gatekeep {__version__} config_sha256={config_hash(config)} seed={config.seed}\r\n"
    )
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    text = buffer.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _sweep_row(rec) -> list:
    if rec.ok:
        return [
            rec.rho, rec.eq.cutoffs.t_star, rec.eq.cutoffs.p_star, rec.eq.cutoffs.a,
            rec.agg.p_theta, rec.agg.p_phi, rec.agg.s_term, rec.agg.b_term,
            rec.agg.pi_breve, rec.agg.r_bar, rec.agg.pi_bar, rec.agg.m_e,
            rec.agg.m, rec.agg.phi_tilde, rec.agg.welfare, "ok",
        ]
    nan = math.nan
    return [rec.rho] + [nan] * 14 + [rec.status]


def _require(config: RunConfig, attr: str, mode: str):
    value = getattr(config, attr)
    if value is None:
        raise ValidationError(f"run.{attr} is required for mode '{mode}'")
    return value


def _run_solve(config: RunConfig, quiet: bool) -> int:
    rho = _require(config, "rho", "solve")
    records = sweep_records(config.primitives, config.schedule, [rho])
    _write_csv(config, SWEEP_COLUMNS, [_sweep_row(r) for r in records], config.out)
    rec = records[0]
    if not rec.ok:
        print(rec.status, file=sys.stderr)
        return 2
    if not quiet:
        print(
            f"rho={rho!r} t_star={rec.eq.cutoffs.t_star!r} "
            f"p_star={rec.eq.cutoffs.p_star!r} W={rec.agg.welfare!r}"
        )
    return 0


def _render_sweep_svg(records, path: str) -> None:
    ok = [r for r in records if r.ok]
    if not ok:
        return
    rhos = [r.rho for r in ok]
    series = []
    for name, values in (
        ("welfare", [r.agg.welfare for r in ok]),
        ("operating mass", [r.agg.m for r in ok]),
        ("avg productivity", [r.agg.phi_tilde for r in ok]),
    ):
        top = max(values)
        series.append((name, rhos, [v / top for v in values]))
    svg = line_chart_svg(
        series, x_label="verification precision", y_label="series / own max",
        title="welfare, variety, and selection vs precision",
    )
    with open(path, "w") as fh:
        fh.write(svg)


def _run_sweep(config: RunConfig, quiet: bool) -> int:
    grid = _require(config, "grid", "sweep")
    records = sweep_records(config.primitives, config.schedule, grid.points())
    _write_csv(config, SWEEP_COLUMNS, [_sweep_row(r) for r in records], config.out)
    if config.svg is not None:
        _render_sweep_svg(records, config.svg)
    failed = [r for r in records if not r.ok]
    ok = [r for r in records if r.ok]
    if ok and not quiet:
        best = max(ok, key=lambda r: r.agg.welfare)
        print(f"{len(ok)}/{len(records)} points solved; welfare argmax at rho={best.rho!r}")
    for rec in failed:
        print(f"rho={rec.rho!r}: {rec.status}", file=sys.stderr)
    return 2 if failed else 0


def _run_optimum(config: RunConfig, quiet: bool) -> int:
    grid = _require(config, "grid", "optimum")
    result = find_optimal_precision(config.primitives, config.schedule, grid.points())
    _write_csv(
        config, ("rho_w", "W", "boundary"),
        [[result.rho_w, result.welfare, str(result.boundary).lower()]], config.out,
    )
    if not quiet:
        edge = " (grid boundary)" if result.boundary else ""
        print(f"welfare-maximizing precision rho_w={result.rho_w!r}{edge}")
    return 0


def _run_pigouvian(config: RunConfig, quiet: bool) -> int:
    rho = _require(config, "rho", "pigouvian")
    regime = Regime(rho, config.schedule)
    half = regime.f_b / 2.0
    n = config.s_points
    rows = []
    failures = 0
    for i in range(n):
        # symmetric form so the midpoint of an odd grid is exactly s = 0
        s = half * (2 * i - (n - 1)) / (n - 1)
        try:
            w = pigouvian_welfare(config.primitives, regime, s)
            rows.append([s, w, "ok"])
        except GatekeepError as exc:
            failures += 1
            rows.append([s, math.nan, f"failed: {type(exc).__name__}: {exc}"])
    _write_csv(config, ("s", "W", "status"), rows, config.out)
    if not quiet:
        solved = [(s, w) for s, w, status in rows if status == "ok"]
        if solved:
            best = max(solved, key=lambda r: r[1])
            print(f"welfare argmax over transfers at s={best[0]!r}")
    return 2 if failures else 0


def _run_limits(config: RunConfig, quiet: bool) -> int:
    prim = config.primitives
    f_low = config.f_b_bar if config.f_b_bar is not None else config.schedule.cost(1e-6)
    f_e0 = config.f_e0 if config.f_e0 is not None else prim.f_n + f_low
    zero = melitz_limit_zero(prim, f_e0)
    perfect = melitz_limit_perfect(prim, f_low)
    rows = [
        [lim.variant, lim.p_star, lim.effective_entry_cost, lim.effective_fixed_cost, lim.fe_residual]
        for lim in (zero, perfect)
    ]
    _write_csv(
        config,
        ("variant", "p_star", "effective_entry_cost", "effective_fixed_cost", "fe_residual"),
        rows, config.out,
    )
    if not quiet:
        print(
            f"zero-precision p*={zero.p_star!r}, perfect-information p*={perfect.p_star!r} "
            f"(selection gap {perfect.p_star - zero.p_star!r})"
        )
    return 0


def _run_validate(config: RunConfig, quiet: bool) -> int:
    prim = config.primitives
    rho = _require(config, "rho", "validate")
    regime = Regime(rho, config.schedule)
    eq = solve_equilibrium(prim, regime)
    cutoffs = eq.cutoffs
    draws = sample_log_population(regime.rho, config.mc_n, config.seed)
    report = estimate_aggregates(draws, prim, cutoffs)

    quad = {
        "p_theta": quadrature_reference(
            "bvn", {"x": -cutoffs.t_star, "y": math.inf, "rho": regime.rho}
        ),
        "p_phi": quadrature_reference(
            "bvn", {"x": -cutoffs.p_star, "y": -cutoffs.t_star, "rho": regime.rho}
        ),
        "s_term": quadrature_reference(
            "S",
            {"k": prim.k, "rho": regime.rho, "p_star": cutoffs.p_star, "t_star": cutoffs.t_star},
        ),
        "pi_breve": quadrature_reference(
            "pi_breve",
            {"prim": prim, "rho": regime.rho, "p_star": cutoffs.p_star, "t_star": cutoffs.t_star},
        ),
    }
    rows = []
    worst_z = 0.0
    worst_delta = 0.0
    for row in report.rows:
        q = quad.get(row.name)
        delta = math.nan if q is None else row.closed_form - q
        rows.append([
            row.name, row.closed_form, row.estimate.mean, row.estimate.std_error,
            row.z_score, math.nan if q is None else q, delta,
        ])
        worst_z = max(worst_z, abs(row.z_score))
        if q is not None:
            worst_delta = max(worst_delta, abs(delta))
    # expected profit at one representative signal, against its own MC
    t_probe = cutoffs.t_star + 0.5
    closed = expected_profit_given_signal(prim, regime.rho, cutoffs.p_star, t_probe)
    est = estimate_profit_given_signal(
        t_probe, prim, regime.rho, cutoffs.p_star, config.mc_n, config.seed + 1
    )
    z = (closed - est.mean) / est.std_error if est.std_error > 0 else 0.0
    q = quadrature_reference(
        "pi_tilde", {"prim": prim, "rho": regime.rho, "p_star": cutoffs.p_star, "t": t_probe}
    )
    rows.append(["pi_tilde", closed, est.mean, est.std_error, z, q, closed - q])
    worst_z = max(worst_z, abs(z))
    worst_delta = max(worst_delta, abs(closed - q))

    _write_csv(
        config,
        ("quantity", "closed_form", "mc_mean", "mc_std_error", "z_score", "quad_value", "quad_delta"),
        rows, config.out,
    )
    passed = worst_z <= MC_Z_LIMIT and worst_delta <= QUAD_DELTA_LIMIT
    if not quiet:
        print(
            f"validation at rho={regime.rho!r}, n={config.mc_n}: max |z| = {worst_z:.3f}, "
            f"max quadrature delta = {worst_delta:.3e} -> {'ok' if passed else 'MISMATCH'}"
        )
    return 0 if passed else 3


_RUNNERS = {
    "solve": _run_solve,
    "sweep": _run_sweep,
    "optimum": _run_optimum,
    "pigouvian": _run_pigouvian,
    "limits": _run_limits,
    "validate": _run_validate,
}


def run(config: RunConfig, quiet: bool = False) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        return _RUNNERS[config.mode](config, quiet)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except GatekeepError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="gatekeep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode, help=f"run the {mode} mode")
        sp.add_argument("--config", required=True, help="path to the run config")
        sp.add_argument("--out", help="CSV output path (default: config value or stdout)")
        sp.add_argument("--svg", help="optional SVG chart path (sweep mode)")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--grid", help="override the rho grid, start:stop:step")
        sp.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = parse_config(fh.read())
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    overrides: dict = {"mode": args.command}
    if args.out is not None:
        overrides["out"] = args.out
    if args.svg is not None:
        overrides["svg"] = args.svg
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.grid is not None:
        parts = args.grid.split(":")
        if len(parts) != 3:
            print(f"--grid must be start:stop:step, got {args.grid!r}", file=sys.stderr)
            return 1
        try:
            overrides["grid"] = GridSpec(*(float(p) for p in parts))
        except (ValueError, ValidationError) as exc:
            print(f"--grid: {exc}", file=sys.stderr)
            return 1
    config = replace(config, **overrides)
    return run(config, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
