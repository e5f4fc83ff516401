import csv
import math

import pytest

from gatekeep.cli import SWEEP_COLUMNS, main

BASE = """\
[primitives]
sigma = 2.0
f = 0.15
f_n = 0.005
delta = 0.1

[schedule]
kind = power_bounded
f_b0 = 3.0
kappa = 2.0
alpha = 8.0

[run]
rho = 0.5
grid = 0.2:0.8:0.2
seed = 99
"""


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(BASE)
    return str(path)


def _read(path):
    with open(path, newline="") as fh:
        provenance = fh.readline()
        rows = list(csv.reader(fh))
    return provenance, rows[0], rows[1:]


def test_solve_writes_schema_row(cfg_path, tmp_path):
    out = str(tmp_path / "solve.csv")
    assert main(["solve", "--config", cfg_path, "--out", out, "--quiet"]) == 0
    provenance, header, rows = _read(out)
    assert provenance.startswith("# gatekeep ")
    assert "config_sha256=" in provenance and "seed=99" in provenance
    assert tuple(header) == SWEEP_COLUMNS
    assert len(rows) == 1
    assert rows[0][0] == "0.5"
    assert rows[0][-1] == "ok"
    assert math.isfinite(float(rows[0][14]))


def test_solve_matches_golden_equilibrium(tmp_path):
    from golden_values import P_STAR, T_STAR

    path = tmp_path / "golden.cfg"
    path.write_text(BASE.replace("rho = 0.5", "rho = 0.89"))
    out = str(tmp_path / "golden.csv")
    assert main(["solve", "--config", str(path), "--out", out, "--quiet"]) == 0
    _, header, rows = _read(out)
    row = dict(zip(header, rows[0]))
    assert float(row["t_star"]) == pytest.approx(T_STAR, abs=1e-9)
    assert float(row["p_star"]) == pytest.approx(P_STAR, abs=1e-9)


def test_sweep_deterministic_bytes(cfg_path, tmp_path):
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert main(["sweep", "--config", cfg_path, "--out", out1, "--quiet"]) == 0
    assert main(["sweep", "--config", cfg_path, "--out", out2, "--quiet"]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_sweep_grid_override_and_svg(cfg_path, tmp_path):
    out = str(tmp_path / "sweep.csv")
    svg = str(tmp_path / "chart.svg")
    code = main([
        "sweep", "--config", cfg_path, "--out", out, "--svg", svg,
        "--grid", "0.3:0.7:0.1", "--quiet",
    ])
    assert code == 0
    _, header, rows = _read(out)
    assert len(rows) == 5
    assert [float(r[0]) for r in rows] == pytest.approx([0.3, 0.4, 0.5, 0.6, 0.7])
    text = open(svg).read()
    assert text.startswith("<?xml")
    assert text.count("<polyline") >= 3
    assert "legend" not in text  # legend is drawn with text/line elements
    assert "welfare" in text


def test_optimum_mode(cfg_path, tmp_path):
    out = str(tmp_path / "opt.csv")
    assert main(["optimum", "--config", cfg_path, "--out", out, "--quiet",
                 "--grid", "0.5:0.98:0.04"]) == 0
    _, header, rows = _read(out)
    assert header == ["rho_w", "W", "boundary"]
    rho_w = float(rows[0][0])
    assert 0.84 <= rho_w <= 0.94


def test_pigouvian_mode(cfg_path, tmp_path):
    path = tmp_path / "pig.cfg"
    path.write_text(BASE + "s_points = 11\n")
    out = str(tmp_path / "pig.csv")
    assert main(["pigouvian", "--config", str(path), "--out", out, "--quiet"]) == 0
    _, header, rows = _read(out)
    assert header == ["s", "W", "status"]
    assert len(rows) == 11
    welfare = {float(r[0]): float(r[1]) for r in rows}
    assert max(welfare, key=welfare.get) == 0.0


def test_sweep_reproduces_benchmark_figure_table(cfg_path, tmp_path):
    # full-resolution sweep through the CLI: interior welfare peak near 0.89
    out = str(tmp_path / "figure.csv")
    code = main([
        "sweep", "--config", cfg_path, "--out", out, "--quiet",
        "--grid", "0.05:0.98:0.01",
    ])
    assert code == 0
    _, header, rows = _read(out)
    assert len(rows) == 94
    idx_rho, idx_w = header.index("rho"), header.index("W")
    best = max(rows, key=lambda r: float(r[idx_w]))
    assert abs(float(best[idx_rho]) - 0.89) <= 0.03


def test_limits_mode(cfg_path, tmp_path):
    out = str(tmp_path / "lim.csv")
    assert main(["limits", "--config", cfg_path, "--out", out, "--quiet"]) == 0
    _, header, rows = _read(out)
    assert header[0] == "variant"
    variants = {r[0]: float(r[1]) for r in rows}
    assert variants["perfect_info"] > variants["zero_precision"]


def test_validate_mode_passes(cfg_path, tmp_path):
    path = tmp_path / "val.cfg"
    path.write_text(BASE + "mc_n = 200000\n")
    out = str(tmp_path / "val.csv")
    assert main(["validate", "--config", str(path), "--out", out, "--quiet"]) == 0
    _, header, rows = _read(out)
    assert header[0] == "quantity"
    names = [r[0] for r in rows]
    assert names == ["p_theta", "p_phi", "s_term", "pi_breve", "pi_tilde"]
    for row in rows:
        assert abs(float(row[4])) <= 4.0  # z-score column
        assert abs(float(row[6])) <= 1e-8  # quadrature delta column


def test_solver_failure_exit_code(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(BASE.replace("f_n = 0.005", "f_n = 1e30"))
    out = str(tmp_path / "bad.csv")
    assert main(["solve", "--config", str(path), "--out", out, "--quiet"]) == 2
    _, header, rows = _read(out)
    assert rows[0][-1].startswith("failed: BracketFailureError")


def test_missing_required_run_field(tmp_path):
    path = tmp_path / "norho.cfg"
    path.write_text(BASE.replace("rho = 0.5\n", ""))
    assert main(["solve", "--config", str(path), "--quiet"]) == 1


def test_config_errors_exit_one(tmp_path):
    missing = str(tmp_path / "nope.cfg")
    assert main(["solve", "--config", missing]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text(BASE.replace("sigma = 2.0", "sigma = 1.0"))
    assert main(["solve", "--config", str(bad)]) == 1


def test_bad_grid_flag(cfg_path):
    assert main(["sweep", "--config", cfg_path, "--grid", "0.1:0.9"]) == 1
