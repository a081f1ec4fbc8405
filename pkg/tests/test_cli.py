"""Command-line contract: formats, determinism, exit codes."""

import csv
import io
import json
import math
from fractions import Fraction

import pytest

from zonalvar.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.splitlines()
    header_comments = [ln for ln in lines if ln.startswith("# ")]
    data = [ln for ln in lines if not ln.startswith("# ")]
    rows = list(csv.DictReader(io.StringIO("\n".join(data))))
    return header_comments, rows


# ---------------------------------------------------------------------------
# compute


def test_compute_json_record(capsys):
    code, out, err = run(capsys, ["compute", "--n", "3", "--m", "1", "--rho", "0.01"])
    assert code == 0
    record = json.loads(out)
    assert record["n"] == 3 and record["m"] == 1 and record["rho"] == 0.01
    assert record["bound"] == 1.5
    # approaches the scale-free limit sqrt(5/2) ~ 1.5811 within 1%
    assert abs(record["product"] - 1.581) <= 0.016
    assert record["limit_value"] == pytest.approx(math.sqrt(2.5), rel=1e-12)
    assert record["path_agreement"] <= 1e-9
    assert record["meta"]["command"] == "compute"


def test_compute_momentum_spot_value(capsys):
    code, out, _ = run(capsys, ["compute", "--n", "2", "--m", "1", "--rho", "0.05"])
    assert code == 0
    record = json.loads(out)
    assert abs(record["var_momentum"] - 2026.7) <= 5.0


def test_compute_csv_format(capsys):
    code, out, _ = run(
        capsys, ["compute", "--n", "3", "--m", "2", "--rho", "0.5", "--format", "csv"]
    )
    assert code == 0
    comments, rows = parse_csv(out)
    assert any("command: compute" in c for c in comments)
    assert len(rows) == 1
    assert float(rows[0]["product"]) >= 1.5
    assert rows[0]["n"] == "3"


def test_compute_rejects_low_dimension(capsys):
    code, out, err = run(capsys, ["compute", "--n", "1", "--m", "1", "--rho", "0.1"])
    assert code == 64
    assert out == ""
    assert "n must be >= 2" in err


def test_compute_degenerate_scale_exit_code(capsys):
    code, out, err = run(capsys, ["compute", "--n", "3", "--m", "1", "--rho", "800"])
    assert code == 2
    assert out == ""
    assert "degenerate" in err.lower()


def test_compute_truncation_budget_exit_code(capsys):
    code, out, err = run(
        capsys,
        ["compute", "--n", "3", "--m", "1", "--rho", "0.05",
         "--min-terms", "1", "--max-terms", "5"],
    )
    assert code == 3
    assert "truncation" in err.lower()


def test_compute_bad_tolerance_is_usage_error(capsys):
    code, _, err = run(
        capsys, ["compute", "--n", "3", "--m", "1", "--rho", "0.1", "--rel-tol", "0.5"]
    )
    assert code == 64


def test_compute_deterministic_output(capsys):
    argv = ["compute", "--n", "4", "--m", "2", "--rho", "0.3"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


# ---------------------------------------------------------------------------
# sweep


def test_sweep_geometric_grid_and_limit_approach(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--n", "3", "--m", "1", "--rho-min", "0.01", "--rho-max", "0.2",
         "--steps", "8"],
    )
    assert code == 0
    comments, rows = parse_csv(out)
    assert len(rows) == 8
    rhos = [float(r["rho"]) for r in rows]
    assert rhos[0] == 0.01 and rhos[-1] == 0.2
    ratios = [b / a for a, b in zip(rhos, rhos[1:])]
    assert max(ratios) - min(ratios) < 1e-9
    products = [float(r["product"]) for r in rows]
    # decreasing toward the rho -> 0 limit 1.5811 as rho shrinks
    assert all(a < b for a, b in zip(products, products[1:]))
    assert abs(products[0] - math.sqrt(2.5)) < 3e-3
    assert all(r["status"] == "ok" for r in rows)


def test_sweep_residual_shrinks_quadratically(capsys):
    _, out, _ = run(
        capsys,
        ["sweep", "--n", "3", "--m", "1", "--rho-min", "0.01", "--rho-max", "0.08",
         "--steps", "4"],
    )
    _, rows = parse_csv(out)
    residuals = [abs(float(r["residual"])) for r in rows]
    rhos = [float(r["rho"]) for r in rows]
    # rho doubles per step; an O(rho^2) residual grows ~4x per step
    for i in range(len(rows) - 1):
        growth = residuals[i + 1] / residuals[i]
        assert 2.0 < growth < 8.0, (rhos, residuals)


def test_sweep_degenerate_rows_are_marked(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--n", "2", "--m", "1", "--rho-min", "1.0", "--rho-max", "900",
         "--steps", "5"],
    )
    assert code == 0
    _, rows = parse_csv(out)
    statuses = {r["status"] for r in rows}
    assert "degenerate" in statuses and "ok" in statuses
    degenerate = [r for r in rows if r["status"] == "degenerate"]
    assert all(r["product"] == "" for r in degenerate)


def test_sweep_single_step_rejected(capsys):
    code, _, err = run(
        capsys,
        ["sweep", "--n", "3", "--m", "1", "--rho-min", "0.1", "--rho-max", "0.2",
         "--steps", "1"],
    )
    assert code == 64


def test_sweep_json_format(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--n", "3", "--m", "1", "--rho-min", "0.1", "--rho-max", "0.4",
         "--steps", "3", "--format", "json"],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["columns"][0] == "rho"
    assert len(payload["rows"]) == 3


# ---------------------------------------------------------------------------
# limits


def test_limits_table(capsys):
    code, out, _ = run(capsys, ["limits", "--n-min", "3", "--n-max", "5", "--m-max", "3"])
    assert code == 0
    payload = json.loads(out)
    rows = payload["rows"]
    by_key = {(r["n"], r["m"]): r for r in rows}
    assert by_key[(3, 1)]["radicand"] == "5/2"
    assert by_key[(3, 1)]["is_minimizer"] is True
    assert by_key[(5, 2)]["is_minimizer"] is True
    assert by_key[(5, 1)]["is_minimizer"] is False
    assert by_key[(4, 1)]["value"] == pytest.approx(math.sqrt(21 / 5), rel=1e-12)
    assert all(r["value"] >= r["bound"] for r in rows)


def test_limits_csv_fractions_render_exactly(capsys):
    code, out, _ = run(
        capsys,
        ["limits", "--n-min", "7", "--n-max", "7", "--m-max", "3", "--format", "csv"],
    )
    assert code == 0
    _, rows = parse_csv(out)
    row = next(r for r in rows if r["m"] == "3")
    assert Fraction(row["radicand"]) == Fraction(273, 22)


# ---------------------------------------------------------------------------
# expand


def test_expand_F_window(capsys):
    code, out, _ = run(capsys, ["expand", "--target", "F"])
    assert code == 0
    payload = json.loads(out)
    assert payload["lo"] == -1
    coeffs = payload["coefficients"]
    assert coeffs["-1"] == "1/2"
    assert coeffs["1"] == "1/6"
    assert coeffs["3"] == "-1/90"


def test_expand_s0_and_sm(capsys):
    code, out, _ = run(capsys, ["expand", "--target", "S0", "--n", "3", "--order", "1"])
    payload = json.loads(out)
    assert code == 0
    assert payload["coefficients"]["-2"] == "1/4"
    code, out, _ = run(
        capsys, ["expand", "--target", "Sm", "--n", "2", "--m", "1", "--order", "3"]
    )
    payload = json.loads(out)
    assert payload["coefficients"]["-2"] == "1/4"
    assert payload["coefficients"]["0"] == "-1/12"


def test_expand_variance_targets(capsys):
    code, out, _ = run(capsys, ["expand", "--target", "varS", "--n", "3", "--m", "1"])
    payload = json.loads(out)
    assert payload["coefficients"]["2"] == "1/3"
    code, out, _ = run(capsys, ["expand", "--target", "U", "--n", "3", "--m", "1"])
    payload = json.loads(out)
    assert payload["radicand"] == "5/2"
    assert payload["shift"] == 0
    assert payload["tail"]["coefficients"]["1"] == "1/6"


def test_expand_fixed_window_rejects_order(capsys):
    code, _, err = run(
        capsys, ["expand", "--target", "varS", "--n", "3", "--m", "1", "--order", "5"]
    )
    assert code == 64
    assert "omit --order" in err


def test_expand_requires_parameters(capsys):
    code, _, err = run(capsys, ["expand", "--target", "Sm", "--n", "3"])
    assert code == 64
    assert "requires --m" in err


# ---------------------------------------------------------------------------
# verify and plumbing


def test_verify_report(capsys):
    code, out, _ = run(capsys, ["verify"])
    assert code == 0
    report = json.loads(out)
    assert report["summary"]["mandatory_pass"] is True
    assert report["summary"]["exit_code"] == 0
    assert report["appendix_ABC"]["all_match"] is True
    assert report["theorem_coefficients"]["all_match"] is False
    assert report["summary"]["stated_discrepancies"] == 12
    assert report["summary"]["flagged_pairs_confirmed_by_numerics"] is True
    assert report["path_equivalence"]["max_relative_deviation"] <= 1e-9
    assert report["bound_check"]["min_excess_ratio"] >= -1e-9
    assert report["minimization"]["probe_signs_ok"] is True
    mismatch = report["theorem_coefficients"]["mismatches"][0]
    assert {"n", "m", "target", "engine", "stated"} <= set(mismatch)


def test_output_file_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ZONALVAR_OUTPUT_DIR", str(tmp_path))
    code, out, err = run(
        capsys,
        ["compute", "--n", "3", "--m", "1", "--rho", "0.5", "-o", "out/record.json"],
    )
    assert code == 0
    assert out == ""
    target = tmp_path / "out" / "record.json"
    assert target.exists()
    record = json.loads(target.read_text())
    assert record["n"] == 3
    assert str(target) in err


def test_absolute_output_ignores_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ZONALVAR_OUTPUT_DIR", str(tmp_path / "unused"))
    target = tmp_path / "direct.json"
    code, _, _ = run(
        capsys,
        ["compute", "--n", "2", "--m", "1", "--rho", "0.4", "-o", str(target)],
    )
    assert code == 0
    assert target.exists()
    assert not (tmp_path / "unused").exists()


def test_unknown_command_is_usage_error(capsys):
    code, _, err = run(capsys, ["frobnicate"])
    assert code == 64
