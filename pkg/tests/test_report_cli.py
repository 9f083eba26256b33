"""Tests for config parsing, pipeline artifacts, SVG output and the CLI."""

from __future__ import annotations

import csv
import math
import os

import numpy as np
import pytest

from longplan.cli import main
from longplan.lifecycle import DecisionVector, RiskyAssetSummary, \
    implied_consumption
from longplan.long_only import max_sharpe_long_only, trace_frontier
from longplan.closed_form import frontier_constants
from longplan.market import estimate_stats, load_returns
from longplan.report import (
    ALL_STEPS,
    SAMPLE_RETURNS,
    RunConfig,
    parse_config,
    read_plan_csv,
    render_frontier_svg,
    run_pipeline,
)

FAST_CONFIG = """
# shrunk horizon so the full pipeline runs quickly
years_M = 8
house_years = 2
house_initial = 400
house_annual = 40
house_utility = 900
hazard_h = 0.3
frontier_points = 5
mc_draws = 2000
"""


def _write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_parse_config_round_trip(tmp_path):
    path = _write_config(tmp_path, """
    # comment line
    r_f = 0.02          # trailing comment
    frontier_points = 7
    mc_seed = 42
    emit_svg = yes
    years_M = 12
    r_borrow = 0.07
    hazard_h = 0.1
    hazard_s = 0.25
    """)
    config = parse_config(path)
    assert config.r_f == 0.02
    assert config.frontier_points == 7
    assert config.mc_seed == 42
    assert config.emit_svg is True
    assert config.lifecycle.years_M == 12
    assert config.lifecycle.r_borrow == 0.07
    assert config.lifecycle.hazard.h == 0.1
    assert config.lifecycle.hazard.s == 0.25
    # hazard inherits the lifecycle discount rate and horizon
    assert config.lifecycle.hazard.r == config.lifecycle.r
    assert config.lifecycle.hazard.horizon_M == 12


def test_parse_config_empty_file_gives_defaults(tmp_path):
    config = parse_config(_write_config(tmp_path, "\n# nothing here\n"))
    assert config == RunConfig()
    assert config.returns_path == SAMPLE_RETURNS


def test_parse_config_unknown_key(tmp_path):
    path = _write_config(tmp_path, "r_f = 0.02\nwibble = 3\n")
    with pytest.raises(ValueError, match="line 2.*wibble"):
        parse_config(path)


def test_parse_config_bad_value(tmp_path):
    path = _write_config(tmp_path, "frontier_points = many\n")
    with pytest.raises(ValueError, match="line 1.*many"):
        parse_config(path)


def test_parse_config_malformed_line(tmp_path):
    path = _write_config(tmp_path, "this is not a key value pair\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_config(path)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(frontier_points=1)
    with pytest.raises(ValueError):
        RunConfig(mc_draws=0)
    with pytest.raises(ValueError):
        RunConfig(returns_path="")
    with pytest.raises(ValueError):
        RunConfig(output_dir="")


# ---------------------------------------------------------------------------
# pipeline artifacts
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def pipeline_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("artifacts")
    config = RunConfig(output_dir=str(out), frontier_points=8,
                       mc_draws=4000, emit_svg=True)
    written = run_pipeline(config, ALL_STEPS)
    return out, config, written


def test_pipeline_writes_all_artifacts(pipeline_out):
    out, _, written = pipeline_out
    names = sorted(os.path.basename(p) for p in written)
    assert names == ["frontier.csv", "frontier.svg", "fund_weights.csv",
                     "insurance.txt", "plan.csv"]
    for path in written:
        assert os.path.exists(path)


def test_fund_weights_sum_and_omit_zeros(pipeline_out):
    out, config, _ = pipeline_out
    with open(out / "fund_weights.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    weights = [float(r["weight"]) for r in rows]
    assert sum(weights) == pytest.approx(1.0, abs=1e-9)
    assert all(w > 0 for w in weights)
    # zero-weight assets are omitted entirely
    stats = estimate_stats(load_returns(config.returns_path, 12))
    fund = max_sharpe_long_only(stats, config.r_f)
    assert len(rows) == int((fund.weights > 0).sum())
    assert len(rows) < len(stats.asset_ids)


def test_frontier_csv_domination(pipeline_out):
    out, _, _ = pipeline_out
    with open(out / "frontier.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 8
    for row in rows:
        con = float(row["variance_constrained"])
        unc = float(row["variance_unconstrained"])
        assert con - unc >= -1e-9


def test_insurance_txt_fields(pipeline_out):
    out, config, _ = pipeline_out
    text = (out / "insurance.txt").read_text()
    for key in ("estimate =", "std_error =", "n_draws = 4000", "seed = 0",
                "method = inverse-cdf standard normals", "analytic ="):
        assert key in text
    analytic = float(text.split("analytic = ")[1].splitlines()[0])
    assert analytic == pytest.approx(2.0 / 3.0, rel=1e-9)


def test_plan_round_trip_consumption(pipeline_out):
    out, config, _ = pipeline_out
    house_year, insurance, rows = read_plan_csv(str(out / "plan.csv"))
    lc = config.lifecycle
    stats = estimate_stats(load_returns(config.returns_path, 12))
    fund = max_sharpe_long_only(stats, config.r_f)
    asset = RiskyAssetSummary(r_stock=fund.mean, var_stock=fund.variance)
    house = np.zeros(lc.years_M)
    if house_year is not None:
        house[house_year - 1] = 1.0
    decision = DecisionVector(
        stock=np.array([r["stock"] for r in rows]),
        borrow=np.array([r["borrow"] for r in rows]),
        save=np.array([r["save"] for r in rows]),
        house=house, insurance=insurance)
    kstart = math.ceil(1.0 / lc.hazard.h)
    recomputed = implied_consumption(decision, lc, asset, kstart)
    reported = np.array([r["consumption"] for r in rows])
    np.testing.assert_allclose(recomputed, reported, atol=1e-6)


def test_plan_units_note(pipeline_out):
    out, _, _ = pipeline_out
    header = (out / "plan.csv").read_text().splitlines()[0]
    assert header.startswith("#") and "1,000" in header


def test_svg_deterministic_and_annotated(pipeline_out, tmp_path):
    out, config, _ = pipeline_out
    svg = (out / "frontier.svg").read_text()
    assert 'width="800" height="600"' in svg
    assert "margins" in svg.splitlines()[2]
    assert "long-only frontier" in svg and "unconstrained frontier" in svg
    assert svg.count("<polyline") == 2
    # byte-identical on re-render
    stats = estimate_stats(load_returns(config.returns_path, 12))
    constants = frontier_constants(stats, config.r_f)
    frontier = trace_frontier(stats, config.frontier_points)
    for name in ("a.svg", "b.svg"):
        render_frontier_svg(frontier, constants, str(tmp_path / name))
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_pipeline_cleans_partial_output(tmp_path):
    from longplan.lifecycle import LifecycleConfig, LifecycleInfeasibleError
    out = tmp_path / "broken"
    config = RunConfig(
        output_dir=str(out),
        lifecycle=LifecycleConfig(income_high=0.0, initial_saving=0.0))
    with pytest.raises(LifecycleInfeasibleError):
        run_pipeline(config, ("fund", "plan"))
    # the fund file was written before the plan failed, then removed
    assert os.path.isdir(out)
    assert os.listdir(out) == []


def test_pipeline_rejects_unknown_step():
    with pytest.raises(ValueError, match="unknown pipeline step"):
        run_pipeline(RunConfig(), ("fund", "retire"))


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_fund_only(tmp_path, capsys):
    out = tmp_path / "fund_out"
    assert main(["fund", "--out", str(out)]) == 0
    assert os.listdir(out) == ["fund_weights.csv"]
    assert "fund_weights.csv" in capsys.readouterr().out


def test_cli_all_with_config(tmp_path, capsys):
    config = _write_config(tmp_path, FAST_CONFIG)
    out = tmp_path / "all_out"
    code = main(["all", "--config", config, "--out", str(out), "--emit-svg"])
    assert code == 0
    assert sorted(os.listdir(out)) == ["frontier.csv", "frontier.svg",
                                       "fund_weights.csv", "insurance.txt",
                                       "plan.csv"]


def test_cli_seed_override(tmp_path):
    config = _write_config(tmp_path, FAST_CONFIG)
    out = tmp_path / "seeded"
    assert main(["insure", "--config", config, "--seed", "99",
                 "--out", str(out)]) == 0
    assert "seed = 99" in (out / "insurance.txt").read_text()


def test_cli_plan_subcommand(tmp_path):
    config = _write_config(tmp_path, FAST_CONFIG)
    out = tmp_path / "plan_out"
    assert main(["plan", "--config", config, "--out", str(out)]) == 0
    assert os.listdir(out) == ["plan.csv"]
    house_year, insurance, rows = read_plan_csv(str(out / "plan.csv"))
    assert len(rows) == 8


def test_cli_missing_returns_file(tmp_path, capsys):
    config = _write_config(tmp_path, "returns_path = /no/such/file.csv\n")
    assert main(["fund", "--config", config, "--out", str(tmp_path / "x")]) == 1
    err = capsys.readouterr().err
    assert "/no/such/file.csv" in err


def test_cli_bad_config_key_is_module_qualified(tmp_path, capsys):
    config = _write_config(tmp_path, "nonsense = 1\n")
    assert main(["fund", "--config", config]) == 1
    err = capsys.readouterr().err
    assert err.startswith("builtins.ValueError:")
    assert "nonsense" in err


def test_cli_degenerate_lifecycle_errors_cleanly(tmp_path, capsys):
    config = _write_config(tmp_path, "income_high = 0\ninitial_saving = 0\n")
    out = tmp_path / "bad_plan"
    assert main(["plan", "--config", config, "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("longplan.lifecycle.LifecycleInfeasibleError:")
    assert os.listdir(out) == []
