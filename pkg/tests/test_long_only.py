"""Tests for long-only Sharpe maximization and frontier tracing."""

from __future__ import annotations

import numpy as np
import pytest

from longplan.market import AssetStats
from longplan.closed_form import frontier_constants, tangency_portfolio
from longplan.long_only import (
    InfeasibleTargetError,
    NoExcessReturnError,
    long_only_gmv,
    max_sharpe_long_only,
    min_variance_at_return,
    trace_frontier,
)
from oracles import simplex_grid_best_sharpe


def _stats(mu, sigma):
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    return AssetStats(asset_ids=[f"A{i}" for i in range(mu.size)],
                      mu=mu, sigma=sigma)


DIAG = _stats([0.10, 0.05], np.diag([0.04, 0.09]))


def test_interior_optimum_matches_unconstrained_tangency():
    fund = max_sharpe_long_only(DIAG, 0.02)
    np.testing.assert_allclose(fund.weights, [6 / 7, 1 / 7], atol=1e-8)
    assert fund.sharpe == pytest.approx(np.sqrt(0.17), abs=1e-8)


def test_corner_optimum_when_second_asset_drags():
    stats = _stats([0.10, 0.01], np.diag([0.04, 0.09]))
    fund = max_sharpe_long_only(stats, 0.02)
    np.testing.assert_allclose(fund.weights, [1.0, 0.0], atol=1e-9)
    assert fund.sharpe == pytest.approx(0.40, abs=1e-9)


def test_identical_assets_get_equal_weights():
    sigma = np.full((3, 3), 0.02) + np.diag([0.03, 0.03, 0.03])
    stats = _stats([0.08, 0.08, 0.08], sigma)
    fund = max_sharpe_long_only(stats, 0.02)
    np.testing.assert_allclose(fund.weights, [1 / 3] * 3, atol=1e-8)


def test_no_asset_beats_riskless_rate():
    stats = _stats([0.02, 0.01], np.diag([0.04, 0.09]))
    with pytest.raises(NoExcessReturnError):
        max_sharpe_long_only(stats, 0.05)


def test_weights_clamped_and_renormalized():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((8, 5))
    stats = _stats(rng.uniform(0.02, 0.12, 5), g.T @ g / 8 + 0.02 * np.eye(5))
    fund = max_sharpe_long_only(stats, 0.01)
    assert (fund.weights >= 0.0).all()           # never dust below zero
    assert fund.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert ((fund.weights == 0.0) | (fund.weights > 1e-9)).all()


def test_sharpe_never_exceeds_unconstrained():
    rng = np.random.default_rng(19)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        g = rng.standard_normal((n + 2, n))
        sigma = g.T @ g / (n + 2) + 0.03 * np.eye(n)
        stats = _stats(rng.uniform(0.02, 0.15, n), sigma)
        k = frontier_constants(stats, 0.01)
        fund = max_sharpe_long_only(stats, 0.01)
        assert fund.sharpe <= np.sqrt(k.H) + 1e-8
        tang = tangency_portfolio(stats, 0.01)
        if (tang.weights >= 0).all():
            np.testing.assert_allclose(fund.weights, tang.weights, atol=1e-6)


def test_grid_search_oracle_three_assets():
    rng = np.random.default_rng(29)
    for _ in range(10):
        g = rng.standard_normal((5, 3))
        sigma = g.T @ g / 5 + 0.03 * np.eye(3)
        stats = _stats(rng.uniform(0.03, 0.18, 3), sigma)
        fund = max_sharpe_long_only(stats, 0.01)
        grid = simplex_grid_best_sharpe(stats.mu, stats.sigma, 0.01)
        assert fund.sharpe >= grid - 5e-4


def test_support_restriction_is_subuniverse_tangency():
    rng = np.random.default_rng(37)
    for _ in range(10):
        g = rng.standard_normal((7, 4))
        sigma = g.T @ g / 7 + 0.03 * np.eye(4)
        stats = _stats(rng.uniform(0.02, 0.15, 4), sigma)
        fund = max_sharpe_long_only(stats, 0.01)
        support = fund.weights > 0
        if support.sum() < 2:
            continue
        sub = AssetStats(
            asset_ids=[a for a, s in zip(stats.asset_ids, support) if s],
            mu=stats.mu[support],
            sigma=stats.sigma[np.ix_(support, support)])
        sub_tangency = tangency_portfolio(sub, 0.01)
        np.testing.assert_allclose(fund.weights[support],
                                   sub_tangency.weights, atol=1e-6)


def test_min_variance_forced_corner_at_max_mean():
    point = min_variance_at_return(DIAG, 0.10)
    np.testing.assert_allclose(point.weights, [1.0, 0.0], atol=1e-9)
    assert point.variance == pytest.approx(0.04, abs=1e-9)


def test_min_variance_below_gmv_returns_gmv_point():
    # the mean constraint is one-sided (achieved mean >= target), so any
    # target below the long-only GMV mean yields the GMV portfolio
    gmv = long_only_gmv(DIAG)
    np.testing.assert_allclose(gmv.weights, [0.692308, 0.307692], atol=1e-6)
    assert gmv.variance == pytest.approx(0.027692, abs=1e-6)
    for target in (0.06, 0.075):
        point = min_variance_at_return(DIAG, target)
        np.testing.assert_allclose(point.weights, gmv.weights, atol=1e-8)
        assert point.variance == pytest.approx(gmv.variance, abs=1e-10)


def test_min_variance_above_max_mean_infeasible():
    with pytest.raises(InfeasibleTargetError):
        min_variance_at_return(DIAG, 0.11)


def test_trace_frontier_grid_and_monotonicity():
    frontier = trace_frontier(DIAG, 3)
    targets = [p.mu_target for p in frontier.points]
    np.testing.assert_allclose(targets, [0.084615, 0.092308, 0.10], atol=1e-6)
    variances = [p.variance for p in frontier.points]
    assert variances == sorted(variances)
    assert frontier.gmv_point.variance <= min(variances) + 1e-9


def test_trace_frontier_two_points_endpoints():
    frontier = trace_frontier(DIAG, 2)
    assert len(frontier.points) == 2
    assert frontier.points[0].mu_target == pytest.approx(0.0846153846, abs=1e-9)
    assert frontier.points[-1].mu_target == pytest.approx(0.10, abs=1e-12)


def test_trace_frontier_single_asset_degenerate():
    stats = _stats([0.07], [[0.05]])
    frontier = trace_frontier(stats, 4)
    assert len(frontier.points) == 1
    np.testing.assert_allclose(frontier.points[0].weights, [1.0])


def test_frontier_point_mean_attained():
    rng = np.random.default_rng(51)
    g = rng.standard_normal((6, 4))
    stats = _stats(rng.uniform(0.02, 0.12, 4), g.T @ g / 6 + 0.03 * np.eye(4))
    for point in trace_frontier(stats, 8).points:
        achieved = float(stats.mu @ point.weights)
        assert achieved >= point.mu_target - 1e-9
        assert point.weights.min() >= -1e-9
        assert point.weights.sum() == pytest.approx(1.0, abs=1e-9)
