"""Trace the long-only efficient frontier and compare it to the closed form.

For every target mean between the long-only minimum-variance return and the
best single-asset mean, the constrained variance is found by quadratic
programming; the unconstrained variance comes from the closed-form frontier
equation.  The gap between the two curves is the variance premium charged
by the no-short-sale rule.  Also writes an SVG plot next to this script.
"""

from __future__ import annotations

import os

import numpy as np

from longplan import (
    estimate_stats,
    frontier_constants,
    load_returns,
    trace_frontier,
    unconstrained_frontier_variance,
)
from longplan.report import SAMPLE_RETURNS, render_frontier_svg

R_F = 0.025
N_POINTS = 12

stats = estimate_stats(load_returns(SAMPLE_RETURNS, periods_per_year=12))
constants = frontier_constants(stats, R_F)
frontier = trace_frontier(stats, N_POINTS)

print("        mu   stdev(long-only)   stdev(unconstrained)   premium")
for point in frontier.points:
    mu = point.mu_target
    unc_var = unconstrained_frontier_variance(constants, mu)
    sd_con, sd_unc = np.sqrt(point.variance), np.sqrt(unc_var)
    print(f"  {mu:8.4f}   {sd_con:16.6f}   {sd_unc:20.6f}   {sd_con - sd_unc:7.4f}")

out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "frontier.svg")
render_frontier_svg(frontier, constants, out)
print(f"\nwrote {out}")
