"""Pick the best risky fund from historical returns, with and without shorts.

Loads the packaged monthly return sample, annualizes the moment estimates,
and compares the closed-form tangency portfolio (which may short) against
the long-only maximum-Sharpe fund computed by quadratic programming.
"""

from __future__ import annotations

import numpy as np

from longplan import (
    estimate_stats,
    frontier_constants,
    load_returns,
    max_sharpe_long_only,
    tangency_expected_return,
    tangency_portfolio,
)
from longplan.report import SAMPLE_RETURNS

R_F = 0.025

returns = load_returns(SAMPLE_RETURNS, periods_per_year=12)
stats = estimate_stats(returns)

print(f"{returns.data.shape[0]} monthly observations on "
      f"{len(stats.asset_ids)} assets\n")
print("annualized moments:")
for name, mu, var in zip(stats.asset_ids, stats.mu, np.diag(stats.sigma)):
    print(f"  {name}: mean {mu:8.4f}   stdev {np.sqrt(var):.4f}")

constants = frontier_constants(stats, R_F)
print(f"\nfrontier constants: A={constants.A:.4f} B={constants.B:.4f} "
      f"C={constants.C:.4f} D={constants.D:.4f}")
print(f"tangency expected return (closed form): "
      f"{tangency_expected_return(constants):.6f}")

unconstrained = tangency_portfolio(stats, R_F)
print("\nunconstrained tangency weights (shorting allowed):")
for name, w in zip(stats.asset_ids, unconstrained.weights):
    print(f"  {name}: {w:9.4f}")
print(f"  mean {unconstrained.mean:.4f}  stdev {np.sqrt(unconstrained.variance):.4f}  "
      f"sharpe {unconstrained.sharpe:.4f}")

fund = max_sharpe_long_only(stats, R_F)
print("\nlong-only maximum-Sharpe fund:")
for name, w in zip(stats.asset_ids, fund.weights):
    if w > 0:
        print(f"  {name}: {w:9.4f}")
print(f"  mean {fund.mean:.4f}  stdev {np.sqrt(fund.variance):.4f}  "
      f"sharpe {fund.sharpe:.4f}")

print(f"\nSharpe cost of the no-short-sale rule: "
      f"{unconstrained.sharpe - fund.sharpe:.4f}")
