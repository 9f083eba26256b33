"""Value an insurance contract whose strike time has an exponential hazard.

The contract pays L when an exponentially distributed strike time T
arrives; the present value of the payout is E[exp(-r T)] * L.  For the
exponential model the expectation is exactly h / (h + r), which makes
the Monte-Carlo estimator easy to check: it must sit within a few
standard errors of the analytic value at any sample size.
"""

from __future__ import annotations

from longplan import (
    HazardModel,
    analytic_discount_factor,
    estimate_discount_factor,
    expected_strike_year,
    spread_linear_coefficient,
    spread_variance_coefficient,
    survival_prob,
)

model = HazardModel(h=0.06, r=0.03, L=30.0, s=0.5, horizon_M=30)

print(f"analytic discount factor h/(h+r) = {analytic_discount_factor(model):.10f}")
print("\n   draws     estimate    std error    |error|/SE")
for n in (100, 1_000, 10_000, 100_000):
    est = estimate_discount_factor(model, n_draws=n, seed=0)
    gap = abs(est.value - analytic_discount_factor(model))
    print(f"  {n:7d}   {est.value:.8f}   {est.std_error:.8f}   {gap / est.std_error:9.3f}")

print(f"\nexpected strike year (ceil of mean simulated strike time): "
      f"{expected_strike_year(model, n_draws=10_000, seed=0)}")
print("survival curve P(T > t) = exp(-h t):")
for t in (5, 10, 17, 30):
    print(f"  t={t:2d}: {survival_prob(model, t):.5f}")

print("\nspread contract per unit held (payout L at strike, premium s while alive):")
print(f"  expected discounted value : {spread_linear_coefficient(model):+.6f}")
print(f"  variance coefficient      : {spread_variance_coefficient(model):.6f}")
