# %% [markdown]
# # How often does a heralded run succeed?
#
# A run counts only if every photon survives the fibre and optics, is
# collected, passes the polarization filter, is detected, and the final
# two-photon projection succeeds. With realistic ion-trap numbers this is rare.

# %%
from faradayct.resources import (
    expected_event_period,
    loss_preset,
    monte_carlo_yield,
    success_probability,
    success_probability_exact,
)

model = loss_preset()
print(model)
print("P (exact)   =", success_probability_exact(model))
print(f"P           = {success_probability(model):.4g}")
print(f"period      = {expected_event_period(model):.3f} s at {model.source_rate:.0f} attempts/s")

# %% [markdown]
# ## Two photons must survive

# %%
two = model.with_paths(2)
print(f"P           = {success_probability(two):.4g}")
print(f"period      = {expected_event_period(two) / 60:.1f} min")

# %% [markdown]
# ## Monte Carlo cross-check

# %%
y = monte_carlo_yield(model, trials=10_000_000, seed=0)
p = success_probability(model)
print(f"{y.successes} / {y.trials} successes, rate {y.rate:.4g} vs {p:.4g} "
      f"(sigma {y.sigma(p):.2g}, within 3 sigma: {y.within(p)})")
