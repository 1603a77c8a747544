"""Guessing the energy per token of a closed model from its price."""

# %%
from wattagent.energy_sources import CostProxyInputs, cost_proxy_energy_per_token
from wattagent.quantities import Interval

# 10 $ per million input tokens, electricity at 0.16 $/kWh, half the price spent on energy
base = CostProxyInputs.from_kwh_price(10e-6, 0.16, 0.5)
print(cost_proxy_energy_per_token(base, "GPT-4").energy_per_token, "Wh/token")

# %% [markdown]
# The share of the token price that pays for electricity is the weakest
# input.  Passing it as an interval propagates that uncertainty.

# %%
for share in (0.1, 0.3, 0.5, 0.7, 1.0):
    e = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, 0.16, share))
    print(f"share {share:.1f}: {e.energy_per_token.lo:.5f} Wh/token")

band = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, 0.16, Interval(0.3, 0.7)))
print("share in [0.3, 0.7]:", band.energy_per_token)

# %%
# cheaper electricity means more energy for the same spend
for price in (0.08, 0.16, 0.32):
    e = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, price))
    print(f"{price:.2f} $/kWh -> {e.energy_per_token.lo:.5f} Wh/token")
