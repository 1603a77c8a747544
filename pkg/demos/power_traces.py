"""Energy per token from sampled GPU power, with an idle baseline removed."""

# %%
import numpy as np

from wattagent.energy_sources import PowerTrace, integrate_power_trace, measured_energy_per_token

rng = np.random.default_rng(0)
t = np.arange(0, 600.0, 0.5)
busy = 220 + 60 * np.sin(t / 15) + rng.normal(0, 5, t.size)
run = PowerTrace(t, np.clip(busy, 0, None), device="gpu0", run="batch-1")
idle = PowerTrace(np.arange(0, 120.0, 1.0), np.full(120, 55.0), device="gpu0", run="idle")

print(f"run:  {run.duration_s:.0f} s, {integrate_power_trace(run):.3f} Wh")
print(f"idle: {idle.duration_s:.0f} s, {integrate_power_trace(idle):.3f} Wh")

# %% [markdown]
# The idle trace is shorter than the run.  Its energy is scaled by the
# ratio of durations before subtraction, i.e. its mean power is assumed to
# hold for the whole run.

# %%
tokens = 2_400_000
gross = measured_energy_per_token([run], tokens, name="my-model")
net = measured_energy_per_token([run], tokens, baseline=idle, name="my-model")
print(f"gross {gross.energy_per_token.lo:.3e} Wh/token")
print(f"net   {net.energy_per_token.lo:.3e} Wh/token")
print(net.provenance)

# %%
# traces round-trip through the CSV format the CLI reads
print(run.to_csv().splitlines()[:3])
