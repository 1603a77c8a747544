"""Training-run footprint: hours x devices x power x utilization x PUE x grid intensity."""

# %%
from wattagent import presets
from wattagent.emissions import TrainingRunSpec, lookup_intensity, training_footprint

mix = presets.preset_mix_table()
spec = TrainingRunSpec(duration_hours=79, device_count=64, device_power_w=300,
                       utilization=0.627, pue=1.67)

for region in mix.regions:
    wh, g = training_footprint(spec, lookup_intensity(mix, region))
    print(f"{region}: {wh / 1e6:.3f} MWh, {g / 1e6:.3f} t CO2e")

# %% [markdown]
# The device power and PUE are assumptions: the often-quoted 0.754 t for a
# comparable run does not state them.  With 300 W per device and a PUE of
# 1.67 the US figure lands at about 0.719 t, within 5% of that anchor.

# %%
for pue in (1.0, 1.2, 1.67, 2.0):
    _, g = training_footprint(TrainingRunSpec(79, 64, 300, 0.627, pue), 0.453)
    print(f"PUE {pue:.2f}: {g / 1e6:.3f} t")
