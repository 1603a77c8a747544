from pathlib import Path

import pytest

from wattagent import presets
from wattagent.pipeline import action_energy

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def mindact():
    return presets.preset_pipeline(presets.MINDACT)


@pytest.fixture
def laser():
    return presets.preset_pipeline(presets.LASER)


@pytest.fixture
def mindact_stats():
    return presets.preset_stats(presets.MINDACT)


@pytest.fixture
def laser_stats():
    return presets.preset_stats(presets.LASER)


@pytest.fixture
def mindact_est(mindact, mindact_stats):
    return action_energy(mindact, mindact_stats)


@pytest.fixture
def laser_est(laser, laser_stats):
    return action_energy(laser, laser_stats)


@pytest.fixture
def comparison(mindact, laser, mindact_stats, laser_stats, mindact_est, laser_est):
    from wattagent.emissions import CAR_G_PER_KM, task_emissions
    from wattagent.reporting import compare_agents, dedicated_metrics

    us = presets.preset_mix_table().entry("US").intensity_g_per_wh
    entries = [
        (est.pipeline, est, task_emissions(presets.MIND2WEB_TASK, us, est.total, "US"))
        for est in (mindact_est, laser_est)
    ]
    metrics = [dedicated_metrics(mindact, mindact_stats), dedicated_metrics(laser, laser_stats)]
    return compare_agents(entries, metrics, grams_per_km=CAR_G_PER_KM)
