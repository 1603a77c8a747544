"""Bundled presets: the two reference agents, their corpus statistics, the mix table.

The data directory defaults to the ``data`` folder shipped with the package
and can be redirected with the ``WATTAGENT_DATA_DIR`` environment variable.
"""

from __future__ import annotations

import os
from pathlib import Path

from .emissions import CAR_G_PER_KM, EnergyMixTable
from .pipeline import AgentPipeline, TaskProfile, load_pipeline
from .tokenization.corpus import CorpusStats

ENV_VAR = "WATTAGENT_DATA_DIR"

MINDACT = "mindact-paper"
LASER = "laser-paper"

# corpus statistics that go with each bundled pipeline
PRESET_STATS = {MINDACT: "mind2web-deberta-v3", LASER: "mind2web-gpt-4"}

# Mind2Web: 7.3 actions per task on average; LASER stops after 15 actions
MIND2WEB_TASK = TaskProfile(7.3)
LASER_TASK = TaskProfile(7.3, max_actions=15)
US_INTENSITY_REGION = "US"

__all__ = [
    "CAR_G_PER_KM", "LASER", "LASER_TASK", "MIND2WEB_TASK", "MINDACT", "data_dir",
    "data_path", "preset_mix_table", "preset_pipeline", "preset_stats", "resolve_file",
]


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def data_path(*parts) -> Path:
    return data_dir().joinpath(*parts)


def resolve_file(name, kind: str) -> Path:
    """Return ``name`` if it is an existing path, else look it up under ``data/<kind>``.

    ``mindact-paper``, ``mindact-paper.json`` and a full path are all accepted.
    """
    path = Path(name)
    if path.exists():
        return path
    for suffix in ("", ".json", ".csv"):
        candidate = data_path(kind, path.name + suffix)
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"no such file or bundled {kind} preset: {name}")


def preset_pipeline(name: str = MINDACT) -> AgentPipeline:
    return load_pipeline(resolve_file(name, "presets"))


def preset_stats(name: str) -> CorpusStats:
    """Bundled corpus statistics, by stats name or by pipeline preset name."""
    return CorpusStats.load(resolve_file(PRESET_STATS.get(name, name), "stats"))


def preset_mix_table() -> EnergyMixTable:
    return EnergyMixTable.from_csv(data_path("mix", "default-mix.csv"))
