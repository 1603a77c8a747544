"""Energy to CO2e: grid-mix intensities, task emissions and equivalences."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import UnknownRegionError, ValidationError
from .pipeline import TaskProfile
from .quantities import Interval, check_positive, convert_per_energy, interval_scale

MIX_HEADER = ["region", "intensity_g_per_kwh", "source"]

# typical passenger vehicle, US EPA
CAR_G_PER_KM = 248.55

DEFAULT_DEVICE_POWER_W = 300.0
DEFAULT_PUE = 1.67


@dataclass(frozen=True)
class MixEntry:
    intensity_g_per_wh: float
    source: str = ""


class EnergyMixTable:
    """Grid carbon intensities keyed by region code, stored in g CO2e per Wh."""

    def __init__(self, entries=None):
        self._entries: dict[str, MixEntry] = {}
        for region, entry in (entries or {}).items():
            self.add(region, entry.intensity_g_per_wh, entry.source)

    def add(self, region: str, intensity_g_per_wh: float, source: str = ""):
        if region in self._entries:
            raise ValidationError(f"duplicate region {region!r} in mix table")
        check_positive(intensity_g_per_wh, f"intensity for {region}")
        self._entries[region] = MixEntry(float(intensity_g_per_wh), source)

    @property
    def regions(self):
        return list(self._entries)

    def __contains__(self, region):
        return region in self._entries

    def __len__(self):
        return len(self._entries)

    def entry(self, region) -> MixEntry:
        try:
            return self._entries[region]
        except KeyError:
            raise UnknownRegionError(region, self._entries) from None

    def merged(self, other: EnergyMixTable) -> EnergyMixTable:
        """A new table with ``other``'s entries added; clashing regions are an error."""
        table = EnergyMixTable({r: self.entry(r) for r in self.regions})
        for r in other.regions:
            e = other.entry(r)
            table.add(r, e.intensity_g_per_wh, e.source)
        return table

    @classmethod
    def parse_csv(cls, text, source="mix table") -> EnergyMixTable:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != MIX_HEADER:
            raise ValidationError(f"{source}: header must be {','.join(MIX_HEADER)}")
        table = cls()
        for lineno, row in enumerate(reader, 2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ValidationError(f"{source}:{lineno}: expected 3 columns")
            region, g_per_kwh, note = (c.strip() for c in row)
            try:
                value = float(g_per_kwh)
            except ValueError:
                raise ValidationError(f"{source}:{lineno}: intensity is not a number") from None
            table.add(region, convert_per_energy(value, "kWh", "Wh"), note)
        return table

    @classmethod
    def from_csv(cls, path) -> EnergyMixTable:
        return cls.parse_csv(Path(path).read_text(encoding="utf-8"), str(path))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(MIX_HEADER)
        for region, e in self._entries.items():
            w.writerow([region, repr(convert_per_energy(e.intensity_g_per_wh, "Wh", "kWh")), e.source])
        return buf.getvalue()


def lookup_intensity(table: EnergyMixTable, region: str) -> float:
    """Intensity in g CO2e per Wh for ``region``."""
    return table.entry(region).intensity_g_per_wh


@dataclass(frozen=True)
class EmissionsResult:
    grams: Interval
    region: str
    mean_actions: float
    intensity_g_per_wh: float
    action_energy_wh: Interval

    def to_dict(self):
        return {
            "grams": self.grams.to_dict(),
            "region": self.region,
            "mean_actions": self.mean_actions,
            "intensity_g_per_wh": self.intensity_g_per_wh,
            "action_energy_wh": self.action_energy_wh.to_dict(),
        }

    @classmethod
    def from_dict(cls, data):
        expected = {"grams", "region", "mean_actions", "intensity_g_per_wh", "action_energy_wh"}
        if not isinstance(data, dict) or set(data) != expected:
            raise ValidationError(f"emissions result must have exactly the fields {sorted(expected)}")
        result = task_emissions(TaskProfile(data["mean_actions"]), data["intensity_g_per_wh"],
                                Interval.coerce(data["action_energy_wh"]), region=data["region"])
        if result.grams != Interval.coerce(data["grams"]):
            raise ValidationError("grams do not match mean_actions * intensity * action_energy")
        return result

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def task_emissions(profile: TaskProfile, intensity: float, action_energy: Interval,
                   region: str = "") -> EmissionsResult:
    """Grams CO2e per task: mean actions x intensity (g/Wh) x energy per action (Wh)."""
    intensity = check_positive(intensity, "intensity")
    action_energy = Interval.coerce(action_energy)
    factor = profile.mean_actions_per_task * intensity
    return EmissionsResult(
        grams=interval_scale(action_energy, factor),
        region=region,
        mean_actions=profile.mean_actions_per_task,
        intensity_g_per_wh=intensity,
        action_energy_wh=action_energy,
    )


def car_distance_equivalent(grams: Interval, grams_per_km: float = CAR_G_PER_KM) -> Interval:
    """Kilometres driven by an average car that emit the same CO2."""
    grams_per_km = check_positive(grams_per_km, "grams per km")
    grams = Interval.coerce(grams)
    return Interval(grams.lo / grams_per_km, grams.hi / grams_per_km)


@dataclass(frozen=True)
class TrainingRunSpec:
    duration_hours: float
    device_count: int
    device_power_w: float = DEFAULT_DEVICE_POWER_W
    utilization: float = 1.0
    pue: float = DEFAULT_PUE

    def __post_init__(self):
        check_positive(self.duration_hours, "duration_hours")
        if isinstance(self.device_count, bool) or not isinstance(self.device_count, int) \
                or self.device_count < 1:
            raise ValidationError("device_count must be a positive integer")
        check_positive(self.device_power_w, "device_power_w")
        check_positive(self.utilization, "utilization")
        if self.utilization > 1:
            raise ValidationError("utilization must lie in (0, 1]")
        if check_positive(self.pue, "pue") < 1:
            raise ValidationError("pue must be >= 1")


def training_footprint(spec: TrainingRunSpec, intensity: float) -> tuple[float, float]:
    """Return ``(energy_wh, grams_co2e)`` for a training run."""
    intensity = check_positive(intensity, "intensity")
    energy = (spec.duration_hours * spec.device_count * spec.device_power_w
              * spec.utilization * spec.pue)
    return energy, energy * intensity


def _round_half_up(value: float, places: int) -> Decimal:
    quantum = Decimal(1).scaleb(-places)
    return Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)


def format_grams(grams: float) -> str:
    return f"{_round_half_up(grams, 2)} g"


def format_distance(km: float) -> str:
    """Whole kilometres from 1 km upwards, whole metres below."""
    if _round_half_up(km * 1000, 0) >= 1000:
        return f"{_round_half_up(km, 0)} km"
    return f"{_round_half_up(km * 1000, 0)} m"
