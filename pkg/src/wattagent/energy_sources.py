"""Energy-per-token profiles: measured, price-proxied, or reported."""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .quantities import (
    Interval,
    check_finite,
    check_nonneg,
    check_positive,
    convert_per_energy,
    interval_scale,
)

MEASURED = "measured"
COST_PROXY = "cost-proxy"
REPORTED = "reported"
SOURCES = (MEASURED, COST_PROXY, REPORTED)

TRACE_HEADER = ["timestamp_s", "power_w"]
SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class ModelEnergyProfile:
    name: str
    energy_per_token: Interval
    source: str
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "energy_per_token", Interval.coerce(self.energy_per_token))
        if self.source not in SOURCES:
            raise ValidationError(f"profile source must be one of {SOURCES}, got {self.source!r}")
        if not self.name:
            raise ValidationError("profile name must not be empty")

    def to_dict(self):
        return {
            "name": self.name,
            "energy_per_token": {**self.energy_per_token.to_dict(), "unit": "Wh/token"},
            "source": self.source,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data, path="profile"):
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: expected an object")
        allowed = {"name", "energy_per_token", "source", "provenance"}
        for key in data:
            if key not in allowed:
                raise ValidationError(f"{path}.{key}: unknown field")
        for key in ("name", "energy_per_token"):
            if key not in data:
                raise ValidationError(f"{path}.{key}: missing field")
        ept = data["energy_per_token"]
        if not isinstance(ept, dict):
            raise ValidationError(f"{path}.energy_per_token: expected an object")
        for key in ept:
            if key not in {"lo", "hi", "unit", "source"}:
                raise ValidationError(f"{path}.energy_per_token.{key}: unknown field")
        if ept.get("unit", "Wh/token") != "Wh/token":
            raise ValidationError(
                f"{path}.energy_per_token.unit: only 'Wh/token' is accepted, got {ept['unit']!r}"
            )
        # the source may sit at either level
        source = data.get("source", ept.get("source"))
        if source is None:
            raise ValidationError(f"{path}.source: missing field")
        if "source" in ept and ept["source"] != source:
            raise ValidationError(f"{path}.energy_per_token.source: disagrees with {path}.source")
        try:
            interval = Interval(ept["lo"], ept["hi"])
        except KeyError as exc:
            raise ValidationError(f"{path}.energy_per_token.{exc.args[0]}: missing field") from None
        except ValidationError as exc:
            raise ValidationError(f"{path}.energy_per_token: {exc}") from None
        return cls(str(data["name"]), interval, source, str(data.get("provenance", "")))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")), str(path))


def reported_profile(name, energy_per_token, provenance) -> ModelEnergyProfile:
    """Profile for a per-token figure taken from the literature."""
    return ModelEnergyProfile(name, Interval.coerce(energy_per_token), REPORTED, provenance)


@dataclass(frozen=True, eq=False)
class PowerTrace:
    timestamps: np.ndarray
    power_w: np.ndarray
    device: str = ""
    run: str = ""

    def __post_init__(self):
        t = np.asarray(self.timestamps, dtype=float)
        p = np.asarray(self.power_w, dtype=float)
        if t.ndim != 1 or t.shape != p.shape:
            raise ValidationError("timestamps and power must be 1-d arrays of equal length")
        if t.size < 2:
            raise ValidationError("a power trace needs at least 2 samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(p))):
            raise ValidationError("power trace contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("trace timestamps must be strictly increasing")
        if np.any(p < 0):
            raise ValidationError("trace power must be >= 0")
        t.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "power_w", p)

    @property
    def duration_s(self) -> float:
        return float(self.timestamps[-1] - self.timestamps[0])

    @classmethod
    def from_csv(cls, path, device="", run=""):
        path = Path(path)
        return cls.parse_csv(path.read_text(encoding="utf-8"), device=device,
                             run=run or path.stem, source=str(path))

    @classmethod
    def parse_csv(cls, text, device="", run="", source="trace"):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != TRACE_HEADER:
            raise ValidationError(f"{source}: header must be {','.join(TRACE_HEADER)}")
        t, p = [], []
        for lineno, row in enumerate(rows[1:], 2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise ValidationError(f"{source}:{lineno}: expected 2 columns")
            try:
                t.append(float(row[0]))
                p.append(float(row[1]))
            except ValueError:
                raise ValidationError(f"{source}:{lineno}: not a number") from None
        return cls(np.array(t), np.array(p), device=device, run=run)

    def to_csv(self) -> str:
        lines = [",".join(TRACE_HEADER)]
        lines += [f"{t!r},{p!r}" for t, p in zip(self.timestamps.tolist(), self.power_w.tolist())]
        return "\n".join(lines) + "\n"


def integrate_power_trace(trace: PowerTrace) -> float:
    """Energy in Wh under the trace, by the trapezoidal rule."""
    t, p = trace.timestamps, trace.power_w
    joules = float(np.sum((p[1:] + p[:-1]) * np.diff(t)) / 2.0)
    return max(joules, 0.0) / SECONDS_PER_HOUR


def measured_energy_per_token(traces, total_tokens, baseline: PowerTrace | None = None,
                              name="measured-model", provenance="") -> ModelEnergyProfile:
    """Per-token energy from one or more measured runs.

    The baseline's mean power is scaled to the combined duration of the
    measured traces and subtracted.  A negative net energy is clamped to 0
    with a warning.
    """
    traces = list(traces)
    if not traces:
        raise ValidationError("at least one power trace is required")
    if isinstance(total_tokens, bool) or int(total_tokens) != total_tokens or total_tokens <= 0:
        raise ValidationError(f"total_tokens must be a positive integer, got {total_tokens!r}")
    measured = sum(integrate_power_trace(tr) for tr in traces)
    idle = 0.0
    if baseline is not None:
        duration = sum(tr.duration_s for tr in traces)
        idle = integrate_power_trace(baseline) * (duration / baseline.duration_s)
    net = measured - idle
    if net < 0:
        warnings.warn(
            f"baseline energy {idle:.6g} Wh exceeds measured {measured:.6g} Wh; clamping to 0",
            RuntimeWarning,
            stacklevel=2,
        )
        net = 0.0
    e = net / total_tokens
    if not provenance:
        provenance = (
            f"measured: {len(traces)} trace(s), {measured!r} Wh"
            + (f" minus baseline {idle!r} Wh" if baseline is not None else "")
            + f" over {int(total_tokens)} tokens"
        )
    return ModelEnergyProfile(name, Interval.point(e), MEASURED, provenance)


@dataclass(frozen=True)
class CostProxyInputs:
    """Price inputs for the cost-proxy estimate.

    ``energy_price`` is in $/Wh; use :meth:`from_kwh_price` for $/kWh figures.
    ``energy_cost_share`` may be a scalar or an interval.
    """

    token_price: float
    energy_price: float
    energy_cost_share: Interval = field(default_factory=lambda: Interval.point(0.5))

    def __post_init__(self):
        check_nonneg(self.token_price, "token_price")
        check_finite(self.energy_price, "energy_price")
        if self.energy_price <= 0:
            raise ValidationError(f"energy_price must be > 0, got {self.energy_price!r}")
        share = Interval.coerce(self.energy_cost_share)
        if share.lo <= 0 or share.hi > 1:
            raise ValidationError(f"energy_cost_share must lie in (0, 1], got {share}")
        object.__setattr__(self, "energy_cost_share", share)

    @classmethod
    def from_kwh_price(cls, token_price, energy_price_per_kwh, energy_cost_share=0.5):
        check_positive(energy_price_per_kwh, "energy_price")
        return cls(token_price, convert_per_energy(energy_price_per_kwh, "kWh", "Wh"),
                   energy_cost_share)


def cost_proxy_energy_per_token(inputs: CostProxyInputs, name="proxied-model") -> ModelEnergyProfile:
    """Per-token energy implied by token price: share * price_per_token / price_per_Wh."""
    wh_per_token = inputs.token_price / inputs.energy_price
    e = interval_scale(inputs.energy_cost_share, wh_per_token)
    share = inputs.energy_cost_share
    share_txt = f"{share.lo!r}" if share.is_point else f"[{share.lo!r}, {share.hi!r}]"
    provenance = (
        f"cost-proxy: token_price={inputs.token_price!r} $/token, "
        f"energy_price={inputs.energy_price!r} $/Wh, energy_cost_share={share_txt}"
    )
    return ModelEnergyProfile(name, e, COST_PROXY, provenance)
