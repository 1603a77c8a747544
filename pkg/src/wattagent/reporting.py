"""Dedicated-metrics blocks, agent comparisons and report rendering.

Energy per action (Wh) is the primary reported quantity.  CO2 depends on
the grid mix, so it appears as a secondary column next to the energy.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .emissions import EmissionsResult, car_distance_equivalent, format_distance, format_grams
from .energy_sources import ModelEnergyProfile
from .errors import TransparencyError, ValidationError
from .pipeline import ActionEnergyEstimate, AgentPipeline, action_energy, stage_tokens_per_action
from .quantities import Interval, interval_sum

SCHEMA_VERSION = 1
FORMATS = ("json", "markdown", "csv")
WH_DECIMALS = 6


@dataclass(frozen=True)
class ModelMetrics:
    model: str
    tokens_per_action: Interval
    energy_per_token: Interval
    source: str
    provenance: str
    stages: tuple

    def to_dict(self):
        return {
            "model": self.model,
            "tokens_per_action": self.tokens_per_action.to_dict(),
            "energy_per_token": {**self.energy_per_token.to_dict(), "unit": "Wh/token"},
            "source": self.source,
            "provenance": self.provenance,
            "stages": list(self.stages),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["model"], Interval.coerce(d["tokens_per_action"]),
                   Interval.coerce(d["energy_per_token"]), d["source"], d["provenance"],
                   tuple(d["stages"]))


@dataclass(frozen=True)
class DedicatedMetricsBlock:
    """Tokens per action and energy per token for every model of one agent."""

    pipeline: str
    models: tuple
    total_tokens_per_action: Interval
    total_energy_per_action: Interval

    def to_dict(self):
        return {
            "pipeline": self.pipeline,
            "models": [m.to_dict() for m in self.models],
            "total_tokens_per_action": self.total_tokens_per_action.to_dict(),
            "total_energy_per_action_wh": self.total_energy_per_action.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["pipeline"], tuple(ModelMetrics.from_dict(m) for m in d["models"]),
                   Interval.coerce(d["total_tokens_per_action"]),
                   Interval.coerce(d["total_energy_per_action_wh"]))


def dedicated_metrics(pipeline: AgentPipeline, stats, profiles=None) -> DedicatedMetricsBlock:
    """Group the pipeline's stages by model and report tokens and energy per token.

    Raises :class:`TransparencyError` for any profile with empty provenance.
    """
    pipeline = pipeline.resolve(profiles)
    grouped: dict[str, list] = {}
    for stage in pipeline.stages:
        grouped.setdefault(stage.model.name, []).append(stage)
    models = []
    for name, stages in grouped.items():
        profile: ModelEnergyProfile = stages[0].model
        for s in stages[1:]:
            if s.model != profile:
                raise ValidationError(f"model {name!r} appears with two different profiles")
        if not profile.provenance.strip():
            raise TransparencyError(
                f"model {name!r} has no provenance; refusing to report an untraceable figure"
            )
        tokens = interval_sum(
            stage_tokens_per_action(s, stats, pipeline.corpus_counter_id) for s in stages
        )
        models.append(ModelMetrics(name, tokens, profile.energy_per_token, profile.source,
                                   profile.provenance, tuple(s.name for s in stages)))
    est = action_energy(pipeline, stats)
    return DedicatedMetricsBlock(
        pipeline.name,
        tuple(models),
        interval_sum(m.tokens_per_action for m in models),
        est.total,
    )


@dataclass(frozen=True)
class RatioRange:
    """Extreme-case ratio ``[a.lo / b.hi, a.hi / b.lo]``; ``inf`` marks a zero denominator."""

    lo: float
    hi: float

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.hi) or math.isinf(self.lo)

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def to_dict(self):
        return {
            "lo": None if math.isinf(self.lo) else self.lo,
            "hi": None if math.isinf(self.hi) else self.hi,
            "unbounded": self.unbounded,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(math.inf if d["lo"] is None else d["lo"],
                   math.inf if d["hi"] is None else d["hi"])


def _div(num, den):
    if den == 0:
        return math.inf if num > 0 else math.nan
    return num / den


def interval_ratio(a: Interval, b: Interval) -> RatioRange:
    lo = _div(a.lo, b.hi)
    hi = _div(a.hi, b.lo)
    # 0/0 is meaningless as a bound; report the widest honest range
    if math.isnan(lo):
        lo = 0.0
    if math.isnan(hi):
        hi = math.inf
    return RatioRange(lo, hi)


@dataclass(frozen=True)
class AgentEntry:
    name: str
    estimate: ActionEnergyEstimate
    emissions: EmissionsResult


@dataclass(frozen=True)
class ComparisonReport:
    agents: tuple
    ratios: dict
    per_token_ratios: dict = field(default_factory=dict)
    metrics: tuple = ()
    grams_per_km: float | None = None

    def ratio(self, a: str, b: str) -> RatioRange:
        return self.ratios[(a, b)]

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "agents": [
                {"name": e.name, "estimate": e.estimate.to_dict(), "emissions": e.emissions.to_dict()}
                for e in self.agents
            ],
            "ratios": [{"a": a, "b": b, **r.to_dict()} for (a, b), r in self.ratios.items()],
            "per_token_ratios": [
                {"a": a, "b": b, **r.to_dict()} for (a, b), r in self.per_token_ratios.items()
            ],
            "metrics": [m.to_dict() for m in self.metrics],
            "grams_per_km": self.grams_per_km,
        }


def parse_report(text: str) -> ComparisonReport:
    """Inverse of ``render_report(report, "json")``."""
    d = json.loads(text)
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(f"unsupported report schema_version {d.get('schema_version')!r}")
    agents = tuple(
        AgentEntry(a["name"], ActionEnergyEstimate.from_dict(a["estimate"]),
                   EmissionsResult.from_dict(a["emissions"]))
        for a in d["agents"]
    )
    return ComparisonReport(
        agents=agents,
        ratios={(r["a"], r["b"]): RatioRange.from_dict(r) for r in d["ratios"]},
        per_token_ratios={(r["a"], r["b"]): RatioRange.from_dict(r) for r in d["per_token_ratios"]},
        metrics=tuple(DedicatedMetricsBlock.from_dict(m) for m in d["metrics"]),
        grams_per_km=d["grams_per_km"],
    )


def compare_agents(entries, metrics=(), grams_per_km: float | None = None) -> ComparisonReport:
    """Pairwise extreme-case energy ratios between agents.

    ``entries`` holds ``(name, ActionEnergyEstimate, EmissionsResult)``
    triples.  When dedicated-metrics blocks are given, per-token energy
    ratios between every pair of models are added as well.
    """
    agents = tuple(AgentEntry(*e) if not isinstance(e, AgentEntry) else e for e in entries)
    if len(agents) < 2:
        raise ValidationError("comparison needs at least two agents")
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        raise ValidationError("agent names must be unique")
    ratios = {
        (a.name, b.name): interval_ratio(a.estimate.total, b.estimate.total)
        for a in agents for b in agents
    }
    models = {}
    for block in metrics:
        for m in block.models:
            models.setdefault(m.model, m.energy_per_token)
    per_token = {
        (a, b): interval_ratio(ea, eb)
        for a, ea in models.items() for b, eb in models.items() if a != b
    }
    return ComparisonReport(agents, ratios, per_token, tuple(metrics), grams_per_km)


def fmt_wh(x: float) -> str:
    s = f"{x:.{WH_DECIMALS}f}".rstrip("0").rstrip(".")
    return s or "0"


def fmt_range(i, fmt, unit="") -> str:
    unit = f" {unit}" if unit else ""
    if i.lo == i.hi:
        return f"{fmt(i.lo)}{unit}"
    return f"{fmt(i.lo)}–{fmt(i.hi)}{unit}"


def _strip_unit(s, unit):
    return s[: -len(unit) - 1] if s.endswith(" " + unit) else s


def fmt_grams_range(i: Interval) -> str:
    return fmt_range(i, lambda x: _strip_unit(format_grams(x), "g"), "g")


def fmt_distance_range(i: Interval) -> str:
    lo, hi = format_distance(i.lo), format_distance(i.hi)
    if lo == hi:
        return lo
    lo_num, lo_unit = lo.split()
    hi_num, hi_unit = hi.split()
    if lo_unit == hi_unit:
        return f"{lo_num}–{hi_num} {hi_unit}"
    return f"{lo}–{hi}"


def fmt_ratio(r: RatioRange) -> str:
    def one(x):
        if math.isinf(x):
            return "unbounded"
        return f"{x:.2f}" if x >= 1 or x == 0 else f"{x:.3g}"

    if r.lo == r.hi:
        return f"{one(r.lo)}×"
    return f"{one(r.lo)}–{one(r.hi)}×"


def _render_markdown(report: ComparisonReport) -> str:
    lines = ["# Web agent energy report", ""]
    lines.append("## Energy per action")
    lines.append("")
    header = ["Agent", "Energy per action (Wh)", "Actions per task", "Region",
              "CO₂e per task (g)"]
    if report.grams_per_km is not None:
        header.append("Car distance equivalent")
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join(["---"] + ["---:"] * (len(header) - 1)) + "|")
    for a in report.agents:
        em = a.emissions
        row = [
            a.name,
            fmt_range(a.estimate.total, fmt_wh, "Wh"),
            repr(em.mean_actions),
            f"{em.region or '-'} ({em.intensity_g_per_wh!r} g/Wh)",
            fmt_grams_range(em.grams),
        ]
        if report.grams_per_km is not None:
            row.append(fmt_distance_range(car_distance_equivalent(em.grams, report.grams_per_km)))
        lines.append("| " + " | ".join(row) + " |")
    if report.grams_per_km is not None:
        lines += ["", f"Car distances assume {report.grams_per_km!r} g CO₂e per km."]

    lines += ["", "## Energy ratios (row agent / column agent)", ""]
    names = [a.name for a in report.agents]
    lines.append("| | " + " | ".join(names) + " |")
    lines.append("|---|" + "|".join("---:" for _ in names) + "|")
    for a in names:
        lines.append("| " + a + " | " + " | ".join(fmt_ratio(report.ratios[(a, b)]) for b in names) + " |")

    for block in report.metrics:
        lines += ["", f"## Dedicated metrics: {block.pipeline}", ""]
        lines.append("| Model | Stages | Tokens per action | Energy per token (Wh) | Source | Provenance |")
        lines.append("|---|---|---:|---:|---|---|")
        for m in block.models:
            lines.append(
                f"| {m.model} | {', '.join(m.stages)} | {fmt_range(m.tokens_per_action, _fmt_tokens)} | "
                f"{fmt_range(m.energy_per_token, repr)} | {m.source} | {m.provenance} |"
            )
        lines.append(
            f"| **total** | | {fmt_range(block.total_tokens_per_action, _fmt_tokens)} | | | "
            f"{fmt_range(block.total_energy_per_action, fmt_wh, 'Wh')} per action |"
        )

    if report.per_token_ratios:
        lines += ["", "## Energy-per-token ratios", ""]
        lines.append("| Model | vs | Ratio |")
        lines.append("|---|---|---:|")
        for (a, b), r in report.per_token_ratios.items():
            lines.append(f"| {a} | {b} | {fmt_ratio(r)} |")
    return "\n".join(lines) + "\n"


def _fmt_tokens(x):
    return str(int(x)) if float(x).is_integer() else repr(x)


def _render_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180: CRLF line endings, minimal quoting
    w.writerow(["record", "name", "other", "lo", "hi", "unit"])
    for a in report.agents:
        w.writerow(["energy_per_action", a.name, "", repr(a.estimate.total.lo),
                    repr(a.estimate.total.hi), "Wh"])
        g = a.emissions.grams
        w.writerow(["co2e_per_task", a.name, a.emissions.region, repr(g.lo), repr(g.hi), "g"])
    for (a, b), r in report.ratios.items():
        w.writerow(["energy_ratio", a, b, repr(r.lo), repr(r.hi), ""])
    for block in report.metrics:
        for m in block.models:
            t, e = m.tokens_per_action, m.energy_per_token
            w.writerow(["tokens_per_action", block.pipeline, m.model, repr(t.lo), repr(t.hi), "tokens"])
            w.writerow(["energy_per_token", block.pipeline, m.model, repr(e.lo), repr(e.hi), "Wh/token"])
    for (a, b), r in report.per_token_ratios.items():
        w.writerow(["energy_per_token_ratio", a, b, repr(r.lo), repr(r.hi), ""])
    return buf.getvalue()


def render_report(report: ComparisonReport, format: str = "markdown") -> str:
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if format == "markdown":
        return _render_markdown(report)
    if format == "csv":
        return _render_csv(report)
    raise ValidationError(f"unknown report format {format!r}; expected one of {FORMATS}")
