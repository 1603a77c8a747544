"""Staged token-flow model of a web agent and its per-action energy.

A pipeline is a list of stages.  Each stage runs one model ``repetitions``
times per action, and each repetition reads ``multiplier * N + fixed``
input tokens, where ``N`` is the mean page size of the corpus.  Output
tokens are not modelled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .energy_sources import ModelEnergyProfile
from .errors import ConfigurationError, ValidationError
from .quantities import Interval, check_positive, interval_mul, interval_scale, interval_sum
from .tokenization.corpus import CorpusStats

MEAN = "mean"
WORST_CASE = "worst-case"


@dataclass(frozen=True)
class TokensPerActionExpr:
    per_page_multiplier: Interval = Interval(0.0, 0.0)
    fixed_tokens: int = 0

    def __post_init__(self):
        object.__setattr__(self, "per_page_multiplier", Interval.coerce(self.per_page_multiplier))
        if isinstance(self.fixed_tokens, bool) or not isinstance(self.fixed_tokens, int) \
                or self.fixed_tokens < 0:
            raise ValidationError(f"fixed tokens must be a nonnegative integer, got {self.fixed_tokens!r}")
        if self.per_page_multiplier.hi == 0 and self.fixed_tokens == 0:
            raise ValidationError("a stage must read some tokens: multiplier and fixed are both zero")

    def evaluate(self, mean_tokens_per_page: float) -> Interval:
        n = interval_scale(self.per_page_multiplier, mean_tokens_per_page)
        return Interval(n.lo + self.fixed_tokens, n.hi + self.fixed_tokens)


@dataclass(frozen=True)
class Stage:
    name: str
    model: ModelEnergyProfile | str
    tokens: TokensPerActionExpr
    repetitions: int = 1

    def __post_init__(self):
        if not self.name:
            raise ValidationError("stage name must not be empty")
        if isinstance(self.repetitions, bool) or not isinstance(self.repetitions, int) \
                or self.repetitions < 1:
            raise ValidationError(f"stage {self.name!r}: repetitions must be an integer >= 1")

    @property
    def model_name(self) -> str:
        return self.model if isinstance(self.model, str) else self.model.name


@dataclass(frozen=True)
class AgentPipeline:
    name: str
    stages: tuple
    corpus_counter_id: str

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise ValidationError(f"pipeline {self.name!r} has no stages")
        names = [s.name for s in self.stages]
        if len(set(names)) != len(names):
            raise ValidationError(f"pipeline {self.name!r}: stage names must be unique")

    def resolve(self, profiles=None) -> AgentPipeline:
        """Replace model references (names) with profiles from ``profiles``."""
        profiles = dict(profiles or {})
        stages = []
        for stage in self.stages:
            model = stage.model
            if isinstance(model, str):
                if model not in profiles:
                    raise ConfigurationError(
                        f"stage {stage.name!r}: unresolved model reference {model!r}"
                    )
                model = profiles[model]
            stages.append(Stage(stage.name, model, stage.tokens, stage.repetitions))
        return AgentPipeline(self.name, stages, self.corpus_counter_id)

    def to_dict(self) -> dict:
        stages = []
        for s in self.stages:
            if isinstance(s.model, str):
                model = s.model
            else:
                model = {
                    "name": s.model.name,
                    "energy_per_token": {
                        **s.model.energy_per_token.to_dict(),
                        "unit": "Wh/token",
                        "source": s.model.source,
                    },
                    "provenance": s.model.provenance,
                }
            stages.append({
                "name": s.name,
                "model": model,
                "tokens": {
                    "per_page_multiplier": s.tokens.per_page_multiplier.to_dict(),
                    "fixed": s.tokens.fixed_tokens,
                },
                "repetitions": s.repetitions,
            })
        return {"name": self.name, "counter_id": self.corpus_counter_id, "stages": stages}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _check_keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object")
    for key in obj:
        if key not in required and key not in optional:
            raise ValidationError(f"{path}.{key}: unknown field")
    for key in required:
        if key not in obj:
            raise ValidationError(f"{path}.{key}: missing field")


def _wrap(path, fn, *args):
    try:
        return fn(*args)
    except ValidationError as exc:
        msg = str(exc)
        raise ValidationError(msg if msg.startswith(path) else f"{path}: {msg}") from None


def pipeline_from_dict(data: dict) -> AgentPipeline:
    """Validate a pipeline config document; errors name the offending key path."""
    _check_keys(data, "$", ("name", "counter_id", "stages"))
    if not isinstance(data["stages"], list) or not data["stages"]:
        raise ValidationError("$.stages: expected a nonempty list")
    stages = []
    for i, raw in enumerate(data["stages"]):
        path = f"$.stages[{i}]"
        _check_keys(raw, path, ("name", "model", "tokens"), ("repetitions",))
        model = raw["model"]
        if not isinstance(model, str):
            model = ModelEnergyProfile.from_dict(model, f"{path}.model")
        tokens = raw["tokens"]
        _check_keys(tokens, f"{path}.tokens", (), ("per_page_multiplier", "fixed"))
        mult = tokens.get("per_page_multiplier", {"lo": 0, "hi": 0})
        _check_keys(mult, f"{path}.tokens.per_page_multiplier", ("lo", "hi"))
        expr = _wrap(f"{path}.tokens", TokensPerActionExpr,
                     _wrap(f"{path}.tokens.per_page_multiplier", Interval, mult["lo"], mult["hi"]),
                     tokens.get("fixed", 0))
        stages.append(_wrap(path, Stage, str(raw["name"]), model, expr, raw.get("repetitions", 1)))
    return _wrap("$", AgentPipeline, str(data["name"]), stages, str(data["counter_id"]))


def load_pipeline(path) -> AgentPipeline:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from None
    return pipeline_from_dict(data)


@dataclass(frozen=True)
class TaskProfile:
    mean_actions_per_task: float
    max_actions: int | None = None

    def __post_init__(self):
        check_positive(self.mean_actions_per_task, "mean actions per task")
        if self.max_actions is not None:
            if isinstance(self.max_actions, bool) or not isinstance(self.max_actions, int) \
                    or self.max_actions < 1:
                raise ValidationError("max_actions must be a positive integer")
            if self.mean_actions_per_task > self.max_actions:
                raise ValidationError("mean actions per task exceeds max_actions")


@dataclass(frozen=True)
class ActionEnergyEstimate:
    pipeline: str
    per_stage: dict
    total: Interval
    per_stage_tokens: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = interval_sum(self.per_stage.values())
        if self.total != expected:
            raise ValidationError(f"estimate total {self.total} is not the sum of its stages {expected}")

    def to_dict(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "unit": "Wh",
            "per_stage": {k: v.to_dict() for k, v in self.per_stage.items()},
            "per_stage_tokens": {k: v.to_dict() for k, v in self.per_stage_tokens.items()},
            "total": self.total.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ActionEnergyEstimate:
        _check_keys(data, "$", ("pipeline", "per_stage", "total"), ("unit", "per_stage_tokens"))
        if data.get("unit", "Wh") != "Wh":
            raise ValidationError(f"$.unit: expected 'Wh', got {data['unit']!r}")
        return cls(
            pipeline=data["pipeline"],
            per_stage={k: Interval.coerce(v) for k, v in data["per_stage"].items()},
            total=Interval.coerce(data["total"]),
            per_stage_tokens={k: Interval.coerce(v)
                              for k, v in data.get("per_stage_tokens", {}).items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def load(cls, path) -> ActionEnergyEstimate:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def stage_tokens_per_action(stage: Stage, stats: CorpusStats, counter_id: str | None = None) -> Interval:
    """Input tokens one action sends through ``stage``: ``r * (k * N + b)``."""
    if counter_id is not None and stats.counter_id != counter_id:
        raise ValidationError(
            f"corpus stats were counted with {stats.counter_id!r} but the pipeline "
            f"expects {counter_id!r}"
        )
    return interval_scale(stage.tokens.evaluate(stats.mean_tokens_per_page), stage.repetitions)


def action_energy(pipeline: AgentPipeline, stats: CorpusStats, profiles=None) -> ActionEnergyEstimate:
    """Energy in Wh for one action of ``pipeline``, with interval bounds."""
    pipeline = pipeline.resolve(profiles)
    per_stage, per_stage_tokens = {}, {}
    for stage in pipeline.stages:
        tokens = stage_tokens_per_action(stage, stats, pipeline.corpus_counter_id)
        per_stage_tokens[stage.name] = tokens
        per_stage[stage.name] = interval_mul(tokens, stage.model.energy_per_token)
    return ActionEnergyEstimate(pipeline.name, per_stage, interval_sum(per_stage.values()),
                                per_stage_tokens)


def task_energy(est: ActionEnergyEstimate, profile: TaskProfile, mode: str = MEAN) -> Interval:
    """Energy per task: the action total times mean (or maximum) actions."""
    if mode == MEAN:
        return interval_scale(est.total, profile.mean_actions_per_task)
    if mode == WORST_CASE:
        if profile.max_actions is None:
            raise ValidationError("worst-case task energy needs max_actions")
        return interval_scale(est.total, profile.max_actions)
    raise ValidationError(f"unknown task-energy mode {mode!r}; expected 'mean' or 'worst-case'")
