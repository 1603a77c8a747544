import math

import pytest

from wattagent.energy_sources import ModelEnergyProfile
from wattagent.errors import TransparencyError, ValidationError
from wattagent.pipeline import AgentPipeline, Stage, TokensPerActionExpr
from wattagent.quantities import Interval
from wattagent.reporting import (
    RatioRange,
    compare_agents,
    dedicated_metrics,
    fmt_ratio,
    interval_ratio,
    parse_report,
    render_report,
)
from wattagent.tokenization import CorpusStats


def test_mindact_metrics(mindact, mindact_stats):
    block = dedicated_metrics(mindact, mindact_stats)
    by_model = {m.model: m for m in block.models}
    assert by_model["DeBERTa-86M"].tokens_per_action == Interval(118798, 356394)
    assert by_model["DeBERTa-86M"].energy_per_token == Interval.point(4e-6)
    assert by_model["flan-T5-XL"].tokens_per_action == Interval(5120, 5120)
    assert by_model["flan-T5-XL"].energy_per_token == Interval.point(0.000102)
    assert all(m.source == "measured" and m.provenance for m in block.models)
    assert block.total_tokens_per_action == Interval(123918, 361514)


def test_laser_metrics(laser, laser_stats):
    (m,) = dedicated_metrics(laser, laser_stats).models
    assert m.tokens_per_action == Interval(93778, 93778)
    assert m.energy_per_token == Interval.point(0.03125)
    assert m.source == "cost-proxy"


def test_empty_provenance_refused():
    prof = ModelEnergyProfile("anon", Interval.point(1e-3), "reported", "  ")
    p = AgentPipeline("p", [Stage("s", prof, TokensPerActionExpr(fixed_tokens=1))], "c")
    with pytest.raises(TransparencyError):
        dedicated_metrics(p, CorpusStats.from_totals("c", 1, 1))


def test_laser_over_mindact(comparison):
    r = comparison.ratio("LASER", "MindAct")
    assert r.lo == pytest.approx(2930.5625 / 1.947816, rel=1e-12)
    assert r.hi == pytest.approx(2930.5625 / 0.997432, rel=1e-12)
    assert r.contains(1504.54) and r.contains(2938.1)


def test_self_ratio_contains_one(comparison):
    for a in comparison.agents:
        assert comparison.ratio(a.name, a.name).contains(1.0)
    assert comparison.ratio("LASER", "LASER") == RatioRange(1.0, 1.0)


def test_per_token_ratios(comparison):
    r = comparison.per_token_ratios
    assert r[("GPT-4", "flan-T5-XL")].lo == pytest.approx(306.372549, rel=1e-9)
    assert r[("GPT-4", "DeBERTa-86M")].lo == pytest.approx(7812.5, rel=1e-12)


def test_zero_denominator_unbounded():
    r = interval_ratio(Interval(1, 2), Interval(0, 3))
    assert r.unbounded and math.isinf(r.hi)
    assert r.to_dict()["hi"] is None and r.to_dict()["unbounded"] is True
    assert fmt_ratio(r) == "0.333–unbounded×"
    assert interval_ratio(Interval(0, 0), Interval(0, 0)) == RatioRange(0.0, math.inf)


def test_comparison_needs_two_unique_agents(mindact_est, comparison):
    em = comparison.agents[0].emissions
    with pytest.raises(ValidationError):
        compare_agents([("a", mindact_est, em)])
    with pytest.raises(ValidationError):
        compare_agents([("a", mindact_est, em), ("a", mindact_est, em)])


def test_json_round_trip(comparison):
    text = render_report(comparison, "json")
    again = parse_report(text)
    assert again == comparison
    assert render_report(again, "json") == text


def test_markdown_content(comparison):
    md = render_report(comparison, "markdown")
    assert "0.997432–1.947816 Wh" in md
    assert "2930.5625 Wh" in md
    assert "9691.08 g" in md
    assert "3.30–6.44 g" in md
    assert "39 km" in md and "13–26 m" in md
    assert md.index("Energy per action (Wh)") < md.index("CO₂e per task (g)")
    assert md == render_report(comparison, "markdown")


def test_csv_rows(comparison):
    text = render_report(comparison, "csv")
    assert text.startswith("record,name,other,lo,hi,unit\r\n")
    assert "energy_per_action,LASER,,2930.5625,2930.5625,Wh" in text


def test_unknown_format(comparison):
    with pytest.raises(ValidationError):
        render_report(comparison, "yaml")


def test_schema_version_checked(comparison):
    text = render_report(comparison, "json").replace('"schema_version": 1', '"schema_version": 9')
    with pytest.raises(ValidationError):
        parse_report(text)
