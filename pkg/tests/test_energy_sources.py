import warnings

import numpy as np
import pytest

from wattagent.energy_sources import (
    CostProxyInputs,
    ModelEnergyProfile,
    PowerTrace,
    cost_proxy_energy_per_token,
    integrate_power_trace,
    measured_energy_per_token,
)
from wattagent.errors import ValidationError
from wattagent.quantities import Interval


def trace(t, p):
    return PowerTrace(np.array(t, float), np.array(p, float))


def rectangle_oracle(tr, density, where="mid"):
    """Rectangle rule on the piecewise-linear signal resampled ``density`` times finer.

    ``where`` picks the sample inside each sub-interval: ``left`` or ``mid``.
    """
    t, p = tr.timestamps, tr.power_w
    edges = np.concatenate(
        [np.linspace(t[i], t[i + 1], density, endpoint=False) for i in range(len(t) - 1)]
        + [t[-1:]]
    )
    widths = np.diff(edges)
    at = edges[:-1] if where == "left" else edges[:-1] + widths / 2
    return float(np.sum(np.interp(at, t, p) * widths)) / 3600


def test_constant_power():
    assert integrate_power_trace(trace([0, 3600], [100, 100])) == pytest.approx(100, abs=1e-9)


def test_linear_ramp():
    assert integrate_power_trace(trace([0, 3600], [0, 100])) == pytest.approx(50, abs=1e-9)


def test_sawtooth_fixture_against_oracle(fixtures):
    tr = PowerTrace.from_csv(fixtures / "traces" / "sawtooth.csv")
    e = integrate_power_trace(tr)
    assert e == pytest.approx(rectangle_oracle(tr, 10), rel=5e-3)


def test_rectangle_converges_toward_trapezoid(fixtures):
    tr = PowerTrace.from_csv(fixtures / "traces" / "sawtooth.csv")
    e = integrate_power_trace(tr)
    coarse = abs(rectangle_oracle(tr, 10, "left") - e)
    fine = abs(rectangle_oracle(tr, 100, "left") - e)
    assert fine < coarse / 5


def test_random_traces_against_oracle():
    rng = np.random.default_rng(20240611)
    for _ in range(20):
        n = int(rng.integers(2, 60))
        t = np.cumsum(rng.uniform(0.01, 30, n)) - 0.01
        tr = trace(t, rng.uniform(0, 400, n))
        assert integrate_power_trace(tr) == pytest.approx(rectangle_oracle(tr, 10), rel=5e-3)


def test_additive_over_concatenation():
    a = trace([0, 5, 9], [10, 30, 20])
    b = trace([9, 12, 20], [20, 5, 40])
    both = trace([0, 5, 9, 12, 20], [10, 30, 20, 5, 40])
    assert integrate_power_trace(both) == pytest.approx(
        integrate_power_trace(a) + integrate_power_trace(b), rel=1e-15)


@pytest.mark.parametrize(
    "t, p",
    [([0], [1]), ([0, 0], [1, 1]), ([0, 2, 1], [1, 1, 1]), ([0, 1], [1, -1]), ([0, 1], [1, np.nan])],
)
def test_invalid_traces(t, p):
    with pytest.raises(ValidationError):
        trace(t, p)


def test_csv_header_required():
    with pytest.raises(ValidationError):
        PowerTrace.parse_csv("time,power\n0,1\n1,1\n")


def test_csv_round_trip(fixtures):
    tr = PowerTrace.from_csv(fixtures / "traces" / "sawtooth.csv")
    again = PowerTrace.parse_csv(tr.to_csv())
    assert np.array_equal(tr.timestamps, again.timestamps)
    assert np.array_equal(tr.power_w, again.power_w)


def test_measured_deberta_division():
    # 0.475192 Wh over 118798 tokens
    tr = trace([0, 3600], [0.475192, 0.475192])
    prof = measured_energy_per_token([tr], 118798)
    assert prof.energy_per_token.lo == pytest.approx(4.0e-6, rel=1e-12)
    assert prof.source == "measured" and prof.provenance


def test_measured_identity():
    prof = measured_energy_per_token([trace([0, 3600], [1, 1])], 1)
    assert prof.energy_per_token.lo == pytest.approx(1.0, abs=1e-12)


def test_measured_with_baseline():
    run = trace([0, 3600], [10, 10])
    idle = trace([0, 3600], [2, 2])
    prof = measured_energy_per_token([run], 4000, baseline=idle)
    assert prof.energy_per_token.lo == pytest.approx(0.002, rel=1e-12)


def test_baseline_scaled_to_duration():
    run = trace([0, 7200], [10, 10])  # 20 Wh over 2 h
    idle = trace([0, 1800], [2, 2])  # 2 W mean -> 4 Wh over 2 h
    prof = measured_energy_per_token([run], 16, baseline=idle)
    assert prof.energy_per_token.lo == pytest.approx(1.0, rel=1e-12)


def test_baseline_exceeding_measurement_clamps():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        prof = measured_energy_per_token([trace([0, 10], [1, 1])], 5,
                                         baseline=trace([0, 10], [3, 3]))
    assert prof.energy_per_token == Interval(0, 0)
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_zero_tokens_rejected():
    with pytest.raises(ValidationError):
        measured_energy_per_token([trace([0, 1], [1, 1])], 0)


def test_multiple_traces_sum():
    traces = [trace([0, 3600], [3, 3]), trace([0, 1800], [2, 2])]
    prof = measured_energy_per_token(traces, 4)
    assert prof.energy_per_token.lo * 4 == pytest.approx(4.0, rel=1e-15)


def test_cost_proxy_gpt4():
    inputs = CostProxyInputs.from_kwh_price(10e-6, 0.16, 0.5)
    prof = cost_proxy_energy_per_token(inputs, "GPT-4")
    assert prof.energy_per_token == Interval.point(0.03125)
    assert prof.source == "cost-proxy"
    assert "1e-05" in prof.provenance and "0.00016" in prof.provenance and "0.5" in prof.provenance


def test_cost_proxy_quarter_price():
    prof = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(2.5e-6, 0.16, 0.5))
    assert prof.energy_per_token.lo == pytest.approx(0.0078125, rel=1e-15)


def test_share_boundary():
    with pytest.raises(ValidationError):
        CostProxyInputs.from_kwh_price(10e-6, 0.16, 0.0)
    with pytest.raises(ValidationError):
        CostProxyInputs.from_kwh_price(10e-6, 0.16, 1.01)
    tiny = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, 0.16, 1e-9))
    assert tiny.energy_per_token.lo == pytest.approx(0.0625e-9, rel=1e-12)


def test_energy_price_must_be_positive():
    with pytest.raises(ValidationError):
        CostProxyInputs(1e-5, 0.0)
    with pytest.raises(ValidationError):
        CostProxyInputs.from_kwh_price(1e-5, -0.16)


def test_share_interval():
    prof = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, 0.16, (0.3, 0.7)))
    assert prof.energy_per_token.lo == pytest.approx(0.01875)
    assert prof.energy_per_token.hi == pytest.approx(0.04375)


def test_profile_json_round_trip(tmp_path):
    prof = cost_proxy_energy_per_token(CostProxyInputs.from_kwh_price(10e-6, 0.16), "GPT-4")
    path = tmp_path / "p.json"
    path.write_text(prof.to_json())
    assert ModelEnergyProfile.load(path) == prof


def test_profile_rejects_unknown_fields():
    with pytest.raises(ValidationError, match="colour"):
        ModelEnergyProfile.from_dict({"name": "m", "energy_per_token": {"lo": 1, "hi": 1},
                                      "source": "reported", "colour": 1})
    with pytest.raises(ValidationError):
        ModelEnergyProfile("m", Interval.point(1), "guessed", "x")
