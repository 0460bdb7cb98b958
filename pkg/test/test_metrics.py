import pytest

from stablecoin_redemption_controller.harness.episode import EpisodeHeader
from stablecoin_redemption_controller.harness.episode import EpisodeRecord
from stablecoin_redemption_controller.harness.episode import EpisodeTrace
from stablecoin_redemption_controller.harness.metrics import RunMetrics
from stablecoin_redemption_controller.harness.metrics import auxiliary_metrics
from stablecoin_redemption_controller.harness.metrics import p_mad
from stablecoin_redemption_controller.harness.metrics import r_mad
from stablecoin_redemption_controller.harness.metrics import time_to_repeg
from stablecoin_redemption_controller.market.scenario import scenario_preset


def build_trace(prices, redemption_prices, gammas, fallbacks=(), scenario=None) -> EpisodeTrace:
    header = EpisodeHeader(controller='rai', seed=0, scenario=scenario or scenario_preset('default', steps=len(prices)))
    records = [
        EpisodeRecord(
            t=t, demand=100.0 * price, supply=100.0, collateral=25.0, eth_price=10.0,
            market_price=price, redemption_price=alpha, rate=0.0, delta_arb=0.0, delta_spec=0.0,
            gamma=gamma, fallback=t in fallbacks
        )
        for t, (price, alpha, gamma) in enumerate(zip(prices, redemption_prices, gammas))
    ]
    return EpisodeTrace(header=header, records=records)


def test_p_mad():
    assert p_mad([1.0, 1.1, 0.9]) == pytest.approx(0.066667, abs=1e-6)
    assert p_mad([1.05]) == pytest.approx(0.05)
    assert p_mad([1.0, 1.0]) == 0.0
    with pytest.raises(ValueError):
        p_mad([])


def test_r_mad():
    assert r_mad([1.05, 1.0], [1.0, 1.05]) == pytest.approx(0.05)
    with pytest.raises(ValueError):
        r_mad([1.0, 1.0])
    with pytest.raises(ValueError):
        r_mad([1.0, 1.0], [1.0])


def test_metrics_of_a_trace():
    trace = build_trace([1.0, 1.1, 0.9], [1.0, 1.05, 1.0], [2.5, 1.4, 2.0], fallbacks=(1,))
    assert p_mad(trace) == pytest.approx(0.2 / 3)
    assert r_mad(trace) == pytest.approx(0.15 / 3)
    auxiliary = auxiliary_metrics(trace)
    assert auxiliary.min_gamma == pytest.approx(1.4)
    assert auxiliary.solver_failures == 1


def test_time_to_repeg():
    prices = [1.2, 1.1, 1.005, 1.0, 0.995, 1.0, 1.0, 1.02]
    assert time_to_repeg(prices, start=0, persistence=3) == 2
    assert time_to_repeg(prices, start=3, persistence=3) == 3
    assert time_to_repeg(prices, start=0, persistence=5) == 2
    assert time_to_repeg(prices, start=0, persistence=6) is None
    assert time_to_repeg([1.3] * 10, start=0) is None
    assert time_to_repeg([1.0] * 3, start=0, persistence=5) is None


def test_repeg_is_measured_after_the_last_event():
    scenario = scenario_preset('sustained_shock', steps=50)
    prices = [1.2] * 45 + [1.02] * 5
    trace = build_trace(prices, [1.0] * 50, [2.5] * 50, scenario=scenario)
    assert auxiliary_metrics(trace).time_to_repeg is None
    trace = build_trace([1.2] * 42 + [1.0] * 8, [1.0] * 50, [2.5] * 50, scenario=scenario)
    assert auxiliary_metrics(trace).time_to_repeg == 42


def test_run_metrics_flags_undercollateralized_episodes():
    trace = build_trace([1.0, 1.0], [1.0, 1.0], [1.6, 2.0])
    metrics = RunMetrics.from_trace(trace, min_ratio=1.5)
    assert not metrics.below_min_ratio
    assert RunMetrics.from_trace(trace, min_ratio=1.7).below_min_ratio
    assert metrics.p_mad == 0.0
    assert metrics.time_to_repeg is None


def test_auxiliary_metrics_compare_against_the_given_ratio():
    trace = build_trace([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [2.0, 1.6, 1.8])
    assert auxiliary_metrics(trace).min_gamma == 1.6
    assert not auxiliary_metrics(trace, min_ratio=1.5).below_min_ratio
    assert auxiliary_metrics(trace, min_ratio=1.7).below_min_ratio
    assert auxiliary_metrics(trace, 1.7) == auxiliary_metrics(trace, min_ratio=1.7)
