import math
import numpy as np
import pytest

from pydantic import ValidationError

from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.exceptions import ConfigError
from stablecoin_redemption_controller.market.agents import AgentMarket
from stablecoin_redemption_controller.market.agents import AgentMemory
from stablecoin_redemption_controller.market.agents import AgentParams
from stablecoin_redemption_controller.market.agents import arbitrageur_action
from stablecoin_redemption_controller.market.agents import clamp_supply_change
from stablecoin_redemption_controller.market.agents import crisis_amplify
from stablecoin_redemption_controller.market.agents import discounted_sum
from stablecoin_redemption_controller.market.agents import market_step
from stablecoin_redemption_controller.market.agents import speculator_action
from stablecoin_redemption_controller.market.scenario import ScenarioConfig
from stablecoin_redemption_controller.market.scenario import ShockConfig
from stablecoin_redemption_controller.market.scenario import SimPath
from stablecoin_redemption_controller.market.scenario import generate_path
from stablecoin_redemption_controller.market.scenario import scenario_preset


def test_deterministic_growth_without_volatility():
    config = ScenarioConfig(steps=5, demand_sigma=0.0, demand_mu=0.01, eth_sigma=0.0)
    path = generate_path(config, seed=3)
    assert path.demand[1] == pytest.approx(101.005, abs=1e-3)
    np.testing.assert_allclose(path.demand, 100.0 * np.exp(0.01 * np.arange(6)))
    np.testing.assert_allclose(path.eth_price, np.full(6, 10.0))
    assert path.steps == 5


def test_shock_plateau_and_decay():
    shock = {'step': 10, 'magnitude': 0.3, 'decay': 0.1}
    path = generate_path(ScenarioConfig(steps=30, demand_sigma=0.0, eth_sigma=0.0, shocks=[shock]), seed=0)
    assert path.demand[9] == pytest.approx(100.0)
    assert path.demand[10] == pytest.approx(130.0)
    assert path.demand[20] == pytest.approx(100.0 + 30.0 * math.exp(-1.0))


def test_sustained_shock_holds_before_decaying():
    shock = ShockConfig(step=5, magnitude=0.4, decay=0.5, duration=3)
    offsets = shock.offset(np.arange(12), 100.0)
    np.testing.assert_allclose(offsets[5:9], 40.0)
    assert offsets[4] == 0.0
    assert offsets[9] == pytest.approx(40.0 * math.exp(-0.5))


def test_crash_segment():
    config = scenario_preset('vault_crisis', eth_sigma=0.0)
    path = generate_path(config, seed=11)
    assert path.eth_price[20] == pytest.approx(10.0)
    assert path.eth_price[21] == pytest.approx(9.8)
    assert path.eth_price[50] == pytest.approx(10.0 * 0.98 ** 30)
    assert path.eth_price[-1] == pytest.approx(path.eth_price[50])


def test_same_seed_same_path():
    config = scenario_preset('stress')
    first, second = generate_path(config, seed=42), generate_path(config, seed=42)
    np.testing.assert_array_equal(first.demand, second.demand)
    np.testing.assert_array_equal(first.eth_price, second.eth_price)
    assert not np.array_equal(first.demand, generate_path(config, seed=43).demand)


def test_demand_stays_positive_under_negative_shocks():
    shock = {'step': 1, 'magnitude': -2.0, 'decay': 0.0}
    path = generate_path(ScenarioConfig(steps=10, shocks=[shock]), seed=5)
    assert np.all(path.demand > 0)


def test_presets():
    assert len(scenario_preset('stress').shocks) == 3
    assert scenario_preset('drift').demand_mu > 0
    sustained = scenario_preset('sustained_shock')
    assert sustained.shocks[0].duration == 10
    assert sustained.recovery_start == 40
    assert scenario_preset('vault_crisis').crash is not None
    assert scenario_preset('default').recovery_start == 0
    with pytest.raises(ValueError):
        scenario_preset('bank_run')


def test_short_presets_leave_out_late_events():
    assert [shock.step for shock in scenario_preset('stress', steps=50).shocks] == [20]
    assert scenario_preset('vault_crisis', steps=10).crash is None
    assert scenario_preset('vault_crisis', steps=30).recovery_start == 30


def test_events_after_the_last_step_are_rejected():
    with pytest.raises(ValidationError):
        ScenarioConfig(steps=50, shocks=[{'step': 60, 'magnitude': 0.2, 'decay': 0.1}])
    with pytest.raises(ValidationError):
        ScenarioConfig(steps=10, crash={'start': 20})
    with pytest.raises(ConfigError):
        scenario_preset('default', steps=10, shocks=[{'step': 10, 'magnitude': 0.2, 'decay': 0.1}])


def test_truncated_scenario():
    stress = scenario_preset('stress')
    short = stress.truncated(60)
    assert short.steps == 60
    assert [shock.step for shock in short.shocks] == [20, 55]
    assert stress.steps == 100 and len(stress.shocks) == 3
    assert scenario_preset('vault_crisis').truncated(15).crash is None


def test_scenario_validation():
    with pytest.raises(ValidationError):
        ScenarioConfig(steps=0)
    with pytest.raises(ValidationError):
        ScenarioConfig(demand_sigma=-0.1)
    with pytest.raises(ValidationError):
        ScenarioConfig(volatility=0.1)
    with pytest.raises(ValueError):
        SimPath(demand=np.array([1.0, -1.0]), eth_price=np.array([1.0, 1.0]), seed=0)


def test_discounted_sum_cutoff():
    assert discounted_sum([1.0, 1.0, 1.0], 0.5) == pytest.approx(1.75)
    assert discounted_sum([1.0, 1.0, 1.0], 0.5, cutoff=0.3) == pytest.approx(1.5)
    assert discounted_sum([], 0.9) == 0.0


def test_arbitrageur_action():
    assert arbitrageur_action([0.02, 0.04], 50.0, 0.5) == pytest.approx(2.5)
    assert arbitrageur_action([0.02, 0.04], 0.0, 0.5) == 0.0
    assert arbitrageur_action([-0.02], 50.0, 0.5) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        arbitrageur_action([0.1], -1.0, 0.5)


def test_speculator_action():
    assert speculator_action([-0.01], [1.0], 100.0, 0.5) == pytest.approx(1.0)
    assert speculator_action([0.0] * 60, [1.02] * 60, 100.0, 0.5) == pytest.approx(4.0, rel=1e-5)
    assert speculator_action([0.01], [1.0], 100.0, 0.5) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        speculator_action([0.0, 0.0], [1.0], 100.0, 0.5)


def test_crisis_amplify():
    assert crisis_amplify(-2.0, 1.5, 1.8, 5.0) == pytest.approx(-10.0)
    assert crisis_amplify(2.0, 1.5, 1.8, 5.0) == pytest.approx(2.0)
    assert crisis_amplify(-2.0, 2.0, 1.8, 5.0) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        crisis_amplify(-2.0, 1.5, 1.8, 0.5)


def test_clamp_keeps_collateral_nonnegative():
    state = SystemState(supply=100.0, collateral=10.0, redemption_price=1.0)
    delta = clamp_supply_change(-80.0, state, 100.0, 10.0, supply_floor=1e-4)
    assert delta == pytest.approx(-50.0, rel=1e-6)
    price = 100.0 / (state.supply + delta)
    assert state.collateral + price / 10.0 * delta >= 0.0
    assert clamp_supply_change(-5.0, state, 100.0, 10.0, supply_floor=1e-4) == -5.0


def test_clamp_to_supply_floor():
    state = SystemState(supply=100.0, collateral=1000.0, redemption_price=1.0)
    assert clamp_supply_change(-20.0, state, 100.0, 10.0, supply_floor=90.0) == pytest.approx(-10.0)


def test_market_clears_at_post_trade_price():
    state = SystemState(supply=100.0, collateral=100.0, redemption_price=1.0)
    params = AgentParams(arbitrage_gain=100.0, speculator_gain=0.0)
    step = market_step(state, 105.0, 10.0, 0.0, params, AgentMemory(), supply_floor=1e-4)
    assert step.delta_arbitrage == pytest.approx(5.0)
    assert step.delta == pytest.approx(5.0)
    assert step.observation.stablecoin_price == pytest.approx(1.0)
    assert step.observation.realized_delta == pytest.approx(5.0)
    assert step.collateral_ratio == pytest.approx(10.0)
    assert not step.amplified
    assert not step.clamped


def test_printed_speculator_mode_follows_the_price_residual():
    state = SystemState(supply=100.0, collateral=100.0, redemption_price=1.0)
    params = AgentParams(arbitrage_gain=0.0, speculator_gain=20.0, speculator_mode='printed')
    step = market_step(state, 105.0, 10.0, -0.01, params, AgentMemory(), supply_floor=1e-4)
    assert step.delta_speculator == pytest.approx(1.0)


def test_agent_market_keeps_memory():
    state = SystemState(supply=100.0, collateral=100.0, redemption_price=1.0)
    market = AgentMarket(AgentParams(arbitrage_gain=10.0, speculator_gain=0.0, memory_discount=0.5), initial_supply=100.0)
    first = market.step(state, 110.0, 10.0, 0.0)
    second = market.step(state, 110.0, 10.0, 0.0)
    assert first.delta == pytest.approx(1.0)
    assert second.delta == pytest.approx(1.5)
    assert market.supply_floor == pytest.approx(1e-4)


def test_crisis_burns_are_amplified():
    state = SystemState(supply=100.0, collateral=15.0, redemption_price=1.0)
    params = AgentParams(arbitrage_gain=0.0, speculator_gain=100.0)
    step = market_step(state, 100.0, 10.0, 0.01, params, AgentMemory(), supply_floor=1e-4)
    assert step.collateral_ratio == pytest.approx(1.5)
    assert step.amplified
    assert step.delta_speculator == pytest.approx(-5.0)


def test_agent_params_validation():
    with pytest.raises(ValidationError):
        AgentParams(arbitrage_gain=-1.0)
    with pytest.raises(ValidationError):
        AgentParams(memory_discount=1.0)
    with pytest.raises(ValidationError):
        AgentParams(speculator_mode='greedy')
    with pytest.raises(ValidationError):
        AgentParams(crisis_multiplier=0.5)
