import pytest

from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.core.system_state import collateralization_ratio
from stablecoin_redemption_controller.core.system_state import step_state
from stablecoin_redemption_controller.core.system_state import vault_feasible


def test_step_state_applies_rate_mint_and_conversion(state):
    following = step_state(state, rate=0.02, delta=4.0, stablecoin_price=1.0, collateral_price=2.0)
    assert following.supply == pytest.approx(104.0)
    assert following.collateral == pytest.approx(12.0)
    assert following.redemption_price == pytest.approx(1.02)


def test_step_state_without_controls_keeps_the_state(state):
    assert step_state(state, 0.0, 0.0, 1.3, 7.0) == state


def test_step_state_rejects_negative_collateral(state):
    with pytest.raises(ValueError):
        step_state(state, 0.0, -6.0, 1.0, 0.5)


def test_step_state_rejects_nonpositive_prices(state):
    with pytest.raises(ValueError):
        step_state(state, 0.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize('collateral_price, expected', [(20.0, 3.0), (10.0, 1.5)])
def test_collateralization_ratio(collateral_price, expected):
    state = SystemState(supply=100.0, collateral=15.0, redemption_price=1.0)
    assert collateralization_ratio(state, collateral_price) == pytest.approx(expected)


def test_collateralization_ratio_without_supply():
    with pytest.raises(ValueError):
        collateralization_ratio(SystemState(supply=0.0, collateral=15.0, redemption_price=1.0), 10.0)


@pytest.mark.parametrize('collateral, feasible', [(30.0, True), (15.0, True), (14.9, False)])
def test_vault_feasible_includes_the_boundary(collateral, feasible):
    state = SystemState(supply=100.0, collateral=collateral, redemption_price=1.0)
    assert vault_feasible(state, 10.0, 1.5) is feasible


def test_state_validation():
    with pytest.raises(ValueError):
        SystemState(supply=-1.0, collateral=1.0, redemption_price=1.0)
    with pytest.raises(ValueError):
        SystemState(supply=1.0, collateral=1.0, redemption_price=0.0)
    with pytest.raises(ValueError):
        SystemState(supply=float('nan'), collateral=1.0, redemption_price=1.0)
    with pytest.raises(ValueError):
        MarketObservation(stablecoin_price=0.0, collateral_price=1.0, demand=1.0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        SpeculatorParams(discount=1.5)
    with pytest.raises(ValueError):
        ProtocolParams(horizon=0)
    with pytest.raises(ValueError):
        ProtocolParams(unknown=1)
