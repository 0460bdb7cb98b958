import numpy as np
import pytest

from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='Run the full Monte Carlo studies.')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full-size studies, skipped unless --runslow is given')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def flat_problem(horizon: int=1, collateral: float=25.0, demand: float=100.0, eth_price: float=10.0) -> HorizonProblem:
    '''
    A horizon game at the peg with flat forecasts.
    '''
    forecasts = ForecastBundle.from_levels(
        np.full(horizon + 1, demand),
        np.full(horizon + 1, eth_price),
        stablecoin_price=1.0
    )
    return HorizonProblem(
        initial_state=SystemState(supply=100.0, collateral=collateral, redemption_price=1.0),
        forecasts=forecasts,
        protocol=ProtocolParams(horizon=horizon),
        speculator=SpeculatorParams()
    )


@pytest.fixture
def state() -> SystemState:
    return SystemState(supply=100.0, collateral=10.0, redemption_price=1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
