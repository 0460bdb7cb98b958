from typing import Optional

from stablecoin_redemption_controller import registry
from stablecoin_redemption_controller.forecasting.forecasters import EwmaDriftForecaster
from stablecoin_redemption_controller.forecasting.forecasters import Forecaster
from stablecoin_redemption_controller.forecasting.forecasters import ForecasterConfig
from stablecoin_redemption_controller.forecasting.forecasters import OracleForecaster
from stablecoin_redemption_controller.forecasting.forecasters import PersistenceForecaster
from stablecoin_redemption_controller.market.scenario import SimPath


@registry.forecasters.register('persistence')
def create_persistence_forecaster(config: ForecasterConfig, path: Optional[SimPath]=None) -> PersistenceForecaster:
    '''
    Function that creates a forecaster that repeats the last observation.

    Parameters:
    config(ForecasterConfig): Configuration of the forecaster.
    path(SimPath): Not used.

    Returns:
    PersistenceForecaster: The forecaster.
    '''
    return PersistenceForecaster()

@registry.forecasters.register('ewma_drift')
def create_ewma_drift_forecaster(config: ForecasterConfig, path: Optional[SimPath]=None) -> EwmaDriftForecaster:
    '''
    Function that creates a forecaster that extrapolates the smoothed level with the recent drift.

    Parameters:
    config(ForecasterConfig): Configuration of the forecaster. Its ewma_weight and drift_window are used.
    path(SimPath): Not used.

    Returns:
    EwmaDriftForecaster: The forecaster.
    '''
    return EwmaDriftForecaster(config.ewma_weight, config.drift_window)

@registry.forecasters.register('oracle')
def create_oracle_forecaster(config: ForecasterConfig, path: Optional[SimPath]=None) -> OracleForecaster:
    '''
    Function that creates a forecaster that reads the true path.

    Parameters:
    config(ForecasterConfig): Configuration of the forecaster.
    path(SimPath): The path of the episode.

    Returns:
    OracleForecaster: The forecaster.
    '''
    if path is None:
        raise ValueError('The oracle forecaster needs the path of the episode.')

    return OracleForecaster(path.demand, path.eth_price)


def create_forecaster(config: Optional[ForecasterConfig]=None, path: Optional[SimPath]=None) -> Forecaster:
    '''
    This function creates the forecaster named by a configuration.

    Parameters:
    config(ForecasterConfig): Optional. The configuration. The default is an EWMA drift forecaster.
    path(SimPath): Optional. The path of the episode, needed by the oracle.

    Returns:
    Forecaster: A fresh forecaster.
    '''
    config = config or ForecasterConfig()
    return registry.forecasters.get(config.kind)(config, path)
