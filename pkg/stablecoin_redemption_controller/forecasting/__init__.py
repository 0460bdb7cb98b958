'''
This module contains the forecasters of demand and collateral price.
'''

from stablecoin_redemption_controller.forecasting.factory import create_forecaster
from stablecoin_redemption_controller.forecasting.forecasters import EwmaDriftForecaster
from stablecoin_redemption_controller.forecasting.forecasters import Forecaster
from stablecoin_redemption_controller.forecasting.forecasters import ForecasterConfig
from stablecoin_redemption_controller.forecasting.forecasters import OracleForecaster
from stablecoin_redemption_controller.forecasting.forecasters import PersistenceForecaster
