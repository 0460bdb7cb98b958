'''
This module contains the controllers of the redemption price of a crypto-backed stablecoin, the simulated market they are tested against and the studies that compare them.
'''

from stablecoin_redemption_controller.redemption_price_study import RedemptionPriceStudy
from stablecoin_redemption_controller.exceptions import ConfigError
from stablecoin_redemption_controller.exceptions import NumericalAbortError
