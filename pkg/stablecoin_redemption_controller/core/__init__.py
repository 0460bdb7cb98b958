'''
This module contains the domain types of the stablecoin system and its one-step dynamics.
'''

from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.core.system_state import collateralization_ratio
from stablecoin_redemption_controller.core.system_state import step_state
from stablecoin_redemption_controller.core.system_state import vault_feasible
