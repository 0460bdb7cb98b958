'''
This module contains the exogenous scenarios and the market agents.
'''

from stablecoin_redemption_controller.market.agents import AgentMarket
from stablecoin_redemption_controller.market.agents import AgentMemory
from stablecoin_redemption_controller.market.agents import AgentParams
from stablecoin_redemption_controller.market.agents import MarketStep
from stablecoin_redemption_controller.market.agents import arbitrageur_action
from stablecoin_redemption_controller.market.agents import clamp_supply_change
from stablecoin_redemption_controller.market.agents import crisis_amplify
from stablecoin_redemption_controller.market.agents import discounted_sum
from stablecoin_redemption_controller.market.agents import market_step
from stablecoin_redemption_controller.market.agents import speculator_action
from stablecoin_redemption_controller.market.scenario import CrashConfig
from stablecoin_redemption_controller.market.scenario import ScenarioConfig
from stablecoin_redemption_controller.market.scenario import ShockConfig
from stablecoin_redemption_controller.market.scenario import SimPath
from stablecoin_redemption_controller.market.scenario import generate_path
from stablecoin_redemption_controller.market.scenario import scenario_preset
