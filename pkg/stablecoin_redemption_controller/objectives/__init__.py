'''
This module contains the protocol's cost, the speculator's utility and their sums over a horizon.
'''

from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.objectives.horizon import HorizonTrajectory
from stablecoin_redemption_controller.objectives.horizon import StageEvaluation
from stablecoin_redemption_controller.objectives.horizon import evaluate_stages
from stablecoin_redemption_controller.objectives.horizon import horizon_costs
from stablecoin_redemption_controller.objectives.horizon import stage_weights
from stablecoin_redemption_controller.objectives.protocol_cost import adaptive_weight
from stablecoin_redemption_controller.objectives.protocol_cost import peg_error
from stablecoin_redemption_controller.objectives.protocol_cost import protocol_stage_cost
from stablecoin_redemption_controller.objectives.speculator_utility import predicted_price
from stablecoin_redemption_controller.objectives.speculator_utility import speculator_stage_utility
from stablecoin_redemption_controller.objectives.speculator_utility import speculator_wealth
