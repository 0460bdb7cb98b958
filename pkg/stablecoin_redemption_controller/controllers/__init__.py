'''
This module contains the controllers of the redemption price: fixed, proportional and Stackelberg.
'''

from stablecoin_redemption_controller.controllers.controllers import Controller
from stablecoin_redemption_controller.controllers.controllers import ControllerConfig
from stablecoin_redemption_controller.controllers.controllers import ControllerDecision
from stablecoin_redemption_controller.controllers.controllers import FixedController
from stablecoin_redemption_controller.controllers.controllers import ProportionalController
from stablecoin_redemption_controller.controllers.controllers import StackelbergController
from stablecoin_redemption_controller.controllers.controllers import fixed_decide
from stablecoin_redemption_controller.controllers.controllers import proportional_decide
from stablecoin_redemption_controller.controllers.controllers import stackelberg_decide
from stablecoin_redemption_controller.controllers.factory import create_controller
