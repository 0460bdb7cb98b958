from typing import Optional

from stablecoin_redemption_controller import registry
from stablecoin_redemption_controller.constants import CONTROLLER_NAMES
from stablecoin_redemption_controller.controllers.controllers import Controller
from stablecoin_redemption_controller.controllers.controllers import ControllerConfig
from stablecoin_redemption_controller.controllers.controllers import FixedController
from stablecoin_redemption_controller.controllers.controllers import ProportionalController
from stablecoin_redemption_controller.controllers.controllers import StackelbergController
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams


@registry.controllers.register('dai')
def create_dai_controller(config: ControllerConfig, protocol: ProtocolParams, speculator: SpeculatorParams) -> FixedController:
    '''
    Function that creates the fixed redemption price controller.

    Parameters:
    config(ControllerConfig): Configuration of the controller.
    protocol(ProtocolParams): Not used.
    speculator(SpeculatorParams): Not used.

    Returns:
    FixedController: The controller.
    '''
    return FixedController(config)

@registry.controllers.register('rai')
def create_rai_controller(config: ControllerConfig, protocol: ProtocolParams, speculator: SpeculatorParams) -> ProportionalController:
    '''
    Function that creates the proportional controller.

    Parameters:
    config(ControllerConfig): Configuration of the controller. Its proportional_gain and rate_bound are used.
    protocol(ProtocolParams): Not used.
    speculator(SpeculatorParams): Not used.

    Returns:
    ProportionalController: The controller.
    '''
    return ProportionalController(config)

@registry.controllers.register('utai')
def create_utai_controller(config: ControllerConfig, protocol: ProtocolParams, speculator: SpeculatorParams) -> StackelbergController:
    '''
    Function that creates the receding-horizon Stackelberg controller.

    Parameters:
    config(ControllerConfig): Configuration of the solver and the fallback.
    protocol(ProtocolParams): The protocol's cost and horizon.
    speculator(SpeculatorParams): The speculator anticipated by the controller.

    Returns:
    StackelbergController: The controller.
    '''
    return StackelbergController(config, protocol, speculator)


def create_controller(
    name: str,
    config: Optional[ControllerConfig]=None,
    protocol: Optional[ProtocolParams]=None,
    speculator: Optional[SpeculatorParams]=None
) -> Controller:
    '''
    This function creates a controller by name.

    Parameters:
    name(str): One of 'dai', 'rai' or 'utai'.
    config(ControllerConfig): Optional. Defaults are used if None.
    protocol(ProtocolParams): Optional. Defaults are used if None.
    speculator(SpeculatorParams): Optional. Defaults are used if None.

    Returns:
    Controller: The controller.
    '''
    if name not in CONTROLLER_NAMES:
        raise ValueError(f'The controller must be one of {", ".join(CONTROLLER_NAMES)}.')

    return registry.controllers.get(name)(config or ControllerConfig(), protocol or ProtocolParams(), speculator or SpeculatorParams())
