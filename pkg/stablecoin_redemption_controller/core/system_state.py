import math

from dataclasses import dataclass
from pydantic import BaseModel
from pydantic import validator

from stablecoin_redemption_controller.constants import ARBITRAGE_WEIGHT
from stablecoin_redemption_controller.constants import DEFAULT_HORIZON
from stablecoin_redemption_controller.constants import DISCOUNT
from stablecoin_redemption_controller.constants import MIN_COLLATERAL_RATIO
from stablecoin_redemption_controller.constants import PEG_PRICE
from stablecoin_redemption_controller.constants import WEIGHT_CAP
from stablecoin_redemption_controller.constants import WEIGHT_TOLERANCE


@dataclass(frozen=True)
class SystemState:
    '''
    Protocol-visible state of the stablecoin: token supply, collateral units locked in vaults and the redemption price in USD per token.
    '''
    supply: float
    collateral: float
    redemption_price: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.supply) and math.isfinite(self.collateral) and math.isfinite(self.redemption_price)):
            raise ValueError(f'The state must be finite: {self}')
        if self.supply < 0:
            raise ValueError(f'The supply can not be negative: {self.supply}')
        if self.collateral < 0:
            raise ValueError(f'The collateral can not be negative: {self.collateral}')
        if self.redemption_price <= 0:
            raise ValueError(f'The redemption price must be positive: {self.redemption_price}')


@dataclass(frozen=True)
class MarketObservation:
    '''
    What the protocol sees from the market at the end of a step.
    '''
    stablecoin_price: float
    collateral_price: float
    demand: float
    realized_delta: float = 0.0

    def __post_init__(self) -> None:
        if not (self.stablecoin_price > 0 and self.collateral_price > 0 and self.demand > 0):
            raise ValueError(f'Prices and demand must be strictly positive: {self}')


class SpeculatorParams(BaseModel):
    '''
    Parameters of the speculator's utility and of its vault constraint.
    '''
    discount: float = DISCOUNT
    arb_weight: float = ARBITRAGE_WEIGHT
    min_collateral_ratio: float = MIN_COLLATERAL_RATIO

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('discount')
    def _check_discount(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError('The discount must be in (0, 1].')
        return value

    @validator('arb_weight')
    def _check_arb_weight(cls, value: float) -> float:
        if value < 0:
            raise ValueError('The arbitrage weight can not be negative.')
        return value

    @validator('min_collateral_ratio')
    def _check_ratio(cls, value: float) -> float:
        if value <= 1:
            raise ValueError('The minimum collateralization ratio must be greater than 1.')
        return value


class ProtocolParams(BaseModel):
    '''
    Parameters of the protocol's cost: the peg, the horizon and the adaptive weight policy.
    '''
    peg: float = PEG_PRICE
    horizon: int = DEFAULT_HORIZON
    weight_tolerance: float = WEIGHT_TOLERANCE
    weight_cap: float = WEIGHT_CAP

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('peg', 'weight_tolerance', 'weight_cap')
    def _check_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError('Must be strictly positive.')
        return value

    @validator('horizon')
    def _check_horizon(cls, value: int) -> int:
        if value < 1:
            raise ValueError('The horizon must have at least one step.')
        return value


def step_state(state: SystemState, rate: float, delta: float, stablecoin_price: float, collateral_price: float) -> SystemState:
    '''
    This function applies one transition of the system: the redemption price moves by the rate, the supply by the minted (or burnt) tokens and the collateral by the tokens converted at the current prices.

    Parameters:
    state(SystemState): The state before the transition.
    rate(float): The change of the redemption price δα.
    delta(float): Tokens minted (positive) or burnt (negative).
    stablecoin_price(float): Market price of the token.
    collateral_price(float): Market price of one collateral unit.

    Returns:
    SystemState: The state after the transition.
    '''
    if stablecoin_price <= 0 or collateral_price <= 0:
        raise ValueError('Prices must be strictly positive.')

    redemption_price = state.redemption_price + rate
    supply = state.supply + delta
    collateral = state.collateral + (stablecoin_price / collateral_price) * delta
    if redemption_price <= 0:
        raise ValueError(f'The transition leads to a nonpositive redemption price: {redemption_price}')
    if supply < 0:
        raise ValueError(f'The transition leads to a negative supply: {supply}')
    if collateral < 0:
        raise ValueError(f'The transition leads to a negative collateral: {collateral}')

    return SystemState(supply=supply, collateral=collateral, redemption_price=redemption_price)


def collateralization_ratio(state: SystemState, collateral_price: float) -> float:
    '''
    This function calculates the collateralization ratio Γ = C·p_c / (α·S) of the system.

    Parameters:
    state(SystemState): The current state.
    collateral_price(float): Market price of one collateral unit.

    Returns:
    float: The collateralization ratio.
    '''
    if state.supply == 0:
        raise ValueError('The collateralization ratio is undefined when the supply is 0.')

    return state.collateral * collateral_price / (state.redemption_price * state.supply)


def vault_feasible(state: SystemState, collateral_price: float, min_ratio: float) -> bool:
    '''
    This function checks that the vaults are safe from liquidation, that is Γ ≥ β.
    '''
    return collateralization_ratio(state, collateral_price) >= min_ratio
