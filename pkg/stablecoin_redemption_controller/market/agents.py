from dataclasses import dataclass
from dataclasses import field
from pydantic import BaseModel
from pydantic import validator
from typing import List, Sequence

from stablecoin_redemption_controller.constants import ARBITRAGE_GAIN
from stablecoin_redemption_controller.constants import CRISIS_MULTIPLIER
from stablecoin_redemption_controller.constants import CRISIS_THRESHOLD
from stablecoin_redemption_controller.constants import MEMORY_CUTOFF
from stablecoin_redemption_controller.constants import MEMORY_DISCOUNT
from stablecoin_redemption_controller.constants import RETURN_SMOOTHING
from stablecoin_redemption_controller.constants import SPECULATOR_GAIN
from stablecoin_redemption_controller.constants import SUPPLY_FLOOR_FRACTION
from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.core.system_state import collateralization_ratio
from stablecoin_redemption_controller.objectives.speculator_utility import predicted_price

SPECULATOR_MODES = ('prose', 'printed')


class AgentParams(BaseModel):
    '''
    Gains and memory of the market agents.

    speculator_mode selects the speculator's rule: 'prose' responds to the redemption rate and the expected ETH return, 'printed' reuses the arbitrageur's rule with the speculator's gain.
    '''
    arbitrage_gain: float = ARBITRAGE_GAIN
    speculator_gain: float = SPECULATOR_GAIN
    memory_discount: float = MEMORY_DISCOUNT
    memory_cutoff: float = MEMORY_CUTOFF
    crisis_threshold: float = CRISIS_THRESHOLD
    crisis_multiplier: float = CRISIS_MULTIPLIER
    return_smoothing: float = RETURN_SMOOTHING
    supply_floor_fraction: float = SUPPLY_FLOOR_FRACTION
    speculator_mode: str = 'prose'

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('arbitrage_gain', 'speculator_gain')
    def _check_gain(cls, value: float) -> float:
        if value < 0:
            raise ValueError('Gains can not be negative.')
        return value

    @validator('memory_discount')
    def _check_discount(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError('The memory discount must be in (0, 1).')
        return value

    @validator('memory_cutoff', 'supply_floor_fraction')
    def _check_cutoff(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError('Must be in (0, 1).')
        return value

    @validator('crisis_threshold')
    def _check_threshold(cls, value: float) -> float:
        if value <= 0:
            raise ValueError('The crisis threshold must be strictly positive.')
        return value

    @validator('crisis_multiplier')
    def _check_multiplier(cls, value: float) -> float:
        if value < 1:
            raise ValueError('The crisis multiplier must be at least 1.')
        return value

    @validator('return_smoothing')
    def _check_smoothing(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError('The return smoothing must be in (0, 1].')
        return value

    @validator('speculator_mode')
    def _check_mode(cls, value: str) -> str:
        if value not in SPECULATOR_MODES:
            raise ValueError(f'The speculator mode must be one of {", ".join(SPECULATOR_MODES)}.')
        return value


def discounted_sum(history: Sequence[float], discount: float, cutoff: float=MEMORY_CUTOFF) -> float:
    '''
    This function calculates Σ_k discount^k · history[t - k], newest value last, dropping the terms whose weight falls under the cutoff.

    Parameters:
    history(Sequence[float]): Values from the oldest to the newest.
    discount(float): Memory discount in (0, 1).
    cutoff(float): Smallest weight kept.

    Returns:
    float: The discounted sum.
    '''
    total = 0.0
    weight = 1.0
    for value in reversed(history):
        if weight < cutoff:
            break
        total += weight * value
        weight *= discount
    return total


def arbitrageur_action(residuals: Sequence[float], gain: float, memory_discount: float, cutoff: float=MEMORY_CUTOFF) -> float:
    '''
    This function calculates the tokens traded by the arbitrageur: K_A·Σ γ_m^k (p_mkt - α) over the discounted history of residuals. Positive values mint.

    Parameters:
    residuals(Sequence[float]): History of p_mkt - α, newest last.
    gain(float): K_A. With 0 the arbitrageur is inactive.
    memory_discount(float): γ_m.
    cutoff(float): Smallest weight kept.

    Returns:
    float: Δ^A.
    '''
    if gain < 0:
        raise ValueError('The arbitrage gain can not be negative.')
    if gain == 0:
        return 0.0

    return gain * discounted_sum(residuals, memory_discount, cutoff)


def speculator_action(
    rates: Sequence[float],
    expected_returns: Sequence[float],
    gain: float,
    memory_discount: float,
    cutoff: float=MEMORY_CUTOFF
) -> float:
    '''
    This function calculates the tokens traded by the CDP speculator: K_S·Σ γ_m^k [-δα + (r̂ - 1)]. It mints when debt gets cheaper or ETH is expected to rise and burns otherwise.

    Parameters:
    rates(Sequence[float]): History of redemption rates δα, newest last.
    expected_returns(Sequence[float]): History of expected ETH gross returns r̂, aligned with the rates.
    gain(float): K_S.
    memory_discount(float): γ_m.
    cutoff(float): Smallest weight kept.

    Returns:
    float: Δ^S.
    '''
    if gain < 0:
        raise ValueError('The speculator gain can not be negative.')
    if len(rates) != len(expected_returns):
        raise ValueError('The rates and the expected returns must have the same length.')
    if gain == 0:
        return 0.0

    incentives = [-rate + (expected_return - 1.0) for rate, expected_return in zip(rates, expected_returns)]
    return gain * discounted_sum(incentives, memory_discount, cutoff)


def crisis_amplify(delta: float, ratio: float, threshold: float, multiplier: float) -> float:
    '''
    This function multiplies the speculator's burns when the collateralization ratio is under the crisis threshold. Mints are never amplified.
    '''
    if multiplier < 1:
        raise ValueError('The crisis multiplier must be at least 1.')

    if ratio < threshold and delta < 0:
        return multiplier * delta
    return delta


def clamp_supply_change(delta: float, state: SystemState, demand: float, eth_price: float, supply_floor: float) -> float:
    '''
    This function limits burns so the supply stays above its floor and the collateral stays nonnegative at the post-trade price, that is S + Δ ≥ D·S / (C·p_c + D).

    Parameters:
    delta(float): Requested change of the supply.
    state(SystemState): State before the trade.
    demand(float): Demand of the step.
    eth_price(float): Collateral price of the step.
    supply_floor(float): Smallest supply allowed.

    Returns:
    float: The clamped change.
    '''
    # The margin keeps C' ≥ 0 under rounding
    collateral_safe = (1 + 1e-9) * demand * state.supply / (state.collateral * eth_price + demand)
    smallest = max(supply_floor, collateral_safe)
    return max(delta, smallest - state.supply)


@dataclass
class AgentMemory:
    '''
    Histories the agents respond to, newest last.
    '''
    residuals: List[float] = field(default_factory=list)
    rates: List[float] = field(default_factory=list)
    expected_returns: List[float] = field(default_factory=list)
    last_eth_price: float = None


@dataclass(frozen=True)
class MarketStep:
    '''
    Outcome of one step of the market.
    '''
    observation: MarketObservation
    delta_arbitrage: float
    delta_speculator: float
    delta: float
    collateral_ratio: float
    amplified: bool
    clamped: bool


def market_step(
    state: SystemState,
    demand: float,
    eth_price: float,
    rate: float,
    params: AgentParams,
    memory: AgentMemory,
    supply_floor: float
) -> MarketStep:
    '''
    This function runs the agents for one step. They see the pre-trade price D/S and the redemption price just set by the controller; the market then clears at the post-trade price D/(S + Δ).

    Parameters:
    state(SystemState): State at the start of the step, with the redemption price already moved by the rate.
    demand(float): Demand of the step.
    eth_price(float): Collateral price of the step.
    rate(float): Redemption rate δα applied this step.
    params(AgentParams): Gains and memory of the agents.
    memory(AgentMemory): Histories of the agents. It is updated.
    supply_floor(float): Smallest supply allowed.

    Returns:
    MarketStep: The observation and the trades.
    '''
    if state.supply <= 0:
        raise ValueError('The market needs a strictly positive supply.')
    if demand <= 0 or eth_price <= 0:
        raise ValueError('Demand and collateral price must be strictly positive.')

    realized_return = 1.0 if memory.last_eth_price is None else eth_price / memory.last_eth_price
    previous_estimate = memory.expected_returns[-1] if len(memory.expected_returns) > 0 else 1.0
    expected_return = 1.0 if memory.last_eth_price is None else (
        (1 - params.return_smoothing) * previous_estimate + params.return_smoothing * realized_return
    )
    memory.last_eth_price = eth_price
    memory.residuals.append(demand / state.supply - state.redemption_price)
    memory.rates.append(rate)
    memory.expected_returns.append(expected_return)

    delta_arbitrage = arbitrageur_action(memory.residuals, params.arbitrage_gain, params.memory_discount, params.memory_cutoff)
    if params.speculator_mode == 'printed':
        delta_speculator = arbitrageur_action(memory.residuals, params.speculator_gain, params.memory_discount, params.memory_cutoff)
    else:
        delta_speculator = speculator_action(
            memory.rates, memory.expected_returns, params.speculator_gain, params.memory_discount, params.memory_cutoff
        )

    ratio = collateralization_ratio(state, eth_price)
    amplified_speculator = crisis_amplify(delta_speculator, ratio, params.crisis_threshold, params.crisis_multiplier)
    requested = delta_arbitrage + amplified_speculator
    delta = clamp_supply_change(requested, state, demand, eth_price, supply_floor)
    price = predicted_price(demand, state.supply, delta)

    return MarketStep(
        observation=MarketObservation(stablecoin_price=price, collateral_price=eth_price, demand=demand, realized_delta=delta),
        delta_arbitrage=float(delta_arbitrage),
        delta_speculator=float(amplified_speculator),
        delta=float(delta),
        collateral_ratio=float(ratio),
        amplified=amplified_speculator != delta_speculator,
        clamped=delta != requested
    )


class AgentMarket:
    '''
    The arbitrageur and the speculator of one episode, with their memory.
    '''
    def __init__(self, params: AgentParams, initial_supply: float) -> None:
        '''
        Parameters:
        params(AgentParams): Gains and memory of the agents.
        initial_supply(float): S₀, which sets the supply floor.
        '''
        if initial_supply <= 0:
            raise ValueError('The initial supply must be strictly positive.')

        self._params = params
        self._memory = AgentMemory()
        self._supply_floor = params.supply_floor_fraction * initial_supply

    @property
    def params(self) -> AgentParams:
        return self._params

    @property
    def supply_floor(self) -> float:
        return self._supply_floor

    def step(self, state: SystemState, demand: float, eth_price: float, rate: float) -> MarketStep:
        return market_step(state, demand, eth_price, rate, self._params, self._memory, self._supply_floor)
