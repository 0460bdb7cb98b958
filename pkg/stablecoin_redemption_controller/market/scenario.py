import numpy as np

from dataclasses import dataclass
from pydantic import BaseModel
from pydantic import root_validator
from pydantic import validator
from typing import List, Optional

from stablecoin_redemption_controller.constants import CRASH_LENGTH
from stablecoin_redemption_controller.constants import CRASH_RATE
from stablecoin_redemption_controller.constants import CRASH_START
from stablecoin_redemption_controller.constants import DEMAND_FLOOR_FRACTION
from stablecoin_redemption_controller.constants import DEMAND_SIGMA
from stablecoin_redemption_controller.constants import DRIFT_MU
from stablecoin_redemption_controller.constants import EPISODE_STEPS
from stablecoin_redemption_controller.constants import ETH_SIGMA
from stablecoin_redemption_controller.constants import INITIAL_DEMAND
from stablecoin_redemption_controller.constants import INITIAL_ETH_PRICE
from stablecoin_redemption_controller.constants import SCENARIO_KINDS
from stablecoin_redemption_controller.constants import STRESS_SHOCKS
from stablecoin_redemption_controller.constants import STRESS_SIGMA
from stablecoin_redemption_controller.constants import SUSTAINED_SHOCK
from stablecoin_redemption_controller.utils.utils import build_model
from stablecoin_redemption_controller.utils.utils import counter_based_generator

DEMAND_STREAM = 0
ETH_STREAM = 1


class ShockConfig(BaseModel):
    '''
    An additive demand shock of magnitude·D₀. It holds for duration steps after its start and then decays exponentially.
    '''
    step: int
    magnitude: float
    decay: float
    duration: int = 0

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('step', 'duration')
    def _check_nonnegative_step(cls, value: int) -> int:
        if value < 0:
            raise ValueError('Steps can not be negative.')
        return value

    @validator('decay')
    def _check_decay(cls, value: float) -> float:
        if value < 0:
            raise ValueError('The decay can not be negative.')
        return value

    @property
    def end(self) -> int:
        return self.step + self.duration

    def offset(self, steps: np.ndarray, initial_demand: float) -> np.ndarray:
        '''
        This method calculates the demand added by the shock at every step.
        '''
        plateau = self.magnitude * initial_demand
        decayed = plateau * np.exp(-self.decay * np.maximum(steps - self.end, 0))
        return np.where(steps >= self.step, decayed, 0.0)


class CrashConfig(BaseModel):
    '''
    A deterministic segment of the collateral price: it changes by rate per step for length steps from start.
    '''
    start: int = CRASH_START
    length: int = CRASH_LENGTH
    rate: float = CRASH_RATE

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('start', 'length')
    def _check_nonnegative(cls, value: int) -> int:
        if value < 0:
            raise ValueError('Steps can not be negative.')
        return value

    @validator('rate')
    def _check_rate(cls, value: float) -> float:
        if value <= -1:
            raise ValueError('The crash rate must be above -1.')
        return value

    @property
    def end(self) -> int:
        return self.start + self.length


class ScenarioConfig(BaseModel):
    '''
    Exogenous processes of an episode: geometric Brownian motions for the demand and the collateral price, plus demand shocks and an optional crash of the collateral price.
    '''
    kind: str = 'default'
    steps: int = EPISODE_STEPS
    initial_demand: float = INITIAL_DEMAND
    initial_eth_price: float = INITIAL_ETH_PRICE
    demand_sigma: float = DEMAND_SIGMA
    demand_mu: float = 0.0
    eth_sigma: float = ETH_SIGMA
    eth_mu: float = 0.0
    shocks: List[ShockConfig] = []
    crash: Optional[CrashConfig] = None

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('kind')
    def _check_kind(cls, value: str) -> str:
        if value not in SCENARIO_KINDS:
            raise ValueError(f'The scenario must be one of {", ".join(SCENARIO_KINDS)}.')
        return value

    @validator('steps')
    def _check_steps(cls, value: int) -> int:
        if value < 1:
            raise ValueError('An episode needs at least one step.')
        return value

    @validator('initial_demand', 'initial_eth_price')
    def _check_initial(cls, value: float) -> float:
        if value <= 0:
            raise ValueError('Initial values must be strictly positive.')
        return value

    @validator('demand_sigma', 'eth_sigma')
    def _check_sigma(cls, value: float) -> float:
        if value < 0:
            raise ValueError('Volatilities can not be negative.')
        return value

    @root_validator(skip_on_failure=True)
    def _check_events(cls, values: dict) -> dict:
        steps = values['steps']
        late = [shock.step for shock in values.get('shocks', []) if shock.step >= steps]
        if late:
            raise ValueError(f'Shocks must start before the last step ({steps}), got {late}.')
        crash = values.get('crash')
        if crash is not None and crash.start >= steps:
            raise ValueError(f'The crash must start before the last step ({steps}), got {crash.start}.')
        return values

    def truncated(self, steps: int) -> 'ScenarioConfig':
        '''
        This method shortens the episode to steps, removing the shocks and the crash that would start at or after the new last step.

        Parameters:
        steps(int): The new number of steps.

        Returns:
        ScenarioConfig: The shortened configuration.
        '''
        values = self.dict()
        values['steps'] = steps
        values['shocks'] = [shock for shock in values['shocks'] if shock['step'] < steps]
        if values['crash'] is not None and values['crash']['start'] >= steps:
            values['crash'] = None
        return ScenarioConfig(**values)

    @property
    def recovery_start(self) -> int:
        '''
        Step where the last shock plateau or crash ends, 0 without events.
        '''
        ends = [shock.end for shock in self.shocks]
        if self.crash is not None:
            ends.append(self.crash.end)
        return min(max(ends, default=0), self.steps)


def scenario_preset(kind: str, **overrides) -> ScenarioConfig:
    '''
    This function creates the default configuration of a scenario.

    Parameters:
    kind(str): One of default, drift, stress, sustained_shock or vault_crisis.
    overrides: Fields that replace the defaults, e.g. steps=50 or demand_mu=-0.003. With fewer steps the preset events that would start at or after the last step are left out.

    Returns:
    ScenarioConfig: The configuration.
    '''
    if kind not in SCENARIO_KINDS:
        raise ValueError(f'The scenario must be one of {", ".join(SCENARIO_KINDS)}.')

    presets = {
        'default': {},
        'drift': {'demand_mu': DRIFT_MU},
        'stress': {
            'demand_sigma': STRESS_SIGMA,
            'shocks': [{'step': step, 'magnitude': magnitude, 'decay': decay} for step, magnitude, decay in STRESS_SHOCKS],
        },
        'sustained_shock': {
            'shocks': [dict(zip(('step', 'magnitude', 'decay', 'duration'), SUSTAINED_SHOCK))],
        },
        'vault_crisis': {'crash': {}},
    }
    # Preset events past a shortened episode are left out, explicit ones are validated
    steps = overrides.get('steps', EPISODE_STEPS)
    preset = presets[kind]
    if 'shocks' in preset:
        preset['shocks'] = [shock for shock in preset['shocks'] if shock['step'] < steps]
    if 'crash' in preset and CRASH_START >= steps:
        del preset['crash']
    return build_model(ScenarioConfig, overrides, kind=kind, **preset)


@dataclass(frozen=True)
class SimPath:
    '''
    Realization of the exogenous processes: demand and collateral price for the steps 0..steps.
    '''
    demand: np.ndarray
    eth_price: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, 'demand', np.asarray(self.demand, dtype=float))
        object.__setattr__(self, 'eth_price', np.asarray(self.eth_price, dtype=float))
        if self.demand.shape != self.eth_price.shape or self.demand.ndim != 1 or len(self.demand) < 2:
            raise ValueError('Demand and collateral price must be paths of the same length.')
        if not (np.all(np.isfinite(self.demand)) and np.all(np.isfinite(self.eth_price))):
            raise ValueError('The paths must be finite.')
        if np.any(self.demand <= 0) or np.any(self.eth_price <= 0):
            raise ValueError('The paths must be strictly positive.')

    @property
    def steps(self) -> int:
        return len(self.demand) - 1


def geometric_brownian_motion(initial: float, mu: float, sigma: float, shocks: np.ndarray) -> np.ndarray:
    '''
    This function builds a path X_{t+1} = X_t·exp((μ - σ²/2) + σ·Z_t) from standard normal draws Z.
    '''
    increments = (mu - 0.5 * sigma ** 2) + sigma * shocks
    return initial * np.exp(np.concatenate([[0.0], np.cumsum(increments)]))


def generate_path(config: ScenarioConfig, seed: int) -> SimPath:
    '''
    This function generates the demand and collateral price of an episode. Each process draws from its own counter-based stream keyed by the seed, so the same seed always gives the same path.

    Parameters:
    config(ScenarioConfig): The scenario.
    seed(int): The seed of the episode.

    Returns:
    SimPath: The path, strictly positive.
    '''
    steps = config.steps
    demand_draws = counter_based_generator(seed, DEMAND_STREAM).standard_normal(steps)
    eth_draws = counter_based_generator(seed, ETH_STREAM).standard_normal(steps)

    demand = geometric_brownian_motion(config.initial_demand, config.demand_mu, config.demand_sigma, demand_draws)
    time = np.arange(steps + 1)
    for shock in config.shocks:
        demand = demand + shock.offset(time, config.initial_demand)
    demand = np.maximum(demand, DEMAND_FLOOR_FRACTION * config.initial_demand)

    increments = (config.eth_mu - 0.5 * config.eth_sigma ** 2) + config.eth_sigma * eth_draws
    if config.crash is not None:
        crashing = (np.arange(steps) >= config.crash.start) & (np.arange(steps) < config.crash.end)
        increments = np.where(crashing, np.log1p(config.crash.rate), increments)
    eth_price = config.initial_eth_price * np.exp(np.concatenate([[0.0], np.cumsum(increments)]))

    return SimPath(demand=demand, eth_price=eth_price, seed=seed)
