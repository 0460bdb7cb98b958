import numpy as np

from dataclasses import dataclass
from dataclasses import field
from pydantic import BaseModel
from pydantic import validator
from typing import List, Optional

from stablecoin_redemption_controller.constants import CONTROLLER_NAMES
from stablecoin_redemption_controller.constants import INITIAL_COLLATERAL_RATIO
from stablecoin_redemption_controller.constants import PEG_PRICE
from stablecoin_redemption_controller.controllers.controllers import ControllerConfig
from stablecoin_redemption_controller.controllers.factory import create_controller
from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.core.system_state import collateralization_ratio
from stablecoin_redemption_controller.core.system_state import step_state
from stablecoin_redemption_controller.forecasting.factory import create_forecaster
from stablecoin_redemption_controller.forecasting.forecasters import ForecasterConfig
from stablecoin_redemption_controller.market.agents import AgentMarket
from stablecoin_redemption_controller.market.agents import AgentParams
from stablecoin_redemption_controller.market.scenario import ScenarioConfig
from stablecoin_redemption_controller.market.scenario import generate_path
from stablecoin_redemption_controller.utils.utils import ensure_finite


class EpisodeHeader(BaseModel):
    '''
    Everything needed to run an episode again: the controller, the seed and every configuration.
    '''
    controller: str
    seed: int
    scenario: ScenarioConfig = ScenarioConfig()
    agents: AgentParams = AgentParams()
    controller_config: ControllerConfig = ControllerConfig()
    forecaster: ForecasterConfig = ForecasterConfig()
    protocol: ProtocolParams = ProtocolParams()
    speculator: SpeculatorParams = SpeculatorParams()
    initial_supply: Optional[float] = None
    initial_collateral_ratio: float = INITIAL_COLLATERAL_RATIO

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('controller')
    def _check_controller(cls, value: str) -> str:
        if value not in CONTROLLER_NAMES:
            raise ValueError(f'The controller must be one of {", ".join(CONTROLLER_NAMES)}.')
        return value

    @validator('initial_supply')
    def _check_supply(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError('The initial supply must be strictly positive.')
        return value

    @validator('initial_collateral_ratio')
    def _check_ratio(cls, value: float) -> float:
        if value <= 0:
            raise ValueError('The initial collateralization ratio must be strictly positive.')
        return value

    def initial_state(self) -> SystemState:
        '''
        This method creates the state at step 0: the market at the peg (S₀ = D₀ unless set), α₀ at the peg and the collateral giving the initial collateralization ratio.
        '''
        supply = self.scenario.initial_demand if self.initial_supply is None else self.initial_supply
        collateral = self.initial_collateral_ratio * PEG_PRICE * supply / self.scenario.initial_eth_price
        return SystemState(supply=supply, collateral=collateral, redemption_price=PEG_PRICE)


@dataclass(frozen=True)
class EpisodeRecord:
    '''
    One step of an episode. The state fields hold the values after the step and redemption_price the α in force during it.
    '''
    t: int
    demand: float
    supply: float
    collateral: float
    eth_price: float
    market_price: float
    redemption_price: float
    rate: float
    delta_arb: float
    delta_spec: float
    gamma: float
    solver_iters: Optional[int] = None
    solver_eps: Optional[float] = None
    kkt_residual: Optional[float] = None
    fallback: bool = False


@dataclass
class EpisodeTrace:
    '''
    The header of an episode and one record per step.
    '''
    header: EpisodeHeader
    records: List[EpisodeRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        '''
        This method returns one field of every record as an array.
        '''
        if name not in EpisodeRecord.__dataclass_fields__:
            raise ValueError(f'Unknown trace column: {name}')
        return np.array([getattr(record, name) for record in self.records], dtype=float)

    @property
    def market_prices(self) -> np.ndarray:
        return self.column('market_price')

    @property
    def redemption_prices(self) -> np.ndarray:
        return self.column('redemption_price')

    @property
    def gammas(self) -> np.ndarray:
        return self.column('gamma')

    @property
    def fallbacks(self) -> int:
        return sum(1 for record in self.records if record.fallback)


def replay_episode(header: EpisodeHeader) -> EpisodeTrace:
    '''
    This function runs an episode from its header. Each step follows the same order: the controller sets the rate from the last observation, the agents trade, the state moves at the post-trade price and the forecaster sees the new observation.

    Parameters:
    header(EpisodeHeader): The episode.

    Returns:
    EpisodeTrace: The trace, identical for identical headers.
    '''
    scenario = header.scenario
    path = generate_path(scenario, header.seed)
    state = header.initial_state()
    controller = create_controller(header.controller, header.controller_config, header.protocol, header.speculator)
    forecaster = create_forecaster(header.forecaster, path)
    market = AgentMarket(header.agents, state.supply)

    observation = MarketObservation(
        stablecoin_price=path.demand[0] / state.supply,
        collateral_price=path.eth_price[0],
        demand=path.demand[0]
    )
    forecaster.update(observation)
    warm_start = None
    trace = EpisodeTrace(header=header)

    for t in range(scenario.steps):
        decision = controller.decide(state, observation, forecaster, warm_start)
        ensure_finite('redemption rate', decision.rate)
        warm_start = decision.warm_start
        demand = float(path.demand[t])
        eth_price = float(path.eth_price[t])

        priced_state = SystemState(
            supply=state.supply,
            collateral=state.collateral,
            redemption_price=state.redemption_price + decision.rate
        )
        step = market.step(priced_state, demand, eth_price, decision.rate)
        ensure_finite('market step', step.delta, step.observation.stablecoin_price)
        state = step_state(state, decision.rate, step.delta, step.observation.stablecoin_price, eth_price)
        ensure_finite('state', state.supply, state.collateral, state.redemption_price)

        observation = step.observation
        forecaster.update(observation)
        trace.records.append(EpisodeRecord(
            t=t,
            demand=demand,
            supply=state.supply,
            collateral=state.collateral,
            eth_price=eth_price,
            market_price=observation.stablecoin_price,
            redemption_price=state.redemption_price,
            rate=decision.rate,
            delta_arb=step.delta_arbitrage,
            delta_spec=step.delta_speculator,
            gamma=collateralization_ratio(state, eth_price),
            solver_iters=decision.outer_iterations,
            solver_eps=decision.final_eps,
            kkt_residual=decision.kkt_residual,
            fallback=decision.fallback
        ))

    return trace


def run_episode(
    controller: str,
    scenario: ScenarioConfig,
    seed: int,
    steps: Optional[int]=None,
    agents: Optional[AgentParams]=None,
    controller_config: Optional[ControllerConfig]=None,
    forecaster: Optional[ForecasterConfig]=None,
    protocol: Optional[ProtocolParams]=None,
    speculator: Optional[SpeculatorParams]=None
) -> EpisodeTrace:
    '''
    This function runs one episode of a controller in a scenario.

    Parameters:
    controller(str): One of 'dai', 'rai' or 'utai'.
    scenario(ScenarioConfig): The scenario.
    seed(int): The seed of the exogenous paths.
    steps(int): Optional. Shortens or extends the scenario, see ScenarioConfig.truncated.
    agents(AgentParams): Optional. Defaults are used if None. The same for the remaining configurations.

    Returns:
    EpisodeTrace: The trace, with a header that reproduces it.
    '''
    if steps is not None:
        scenario = scenario.truncated(steps)

    header = EpisodeHeader(
        controller=controller,
        seed=seed,
        scenario=scenario,
        agents=agents or AgentParams(),
        controller_config=controller_config or ControllerConfig(),
        forecaster=forecaster or ForecasterConfig(),
        protocol=protocol or ProtocolParams(),
        speculator=speculator or SpeculatorParams()
    )
    return replay_episode(header)
