import numpy as np

from dataclasses import dataclass
from pydantic import BaseModel
from pydantic import validator
from time import time
from typing import Dict, Optional

from stablecoin_redemption_controller.constants import FALLBACK_GAIN
from stablecoin_redemption_controller.constants import INNER_MAX_ITERATIONS
from stablecoin_redemption_controller.constants import INNER_TOLERANCE
from stablecoin_redemption_controller.constants import MAX_OUTER_ITERATIONS
from stablecoin_redemption_controller.constants import MU_TOLERANCE
from stablecoin_redemption_controller.constants import PROPORTIONAL_GAIN
from stablecoin_redemption_controller.constants import RATE_BOUND
from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.forecasting.forecasters import Forecaster
from stablecoin_redemption_controller.objectives.horizon import HorizonTrajectory
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem
from stablecoin_redemption_controller.solver.mpcc import HorizonSolution
from stablecoin_redemption_controller.solver.mpcc import solve_mpcc


class ControllerConfig(BaseModel):
    '''
    Gains of the proportional rule and settings of the Stackelberg solver.
    '''
    proportional_gain: float = PROPORTIONAL_GAIN
    fallback_gain: float = FALLBACK_GAIN
    rate_bound: float = RATE_BOUND
    mu_tol: float = MU_TOLERANCE
    max_outer: int = MAX_OUTER_ITERATIONS
    inner_tol: float = INNER_TOLERANCE
    max_inner_iter: int = INNER_MAX_ITERATIONS

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('proportional_gain', 'fallback_gain', 'rate_bound', 'mu_tol', 'inner_tol')
    def _check_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError('Must be strictly positive.')
        return value

    @validator('max_outer')
    def _check_outer(cls, value: int) -> int:
        if value < 1:
            raise ValueError('At least one outer iteration is needed.')
        return value

    @validator('max_inner_iter')
    def _check_inner(cls, value: int) -> int:
        if value < 0:
            raise ValueError('The iteration budget can not be negative.')
        return value


@dataclass(frozen=True)
class ControllerDecision:
    '''
    The redemption rate chosen for one step. The solver fields stay None for the baselines.
    '''
    rate: float
    fallback: bool = False
    outer_iterations: Optional[int] = None
    inner_iterations: Optional[int] = None
    final_eps: Optional[float] = None
    kkt_residual: Optional[float] = None
    wall_time: Optional[float] = None
    message: str = ''
    solution: Optional[HorizonSolution] = None

    @property
    def diagnostics(self) -> Dict[str, object]:
        '''
        Solver diagnostics of the decision, empty for the baselines.
        '''
        if self.solution is None and not self.fallback:
            return {}
        return {
            'outer_iterations': self.outer_iterations,
            'inner_iterations': self.inner_iterations,
            'final_eps': self.final_eps,
            'kkt_residual': self.kkt_residual,
            'wall_time': self.wall_time,
            'fallback': self.fallback,
            'message': self.message,
        }

    @property
    def warm_start(self) -> Optional[HorizonTrajectory]:
        '''
        Trajectory to warm start the next horizon with, when the solve was usable.
        '''
        if self.solution is None or self.fallback:
            return None
        return self.solution.trajectory


def clip_rate(rate: float, bound: float) -> float:
    return float(np.clip(rate, -bound, bound))


def fixed_decide(state: SystemState, observation: MarketObservation) -> ControllerDecision:
    '''
    This function keeps the redemption price where it is.
    '''
    return ControllerDecision(rate=0.0)


def proportional_decide(state: SystemState, observation: MarketObservation, gain: float) -> ControllerDecision:
    '''
    This function moves the redemption price proportionally to the error e = α - p_stb: δα = K_p·e. The rate is not bounded.

    Parameters:
    state(SystemState): The current state.
    observation(MarketObservation): The latest observation.
    gain(float): K_p.

    Returns:
    ControllerDecision: The decision.
    '''
    if gain <= 0:
        raise ValueError('The proportional gain must be strictly positive.')

    error = state.redemption_price - observation.stablecoin_price
    return ControllerDecision(rate=gain * error)


def stackelberg_decide(
    state: SystemState,
    observation: MarketObservation,
    forecaster: Forecaster,
    protocol: ProtocolParams,
    speculator: SpeculatorParams,
    config: ControllerConfig,
    warm_start: Optional[HorizonTrajectory]=None
) -> ControllerDecision:
    '''
    This function solves the receding-horizon game over the forecasts and applies the first rate of the solution. When the solver fails the proportional rule with the fallback gain is used instead, and the decision is flagged.

    Parameters:
    state(SystemState): The current state.
    observation(MarketObservation): The latest observation, already given to the forecaster.
    forecaster(Forecaster): The forecaster of the episode.
    protocol(ProtocolParams): Peg, horizon and weight policy.
    speculator(SpeculatorParams): Parameters of the follower.
    config(ControllerConfig): Solver settings and gains.
    warm_start(HorizonTrajectory): Optional. The trajectory of the previous decision.

    Returns:
    ControllerDecision: The decision with the solver diagnostics.
    '''
    start = time()
    forecasts = forecaster.forecast(protocol.horizon)
    problem = HorizonProblem(
        initial_state=state,
        forecasts=forecasts,
        protocol=protocol,
        speculator=speculator,
        rate_bound=config.rate_bound
    )
    solution = solve_mpcc(
        problem,
        mu_tol=config.mu_tol,
        max_outer=config.max_outer,
        warm_start=warm_start,
        inner_tol=config.inner_tol,
        max_inner_iter=config.max_inner_iter
    )

    fallback = not solution.usable
    if fallback:
        rate = clip_rate(proportional_decide(state, observation, config.fallback_gain).rate, config.rate_bound)
    else:
        rate = clip_rate(solution.first_rate, config.rate_bound)
    end = time()

    return ControllerDecision(
        rate=rate,
        fallback=fallback,
        outer_iterations=solution.outer_iterations,
        inner_iterations=solution.inner_iterations,
        final_eps=solution.final_eps,
        kkt_residual=solution.kkt_residual,
        wall_time=end - start,
        message=solution.message,
        solution=solution
    )


class Controller:
    '''
    Base of the controllers. Controllers hold no state between calls: the warm start of the Stackelberg controller is passed explicitly, so identical inputs give identical decisions.
    '''
    name = ''

    def __init__(self, config: ControllerConfig) -> None:
        self._config = config

    @property
    def config(self) -> ControllerConfig:
        return self._config

    def decide(
        self,
        state: SystemState,
        observation: MarketObservation,
        forecaster: Optional[Forecaster]=None,
        warm_start: Optional[HorizonTrajectory]=None
    ) -> ControllerDecision:
        raise NotImplementedError


class FixedController(Controller):
    '''
    Holds the redemption price at its initial value.
    '''
    name = 'dai'

    def decide(self, state, observation, forecaster=None, warm_start=None) -> ControllerDecision:
        return fixed_decide(state, observation)


class ProportionalController(Controller):
    '''
    Proportional feedback on the gap between the redemption price and the market price.
    '''
    name = 'rai'

    def decide(self, state, observation, forecaster=None, warm_start=None) -> ControllerDecision:
        return proportional_decide(state, observation, self._config.proportional_gain)


class StackelbergController(Controller):
    '''
    Receding-horizon Stackelberg controller: the protocol leads, anticipating the speculator's best response over the forecast horizon.
    '''
    name = 'utai'

    def __init__(self, config: ControllerConfig, protocol: ProtocolParams, speculator: SpeculatorParams) -> None:
        super().__init__(config)
        self._protocol = protocol
        self._speculator = speculator

    @property
    def protocol(self) -> ProtocolParams:
        return self._protocol

    def decide(self, state, observation, forecaster=None, warm_start=None) -> ControllerDecision:
        if forecaster is None:
            raise ValueError('The Stackelberg controller needs a forecaster.')

        return stackelberg_decide(state, observation, forecaster, self._protocol, self._speculator, self._config, warm_start)
