import numpy as np

from dataclasses import dataclass
from typing import List, Optional
from typing import Tuple

from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.objectives.protocol_cost import adaptive_weight
from stablecoin_redemption_controller.objectives.protocol_cost import peg_error
from stablecoin_redemption_controller.objectives.protocol_cost import protocol_stage_cost
from stablecoin_redemption_controller.objectives.speculator_utility import speculator_stage_utility
from stablecoin_redemption_controller.objectives.speculator_utility import speculator_wealth


@dataclass(frozen=True)
class HorizonTrajectory:
    '''
    States for the stages 0..T and controls for 0..T-1 of one horizon.
    '''
    redemption_price: np.ndarray
    rate: np.ndarray
    supply: np.ndarray
    collateral: np.ndarray
    delta: np.ndarray

    def __post_init__(self) -> None:
        for name in ('redemption_price', 'rate', 'supply', 'collateral', 'delta'):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

        horizon = len(self.rate)
        if len(self.redemption_price) != horizon + 1 or len(self.supply) != horizon + 1 or len(self.collateral) != horizon + 1:
            raise ValueError('States must have one more stage than the controls.')
        if len(self.delta) != horizon:
            raise ValueError('Both controls must have the same number of stages.')

    @property
    def horizon(self) -> int:
        return len(self.rate)


@dataclass(frozen=True)
class StageEvaluation:
    '''
    Peg error, protocol cost, speculator utility and wealth at one stage.
    '''
    peg_error: float
    stage_cost: float
    stage_utility: float
    wealth: float


def stage_weights(forecasts: ForecastBundle, supply: np.ndarray, protocol: ProtocolParams) -> np.ndarray:
    '''
    This function calculates the adaptive weight ω_p of every stage from the peg errors of a supply trajectory.

    Parameters:
    forecasts(ForecastBundle): The forecasts of the horizon.
    supply(np.ndarray): Supply for the stages 0..T.
    protocol(ProtocolParams): The peg and the weight policy.

    Returns:
    np.ndarray: One weight per stage 0..T.
    '''
    errors = peg_error(forecasts.demand, supply, protocol.peg)
    return np.array([
        adaptive_weight(error, protocol.weight_tolerance, protocol.weight_cap)
        for error in np.atleast_1d(errors)
    ])


def _check_dimensions(trajectory: HorizonTrajectory, forecasts: ForecastBundle) -> None:
    if trajectory.horizon != forecasts.horizon:
        raise ValueError(f'The trajectory has {trajectory.horizon} stages but the forecasts have {forecasts.horizon}.')


def evaluate_stages(
    trajectory: HorizonTrajectory,
    forecasts: ForecastBundle,
    protocol: ProtocolParams,
    speculator: SpeculatorParams,
    weights: Optional[np.ndarray]=None
) -> List[StageEvaluation]:
    '''
    This function evaluates every stage of a trajectory. The last stage has no controls, so its utility and rate are zero.

    Parameters:
    trajectory(HorizonTrajectory): States and controls.
    forecasts(ForecastBundle): Forecasts of the horizon.
    protocol(ProtocolParams): Protocol parameters.
    speculator(SpeculatorParams): Speculator parameters.
    weights(np.ndarray): Optional. Weight ω_p per stage. If None, the adaptive weight of each stage's own error is used.

    Returns:
    List[StageEvaluation]: One evaluation per stage 0..T.
    '''
    _check_dimensions(trajectory, forecasts)
    horizon = trajectory.horizon
    errors = np.atleast_1d(peg_error(forecasts.demand, trajectory.supply, protocol.peg))
    if weights is None:
        weights = stage_weights(forecasts, trajectory.supply, protocol)
    elif len(weights) != horizon + 1:
        raise ValueError(f'Expected {horizon + 1} weights, got {len(weights)}.')

    evaluations = []
    for t in range(horizon + 1):
        rate = trajectory.rate[t] if t < horizon else 0.0
        delta = trajectory.delta[t] if t < horizon else 0.0
        expected_return = forecasts.returns[t] if t < horizon else 1.0
        state = SystemState(
            supply=max(trajectory.supply[t], 0.0),
            collateral=max(trajectory.collateral[t], 0.0),
            redemption_price=trajectory.redemption_price[t]
        )
        utility = 0.0
        if t < horizon:
            utility = speculator_stage_utility(
                t, expected_return, forecasts.stablecoin_price[t], trajectory.redemption_price[t], delta,
                forecasts.demand[t], trajectory.supply[t], speculator.discount, speculator.arb_weight
            )
        evaluations.append(StageEvaluation(
            peg_error=float(errors[t]),
            stage_cost=float(protocol_stage_cost(errors[t], rate, weights[t])),
            stage_utility=float(utility),
            wealth=float(speculator_wealth(state, expected_return, forecasts.stablecoin_price[t], delta, forecasts.collateral_price[t]))
        ))

    return evaluations


def horizon_costs(
    trajectory: HorizonTrajectory,
    forecasts: ForecastBundle,
    protocol: ProtocolParams,
    speculator: SpeculatorParams,
    weights: Optional[np.ndarray]=None
) -> Tuple[float, float]:
    '''
    This function calculates the protocol's cost J over the stages 0..T and the speculator's objective f = -U over 0..T-1, so both agents minimize.

    Returns:
    Tuple[float, float]: (J, f).
    '''
    evaluations = evaluate_stages(trajectory, forecasts, protocol, speculator, weights)
    protocol_cost = sum(evaluation.stage_cost for evaluation in evaluations)
    speculator_objective = -sum(evaluation.stage_utility for evaluation in evaluations[:-1])
    return float(protocol_cost), float(speculator_objective)
