import math
import numpy as np

from collections import deque
from pydantic import BaseModel
from pydantic import validator
from typing import Deque, Optional

from stablecoin_redemption_controller.constants import DRIFT_WINDOW
from stablecoin_redemption_controller.constants import EWMA_WEIGHT
from stablecoin_redemption_controller.constants import FORECASTER_KINDS
from stablecoin_redemption_controller.constants import PEG_PRICE
from stablecoin_redemption_controller.core.system_state import MarketObservation
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle


class ForecasterConfig(BaseModel):
    '''
    Which forecaster to use and how it smooths the observations.
    '''
    kind: str = 'ewma_drift'
    ewma_weight: float = EWMA_WEIGHT
    drift_window: int = DRIFT_WINDOW

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('kind')
    def _check_kind(cls, value: str) -> str:
        if value not in FORECASTER_KINDS:
            raise ValueError(f'The forecaster must be one of {", ".join(FORECASTER_KINDS)}.')
        return value

    @validator('ewma_weight')
    def _check_weight(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError('The EWMA weight must be in (0, 1].')
        return value

    @validator('drift_window')
    def _check_window(cls, value: int) -> int:
        if value < 1:
            raise ValueError('The drift window must have at least one step.')
        return value


def _check_observation(observation: MarketObservation) -> None:
    if not (observation.stablecoin_price > 0 and observation.collateral_price > 0 and observation.demand > 0):
        raise ValueError(f'Forecasters need strictly positive observations: {observation}')


class Forecaster:
    '''
    Base of the forecasters. A forecaster receives one observation per step and extrapolates demand and collateral price over the horizon; the stablecoin price is held at its latest observation.
    '''
    def __init__(self) -> None:
        self._updates = 0
        self._stablecoin_price: Optional[float] = None

    @property
    def updates(self) -> int:
        return self._updates

    def update(self, observation: MarketObservation) -> None:
        '''
        This method advances the forecaster with a new observation.

        Parameters:
        observation(MarketObservation): The observation at the end of the step.

        Returns:
        None.
        '''
        _check_observation(observation)
        self._updates += 1
        self._stablecoin_price = observation.stablecoin_price
        self._update(observation)

    def forecast(self, horizon: int) -> ForecastBundle:
        '''
        This method forecasts the stages 0..T.

        Parameters:
        horizon(int): Number of steps T.

        Returns:
        ForecastBundle: The forecasts, with r̂[t] = p̂_c[t+1] / p̂_c[t].
        '''
        if horizon < 1:
            raise ValueError('The horizon must have at least one step.')

        demand, collateral_price = self._forecast(horizon)
        stablecoin_price = PEG_PRICE if self._stablecoin_price is None else self._stablecoin_price
        return ForecastBundle.from_levels(demand, collateral_price, stablecoin_price)

    def _require_history(self) -> None:
        if self._updates == 0:
            raise ValueError(f'{type(self).__name__} needs at least one observation before forecasting.')

    def _update(self, observation: MarketObservation) -> None:
        raise NotImplementedError

    def _forecast(self, horizon: int):
        raise NotImplementedError


class PersistenceForecaster(Forecaster):
    '''
    Repeats the last observed levels.
    '''
    def __init__(self) -> None:
        super().__init__()
        self._demand = None
        self._collateral_price = None

    def _update(self, observation: MarketObservation) -> None:
        self._demand = observation.demand
        self._collateral_price = observation.collateral_price

    def _forecast(self, horizon: int):
        self._require_history()
        return np.full(horizon + 1, self._demand), np.full(horizon + 1, self._collateral_price)


class _SmoothedSeries:
    '''
    Exponentially smoothed level of a positive series and its mean log-return over a window.
    '''
    def __init__(self, weight: float, window: int) -> None:
        self._weight = weight
        self._level: Optional[float] = None
        self._history: Deque[float] = deque(maxlen=window + 1)

    def update(self, value: float) -> None:
        self._level = value if self._level is None else self._weight * value + (1 - self._weight) * self._level
        self._history.append(value)

    @property
    def level(self) -> Optional[float]:
        return self._level

    @property
    def drift(self) -> float:
        if len(self._history) < 2:
            return 0.0
        # The mean of consecutive log-returns telescopes
        return (math.log(self._history[-1]) - math.log(self._history[0])) / (len(self._history) - 1)

    def extrapolate(self, horizon: int) -> np.ndarray:
        return self._level * np.exp(self.drift * np.arange(horizon + 1))


class EwmaDriftForecaster(Forecaster):
    '''
    Smooths each series with an EWMA and compounds the mean log-drift of the last window of observations: x̂[t] = level·exp(d·t).
    '''
    def __init__(self, ewma_weight: float=EWMA_WEIGHT, drift_window: int=DRIFT_WINDOW) -> None:
        super().__init__()
        if not 0 < ewma_weight <= 1:
            raise ValueError('The EWMA weight must be in (0, 1].')
        if drift_window < 1:
            raise ValueError('The drift window must have at least one step.')

        self._demand = _SmoothedSeries(ewma_weight, drift_window)
        self._collateral_price = _SmoothedSeries(ewma_weight, drift_window)

    @property
    def demand_level(self) -> Optional[float]:
        return self._demand.level

    @property
    def collateral_price_level(self) -> Optional[float]:
        return self._collateral_price.level

    def _update(self, observation: MarketObservation) -> None:
        self._demand.update(observation.demand)
        self._collateral_price.update(observation.collateral_price)

    def _forecast(self, horizon: int):
        self._require_history()
        return self._demand.extrapolate(horizon), self._collateral_price.extrapolate(horizon)


class OracleForecaster(Forecaster):
    '''
    Reads the true future of a generated path. Updates only move its position: after n observations the forecast starts at step n - 1. Past the end of the path the last values are repeated.
    '''
    def __init__(self, demand: np.ndarray, collateral_price: np.ndarray) -> None:
        super().__init__()
        self._demand_path = np.asarray(demand, dtype=float)
        self._collateral_price_path = np.asarray(collateral_price, dtype=float)
        if self._demand_path.shape != self._collateral_price_path.shape or self._demand_path.ndim != 1 or len(self._demand_path) == 0:
            raise ValueError('The oracle needs two paths of the same length.')

    def _update(self, observation: MarketObservation) -> None:
        pass

    def _slice(self, path: np.ndarray, horizon: int) -> np.ndarray:
        start = max(self._updates - 1, 0)
        values = path[start:start + horizon + 1]
        if len(values) == 0:
            values = path[-1:]
        return np.append(values, np.full(horizon + 1 - len(values), values[-1]))

    def _forecast(self, horizon: int):
        return self._slice(self._demand_path, horizon), self._slice(self._collateral_price_path, horizon)
