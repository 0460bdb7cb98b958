import numpy as np

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from stablecoin_redemption_controller.constants import MIN_COLLATERAL_RATIO
from stablecoin_redemption_controller.constants import PEG_PRICE
from stablecoin_redemption_controller.constants import REPEG_BAND
from stablecoin_redemption_controller.constants import REPEG_PERSISTENCE
from stablecoin_redemption_controller.harness.episode import EpisodeTrace

Prices = Union[EpisodeTrace, Sequence[float], np.ndarray]


def _values(trace: Prices, column: str) -> np.ndarray:
    values = trace.column(column) if isinstance(trace, EpisodeTrace) else np.asarray(trace, dtype=float)
    if values.size == 0:
        raise ValueError('The trace is empty.')
    return values


def p_mad(trace: Prices, peg: float=PEG_PRICE) -> float:
    '''
    This function calculates the mean absolute deviation of the market price from the peg.

    Parameters:
    trace(EpisodeTrace | Sequence[float]): A trace or its market prices.
    peg(float): The peg.

    Returns:
    float: The p-MAD.
    '''
    prices = _values(trace, 'market_price')
    return float(np.mean(np.abs(prices - peg)))


def r_mad(trace: Prices, redemption_prices: Optional[Sequence[float]]=None) -> float:
    '''
    This function calculates the mean absolute deviation of the market price from the redemption price in force at each step.

    Parameters:
    trace(EpisodeTrace | Sequence[float]): A trace or its market prices.
    redemption_prices(Sequence[float]): Needed when market prices are given instead of a trace.

    Returns:
    float: The r-MAD.
    '''
    prices = _values(trace, 'market_price')
    if isinstance(trace, EpisodeTrace):
        redemption_prices = trace.redemption_prices
    elif redemption_prices is None:
        raise ValueError('The redemption prices are needed to calculate the r-MAD of a price list.')
    redemption_prices = np.asarray(redemption_prices, dtype=float)
    if redemption_prices.shape != prices.shape:
        raise ValueError('Market and redemption prices must have the same length.')

    return float(np.mean(np.abs(prices - redemption_prices)))


def time_to_repeg(
    prices: Sequence[float],
    start: int,
    peg: float=PEG_PRICE,
    band: float=REPEG_BAND,
    persistence: int=REPEG_PERSISTENCE
) -> Optional[int]:
    '''
    This function finds the first step at or after start from which the price stays within the band around the peg for persistence consecutive steps.

    Returns:
    int | None: The step, or None if the price never re-pegs.
    '''
    inside = np.abs(np.asarray(prices, dtype=float) - peg) <= band
    for step in range(max(start, 0), len(inside) - persistence + 1):
        if np.all(inside[step:step + persistence]):
            return step
    return None


@dataclass(frozen=True)
class AuxiliaryMetrics:
    min_gamma: float
    time_to_repeg: Optional[int]
    solver_failures: int
    below_min_ratio: bool


def auxiliary_metrics(
    trace: EpisodeTrace,
    min_ratio: float=MIN_COLLATERAL_RATIO,
    band: float=REPEG_BAND,
    persistence: int=REPEG_PERSISTENCE
) -> AuxiliaryMetrics:
    '''
    This function calculates the smallest collateralization ratio and whether it fell below min_ratio, the re-peg time after the last shock or crash of the scenario and the number of solver fallbacks of an episode.

    Parameters:
    trace(EpisodeTrace): The episode.
    min_ratio(float): β, the smallest safe collateralization ratio.
    band(float): Half-width of the re-peg band.
    persistence(int): Steps the price must stay inside the band.

    Returns:
    AuxiliaryMetrics: The metrics.
    '''
    if len(trace) == 0:
        raise ValueError('The trace is empty.')

    gammas = trace.gammas
    start = trace.header.scenario.recovery_start
    return AuxiliaryMetrics(
        min_gamma=float(np.min(gammas)),
        time_to_repeg=time_to_repeg(trace.market_prices, start, trace.header.protocol.peg, band, persistence),
        solver_failures=trace.fallbacks,
        below_min_ratio=bool(np.min(gammas) < min_ratio)
    )


@dataclass(frozen=True)
class RunMetrics:
    '''
    Metrics of one episode.
    '''
    p_mad: float
    r_mad: float
    min_gamma: float
    time_to_repeg: Optional[int]
    solver_failures: int
    below_min_ratio: bool

    @classmethod
    def from_trace(cls, trace: EpisodeTrace, min_ratio: float=MIN_COLLATERAL_RATIO) -> 'RunMetrics':
        auxiliary = auxiliary_metrics(trace, min_ratio)
        return cls(
            p_mad=p_mad(trace, trace.header.protocol.peg),
            r_mad=r_mad(trace),
            min_gamma=auxiliary.min_gamma,
            time_to_repeg=auxiliary.time_to_repeg,
            solver_failures=auxiliary.solver_failures,
            below_min_ratio=auxiliary.below_min_ratio
        )
