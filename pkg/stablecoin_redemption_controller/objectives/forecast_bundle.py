import numpy as np

from dataclasses import dataclass
from dataclasses import field


@dataclass(frozen=True)
class ForecastBundle:
    '''
    Forecasts over a horizon of T steps: demand, collateral price and stablecoin price for the stages 0..T and the collateral one-step returns for 0..T-1.

    To create one from price levels, use ForecastBundle.from_levels, which derives the returns.
    '''
    demand: np.ndarray
    collateral_price: np.ndarray
    stablecoin_price: np.ndarray
    returns: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        arrays = {
            'demand': self.demand,
            'collateral_price': self.collateral_price,
            'stablecoin_price': self.stablecoin_price,
        }
        for name, values in arrays.items():
            values = np.asarray(values, dtype=float)
            if values.ndim != 1 or len(values) < 2:
                raise ValueError(f'The {name} forecast must be a vector with at least two stages.')
            if not np.all(np.isfinite(values)) or np.any(values <= 0):
                raise ValueError(f'The {name} forecast must be strictly positive.')
            object.__setattr__(self, name, values)

        horizon = len(self.demand) - 1
        if len(self.collateral_price) != horizon + 1 or len(self.stablecoin_price) != horizon + 1:
            raise ValueError('Every forecast must have the same number of stages.')

        returns = self.collateral_price[1:] / self.collateral_price[:-1] if self.returns is None else np.asarray(self.returns, dtype=float)
        if returns.shape != (horizon,):
            raise ValueError(f'The returns must have {horizon} entries.')
        if np.any(returns <= 0):
            raise ValueError('The returns must be strictly positive.')
        object.__setattr__(self, 'returns', returns)

    @property
    def horizon(self) -> int:
        return len(self.demand) - 1

    @classmethod
    def from_levels(cls, demand: np.ndarray, collateral_price: np.ndarray, stablecoin_price: float) -> 'ForecastBundle':
        '''
        This method creates the bundle from demand and collateral price levels, holding the stablecoin price at its current observation over the whole horizon.

        Parameters:
        demand(np.ndarray): Demand forecast for the stages 0..T.
        collateral_price(np.ndarray): Collateral price forecast for the stages 0..T.
        stablecoin_price(float): The current market price of the token.

        Returns:
        ForecastBundle: The bundle, with returns r[t] = p_c[t+1] / p_c[t].
        '''
        demand = np.asarray(demand, dtype=float)
        return cls(
            demand=demand,
            collateral_price=np.asarray(collateral_price, dtype=float),
            stablecoin_price=np.full(len(demand), float(stablecoin_price))
        )
