import numpy as np

from typing import Union

ArrayLike = Union[float, np.ndarray]


def peg_error(demand: ArrayLike, supply: ArrayLike, peg: float) -> ArrayLike:
    '''
    This function calculates the error between the predicted market price D/S and the peg.

    Parameters:
    demand(float | np.ndarray): Forecast demand in USD.
    supply(float | np.ndarray): Token supply.
    peg(float): The target price.

    Returns:
    float | np.ndarray: The peg error.
    '''
    supply = np.asarray(supply, dtype=float)
    if np.any(supply <= 0):
        raise ValueError('The predicted price is undefined for a nonpositive supply.')

    error = np.asarray(demand, dtype=float) / supply - peg
    return float(error) if error.ndim == 0 else error


def adaptive_weight(error: float, tolerance: float, cap: float) -> float:
    '''
    This function calculates the weight ω_p of the rate penalty. Outside the tolerance the penalty is relaxed to 1, inside it grows as 1/|e| up to the cap.

    Parameters:
    error(float): The peg error.
    tolerance(float): Size of the band around the peg.
    cap(float): Largest weight allowed.

    Returns:
    float: The weight.
    '''
    if tolerance <= 0 or cap <= 0:
        raise ValueError('The tolerance and the cap must be strictly positive.')

    magnitude = abs(error)
    if magnitude > tolerance:
        return 1.0
    elif magnitude == 0:
        return float(cap)
    else:
        return float(min(1.0 / magnitude, cap))


def protocol_stage_cost(error: ArrayLike, rate: ArrayLike, weight: ArrayLike) -> ArrayLike:
    '''
    This function calculates the protocol's cost at one stage: e² + ω·δα² + δα·e. It works elementwise on arrays.
    '''
    return error ** 2 + weight * rate ** 2 + rate * error
