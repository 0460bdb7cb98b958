from stablecoin_redemption_controller.core.system_state import SystemState


def predicted_price(demand: float, supply: float, delta: float) -> float:
    '''
    This function calculates the market price after the speculator's trade, p(Δ) = D / (S + Δ).

    Parameters:
    demand(float): Forecast demand.
    supply(float): Supply before the trade.
    delta(float): Tokens minted or burnt.

    Returns:
    float: The predicted market price.
    '''
    supply_after = supply + delta
    if supply_after <= 0:
        raise ValueError(f'The predicted price is undefined for a nonpositive supply: {supply_after}')

    return demand / supply_after


def speculator_stage_utility(
    step: int,
    expected_return: float,
    stablecoin_price: float,
    redemption_price: float,
    delta: float,
    demand: float,
    supply: float,
    discount: float,
    arb_weight: float
) -> float:
    '''
    This function calculates the speculator's utility at one stage: the discounted marginal gain of minting Δ tokens minus the misalignment between the redemption price and the predicted market price.

    Parameters:
    step(int): Stage index t, used as the exponent of the discount.
    expected_return(float): Forecast one-step return of the collateral r̂.
    stablecoin_price(float): Forecast stablecoin price p̂.
    redemption_price(float): Redemption price α at the stage.
    delta(float): Tokens minted (positive) or burnt (negative).
    demand(float): Forecast demand, used by the price response.
    supply(float): Supply at the stage, before the trade.
    discount(float): Discount factor γ in (0, 1].
    arb_weight(float): Weight w_S of the misalignment penalty.

    Returns:
    float: The utility.
    '''
    if not 0 < discount <= 1:
        raise ValueError('The discount must be in (0, 1].')

    price = predicted_price(demand, supply, delta)
    gain = discount ** step * (expected_return * stablecoin_price - redemption_price) * delta
    return gain - arb_weight * (redemption_price - price) ** 2


def speculator_wealth(state: SystemState, expected_return: float, stablecoin_price: float, delta: float, collateral_price: float) -> float:
    '''
    This function calculates the speculator's expected extractable wealth after one decision: collateral value (grown by the return) minus the liabilities at the redemption price. It is a diagnostic, the solver never optimizes it directly.
    '''
    assets = expected_return * (state.collateral * collateral_price + stablecoin_price * delta)
    return assets - state.redemption_price * (state.supply + delta)
