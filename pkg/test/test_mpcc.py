import numpy as np
import pytest

from conftest import flat_problem
from stablecoin_redemption_controller.constants import ACTIVE_MULTIPLIER
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem
from stablecoin_redemption_controller.solver.horizon_problem import assemble
from stablecoin_redemption_controller.solver.mpcc import kkt_residual
from stablecoin_redemption_controller.solver.mpcc import solve_mpcc


def single_step_oracle(problem: HorizonProblem, rate_step: float=1e-3, delta_step: float=1e-3) -> float:
    '''
    Leader objective of the brute-force solution of a one-step game: for every rate on a grid, the follower's best feasible answer on a grid of trades, then the best rate for the leader.
    '''
    model = assemble(problem)
    state = problem.initial_state
    demand = problem.forecasts.demand
    collateral_price = problem.forecasts.collateral_price
    margin = problem.forecasts.returns[0] * problem.forecasts.stablecoin_price[0] - state.redemption_price
    weight = problem.speculator.arb_weight
    beta = problem.speculator.min_collateral_ratio

    deltas = np.arange(-model.delta_bound, model.delta_bound + delta_step / 2, delta_step)
    supply = state.supply + deltas
    collateral = state.collateral + model.conversion[0] * deltas
    follower = -margin * deltas + weight * (state.redemption_price - demand[0] / supply) ** 2
    first_error = demand[0] / state.supply - problem.protocol.peg

    best = np.inf
    for rate in np.arange(-model.rate_bound, model.rate_bound + rate_step / 2, rate_step):
        feasible = collateral * collateral_price[1] - beta * (state.redemption_price + rate) * supply >= 0
        if not np.any(feasible):
            continue
        answer = np.flatnonzero(feasible)[np.argmin(follower[feasible])]
        last_error = demand[1] / supply[answer] - problem.protocol.peg
        leader = first_error ** 2 + model.weights[0] * rate ** 2 + rate * first_error + last_error ** 2
        best = min(best, leader)
    return best


def random_single_step_problem(rng: np.random.Generator) -> HorizonProblem:
    eth_price = 10.0
    forecasts = ForecastBundle.from_levels(
        rng.uniform(97, 103, 2),
        [eth_price, eth_price * rng.uniform(0.998, 1.002)],
        stablecoin_price=1.0
    )
    return HorizonProblem(
        initial_state=SystemState(supply=100.0, collateral=rng.uniform(18, 25), redemption_price=1.0),
        forecasts=forecasts,
        protocol=ProtocolParams(horizon=1),
        speculator=SpeculatorParams()
    )


def test_at_the_peg_with_a_binding_vault():
    problem = flat_problem(horizon=1, collateral=15.0)
    solution = solve_mpcc(problem)
    assert solution.usable
    assert abs(solution.first_rate) <= 1e-3
    assert abs(solution.trajectory.delta[0]) <= 1e-2
    assert solution.upper_objective == pytest.approx(single_step_oracle(problem), abs=1e-3)


def test_random_single_step_games_match_the_grid_oracle():
    rng = np.random.default_rng(31)
    for _ in range(10):
        problem = random_single_step_problem(rng)
        solution = solve_mpcc(problem, max_outer=25)
        assert solution.usable
        assert solution.complementarity_gap <= 2 * solution.final_eps + 1e-4
        assert solution.upper_objective == pytest.approx(single_step_oracle(problem), abs=1e-3)


@pytest.mark.parametrize('horizon', [1, 3])
def test_quiescence_at_the_peg(horizon):
    solution = solve_mpcc(flat_problem(horizon=horizon))
    assert solution.converged
    assert np.max(np.abs(solution.trajectory.rate)) <= 1e-3
    assert np.max(np.abs(solution.trajectory.delta)) <= 1e-2


def test_slack_vaults_converge_on_the_second_pass():
    solution = solve_mpcc(flat_problem(horizon=2, collateral=40.0))
    assert solution.converged
    assert solution.outer_iterations == 2
    assert np.all(solution.mu <= 1e-6)


@pytest.mark.parametrize('problem', [
    random_single_step_problem(np.random.default_rng(5)),
    flat_problem(horizon=1, collateral=15.0),
    flat_problem(horizon=3, collateral=15.0),
])
def test_relaxation_contract(problem):
    solution = solve_mpcc(problem, mu_tol=1e-9, max_outer=6)
    log = solution.outer_log
    assert log[0].eps == 1.0
    assert np.isinf(log[0].step)
    for previous, current in zip(log, log[1:]):
        assert current.eps == 0.5 * previous.eps
    accepted = log[:-1] if solution.failed else log
    for iterate in accepted:
        active = iterate.mu > ACTIVE_MULTIPLIER
        # A positive multiplier is never left under the inequality form
        assert np.all(iterate.held[active])
        if iterate.inner_converged:
            assert iterate.kkt_residual <= 1e-6
            assert np.all(iterate.products <= iterate.eps + 1e-6)
            np.testing.assert_allclose(iterate.products[active], iterate.eps, atol=1e-6)


def test_solutions_are_deterministic():
    rng = np.random.default_rng(3)
    problem = random_single_step_problem(rng)
    first = solve_mpcc(problem)
    second = solve_mpcc(problem)
    np.testing.assert_array_equal(first.trajectory.rate, second.trajectory.rate)
    np.testing.assert_array_equal(first.mu, second.mu)
    assert first.outer_iterations == second.outer_iterations


def test_exhausted_inner_budget_is_a_failure():
    solution = solve_mpcc(flat_problem(horizon=2), max_inner_iter=0)
    assert solution.failed
    assert not solution.usable
    assert solution.outer_iterations == 1


def test_outer_budget_without_convergence():
    problem = random_single_step_problem(np.random.default_rng(9))
    solution = solve_mpcc(problem, mu_tol=1e-300, max_outer=2)
    assert solution.converged == (solution.outer_log[-1].step < 1e-300)
    assert solution.outer_iterations == 2
    assert solution.final_eps == 0.5


def test_kkt_residual_of_a_solution():
    problem = flat_problem(horizon=2)
    solution = solve_mpcc(problem)
    model = assemble(problem)
    trajectory = solution.trajectory
    x = np.concatenate([trajectory.redemption_price, trajectory.rate])
    y = np.concatenate([trajectory.supply, trajectory.collateral, trajectory.delta])
    assert kkt_residual(model, x, y, solution.lam, solution.mu, solution.final_eps) <= 1e-5


def test_argument_validation():
    with pytest.raises(ValueError):
        solve_mpcc(flat_problem(), mu_tol=0.0)
    with pytest.raises(ValueError):
        solve_mpcc(flat_problem(), max_outer=0)
