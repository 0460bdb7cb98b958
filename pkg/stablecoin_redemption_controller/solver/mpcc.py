import numpy as np

from dataclasses import dataclass
from typing import Optional, Tuple

from stablecoin_redemption_controller.constants import ACTIVE_MULTIPLIER
from stablecoin_redemption_controller.constants import FEASIBILITY_TOLERANCE
from stablecoin_redemption_controller.constants import INITIAL_RELAXATION
from stablecoin_redemption_controller.constants import INNER_MAX_ITERATIONS
from stablecoin_redemption_controller.constants import INNER_TOLERANCE
from stablecoin_redemption_controller.constants import MAX_OUTER_ITERATIONS
from stablecoin_redemption_controller.constants import MU_TOLERANCE
from stablecoin_redemption_controller.exceptions import NumericalAbortError
from stablecoin_redemption_controller.objectives.horizon import HorizonTrajectory
from stablecoin_redemption_controller.solver.horizon_problem import BilevelHorizonModel
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem
from stablecoin_redemption_controller.solver.horizon_problem import assemble
from stablecoin_redemption_controller.solver.nonlinear_program import NlpResult
from stablecoin_redemption_controller.solver.nonlinear_program import nlp_solve


@dataclass(frozen=True)
class OuterIterate:
    '''
    Record of one outer iteration of the relaxation. products holds μ_i·h_i at the accepted point and held the pairs solved at μ_i·h_i = ε.
    '''
    iteration: int
    eps: float
    kkt_residual: float
    complementarity_gap: float
    step: float
    inner_iterations: int
    inner_converged: bool
    mu: np.ndarray
    products: np.ndarray
    held: np.ndarray


@dataclass(frozen=True)
class HorizonSolution:
    '''
    Result of solve_mpcc: the trajectory of both players, the follower's duals, the final relaxation and diagnostics.
    '''
    trajectory: HorizonTrajectory
    lam: np.ndarray
    mu: np.ndarray
    eps: np.ndarray
    kkt_residual: float
    primal_infeasibility: float
    complementarity_gap: float
    upper_objective: float
    lower_objective: float
    outer_iterations: int
    inner_iterations: int
    converged: bool
    failed: bool
    message: str
    outer_log: Tuple[OuterIterate, ...] = ()

    @property
    def usable(self) -> bool:
        '''
        Whether the first control can be applied: the inner solves succeeded and the point is feasible.
        '''
        return (
            not self.failed
            and self.primal_infeasibility <= FEASIBILITY_TOLERANCE
            and bool(np.all(np.isfinite(self.trajectory.rate)))
        )

    @property
    def first_rate(self) -> float:
        return float(self.trajectory.rate[0])

    @property
    def final_eps(self) -> float:
        return float(self.eps[0]) if len(self.eps) > 0 else 0.0


def kkt_residual(model: BilevelHorizonModel, x: np.ndarray, y: np.ndarray, lam: np.ndarray, mu: np.ndarray, eps) -> float:
    '''
    This function calculates the max-norm KKT residual of the relaxed single-level problem at a point. Pairs with μ_i > 0 must satisfy μ_i·h_i = ε_i, pairs with μ_i = 0 only μ_i·h_i ≤ ε_i.

    Parameters:
    model(BilevelHorizonModel): The assembled problem.
    x(np.ndarray): Leader variables.
    y(np.ndarray): Follower variables.
    lam(np.ndarray): Duals of g.
    mu(np.ndarray): Duals of h.
    eps(float | np.ndarray): The relaxation.

    Returns:
    float: The residual.
    '''
    return model.kkt_residual(x, y, lam, mu, eps)


def _primal_infeasibility(model: BilevelHorizonModel, x: np.ndarray, y: np.ndarray, mu: np.ndarray) -> float:
    return float(max(
        np.max(np.abs(model.upper_dynamics(x))),
        np.max(np.abs(model.lower_dynamics(x, y))),
        np.max(np.maximum(-model.vault_constraints(x, y), 0.0)),
        np.max(np.maximum(-mu, 0.0)),
    ))


def _solution(
    model: BilevelHorizonModel,
    z: np.ndarray,
    eps: float,
    equality_rows: np.ndarray,
    outer_iterations: int,
    inner_iterations: int,
    converged: bool,
    failed: bool,
    message: str,
    outer_log: list
) -> HorizonSolution:
    x, y, lam, mu = model.layout.split(z)
    with np.errstate(all='ignore'):
        try:
            residual = model.kkt_residual(x, y, lam, mu, eps, equality_rows)
            infeasibility = _primal_infeasibility(model, x, y, mu)
            gap = float(np.max(mu * model.vault_constraints(x, y)))
            upper_objective = model.upper_objective(x, y)
            lower_objective = model.lower_objective(x, y)
        except ValueError:
            residual = infeasibility = gap = upper_objective = lower_objective = np.nan

    return HorizonSolution(
        trajectory=model.trajectory(z),
        lam=lam.copy(),
        mu=mu.copy(),
        eps=np.full(len(mu), eps),
        kkt_residual=float(residual),
        primal_infeasibility=float(infeasibility),
        complementarity_gap=float(gap),
        upper_objective=float(upper_objective),
        lower_objective=float(lower_objective),
        outer_iterations=outer_iterations,
        inner_iterations=inner_iterations,
        converged=converged,
        failed=failed or not np.isfinite(residual),
        message=message,
        outer_log=tuple(outer_log)
    )


def _solve_pass(
    model: BilevelHorizonModel,
    z: np.ndarray,
    eps: float,
    equality_rows: np.ndarray,
    inner_tol: float,
    max_inner_iter: int
) -> Tuple[NlpResult, np.ndarray, int]:
    '''
    This function solves one outer iteration and returns the result, the pairs held at equality and the inner iterations spent.

    A pass that fails while holding pairs is solved again with every pair as μ_i·h_i ≤ ε. Pairs that end with μ_i > 0 under the inequality are then held at μ_i·h_i = ε and the pass is solved again from its own point, so an accepted point never leaves a positive multiplier below the relaxation.
    '''
    layout = model.layout
    result = nlp_solve(model.relaxed_program(eps, equality_rows), z, tol=inner_tol, max_iter=max_inner_iter)
    iterations = result.iterations
    if not result.acceptable and np.any(equality_rows):
        # μ_i·h_i = ε can be infeasible for a slack row, fall back to μ_i·h_i ≤ ε
        equality_rows = np.zeros(layout.inequality_rows, dtype=bool)
        result = nlp_solve(model.relaxed_program(eps, equality_rows), z, tol=inner_tol, max_iter=max_inner_iter)
        iterations += result.iterations

    # Each round holds at least one more pair, so there are at most inequality_rows rounds
    while result.acceptable:
        _, _, _, mu = layout.split(result.point)
        unheld = (mu > ACTIVE_MULTIPLIER) & ~equality_rows
        if not np.any(unheld):
            break
        equality_rows = equality_rows | unheld
        result = nlp_solve(model.relaxed_program(eps, equality_rows), result.point, tol=inner_tol, max_iter=max_inner_iter)
        iterations += result.iterations

    return result, equality_rows, iterations


def solve_mpcc(
    problem: HorizonProblem,
    mu_tol: float=MU_TOLERANCE,
    max_outer: int=MAX_OUTER_ITERATIONS,
    warm_start: Optional[HorizonTrajectory]=None,
    inner_tol: float=INNER_TOLERANCE,
    max_inner_iter: int=INNER_MAX_ITERATIONS
) -> HorizonSolution:
    '''
    This function solves the horizon game by a sequence of relaxed single-level problems. The relaxation starts at ε = 1 and is halved after every outer iteration; each solve starts from the previous one, duals included. At every accepted iterate the pairs with μ_i > 0 satisfy μ_i·h_i = ε and the others μ_i·h_i ≤ ε. It stops when two successive primal solutions are closer than mu_tol, which is never tested on the first pass.

    Parameters:
    problem(HorizonProblem): The game.
    mu_tol(float): Stopping distance between successive primal solutions.
    max_outer(int): Largest number of outer iterations.
    warm_start(HorizonTrajectory): Optional. The previous horizon's solution, shifted by one stage before use.
    inner_tol(float): KKT tolerance of each inner solve.
    max_inner_iter(int): Iteration budget of each inner solve.

    Returns:
    HorizonSolution: The last solution. It is flagged failed when an inner solve does not converge or hits a non-finite value, and not converged when the outer loop runs out of iterations.
    '''
    if mu_tol <= 0:
        raise ValueError('The convergence tolerance must be strictly positive.')
    if max_outer < 1:
        raise ValueError('At least one outer iteration is needed.')

    model = assemble(problem)
    layout = model.layout
    z = model.initial_point(warm_start)
    eps = INITIAL_RELAXATION
    equality_rows = np.zeros(layout.inequality_rows, dtype=bool)
    previous = None
    outer_log = []
    inner_iterations = 0

    for iteration in range(1, max_outer + 1):
        try:
            result, equality_rows, pass_iterations = _solve_pass(model, z, eps, equality_rows, inner_tol, max_inner_iter)
        except NumericalAbortError as error:
            return _solution(model, z, eps, equality_rows, iteration, inner_iterations, False, True, str(error), outer_log)

        z = result.point
        inner_iterations += pass_iterations
        x, y, lam, mu = layout.split(z)
        primal = z[:layout.primal_size]
        step = np.inf if previous is None else float(np.linalg.norm(primal - previous))
        products = mu * model.vault_constraints(x, y)
        outer_log.append(OuterIterate(
            iteration=iteration,
            eps=eps,
            kkt_residual=model.kkt_residual(x, y, lam, mu, eps, equality_rows),
            complementarity_gap=float(np.max(products)),
            step=step,
            inner_iterations=pass_iterations,
            inner_converged=result.converged,
            mu=mu.copy(),
            products=products,
            held=equality_rows.copy()
        ))

        if not result.acceptable:
            message = f'Inner solve did not converge at ε = {eps}: {result.message}'
            return _solution(model, z, eps, equality_rows, iteration, inner_iterations, False, True, message, outer_log)
        if step < mu_tol:
            return _solution(model, z, eps, equality_rows, iteration, inner_iterations, True, False, 'Converged.', outer_log)
        if iteration == max_outer:
            break

        previous = primal
        equality_rows = mu > ACTIVE_MULTIPLIER
        eps = 0.5 * eps

    message = f'No convergence after {max_outer} outer iterations.'
    return _solution(model, z, eps, equality_rows, max_outer, inner_iterations, False, False, message, outer_log)
