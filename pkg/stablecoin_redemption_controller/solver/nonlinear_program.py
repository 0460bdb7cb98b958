import numpy as np

from dataclasses import dataclass
from dataclasses import field
from scipy.optimize import Bounds
from scipy.optimize import lsq_linear
from scipy.optimize import minimize
from typing import Callable, Dict, List, Optional
from typing import Tuple

from stablecoin_redemption_controller.constants import INNER_MAX_ITERATIONS
from stablecoin_redemption_controller.constants import INNER_TOLERANCE
from stablecoin_redemption_controller.utils.utils import ensure_finite

Vector = np.ndarray
Matrix = np.ndarray


@dataclass
class NonlinearProgram:
    '''
    A smooth nonlinear program

        min F(z)  subject to  c_E(z) = 0,  c_I(z) >= 0,  lower <= z <= upper

    described by callables for the functions and their Jacobians. Missing constraint callables mean no constraints of that type. The optional scale gives the typical magnitude of each variable and is only used to condition the solver.
    '''
    size: int
    objective: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    equalities: Optional[Callable[[Vector], Vector]] = None
    equality_jacobian: Optional[Callable[[Vector], Matrix]] = None
    inequalities: Optional[Callable[[Vector], Vector]] = None
    inequality_jacobian: Optional[Callable[[Vector], Matrix]] = None
    lower: Optional[Vector] = None
    upper: Optional[Vector] = None
    scale: Optional[Vector] = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError('The program needs at least one variable.')
        if (self.equalities is None) != (self.equality_jacobian is None):
            raise ValueError('Equalities need both the function and its Jacobian.')
        if (self.inequalities is None) != (self.inequality_jacobian is None):
            raise ValueError('Inequalities need both the function and its Jacobian.')

        self.lower = np.full(self.size, -np.inf) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(self.size, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        self.scale = np.ones(self.size) if self.scale is None else np.asarray(self.scale, dtype=float)
        if self.lower.shape != (self.size,) or self.upper.shape != (self.size,) or self.scale.shape != (self.size,):
            raise ValueError(f'Bounds and scale must have {self.size} entries.')
        if np.any(self.lower > self.upper):
            raise ValueError('Every lower bound must be below its upper bound.')
        if np.any(self.scale <= 0):
            raise ValueError('The scale must be strictly positive.')

    def equality_values(self, z: Vector) -> Vector:
        return np.zeros(0) if self.equalities is None else np.asarray(self.equalities(z), dtype=float)

    def equality_matrix(self, z: Vector) -> Matrix:
        return np.zeros((0, self.size)) if self.equality_jacobian is None else np.asarray(self.equality_jacobian(z), dtype=float)

    def inequality_values(self, z: Vector) -> Vector:
        return np.zeros(0) if self.inequalities is None else np.asarray(self.inequalities(z), dtype=float)

    def inequality_matrix(self, z: Vector) -> Matrix:
        return np.zeros((0, self.size)) if self.inequality_jacobian is None else np.asarray(self.inequality_jacobian(z), dtype=float)


@dataclass
class NlpResult:
    '''
    Stationary point returned by nlp_solve, with the multipliers of the Lagrangian F - νᵀc_E - ηᵀc_I - ζ_lᵀ(z - l) - ζ_uᵀ(u - z).
    '''
    point: Vector
    objective: float
    equality_multipliers: Vector
    inequality_multipliers: Vector
    lower_multipliers: Vector
    upper_multipliers: Vector
    kkt_residual: float
    iterations: int
    converged: bool
    acceptable: bool
    message: str
    residuals: Dict[str, float] = field(default_factory=dict)


def _checked(name: str, function: Callable) -> Callable:
    def wrapper(z: Vector):
        value = function(z)
        ensure_finite(name, value)
        return value

    return wrapper


def recover_multipliers(nlp: NonlinearProgram, z: Vector, active_tolerance: float) -> Tuple[Vector, Vector, Vector, Vector]:
    '''
    This function estimates the multipliers at a point by solving the stationarity condition in the least squares sense over the equalities and the active inequalities and bounds, keeping the inequality multipliers nonnegative.

    Parameters:
    nlp(NonlinearProgram): The program.
    z(Vector): The point.
    active_tolerance(float): Slack under which an inequality or bound counts as active.

    Returns:
    Tuple[Vector, Vector, Vector, Vector]: Equality, inequality, lower bound and upper bound multipliers.
    '''
    gradient = np.asarray(nlp.gradient(z), dtype=float)
    equality_matrix = nlp.equality_matrix(z)
    inequality_values = nlp.inequality_values(z)
    inequality_matrix = nlp.inequality_matrix(z)

    active_rows = np.flatnonzero(inequality_values <= active_tolerance)
    active_lower = np.flatnonzero(z - nlp.lower <= active_tolerance * nlp.scale)
    active_upper = np.flatnonzero(nlp.upper - z <= active_tolerance * nlp.scale)

    identity = np.eye(nlp.size)
    columns = [equality_matrix.T, inequality_matrix[active_rows].T, identity[:, active_lower], -identity[:, active_upper]]
    system = np.hstack(columns)
    free = equality_matrix.shape[0]
    count = system.shape[1]

    equality_multipliers = np.zeros(equality_matrix.shape[0])
    inequality_multipliers = np.zeros(len(inequality_values))
    lower_multipliers = np.zeros(nlp.size)
    upper_multipliers = np.zeros(nlp.size)
    if count == 0:
        return equality_multipliers, inequality_multipliers, lower_multipliers, upper_multipliers

    lower_bounds = np.concatenate([np.full(free, -np.inf), np.zeros(count - free)])
    upper_bounds = np.full(count, np.inf)
    solution = lsq_linear(system, gradient, bounds=(lower_bounds, upper_bounds), method='bvls').x

    equality_multipliers = solution[:free]
    offset = free
    inequality_multipliers[active_rows] = solution[offset:offset + len(active_rows)]
    offset += len(active_rows)
    lower_multipliers[active_lower] = solution[offset:offset + len(active_lower)]
    offset += len(active_lower)
    upper_multipliers[active_upper] = solution[offset:offset + len(active_upper)]
    return equality_multipliers, inequality_multipliers, lower_multipliers, upper_multipliers


def kkt_residuals(
    nlp: NonlinearProgram,
    z: Vector,
    equality_multipliers: Vector,
    inequality_multipliers: Vector,
    lower_multipliers: Vector,
    upper_multipliers: Vector
) -> Dict[str, float]:
    '''
    This function calculates the max-norm of each part of the KKT conditions of a smooth program: stationarity, primal feasibility, dual feasibility and complementarity.
    '''
    gradient = np.asarray(nlp.gradient(z), dtype=float)
    equality_values = nlp.equality_values(z)
    inequality_values = nlp.inequality_values(z)
    stationarity = (
        gradient
        - nlp.equality_matrix(z).T @ equality_multipliers
        - nlp.inequality_matrix(z).T @ inequality_multipliers
        - lower_multipliers
        + upper_multipliers
    )
    lower_slack = np.where(np.isfinite(nlp.lower), z - nlp.lower, np.inf)
    upper_slack = np.where(np.isfinite(nlp.upper), nlp.upper - z, np.inf)

    def largest(values: Vector) -> float:
        return float(np.max(values)) if len(values) > 0 else 0.0

    return {
        'stationarity': largest(np.abs(stationarity)),
        'equalities': largest(np.abs(equality_values)),
        'inequalities': largest(np.maximum(-inequality_values, 0.0)),
        'bounds': max(largest(np.maximum(-lower_slack, 0.0)), largest(np.maximum(-upper_slack, 0.0))),
        'dual': largest(np.maximum(-np.concatenate([inequality_multipliers, lower_multipliers, upper_multipliers]), 0.0)),
        'complementarity': max(
            largest(np.abs(inequality_multipliers * inequality_values)),
            largest(np.abs(np.where(lower_multipliers != 0, lower_multipliers * lower_slack, 0.0))),
            largest(np.abs(np.where(upper_multipliers != 0, upper_multipliers * upper_slack, 0.0)))
        ),
    }


def _row_scales(matrix: Matrix, scale: Vector) -> Vector:
    if matrix.shape[0] == 0:
        return np.ones(0)
    return 1.0 / np.maximum(1.0, np.max(np.abs(matrix * scale[None, :]), axis=1))


def nlp_solve(
    nlp: NonlinearProgram,
    warm_start: Vector,
    tol: float=INNER_TOLERANCE,
    max_iter: int=INNER_MAX_ITERATIONS,
    acceptable_tol: float=1e-4
) -> NlpResult:
    '''
    This function finds a stationary point of a smooth nonlinear program with sequential quadratic programming (SLSQP), starting from a warm start. Variables are scaled by the program's scale and each constraint row by the size of its gradient at the warm start.

    Parameters:
    nlp(NonlinearProgram): The program to solve.
    warm_start(Vector): The starting point. It is clipped into the bounds.
    tol(float): KKT residual under which the point counts as converged.
    max_iter(int): Iteration budget. With 0 the warm start is returned, flagged as non-converged.
    acceptable_tol(float): Looser residual accepted when the SQP iteration itself reports success.

    Returns:
    NlpResult: The point, its multipliers and diagnostics. Identical inputs give identical results.
    '''
    if tol <= 0:
        raise ValueError('The tolerance must be strictly positive.')

    z0 = np.clip(np.asarray(warm_start, dtype=float), nlp.lower, nlp.upper)
    if z0.shape != (nlp.size,):
        raise ValueError(f'The warm start must have {nlp.size} entries, got {z0.shape}.')
    ensure_finite('warm start', z0)

    scale = nlp.scale
    iterations = 0
    success = False
    message = 'Iteration budget is 0.'
    z = z0
    if max_iter > 0:
        objective = _checked('objective', nlp.objective)
        gradient = _checked('objective gradient', nlp.gradient)
        objective_scale = 1.0 / max(1.0, float(np.max(np.abs(gradient(z0) * scale))))
        constraints: List[Dict] = []
        if nlp.equalities is not None:
            equality_scale = _row_scales(nlp.equality_matrix(z0), scale)
            equalities = _checked('equalities', nlp.equalities)
            equality_jacobian = _checked('equality Jacobian', nlp.equality_jacobian)
            constraints.append({
                'type': 'eq',
                'fun': lambda u: equality_scale * equalities(u * scale),
                'jac': lambda u: equality_scale[:, None] * equality_jacobian(u * scale) * scale[None, :],
            })
        if nlp.inequalities is not None:
            inequality_scale = _row_scales(nlp.inequality_matrix(z0), scale)
            inequalities = _checked('inequalities', nlp.inequalities)
            inequality_jacobian = _checked('inequality Jacobian', nlp.inequality_jacobian)
            constraints.append({
                'type': 'ineq',
                'fun': lambda u: inequality_scale * inequalities(u * scale),
                'jac': lambda u: inequality_scale[:, None] * inequality_jacobian(u * scale) * scale[None, :],
            })

        result = minimize(
            lambda u: objective_scale * objective(u * scale),
            z0 / scale,
            jac=lambda u: objective_scale * gradient(u * scale) * scale,
            method='SLSQP',
            bounds=Bounds(nlp.lower / scale, nlp.upper / scale),
            constraints=constraints,
            options={'maxiter': int(max_iter), 'ftol': max(tol * tol, 1e-14)}
        )
        z = np.clip(result.x * scale, nlp.lower, nlp.upper)
        ensure_finite('solution', z)
        iterations = int(result.nit)
        success = bool(result.success)
        message = str(result.message)

    multipliers = recover_multipliers(nlp, z, active_tolerance=max(100 * tol, 1e-7))
    residuals = kkt_residuals(nlp, z, *multipliers)
    residual = max(residuals.values())
    converged = max_iter > 0 and residual <= tol
    return NlpResult(
        point=z,
        objective=float(nlp.objective(z)),
        equality_multipliers=multipliers[0],
        inequality_multipliers=multipliers[1],
        lower_multipliers=multipliers[2],
        upper_multipliers=multipliers[3],
        kkt_residual=residual,
        iterations=iterations,
        converged=converged,
        acceptable=converged or (success and residual <= acceptable_tol),
        message=message,
        residuals=residuals
    )
