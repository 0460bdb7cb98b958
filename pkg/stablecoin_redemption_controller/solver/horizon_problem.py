import numpy as np
import srsly

from dataclasses import dataclass
from dataclasses import field
from typing import Dict, Optional, Tuple

from stablecoin_redemption_controller.constants import HORIZON_SUPPLY_FLOOR
from stablecoin_redemption_controller.constants import RATE_BOUND
from stablecoin_redemption_controller.constants import SUPPLY_BOUND_FRACTION
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.objectives.horizon import HorizonTrajectory
from stablecoin_redemption_controller.objectives.horizon import stage_weights
from stablecoin_redemption_controller.solver.nonlinear_program import NonlinearProgram

Vector = np.ndarray
Matrix = np.ndarray


@dataclass(frozen=True)
class HorizonProblem:
    '''
    One receding-horizon game: the state at the start of the horizon, the forecasts of the next T steps and the parameters of both players.
    '''
    initial_state: SystemState
    forecasts: ForecastBundle
    protocol: ProtocolParams = field(default_factory=ProtocolParams)
    speculator: SpeculatorParams = field(default_factory=SpeculatorParams)
    rate_bound: float = RATE_BOUND
    supply_bound_fraction: float = SUPPLY_BOUND_FRACTION

    def __post_init__(self) -> None:
        if self.forecasts.horizon != self.protocol.horizon:
            raise ValueError(f'The forecasts cover {self.forecasts.horizon} steps but the horizon is {self.protocol.horizon}.')
        if self.initial_state.supply <= 0:
            raise ValueError('The horizon problem needs a strictly positive initial supply.')
        if self.rate_bound <= 0 or self.supply_bound_fraction <= 0:
            raise ValueError('The bounds of the controls must be strictly positive.')

    @property
    def horizon(self) -> int:
        return self.forecasts.horizon


@dataclass(frozen=True)
class VariableLayout:
    '''
    Position of every block inside z = (x, y, λ, μ), where x = (α_0..α_T, δα_0..δα_{T-1}) and y = (S_0..S_T, C_0..C_T, Δ_0..Δ_{T-1}).
    '''
    horizon: int

    @property
    def upper_size(self) -> int:
        return 2 * self.horizon + 1

    @property
    def lower_size(self) -> int:
        return 3 * self.horizon + 2

    @property
    def equality_rows(self) -> int:
        return 2 * self.horizon + 2

    @property
    def inequality_rows(self) -> int:
        return 3 * self.horizon

    @property
    def size(self) -> int:
        return self.upper_size + self.lower_size + self.equality_rows + self.inequality_rows

    @property
    def primal_size(self) -> int:
        return self.upper_size + self.lower_size

    def split(self, z: Vector) -> Tuple[Vector, Vector, Vector, Vector]:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.size,):
            raise ValueError(f'Expected {self.size} variables, got {z.shape}.')
        first = self.upper_size
        second = first + self.lower_size
        third = second + self.equality_rows
        return z[:first], z[first:second], z[second:third], z[third:]

    def join(self, x: Vector, y: Vector, lam: Vector, mu: Vector) -> Vector:
        return np.concatenate([x, y, lam, mu])

    def split_upper(self, x: Vector) -> Tuple[Vector, Vector]:
        return x[:self.horizon + 1], x[self.horizon + 1:]

    def split_lower(self, y: Vector) -> Tuple[Vector, Vector, Vector]:
        stages = self.horizon + 1
        return y[:stages], y[stages:2 * stages], y[2 * stages:]

    def names(self) -> list:
        T = self.horizon
        stages = range(T + 1)
        controls = range(T)
        return (
            [f'alpha[{t}]' for t in stages] + [f'rate[{t}]' for t in controls]
            + [f'supply[{t}]' for t in stages] + [f'collateral[{t}]' for t in stages] + [f'delta[{t}]' for t in controls]
            + [f'lambda[{i}]' for i in range(self.equality_rows)] + [f'mu[{i}]' for i in range(self.inequality_rows)]
        )


class BilevelHorizonModel:
    '''
    Single-level reduction of the horizon game. The protocol (leader) chooses x, the speculator (follower) answers with y, and the follower's optimality is replaced by its KKT conditions, so the variables are (x, y, λ, μ).

    Leader:   min_x F(x, y)  s.t.  G(x) = 0,  |δα| ≤ rate bound
    Follower: min_y f(x, y)  s.t.  g(x, y) = 0,  h(x, y) ≥ 0

    g and h are affine in y. The rows of h are the vault constraints of the stages 1..T followed by the upper and the lower supply boxes, all divided by the initial supply.
    '''
    def __init__(self, problem: HorizonProblem) -> None:
        self.problem = problem
        self.layout = VariableLayout(problem.horizon)
        forecasts = problem.forecasts
        state = problem.initial_state
        T = problem.horizon

        self.demand = forecasts.demand
        self.collateral_price = forecasts.collateral_price
        self.stablecoin_price = forecasts.stablecoin_price
        self.returns = forecasts.returns
        self.conversion = self.stablecoin_price[:T] / self.collateral_price[:T]
        self.peg = problem.protocol.peg
        self.discounts = problem.speculator.discount ** np.arange(T)
        self.arb_weight = problem.speculator.arb_weight
        self.min_ratio = problem.speculator.min_collateral_ratio
        self.initial_supply = state.supply
        self.initial_collateral = state.collateral
        self.initial_price = state.redemption_price
        self.rate_bound = problem.rate_bound
        self.delta_bound = problem.supply_bound_fraction * state.supply
        # ω_p is frozen at the errors of the current supply so F stays smooth
        self.weights = stage_weights(forecasts, np.full(T + 1, state.supply), problem.protocol)
        self._lower_dynamics_jacobian = self._build_lower_dynamics_jacobian()
        self._upper_dynamics_jacobian = self._build_upper_dynamics_jacobian()

    @property
    def horizon(self) -> int:
        return self.layout.horizon

    # Leader

    def upper_objective(self, x: Vector, y: Vector) -> float:
        _, rate = self.layout.split_upper(x)
        supply, _, _ = self.layout.split_lower(y)
        errors = self.demand / supply - self.peg
        rates = np.append(rate, 0.0)
        return float(np.sum(errors ** 2 + self.weights * rates ** 2 + rates * errors))

    def upper_objective_gradient(self, x: Vector, y: Vector) -> Tuple[Vector, Vector]:
        T = self.horizon
        _, rate = self.layout.split_upper(x)
        supply, _, _ = self.layout.split_lower(y)
        errors = self.demand / supply - self.peg
        rates = np.append(rate, 0.0)

        gradient_x = np.zeros(self.layout.upper_size)
        gradient_x[T + 1:] = 2 * self.weights[:T] * rate + errors[:T]
        gradient_y = np.zeros(self.layout.lower_size)
        gradient_y[:T + 1] = (2 * errors + rates) * (-self.demand / supply ** 2)
        return gradient_x, gradient_y

    def upper_dynamics(self, x: Vector) -> Vector:
        alpha, rate = self.layout.split_upper(x)
        return np.append(alpha[1:] - alpha[:-1] - rate, alpha[0] - self.initial_price)

    def upper_dynamics_jacobian(self, x: Vector=None) -> Matrix:
        return self._upper_dynamics_jacobian

    def _build_upper_dynamics_jacobian(self) -> Matrix:
        T = self.horizon
        jacobian = np.zeros((T + 1, self.layout.upper_size))
        for t in range(T):
            jacobian[t, t + 1] = 1.0
            jacobian[t, t] = -1.0
            jacobian[t, T + 1 + t] = -1.0
        jacobian[T, 0] = 1.0
        return jacobian

    # Follower

    def _lower_terms(self, x: Vector, y: Vector) -> Dict[str, Vector]:
        T = self.horizon
        alpha, _ = self.layout.split_upper(x)
        supply, _, delta = self.layout.split_lower(y)
        # Trial points of the solver may cross S + Δ = 0; the non-finite values are caught by nlp_solve
        supply_after = supply[:T] + delta
        demand = self.demand[:T]
        misalignment = alpha[:T] - demand / supply_after
        return {
            'alpha': alpha[:T],
            'delta': delta,
            'supply_after': supply_after,
            'misalignment': misalignment,
            'slope': demand / supply_after ** 2,
            'margin': self.returns * self.stablecoin_price[:T] - alpha[:T],
        }

    def lower_objective(self, x: Vector, y: Vector) -> float:
        terms = self._lower_terms(x, y)
        gain = self.discounts * terms['margin'] * terms['delta']
        return float(np.sum(-gain + self.arb_weight * terms['misalignment'] ** 2))

    def lower_objective_gradient(self, x: Vector, y: Vector) -> Tuple[Vector, Vector]:
        T = self.horizon
        terms = self._lower_terms(x, y)
        penalty = 2 * self.arb_weight * terms['misalignment'] * terms['slope']

        gradient_x = np.zeros(self.layout.upper_size)
        gradient_x[:T] = self.discounts * terms['delta'] + 2 * self.arb_weight * terms['misalignment']
        gradient_y = np.zeros(self.layout.lower_size)
        gradient_y[:T] = penalty
        gradient_y[2 * (T + 1):] = -self.discounts * terms['margin'] + penalty
        return gradient_x, gradient_y

    def lower_objective_hessians(self, x: Vector, y: Vector) -> Tuple[Matrix, Matrix]:
        '''
        This method calculates the blocks ∇²_yy f and ∇²_yx f (rows y, columns x) of the follower's objective.
        '''
        T = self.horizon
        terms = self._lower_terms(x, y)
        demand = self.demand[:T]
        curvature = 2 * self.arb_weight * (terms['slope'] ** 2 - 2 * terms['misalignment'] * demand / terms['supply_after'] ** 3)
        cross = 2 * self.arb_weight * terms['slope']

        hessian_yy = np.zeros((self.layout.lower_size, self.layout.lower_size))
        hessian_yx = np.zeros((self.layout.lower_size, self.layout.upper_size))
        delta_offset = 2 * (T + 1)
        for t in range(T):
            s, d = t, delta_offset + t
            hessian_yy[s, s] += curvature[t]
            hessian_yy[s, d] += curvature[t]
            hessian_yy[d, s] += curvature[t]
            hessian_yy[d, d] += curvature[t]
            hessian_yx[s, t] = cross[t]
            hessian_yx[d, t] = self.discounts[t] + cross[t]
        return hessian_yy, hessian_yx

    def lower_dynamics(self, x: Vector, y: Vector) -> Vector:
        supply, collateral, delta = self.layout.split_lower(y)
        return np.concatenate([
            supply[1:] - supply[:-1] - delta,
            collateral[1:] - collateral[:-1] - self.conversion * delta,
            [supply[0] - self.initial_supply, collateral[0] - self.initial_collateral],
        ])

    def lower_dynamics_jacobian(self, x: Vector=None, y: Vector=None) -> Tuple[Matrix, Matrix]:
        '''
        The Jacobian of g is constant: it returns (∂g/∂x, ∂g/∂y).
        '''
        return np.zeros((self.layout.equality_rows, self.layout.upper_size)), self._lower_dynamics_jacobian

    def _build_lower_dynamics_jacobian(self) -> Matrix:
        T = self.horizon
        stages = T + 1
        delta_offset = 2 * stages
        jacobian = np.zeros((self.layout.equality_rows, self.layout.lower_size))
        for t in range(T):
            jacobian[t, t + 1] = 1.0
            jacobian[t, t] = -1.0
            jacobian[t, delta_offset + t] = -1.0
            jacobian[T + t, stages + t + 1] = 1.0
            jacobian[T + t, stages + t] = -1.0
            jacobian[T + t, delta_offset + t] = -self.conversion[t]
        jacobian[2 * T, 0] = 1.0
        jacobian[2 * T + 1, stages] = 1.0
        return jacobian

    def vault_constraints(self, x: Vector, y: Vector) -> Vector:
        alpha, _ = self.layout.split_upper(x)
        supply, collateral, delta = self.layout.split_lower(y)
        vault = (collateral[1:] * self.collateral_price[1:] - self.min_ratio * alpha[1:] * supply[1:]) / self.initial_supply
        upper_box = (self.delta_bound - delta) / self.initial_supply
        lower_box = (self.delta_bound + delta) / self.initial_supply
        return np.concatenate([vault, upper_box, lower_box])

    def vault_constraints_jacobian(self, x: Vector, y: Vector) -> Tuple[Matrix, Matrix]:
        T = self.horizon
        stages = T + 1
        alpha, _ = self.layout.split_upper(x)
        supply, _, _ = self.layout.split_lower(y)
        jacobian_x = np.zeros((self.layout.inequality_rows, self.layout.upper_size))
        jacobian_y = np.zeros((self.layout.inequality_rows, self.layout.lower_size))
        for t in range(1, stages):
            row = t - 1
            jacobian_x[row, t] = -self.min_ratio * supply[t] / self.initial_supply
            jacobian_y[row, t] = -self.min_ratio * alpha[t] / self.initial_supply
            jacobian_y[row, stages + t] = self.collateral_price[t] / self.initial_supply
        for t in range(T):
            jacobian_y[T + t, 2 * stages + t] = -1.0 / self.initial_supply
            jacobian_y[2 * T + t, 2 * stages + t] = 1.0 / self.initial_supply
        return jacobian_x, jacobian_y

    # Follower's KKT conditions

    def lagrangian_gradient(self, x: Vector, y: Vector, lam: Vector, mu: Vector) -> Vector:
        '''
        This method calculates ∇_y L for L = f - λᵀg - μᵀh.
        '''
        _, gradient_y = self.lower_objective_gradient(x, y)
        _, g_y = self.lower_dynamics_jacobian()
        _, h_y = self.vault_constraints_jacobian(x, y)
        return gradient_y - g_y.T @ lam - h_y.T @ mu

    def lagrangian_gradient_jacobian(self, x: Vector, y: Vector, lam: Vector, mu: Vector) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
        '''
        This method calculates the Jacobian of ∇_y L with respect to x, y, λ and μ.
        '''
        T = self.horizon
        hessian_yy, hessian_yx = self.lower_objective_hessians(x, y)
        _, g_y = self.lower_dynamics_jacobian()
        _, h_y = self.vault_constraints_jacobian(x, y)

        jacobian_x = hessian_yx.copy()
        # ∂²h/∂S_t∂α_t of the vault rows, the only bilinear term of h
        for t in range(1, T + 1):
            jacobian_x[t, t] += mu[t - 1] * self.min_ratio / self.initial_supply
        return jacobian_x, hessian_yy, -g_y.T, -h_y.T

    def kkt_residual(self, x: Vector, y: Vector, lam: Vector, mu: Vector, eps, equality_rows: Optional[Vector]=None) -> float:
        '''
        This method calculates the max-norm residual of the relaxed single-level problem: dynamics of both players, stationarity of the follower, feasibility of h and μ and the pairwise complementarity μ_i·h_i = ε_i.

        Parameters:
        x, y, lam, mu(Vector): The point.
        eps(float | Vector): Relaxation of each complementarity pair.
        equality_rows(Vector): Optional. Boolean mask of the pairs held at equality. By default the pairs with μ_i > 0; the others only need μ_i·h_i ≤ ε_i.

        Returns:
        float: The residual.
        '''
        x, y, lam, mu = (np.asarray(value, dtype=float) for value in (x, y, lam, mu))
        if x.shape != (self.layout.upper_size,) or y.shape != (self.layout.lower_size,):
            raise ValueError('The primal variables do not match the horizon.')
        if lam.shape != (self.layout.equality_rows,) or mu.shape != (self.layout.inequality_rows,):
            raise ValueError('The duals do not match the horizon.')

        eps = np.broadcast_to(np.asarray(eps, dtype=float), mu.shape)
        if equality_rows is None:
            equality_rows = mu > 0
        constraints = self.vault_constraints(x, y)
        products = mu * constraints
        complementarity = np.where(equality_rows, np.abs(products - eps), np.maximum(products - eps, 0.0))
        return float(max(
            np.max(np.abs(self.upper_dynamics(x))),
            np.max(np.abs(self.lower_dynamics(x, y))),
            np.max(np.abs(self.lagrangian_gradient(x, y, lam, mu))),
            np.max(np.maximum(-constraints, 0.0)),
            np.max(np.maximum(-mu, 0.0)),
            np.max(complementarity),
        ))

    # Relaxed program

    def variable_scale(self) -> Vector:
        T = self.horizon
        stages = T + 1
        return np.concatenate([
            np.ones(stages),
            np.full(T, self.rate_bound),
            np.full(stages, self.initial_supply),
            np.full(stages, max(self.initial_collateral, 1.0)),
            np.full(T, self.initial_supply),
            np.ones(self.layout.equality_rows + self.layout.inequality_rows),
        ])

    def bounds(self) -> Tuple[Vector, Vector]:
        T = self.horizon
        lower = np.full(self.layout.size, -np.inf)
        upper = np.full(self.layout.size, np.inf)
        lower[T + 1:2 * T + 1] = -self.rate_bound
        upper[T + 1:2 * T + 1] = self.rate_bound
        supply_offset = self.layout.upper_size
        lower[supply_offset:supply_offset + T + 1] = HORIZON_SUPPLY_FLOOR * self.initial_supply
        lower[self.layout.primal_size + self.layout.equality_rows:] = 0.0
        return lower, upper

    def relaxed_program(self, eps: float, equality_rows: Vector) -> NonlinearProgram:
        '''
        This method builds the smooth program of one outer iteration over z = (x, y, λ, μ):

            min F  s.t.  G = 0, g = 0, ∇_y L = 0, h ≥ 0, μ ≥ 0,
                         μ_i·h_i = ε for the pairs in equality_rows,
                         μ_i·h_i ≤ ε for the others.

        Parameters:
        eps(float): The relaxation, shared by every pair.
        equality_rows(Vector): Boolean mask over the rows of h.

        Returns:
        NonlinearProgram: The program.
        '''
        if eps < 0:
            raise ValueError('The relaxation can not be negative.')
        layout = self.layout
        equality_rows = np.asarray(equality_rows, dtype=bool)
        if equality_rows.shape != (layout.inequality_rows,):
            raise ValueError(f'Expected a mask over {layout.inequality_rows} rows.')
        held = np.flatnonzero(equality_rows)
        relaxed = np.flatnonzero(~equality_rows)
        mu_offset = layout.primal_size + layout.equality_rows

        def objective(z: Vector) -> float:
            x, y, _, _ = layout.split(z)
            return self.upper_objective(x, y)

        def gradient(z: Vector) -> Vector:
            x, y, _, _ = layout.split(z)
            gradient_x, gradient_y = self.upper_objective_gradient(x, y)
            return np.concatenate([gradient_x, gradient_y, np.zeros(layout.equality_rows + layout.inequality_rows)])

        def complementarity_jacobian(z: Vector, rows: Vector) -> Matrix:
            x, y, _, mu = layout.split(z)
            h_x, h_y = self.vault_constraints_jacobian(x, y)
            constraints = self.vault_constraints(x, y)
            jacobian = np.zeros((len(rows), layout.size))
            jacobian[:, :layout.upper_size] = mu[rows, None] * h_x[rows]
            jacobian[:, layout.upper_size:layout.primal_size] = mu[rows, None] * h_y[rows]
            jacobian[np.arange(len(rows)), mu_offset + rows] = constraints[rows]
            return jacobian

        def equalities(z: Vector) -> Vector:
            x, y, lam, mu = layout.split(z)
            products = mu[held] * self.vault_constraints(x, y)[held]
            return np.concatenate([
                self.upper_dynamics(x),
                self.lower_dynamics(x, y),
                self.lagrangian_gradient(x, y, lam, mu),
                products - eps,
            ])

        def equality_jacobian(z: Vector) -> Matrix:
            x, y, lam, mu = layout.split(z)
            upper_rows = np.zeros((layout.horizon + 1, layout.size))
            upper_rows[:, :layout.upper_size] = self.upper_dynamics_jacobian()
            g_x, g_y = self.lower_dynamics_jacobian()
            lower_rows = np.hstack([g_x, g_y, np.zeros((layout.equality_rows, layout.equality_rows + layout.inequality_rows))])
            stationarity_rows = np.hstack(self.lagrangian_gradient_jacobian(x, y, lam, mu))
            return np.vstack([upper_rows, lower_rows, stationarity_rows, complementarity_jacobian(z, held)])

        def inequalities(z: Vector) -> Vector:
            x, y, _, mu = layout.split(z)
            constraints = self.vault_constraints(x, y)
            return np.concatenate([constraints, eps - mu[relaxed] * constraints[relaxed]])

        def inequality_jacobian(z: Vector) -> Matrix:
            x, y, _, _ = layout.split(z)
            h_x, h_y = self.vault_constraints_jacobian(x, y)
            rows = np.zeros((layout.inequality_rows, layout.size))
            rows[:, :layout.upper_size] = h_x
            rows[:, layout.upper_size:layout.primal_size] = h_y
            return np.vstack([rows, -complementarity_jacobian(z, relaxed)])

        lower, upper = self.bounds()
        return NonlinearProgram(
            size=layout.size,
            objective=objective,
            gradient=gradient,
            equalities=equalities,
            equality_jacobian=equality_jacobian,
            inequalities=inequalities,
            inequality_jacobian=inequality_jacobian,
            lower=lower,
            upper=upper,
            scale=self.variable_scale()
        )

    # Points

    def simulate(self, rate: Vector, delta: Vector) -> HorizonTrajectory:
        '''
        This method rolls the dynamics of both players forward from the initial state for given controls.
        '''
        rate = np.asarray(rate, dtype=float)
        delta = np.asarray(delta, dtype=float)
        alpha = self.initial_price + np.concatenate([[0.0], np.cumsum(rate)])
        supply = self.initial_supply + np.concatenate([[0.0], np.cumsum(delta)])
        collateral = self.initial_collateral + np.concatenate([[0.0], np.cumsum(self.conversion * delta)])
        return HorizonTrajectory(redemption_price=alpha, rate=rate, supply=supply, collateral=collateral, delta=delta)

    def trajectory(self, z: Vector) -> HorizonTrajectory:
        x, y, _, _ = self.layout.split(z)
        alpha, rate = self.layout.split_upper(x)
        supply, collateral, delta = self.layout.split_lower(y)
        return HorizonTrajectory(redemption_price=alpha, rate=rate, supply=supply, collateral=collateral, delta=delta)

    def initial_point(self, warm_start: Optional[HorizonTrajectory]=None) -> Vector:
        '''
        This method builds the starting point of the first outer iteration. The primals come from the previous horizon's solution shifted by one stage, with the last stage repeated and the states simulated again; the duals start at 0.

        Parameters:
        warm_start(HorizonTrajectory): Optional. The solution of the previous horizon. If None, every control starts at 0.

        Returns:
        Vector: The point z.
        '''
        T = self.horizon
        rate = np.zeros(T)
        delta = np.zeros(T)
        if warm_start is not None and warm_start.horizon > 0:
            rate = _shift(warm_start.rate, T)
            delta = _shift(warm_start.delta, T)
        rate = np.clip(rate, -self.rate_bound, self.rate_bound)
        delta = np.clip(delta, -self.delta_bound, self.delta_bound)

        trajectory = self.simulate(rate, delta)
        if np.any(trajectory.supply[:T] + delta <= 0) or np.any(trajectory.supply <= 0) or np.any(trajectory.redemption_price <= 0):
            trajectory = self.simulate(np.zeros(T), np.zeros(T))

        x = np.concatenate([trajectory.redemption_price, trajectory.rate])
        y = np.concatenate([trajectory.supply, trajectory.collateral, trajectory.delta])
        return self.layout.join(x, y, np.zeros(self.layout.equality_rows), np.zeros(self.layout.inequality_rows))

    def debug_dump(self, z: Vector, eps: float=0.0) -> str:
        '''
        This method writes the point, every constraint row and the residual as JSON, for inspection of a solve.
        '''
        x, y, lam, mu = self.layout.split(z)
        document = {
            'horizon': self.horizon,
            'variables': dict(zip(self.layout.names(), np.asarray(z, dtype=float).tolist())),
            'upper_objective': self.upper_objective(x, y),
            'lower_objective': self.lower_objective(x, y),
            'upper_dynamics': self.upper_dynamics(x).tolist(),
            'lower_dynamics': self.lower_dynamics(x, y).tolist(),
            'stationarity': self.lagrangian_gradient(x, y, lam, mu).tolist(),
            'vault_constraints': self.vault_constraints(x, y).tolist(),
            'complementarity': (mu * self.vault_constraints(x, y)).tolist(),
            'eps': float(eps),
            'kkt_residual': self.kkt_residual(x, y, lam, mu, eps),
        }
        return srsly.json_dumps(document, indent=2)


def _shift(values: Vector, horizon: int) -> Vector:
    values = np.asarray(values, dtype=float)
    shifted = np.append(values[1:], values[-1])
    if len(shifted) >= horizon:
        return shifted[:horizon]
    return np.append(shifted, np.full(horizon - len(shifted), shifted[-1]))


def assemble(problem: HorizonProblem) -> BilevelHorizonModel:
    '''
    This function reduces a horizon game to its single-level form.

    Parameters:
    problem(HorizonProblem): The game.

    Returns:
    BilevelHorizonModel: The model with every function and Jacobian of the reduced problem.
    '''
    return BilevelHorizonModel(problem)
