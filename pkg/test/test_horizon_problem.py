import numpy as np
import pytest
import srsly

from conftest import flat_problem
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.core.system_state import SystemState
from stablecoin_redemption_controller.objectives.forecast_bundle import ForecastBundle
from stablecoin_redemption_controller.objectives.horizon import HorizonTrajectory
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem
from stablecoin_redemption_controller.solver.horizon_problem import VariableLayout
from stablecoin_redemption_controller.solver.horizon_problem import assemble

HORIZON = 3


def numerical_jacobian(function, point: np.ndarray) -> np.ndarray:
    '''
    Central differences with a step relative to each coordinate.
    '''
    columns = []
    for i in range(len(point)):
        step = 1e-6 * max(1.0, abs(point[i]))
        forward = point.copy()
        backward = point.copy()
        forward[i] += step
        backward[i] -= step
        columns.append((np.atleast_1d(function(forward)) - np.atleast_1d(function(backward))) / (2 * step))
    return np.stack(columns, axis=-1)


def relative_error(analytic: np.ndarray, numerical: np.ndarray) -> float:
    return float(np.max(np.abs(analytic - numerical)) / max(1.0, np.max(np.abs(numerical))))


def random_problem(rng: np.random.Generator, horizon: int=HORIZON) -> HorizonProblem:
    forecasts = ForecastBundle.from_levels(
        rng.uniform(90, 110, horizon + 1),
        rng.uniform(9, 11, horizon + 1),
        stablecoin_price=rng.uniform(0.95, 1.05)
    )
    return HorizonProblem(
        initial_state=SystemState(supply=100.0, collateral=rng.uniform(20, 30), redemption_price=rng.uniform(0.97, 1.03)),
        forecasts=forecasts,
        protocol=ProtocolParams(horizon=horizon),
        speculator=SpeculatorParams(discount=rng.uniform(0.8, 1.0), arb_weight=rng.uniform(0.5, 2.0))
    )


def random_point(rng: np.random.Generator, layout: VariableLayout) -> np.ndarray:
    T = layout.horizon
    x = np.concatenate([rng.uniform(0.95, 1.05, T + 1), rng.uniform(-0.1, 0.1, T)])
    y = np.concatenate([rng.uniform(80, 120, T + 1), rng.uniform(20, 30, T + 1), rng.uniform(-10, 10, T)])
    lam = rng.normal(size=layout.equality_rows)
    mu = rng.uniform(0, 1, layout.inequality_rows)
    return layout.join(x, y, lam, mu)


def test_layout_of_a_single_step():
    layout = VariableLayout(1)
    assert layout.upper_size == 3
    assert layout.lower_size == 5
    assert layout.equality_rows == 4
    assert layout.inequality_rows == 3
    assert layout.names()[:8] == ['alpha[0]', 'alpha[1]', 'rate[0]', 'supply[0]', 'supply[1]', 'collateral[0]', 'collateral[1]', 'delta[0]']


def test_layout_split_and_join(rng):
    layout = VariableLayout(HORIZON)
    z = rng.normal(size=layout.size)
    np.testing.assert_array_equal(layout.join(*layout.split(z)), z)
    with pytest.raises(ValueError):
        layout.split(z[:-1])


def test_problem_validation():
    problem = flat_problem(horizon=2)
    with pytest.raises(ValueError):
        HorizonProblem(initial_state=problem.initial_state, forecasts=problem.forecasts, protocol=ProtocolParams(horizon=3))
    with pytest.raises(ValueError):
        HorizonProblem(
            initial_state=SystemState(supply=0.0, collateral=1.0, redemption_price=1.0),
            forecasts=problem.forecasts,
            protocol=problem.protocol
        )


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(100):
        model = assemble(random_problem(rng))
        layout = model.layout
        z = random_point(rng, layout)
        x, y, lam, mu = layout.split(z)

        gradient_x, gradient_y = model.upper_objective_gradient(x, y)
        assert relative_error(gradient_x, numerical_jacobian(lambda u: model.upper_objective(u, y), x)) <= 1e-5
        assert relative_error(gradient_y, numerical_jacobian(lambda v: model.upper_objective(x, v), y)) <= 1e-5

        gradient_x, gradient_y = model.lower_objective_gradient(x, y)
        assert relative_error(gradient_x, numerical_jacobian(lambda u: model.lower_objective(u, y), x)) <= 1e-5
        assert relative_error(gradient_y, numerical_jacobian(lambda v: model.lower_objective(x, v), y)) <= 1e-5

        assert relative_error(model.upper_dynamics_jacobian(x), numerical_jacobian(model.upper_dynamics, x)) <= 1e-5
        g_x, g_y = model.lower_dynamics_jacobian(x, y)
        assert relative_error(g_x, numerical_jacobian(lambda u: model.lower_dynamics(u, y), x)) <= 1e-5
        assert relative_error(g_y, numerical_jacobian(lambda v: model.lower_dynamics(x, v), y)) <= 1e-5

        h_x, h_y = model.vault_constraints_jacobian(x, y)
        assert relative_error(h_x, numerical_jacobian(lambda u: model.vault_constraints(u, y), x)) <= 1e-5
        assert relative_error(h_y, numerical_jacobian(lambda v: model.vault_constraints(x, v), y)) <= 1e-5

        blocks = model.lagrangian_gradient_jacobian(x, y, lam, mu)
        numerical = numerical_jacobian(lambda w: model.lagrangian_gradient(*layout.split(w)), z)
        assert relative_error(np.hstack(blocks), numerical) <= 1e-5


def test_relaxed_program_jacobians_match_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(20):
        model = assemble(random_problem(rng))
        z = random_point(rng, model.layout)
        mask = rng.uniform(size=model.layout.inequality_rows) < 0.5
        program = model.relaxed_program(0.25, mask)

        assert relative_error(program.gradient(z), numerical_jacobian(program.objective, z)) <= 1e-5
        assert relative_error(program.equality_jacobian(z), numerical_jacobian(program.equalities, z)) <= 1e-5
        assert relative_error(program.inequality_jacobian(z), numerical_jacobian(program.inequalities, z)) <= 1e-5
        assert len(program.equalities(z)) == model.layout.horizon + 1 + model.layout.equality_rows + model.layout.lower_size + int(mask.sum())


def test_kkt_residual_at_rest_is_zero():
    model = assemble(flat_problem(horizon=2))
    z = model.initial_point()
    assert model.kkt_residual(*model.layout.split(z), eps=0.0) <= 1e-8


def test_kkt_residual_reports_the_initial_condition_violation():
    model = assemble(flat_problem(horizon=2))
    layout = model.layout
    x, y, lam, mu = layout.split(model.initial_point())
    y = y.copy()
    y[layout.horizon + 1:2 * (layout.horizon + 1)] += 5.0
    assert model.kkt_residual(x, y, lam, mu, eps=0.0) == pytest.approx(5.0)


def test_kkt_residual_relaxes_the_pairs_without_multiplier():
    model = assemble(flat_problem(horizon=1))
    x, y, lam, mu = model.layout.split(model.initial_point())
    assert model.kkt_residual(x, y, lam, mu, eps=0.5) == pytest.approx(0.0)
    assert model.kkt_residual(x, y, lam, mu, eps=0.5, equality_rows=np.ones(3, dtype=bool)) == pytest.approx(0.5)


def test_simulate_rolls_both_players_forward():
    model = assemble(flat_problem(horizon=2))
    trajectory = model.simulate([0.01, -0.02], [2.0, -1.0])
    np.testing.assert_allclose(trajectory.redemption_price, [1.0, 1.01, 0.99])
    np.testing.assert_allclose(trajectory.supply, [100.0, 102.0, 101.0])
    np.testing.assert_allclose(trajectory.collateral, [25.0, 25.2, 25.1])


def test_initial_point_shifts_the_warm_start():
    model = assemble(flat_problem(horizon=3))
    previous = HorizonTrajectory(
        redemption_price=[1.0, 0.99, 0.97, 0.96],
        rate=[-0.01, -0.02, -0.01],
        supply=[100.0, 101.0, 103.0, 104.0],
        collateral=[25.0, 25.1, 25.3, 25.4],
        delta=[1.0, 2.0, 1.0]
    )
    trajectory = model.trajectory(model.initial_point(previous))
    np.testing.assert_allclose(trajectory.rate, [-0.02, -0.01, -0.01])
    np.testing.assert_allclose(trajectory.delta, [2.0, 1.0, 1.0])
    np.testing.assert_allclose(trajectory.supply, [100.0, 102.0, 103.0, 104.0])


def test_initial_point_clips_the_warm_start():
    model = assemble(flat_problem(horizon=1))
    previous = HorizonTrajectory(redemption_price=[1.0, 1.5, 2.0], rate=[0.5, 0.5], supply=[100.0] * 3, collateral=[25.0] * 3, delta=[0.0, 0.0])
    assert model.trajectory(model.initial_point(previous)).rate[0] == pytest.approx(model.rate_bound)


def test_debug_dump_is_json():
    model = assemble(flat_problem(horizon=1))
    document = srsly.json_loads(model.debug_dump(model.initial_point(), eps=0.5))
    assert document['horizon'] == 1
    assert document['variables']['supply[0]'] == pytest.approx(100.0)
    assert len(document['vault_constraints']) == 3
    assert document['kkt_residual'] == pytest.approx(0.0)
