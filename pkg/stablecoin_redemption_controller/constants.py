'''
This module contains constants that will be used across the entire library.
'''

import os

BASE_DIRECTORY = os.path.dirname(os.path.abspath(__file__))

# Protocol
PEG_PRICE = 1.0
DEFAULT_HORIZON = 10
WEIGHT_TOLERANCE = 0.01
WEIGHT_CAP = 1000.0
RATE_BOUND = 0.1 # |δα| per step
SUPPLY_BOUND_FRACTION = 0.5 # |Δ| ≤ fraction · S₀ inside the horizon problem
HORIZON_SUPPLY_FLOOR = 0.01 # S_t ≥ fraction · S₀ for the trial points of the horizon problem

# Speculator
DISCOUNT = 0.95
ARBITRAGE_WEIGHT = 1.0
MIN_COLLATERAL_RATIO = 1.5

# Solver
MU_TOLERANCE = 1e-4
MAX_OUTER_ITERATIONS = 10
INNER_TOLERANCE = 1e-6
INNER_MAX_ITERATIONS = 200
INITIAL_RELAXATION = 1.0
FEASIBILITY_TOLERANCE = 1e-5
ACTIVE_MULTIPLIER = 1e-8 # μ_i above it keeps pair i at μ_i·h_i = ε

# Controllers
PROPORTIONAL_GAIN = 0.05
FALLBACK_GAIN = 0.05
CONTROLLER_NAMES = ('dai', 'rai', 'utai')

# Forecasting
FORECASTER_KINDS = ('persistence', 'ewma_drift', 'oracle')
EWMA_WEIGHT = 0.3
DRIFT_WINDOW = 10

# Market agents
ARBITRAGE_GAIN = 50.0
SPECULATOR_GAIN = 100.0
MEMORY_DISCOUNT = 0.9
MEMORY_CUTOFF = 1e-6
RETURN_SMOOTHING = 0.1
CRISIS_THRESHOLD = 1.8
CRISIS_MULTIPLIER = 5.0
SUPPLY_FLOOR_FRACTION = 1e-6

# Scenarios
SCENARIO_KINDS = ('default', 'drift', 'stress', 'sustained_shock', 'vault_crisis')
EPISODE_STEPS = 100
INITIAL_DEMAND = 100.0
INITIAL_ETH_PRICE = 10.0
INITIAL_COLLATERAL_RATIO = 2.5
DEMAND_SIGMA = 0.01
DRIFT_MU = 0.003
STRESS_SIGMA = 0.03
STRESS_SHOCKS = ((20, 0.25, 0.1), (55, 0.20, 0.1), (75, -0.25, 0.1))
SUSTAINED_SHOCK = (30, 0.4, 0.03, 10) # step, magnitude, decay, plateau length
ETH_SIGMA = 0.02
CRASH_START = 20
CRASH_LENGTH = 30
CRASH_RATE = -0.02
DEMAND_FLOOR_FRACTION = 1e-3

# Harness
REPEG_BAND = 0.01
REPEG_PERSISTENCE = 5
MONTE_CARLO_TRIALS = 20
ARBITRAGE_LEVELS = (0.0, 50.0)
STUDY_SCENARIOS = ('default', 'drift', 'stress', 'sustained_shock')
MASTER_SEED = 2024
CSV_PRECISION = 6
TRACE_COLUMNS = (
    't', 'demand', 'supply', 'collateral', 'eth_price', 'market_price', 'redemption_price',
    'delta_arb', 'delta_spec', 'gamma', 'solver_iters', 'solver_eps', 'fallback'
)

# CLI exit codes
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ABORT = 3
