'''
This module contains the solver of the receding-horizon game: a smooth NLP solver, the single-level reduction of the game and the relaxation loop.
'''

from stablecoin_redemption_controller.solver.horizon_problem import BilevelHorizonModel
from stablecoin_redemption_controller.solver.horizon_problem import HorizonProblem
from stablecoin_redemption_controller.solver.horizon_problem import VariableLayout
from stablecoin_redemption_controller.solver.horizon_problem import assemble
from stablecoin_redemption_controller.solver.mpcc import HorizonSolution
from stablecoin_redemption_controller.solver.mpcc import OuterIterate
from stablecoin_redemption_controller.solver.mpcc import kkt_residual
from stablecoin_redemption_controller.solver.mpcc import solve_mpcc
from stablecoin_redemption_controller.solver.nonlinear_program import NlpResult
from stablecoin_redemption_controller.solver.nonlinear_program import NonlinearProgram
from stablecoin_redemption_controller.solver.nonlinear_program import nlp_solve
