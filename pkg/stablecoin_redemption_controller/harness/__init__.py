'''
This module contains the episode runner, the metrics and the Monte Carlo studies.
'''

from stablecoin_redemption_controller.harness.episode import EpisodeHeader
from stablecoin_redemption_controller.harness.episode import EpisodeRecord
from stablecoin_redemption_controller.harness.episode import EpisodeTrace
from stablecoin_redemption_controller.harness.episode import replay_episode
from stablecoin_redemption_controller.harness.episode import run_episode
from stablecoin_redemption_controller.harness.metrics import AuxiliaryMetrics
from stablecoin_redemption_controller.harness.metrics import RunMetrics
from stablecoin_redemption_controller.harness.metrics import auxiliary_metrics
from stablecoin_redemption_controller.harness.metrics import p_mad
from stablecoin_redemption_controller.harness.metrics import r_mad
from stablecoin_redemption_controller.harness.metrics import time_to_repeg
from stablecoin_redemption_controller.harness.monte_carlo import CellSummary
from stablecoin_redemption_controller.harness.monte_carlo import CrisisRow
from stablecoin_redemption_controller.harness.monte_carlo import StudyConfig
from stablecoin_redemption_controller.harness.monte_carlo import StudySummary
from stablecoin_redemption_controller.harness.monte_carlo import crisis_study
from stablecoin_redemption_controller.harness.monte_carlo import monte_carlo
