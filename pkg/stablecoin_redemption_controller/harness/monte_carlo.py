import math
import statistics

from dataclasses import dataclass
from dataclasses import field
from joblib import Parallel
from joblib import delayed
from pathlib import Path
from pydantic import BaseModel
from pydantic import validator
from tqdm import tqdm
from typing import Dict, List, Optional

from stablecoin_redemption_controller.constants import ARBITRAGE_GAIN
from stablecoin_redemption_controller.constants import ARBITRAGE_LEVELS
from stablecoin_redemption_controller.constants import CONTROLLER_NAMES
from stablecoin_redemption_controller.constants import CSV_PRECISION
from stablecoin_redemption_controller.constants import EPISODE_STEPS
from stablecoin_redemption_controller.constants import MASTER_SEED
from stablecoin_redemption_controller.constants import MONTE_CARLO_TRIALS
from stablecoin_redemption_controller.constants import SCENARIO_KINDS
from stablecoin_redemption_controller.constants import STUDY_SCENARIOS
from stablecoin_redemption_controller.controllers.controllers import ControllerConfig
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.exceptions import NumericalAbortError
from stablecoin_redemption_controller.forecasting.forecasters import ForecasterConfig
from stablecoin_redemption_controller.harness.episode import EpisodeHeader
from stablecoin_redemption_controller.harness.episode import replay_episode
from stablecoin_redemption_controller.harness.metrics import RunMetrics
from stablecoin_redemption_controller.harness.trace_io import write_trace
from stablecoin_redemption_controller.market.agents import AgentParams
from stablecoin_redemption_controller.market.scenario import scenario_preset
from stablecoin_redemption_controller.utils.statistics_results import StatisticsResults
from stablecoin_redemption_controller.utils.utils import derive_seed
from stablecoin_redemption_controller.utils.utils import round_values

POOLED_ROWS = ('Avg.', 'Median', 'Std. Dev.')


class StudyConfig(BaseModel):
    '''
    The grid of a Monte Carlo study: arbitrage levels × scenarios × controllers, with a number of seeds per cell.
    '''
    trials: int = MONTE_CARLO_TRIALS
    steps: int = EPISODE_STEPS
    scenarios: List[str] = list(STUDY_SCENARIOS)
    arbitrage_levels: List[float] = list(ARBITRAGE_LEVELS)
    controllers: List[str] = list(CONTROLLER_NAMES)
    master_seed: int = MASTER_SEED
    workers: int = 1

    class Config:
        extra = 'forbid'
        allow_mutation = False

    @validator('trials', 'steps')
    def _check_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError('Must be at least 1.')
        return value

    @validator('scenarios')
    def _check_scenarios(cls, value: List[str]) -> List[str]:
        unknown = [kind for kind in value if kind not in SCENARIO_KINDS]
        if len(value) == 0 or len(unknown) > 0:
            raise ValueError(f'Scenarios must be taken from {", ".join(SCENARIO_KINDS)}.')
        return value

    @validator('controllers')
    def _check_controllers(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in CONTROLLER_NAMES]
        if len(value) == 0 or len(unknown) > 0:
            raise ValueError(f'Controllers must be taken from {", ".join(CONTROLLER_NAMES)}.')
        return value

    @validator('arbitrage_levels')
    def _check_levels(cls, value: List[float]) -> List[float]:
        if len(value) == 0 or any(level < 0 for level in value):
            raise ValueError('Arbitrage levels must be nonnegative.')
        return value

    @validator('workers')
    def _check_workers(cls, value: int) -> int:
        if value == 0 or value < -1:
            raise ValueError('Workers must be -1 or any positive number greater than 0.')
        return value


@dataclass(frozen=True)
class EpisodeOutcome:
    '''
    Metrics of one episode of a study, or the error that stopped it.
    '''
    arbitrage_level: float
    scenario: str
    controller: str
    trial: int
    seed: int
    metrics: Optional[RunMetrics] = None
    error: Optional[str] = None


@dataclass
class CellSummary:
    '''
    Statistics of one controller over the seeds of one (arbitrage level, scenario) cell. time_to_repeg describes the seeds that re-pegged, repeg_median counts a seed that never re-pegged as +inf.
    '''
    arbitrage_level: float
    scenario: str
    controller: str
    p_mad: StatisticsResults
    r_mad: StatisticsResults
    min_gamma: StatisticsResults
    time_to_repeg: StatisticsResults
    repeg_median: float
    episodes: int
    failed_episodes: int
    never_repegged: int
    below_min_ratio: int
    solver_failures: int

    @classmethod
    def from_outcomes(cls, arbitrage_level: float, scenario: str, controller: str, outcomes: List[EpisodeOutcome]) -> 'CellSummary':
        finished = [outcome.metrics for outcome in outcomes if outcome.metrics is not None]
        repegs = [metrics.time_to_repeg for metrics in finished if metrics.time_to_repeg is not None]
        # A seed that never re-pegs ranks after every seed that did
        ranked = [math.inf if metrics.time_to_repeg is None else metrics.time_to_repeg for metrics in finished]
        return cls(
            arbitrage_level=arbitrage_level,
            scenario=scenario,
            controller=controller,
            p_mad=StatisticsResults.from_values(metrics.p_mad for metrics in finished),
            r_mad=StatisticsResults.from_values(metrics.r_mad for metrics in finished),
            min_gamma=StatisticsResults.from_values(metrics.min_gamma for metrics in finished),
            time_to_repeg=StatisticsResults.from_values(repegs),
            repeg_median=statistics.median(ranked) if ranked else math.nan,
            episodes=len(outcomes),
            failed_episodes=len(outcomes) - len(finished),
            never_repegged=len(finished) - len(repegs),
            below_min_ratio=sum(1 for metrics in finished if metrics.below_min_ratio),
            solver_failures=sum(metrics.solver_failures for metrics in finished)
        )


@dataclass
class StudySummary:
    '''
    Results of a Monte Carlo study: one summary per cell and controller, pooled rows over the cells and the outcome of every episode.
    '''
    study: StudyConfig
    cells: List[CellSummary]
    outcomes: List[EpisodeOutcome] = field(default_factory=list)

    def cell(self, arbitrage_level: float, scenario: str, controller: str) -> CellSummary:
        for cell in self.cells:
            if cell.arbitrage_level == arbitrage_level and cell.scenario == scenario and cell.controller == controller:
                return cell
        raise ValueError(f'No cell for arbitrage {arbitrage_level}, scenario {scenario} and controller {controller}.')

    def pooled(self) -> Dict[str, Dict[str, Dict[str, float]]]:
        '''
        This method calculates the mean, median and standard deviation over the cells of each controller's mean p-MAD and r-MAD.

        Returns:
        Dict[str, Dict[str, Dict[str, float]]]: Row label ('Avg.', 'Median', 'Std. Dev.') → controller → metric → value.
        '''
        rows = {label: {} for label in POOLED_ROWS}
        for controller in self.study.controllers:
            cells = [cell for cell in self.cells if cell.controller == controller and cell.p_mad.count > 0]
            for metric in ('p_mad', 'r_mad'):
                results = StatisticsResults.from_values(getattr(cell, metric).mean for cell in cells)
                for label, value in zip(POOLED_ROWS, (results.mean, results.median, results.std)):
                    rows[label].setdefault(controller, {})[metric] = value
        return rows

    def failures(self) -> List[EpisodeOutcome]:
        return [outcome for outcome in self.outcomes if outcome.error is not None]

    def to_document(self, precision: int=CSV_PRECISION) -> Dict:
        '''
        This method converts the summary into plain data for JSON: cells keyed by arbitrage level, scenario and controller, the pooled rows and the failed episodes.
        '''
        def rounded(value: float) -> float:
            return round_values([value], precision)[0]

        cells = [
            {
                'arbitrage_level': cell.arbitrage_level,
                'scenario': cell.scenario,
                'controller': cell.controller,
                'p_mad': rounded(cell.p_mad.mean),
                'r_mad': rounded(cell.r_mad.mean),
                'p_mad_median': rounded(cell.p_mad.median),
                'p_mad_std': rounded(cell.p_mad.std),
                'min_gamma': rounded(cell.min_gamma.mean),
                'time_to_repeg_median': rounded(cell.repeg_median) if math.isfinite(cell.repeg_median) else None,
                'never_repegged': cell.never_repegged,
                'below_min_ratio': cell.below_min_ratio,
                'episodes': cell.episodes,
                'failed_episodes': cell.failed_episodes,
                'solver_failures': cell.solver_failures,
            }
            for cell in self.cells
        ]
        pooled = {
            label: {
                controller: {metric: rounded(value) for metric, value in metrics.items()}
                for controller, metrics in by_controller.items()
            }
            for label, by_controller in self.pooled().items()
        }
        failures = [
            {'arbitrage_level': outcome.arbitrage_level, 'scenario': outcome.scenario, 'controller': outcome.controller, 'seed': outcome.seed, 'error': outcome.error}
            for outcome in self.failures()
        ]
        return {'study': self.study.dict(), 'cells': cells, 'pooled': pooled, 'failures': failures}


@dataclass(frozen=True)
class _EpisodeTask:
    arbitrage_level: float
    scenario: str
    trial: int
    header: EpisodeHeader


def _run_task(task: _EpisodeTask, trace_directory: Optional[Path]) -> EpisodeOutcome:
    header = task.header
    try:
        trace = replay_episode(header)
        if trace_directory is not None:
            write_trace(trace, trace_directory)
        metrics = RunMetrics.from_trace(trace, header.speculator.min_collateral_ratio)
        error = None
    except (NumericalAbortError, ValueError) as failure:
        metrics = None
        error = f'{type(failure).__name__}: {failure}'

    return EpisodeOutcome(
        arbitrage_level=task.arbitrage_level,
        scenario=task.scenario,
        controller=header.controller,
        trial=task.trial,
        seed=header.seed,
        metrics=metrics,
        error=error
    )


def study_tasks(
    study: StudyConfig,
    agents: AgentParams,
    controller_config: ControllerConfig,
    forecaster: ForecasterConfig,
    protocol: ProtocolParams,
    speculator: SpeculatorParams,
    scenario_overrides: Optional[Dict]=None
) -> List[_EpisodeTask]:
    '''
    This function lists the episodes of a study. Cell k = (arbitrage level, scenario) gives trial j the seed derive_seed(master, k, j), shared by every controller so they face the same paths.
    '''
    tasks = []
    for level_index, level in enumerate(study.arbitrage_levels):
        cell_agents = AgentParams(**{**agents.dict(), 'arbitrage_gain': level})
        for scenario_index, kind in enumerate(study.scenarios):
            cell = level_index * len(study.scenarios) + scenario_index
            scenario = scenario_preset(kind, **{**(scenario_overrides or {}), 'steps': study.steps})
            for trial in range(study.trials):
                seed = derive_seed(study.master_seed, cell, trial)
                for controller in study.controllers:
                    header = EpisodeHeader(
                        controller=controller,
                        seed=seed,
                        scenario=scenario,
                        agents=cell_agents,
                        controller_config=controller_config,
                        forecaster=forecaster,
                        protocol=protocol,
                        speculator=speculator
                    )
                    tasks.append(_EpisodeTask(arbitrage_level=level, scenario=kind, trial=trial, header=header))
    return tasks


def monte_carlo(
    study: Optional[StudyConfig]=None,
    agents: Optional[AgentParams]=None,
    controller_config: Optional[ControllerConfig]=None,
    forecaster: Optional[ForecasterConfig]=None,
    protocol: Optional[ProtocolParams]=None,
    speculator: Optional[SpeculatorParams]=None,
    scenario_overrides: Optional[Dict]=None,
    trace_directory: Optional[Path]=None,
    verbose: bool=False
) -> StudySummary:
    '''
    This function runs every episode of a study, in parallel when the study has more than one worker. An episode that fails is recorded in the summary and does not stop the study.

    Parameters:
    study(StudyConfig): Optional. The grid. Defaults are used if None, as for the other configurations.
    agents(AgentParams): Gains of the agents. The arbitrage gain is replaced by each level of the study.
    controller_config(ControllerConfig): Settings of the controllers.
    forecaster(ForecasterConfig): Forecaster of the Stackelberg controller.
    protocol(ProtocolParams): Protocol parameters.
    speculator(SpeculatorParams): Speculator parameters.
    scenario_overrides(Dict): Fields that replace the defaults of every scenario preset.
    trace_directory(Path): Optional. Where to write one CSV and one JSON header per episode.
    verbose(bool): Whether to show a progress bar.

    Returns:
    StudySummary: The summary. Cells follow the order of the grid and do not depend on the order in which the episodes finished.
    '''
    study = study or StudyConfig()
    tasks = study_tasks(
        study,
        agents or AgentParams(),
        controller_config or ControllerConfig(),
        forecaster or ForecasterConfig(),
        protocol or ProtocolParams(),
        speculator or SpeculatorParams(),
        scenario_overrides
    )
    directory = None if trace_directory is None else Path(trace_directory)
    outcomes = Parallel(n_jobs=study.workers)(
        delayed(_run_task)(task, directory)
        for task in tqdm(tasks, desc='Episodes', disable=not verbose)
    )

    cells = []
    for level in study.arbitrage_levels:
        for kind in study.scenarios:
            for controller in study.controllers:
                cell_outcomes = [
                    outcome for outcome in outcomes
                    if outcome.arbitrage_level == level and outcome.scenario == kind and outcome.controller == controller
                ]
                cells.append(CellSummary.from_outcomes(level, kind, controller, cell_outcomes))

    return StudySummary(study=study, cells=cells, outcomes=list(outcomes))


@dataclass(frozen=True)
class CrisisRow:
    '''
    Vault safety of one controller over the seeds of the crisis scenario.
    '''
    controller: str
    mean_min_gamma: float
    median_min_gamma: float
    share_below_min_ratio: float
    mean_p_mad: float
    min_gammas: List[float]


def crisis_study(
    trials: int=MONTE_CARLO_TRIALS,
    arbitrage_gain: float=ARBITRAGE_GAIN,
    master_seed: int=MASTER_SEED,
    steps: int=EPISODE_STEPS,
    controllers: Optional[List[str]]=None,
    agents: Optional[AgentParams]=None,
    controller_config: Optional[ControllerConfig]=None,
    forecaster: Optional[ForecasterConfig]=None,
    protocol: Optional[ProtocolParams]=None,
    speculator: Optional[SpeculatorParams]=None,
    scenario_overrides: Optional[Dict]=None,
    trace_directory: Optional[Path]=None,
    workers: int=1,
    verbose: bool=False
) -> Dict[str, CrisisRow]:
    '''
    This function runs the vault crisis scenario for every controller and reports how close each one lets the vaults get to liquidation.

    Parameters:
    trials(int): Seeds per controller.
    arbitrage_gain(float): K_A of the arbitrageur.
    master_seed(int): Seed of the study.
    steps(int): Steps per episode.
    controllers(List[str]): Optional. All controllers if None.

    Returns:
    Dict[str, CrisisRow]: One row per controller.
    '''
    speculator = speculator or SpeculatorParams()
    study = StudyConfig(
        trials=trials,
        steps=steps,
        scenarios=['vault_crisis'],
        arbitrage_levels=[arbitrage_gain],
        controllers=controllers or list(CONTROLLER_NAMES),
        master_seed=master_seed,
        workers=workers
    )
    summary = monte_carlo(study, agents, controller_config, forecaster, protocol, speculator, scenario_overrides, trace_directory, verbose)

    rows = {}
    for controller in study.controllers:
        finished = [
            outcome.metrics for outcome in summary.outcomes
            if outcome.controller == controller and outcome.metrics is not None
        ]
        min_gammas = [metrics.min_gamma for metrics in finished]
        rows[controller] = CrisisRow(
            controller=controller,
            mean_min_gamma=statistics.mean(min_gammas) if min_gammas else float('nan'),
            median_min_gamma=statistics.median(min_gammas) if min_gammas else float('nan'),
            share_below_min_ratio=sum(gamma < speculator.min_collateral_ratio for gamma in min_gammas) / len(min_gammas) if min_gammas else float('nan'),
            mean_p_mad=statistics.mean(metrics.p_mad for metrics in finished) if finished else float('nan'),
            min_gammas=min_gammas
        )
    return rows
