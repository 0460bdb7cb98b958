import time

from pathlib import Path
from typing import Dict, Optional, Union

from stablecoin_redemption_controller.constants import SCENARIO_KINDS
from stablecoin_redemption_controller.controllers.controllers import ControllerConfig
from stablecoin_redemption_controller.core.system_state import ProtocolParams
from stablecoin_redemption_controller.core.system_state import SpeculatorParams
from stablecoin_redemption_controller.exceptions import ConfigError
from stablecoin_redemption_controller.forecasting.forecasters import ForecasterConfig
from stablecoin_redemption_controller.harness.episode import EpisodeTrace
from stablecoin_redemption_controller.harness.episode import run_episode
from stablecoin_redemption_controller.harness.metrics import RunMetrics
from stablecoin_redemption_controller.harness.monte_carlo import CrisisRow
from stablecoin_redemption_controller.harness.monte_carlo import StudyConfig
from stablecoin_redemption_controller.harness.monte_carlo import StudySummary
from stablecoin_redemption_controller.harness.monte_carlo import crisis_study
from stablecoin_redemption_controller.harness.monte_carlo import monte_carlo
from stablecoin_redemption_controller.market.agents import AgentParams
from stablecoin_redemption_controller.market.scenario import ScenarioConfig
from stablecoin_redemption_controller.market.scenario import scenario_preset
from stablecoin_redemption_controller.utils.utils import CONFIG_SECTIONS
from stablecoin_redemption_controller.utils.utils import build_model
from stablecoin_redemption_controller.utils.utils import get_printer
from stablecoin_redemption_controller.utils.utils import read_config_file

SCENARIO_ALIASES = {'sustained': 'sustained_shock', 'crisis': 'vault_crisis'}


def resolve_scenario(name: str) -> str:
    '''
    This function accepts a scenario by its full name or by its short name (sustained, crisis).
    '''
    kind = SCENARIO_ALIASES.get(name, name)
    if kind not in SCENARIO_KINDS:
        raise ConfigError(f'Unknown scenario {name}. Use one of: ' + ', '.join(list(SCENARIO_KINDS) + list(SCENARIO_ALIASES)))
    return kind


class RedemptionPriceStudy:
    '''
    This class groups the configuration of the market, the agents and the controllers in order to run episodes and studies in one go.

    To use this class, instantiate an object with it. For example:
    study = RedemptionPriceStudy(config_path='configs/default.cfg')

    The configuration file is optional; every value it leaves out keeps its default. Sections such as [agents] or [controller] can also be overridden with a dictionary:
    study = RedemptionPriceStudy(overrides={'agents': {'arbitrage_gain': 0.0}})

    To run one episode of the Stackelberg controller in the stress scenario, do the following:
    trace = study.run_episode('utai', 'stress', seed=7)

    To run the Monte Carlo study over every scenario, arbitrage level and controller:
    summary = study.monte_carlo()
    '''
    def __init__(self, config_path: Optional[Union[str, Path]]=None, overrides: Optional[Dict[str, Dict]]=None, verbose: bool=True) -> None:
        '''
        This constructor reads the configuration and validates every section.

        Parameters:
        config_path(str | Path): Optional. A configuration file with the sections scenario, agents, protocol, speculator, forecaster, controller and study.
        overrides(Dict[str, Dict]): Optional. Values per section that replace those of the file.
        verbose(bool): Whether progress and timings are printed.

        Returns:
        None.
        '''
        sections = {} if config_path is None else read_config_file(config_path)
        for section, values in (overrides or {}).items():
            if section not in CONFIG_SECTIONS:
                raise ConfigError(f'Unknown configuration section: {section}')
            sections[section] = {**sections.get(section, {}), **values}

        self._scenario_overrides = dict(sections.get('scenario', {}))
        self._scenario_overrides.pop('kind', None)
        self._agents = build_model(AgentParams, sections.get('agents'))
        self._protocol = build_model(ProtocolParams, sections.get('protocol'))
        self._speculator = build_model(SpeculatorParams, sections.get('speculator'))
        self._forecaster = build_model(ForecasterConfig, sections.get('forecaster'))
        self._controller_config = build_model(ControllerConfig, sections.get('controller'))
        self._study = build_model(StudyConfig, sections.get('study'))
        self._verbose = verbose
        self._printer = get_printer(verbose)
        # Scenario overrides are checked once here instead of at the first episode
        scenario_preset('default', **self._scenario_overrides)

    @property
    def study(self) -> StudyConfig:
        return self._study

    @property
    def agents(self) -> AgentParams:
        return self._agents

    @property
    def printer(self):
        return self._printer

    def scenario(self, name: str, steps: Optional[int]=None) -> ScenarioConfig:
        '''
        This method creates a scenario preset with the overrides of the configuration.

        Parameters:
        name(str): Full or short name of the scenario.
        steps(int): Optional. Replaces the number of steps.

        Returns:
        ScenarioConfig: The scenario.
        '''
        overrides = dict(self._scenario_overrides)
        if steps is not None:
            overrides['steps'] = steps
        return scenario_preset(resolve_scenario(name), **overrides)

    def run_episode(self, controller: str, scenario: str, seed: int, steps: Optional[int]=None) -> EpisodeTrace:
        '''
        This method runs one episode.

        Parameters:
        controller(str): One of 'dai', 'rai' or 'utai'.
        scenario(str): Full or short name of the scenario.
        seed(int): Seed of the exogenous paths.
        steps(int): Optional. Replaces the number of steps of the scenario.

        Returns:
        EpisodeTrace: The trace.
        '''
        self._printer.info(f'Running {controller} in the {resolve_scenario(scenario)} scenario.')
        start = time.time()
        trace = run_episode(
            controller,
            self.scenario(scenario, steps),
            seed,
            agents=self._agents,
            controller_config=self._controller_config,
            forecaster=self._forecaster,
            protocol=self._protocol,
            speculator=self._speculator
        )
        end = time.time()
        self._printer.good(f'Episode analyzed in {end - start} seconds.')
        return trace

    def metrics(self, trace: EpisodeTrace) -> RunMetrics:
        return RunMetrics.from_trace(trace, self._speculator.min_collateral_ratio)

    def monte_carlo(self, trace_directory: Optional[Path]=None) -> StudySummary:
        '''
        This method runs the Monte Carlo study of the configuration.

        Parameters:
        trace_directory(Path): Optional. Where to write the trace of every episode.

        Returns:
        StudySummary: The summary.
        '''
        self._printer.info('Running the Monte Carlo study.')
        start = time.time()
        summary = monte_carlo(
            self._study,
            self._agents,
            self._controller_config,
            self._forecaster,
            self._protocol,
            self._speculator,
            self._scenario_overrides,
            trace_directory,
            self._verbose
        )
        end = time.time()
        self._printer.good(f'Study analyzed in {end - start} seconds.')
        failures = summary.failures()
        if len(failures) > 0:
            self._printer.warn(f'{len(failures)} episodes failed.')
        return summary

    def crisis(self, trace_directory: Optional[Path]=None) -> Dict[str, CrisisRow]:
        '''
        This method runs the vault crisis study with the agents' arbitrage gain.

        Parameters:
        trace_directory(Path): Optional. Where to write the trace of every episode.

        Returns:
        Dict[str, CrisisRow]: One row per controller.
        '''
        self._printer.info('Running the vault crisis study.')
        start = time.time()
        rows = crisis_study(
            trials=self._study.trials,
            arbitrage_gain=self._agents.arbitrage_gain,
            master_seed=self._study.master_seed,
            steps=self._study.steps,
            controllers=self._study.controllers,
            agents=self._agents,
            controller_config=self._controller_config,
            forecaster=self._forecaster,
            protocol=self._protocol,
            speculator=self._speculator,
            scenario_overrides=self._scenario_overrides,
            trace_directory=trace_directory,
            workers=self._study.workers,
            verbose=self._verbose
        )
        end = time.time()
        self._printer.good(f'Crisis study analyzed in {end - start} seconds.')
        return rows
