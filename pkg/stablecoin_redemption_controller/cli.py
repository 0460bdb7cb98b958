'''
This module contains the command line interface: run a single episode, a Monte Carlo study or the vault crisis study.
'''

import typer

from pathlib import Path
from typing import Callable, Dict, Optional

from stablecoin_redemption_controller.constants import CONTROLLER_NAMES
from stablecoin_redemption_controller.constants import EXIT_CONFIG_ERROR
from stablecoin_redemption_controller.constants import EXIT_NUMERICAL_ABORT
from stablecoin_redemption_controller.exceptions import ConfigError
from stablecoin_redemption_controller.exceptions import NumericalAbortError
from stablecoin_redemption_controller.harness.trace_io import print_summary_table
from stablecoin_redemption_controller.harness.trace_io import write_summary
from stablecoin_redemption_controller.harness.trace_io import write_trace
from stablecoin_redemption_controller.redemption_price_study import RedemptionPriceStudy
from stablecoin_redemption_controller.utils.utils import get_printer
from stablecoin_redemption_controller.utils.utils import round_values

app = typer.Typer(add_completion=False, help='Redemption price controllers for a crypto-backed stablecoin.')

CONTROLLER_HELP = 'Controller: ' + ', '.join(CONTROLLER_NAMES) + '.'
SCENARIO_HELP = 'Scenario: default, drift, stress, sustained or crisis.'


def _overrides(arb: Optional[float], horizon: Optional[int], kp: Optional[float], steps: Optional[int]=None, trials: Optional[int]=None, seed: Optional[int]=None, workers: Optional[int]=None) -> Dict[str, Dict]:
    # Flags left out keep the values of the configuration file
    sections = {
        'agents': {'arbitrage_gain': arb},
        'protocol': {'horizon': horizon},
        'controller': {'proportional_gain': kp},
        'study': {'steps': steps, 'trials': trials, 'master_seed': seed, 'workers': workers},
    }
    return {
        section: {key: value for key, value in values.items() if value is not None}
        for section, values in sections.items()
    }


def _guarded(command: Callable[[], None], quiet: bool) -> None:
    printer = get_printer(not quiet)
    try:
        command()
    except NumericalAbortError as error:
        printer.fail(f'Numerical abort: {error}')
        raise typer.Exit(code=EXIT_NUMERICAL_ABORT)
    except ValueError as error:
        printer.fail(f'Invalid configuration: {error}' if isinstance(error, ConfigError) else str(error))
        raise typer.Exit(code=EXIT_CONFIG_ERROR)


@app.command()
def run(
    controller: str = typer.Option('utai', help=CONTROLLER_HELP),
    scenario: str = typer.Option('default', help=SCENARIO_HELP),
    arb: Optional[float] = typer.Option(None, help='Arbitrage gain K_A, e.g. 0 or 50.'),
    seed: int = typer.Option(0, help='Seed of the exogenous paths.'),
    steps: Optional[int] = typer.Option(None, help='Steps of the episode (default 100).'),
    horizon: Optional[int] = typer.Option(None, help='Horizon T of the Stackelberg controller (default 10).'),
    kp: Optional[float] = typer.Option(None, help='Gain K_p of the proportional controller (default 0.05).'),
    config: Optional[Path] = typer.Option(None, help='Configuration file.'),
    out: Path = typer.Option(Path('results'), help='Output directory.'),
    quiet: bool = typer.Option(False, help='Print nothing.')
) -> None:
    '''
    Run one episode and write its trace as CSV, with a JSON header that replays it.
    '''
    def command() -> None:
        study = RedemptionPriceStudy(config, _overrides(arb, horizon, kp), verbose=not quiet)
        trace = study.run_episode(controller, scenario, seed, steps)
        path = write_trace(trace, out)
        metrics = study.metrics(trace)
        study.printer.table(
            [
                ('p-MAD', *round_values([metrics.p_mad], 6)),
                ('r-MAD', *round_values([metrics.r_mad], 6)),
                ('min Γ', *round_values([metrics.min_gamma], 6)),
                ('time to re-peg', metrics.time_to_repeg),
                ('solver fallbacks', metrics.solver_failures),
            ],
            header=('Metric', 'Value'),
            divider=True
        )
        study.printer.good(f'Trace written to {path}.')

    _guarded(command, quiet)


@app.command()
def mc(
    arb: Optional[float] = typer.Option(None, help='Use a single arbitrage gain instead of the study levels (0 and 50).'),
    seed: Optional[int] = typer.Option(None, help='Master seed of the study.'),
    steps: Optional[int] = typer.Option(None, help='Steps per episode (default 100).'),
    horizon: Optional[int] = typer.Option(None, help='Horizon T of the Stackelberg controller (default 10).'),
    kp: Optional[float] = typer.Option(None, help='Gain K_p of the proportional controller (default 0.05).'),
    trials: Optional[int] = typer.Option(None, help='Seeds per cell (default 20).'),
    workers: Optional[int] = typer.Option(None, help='Parallel workers, -1 for all cores.'),
    config: Optional[Path] = typer.Option(None, help='Configuration file.'),
    out: Path = typer.Option(Path('results'), help='Output directory.'),
    traces: bool = typer.Option(False, help='Also write the trace of every episode.'),
    quiet: bool = typer.Option(False, help='Print nothing.')
) -> None:
    '''
    Run the Monte Carlo study over scenarios, arbitrage levels and controllers and write its summary as JSON.
    '''
    def command() -> None:
        overrides = _overrides(None, horizon, kp, steps, trials, seed, workers)
        if arb is not None:
            overrides['study']['arbitrage_levels'] = [arb]
        study = RedemptionPriceStudy(config, overrides, verbose=not quiet)
        summary = study.monte_carlo(out / 'traces' if traces else None)
        document = summary.to_document()
        path = write_summary(document, out / 'summary.json')
        print_summary_table(document, study.printer)
        study.printer.good(f'Summary written to {path}.')

    _guarded(command, quiet)


@app.command()
def crisis(
    arb: Optional[float] = typer.Option(None, help='Arbitrage gain K_A (default 50).'),
    seed: Optional[int] = typer.Option(None, help='Master seed of the study.'),
    steps: Optional[int] = typer.Option(None, help='Steps per episode (default 100).'),
    horizon: Optional[int] = typer.Option(None, help='Horizon T of the Stackelberg controller (default 10).'),
    kp: Optional[float] = typer.Option(None, help='Gain K_p of the proportional controller (default 0.05).'),
    trials: Optional[int] = typer.Option(None, help='Seeds per controller (default 20).'),
    workers: Optional[int] = typer.Option(None, help='Parallel workers, -1 for all cores.'),
    config: Optional[Path] = typer.Option(None, help='Configuration file.'),
    out: Path = typer.Option(Path('results'), help='Output directory.'),
    quiet: bool = typer.Option(False, help='Print nothing.')
) -> None:
    '''
    Run the vault crisis scenario and report how close each controller lets the vaults get to liquidation.
    '''
    def command() -> None:
        study = RedemptionPriceStudy(config, _overrides(arb, horizon, kp, steps, trials, seed, workers), verbose=not quiet)
        rows = study.crisis()
        document = {
            name: {
                'mean_min_gamma': round_values([row.mean_min_gamma], 6)[0],
                'median_min_gamma': round_values([row.median_min_gamma], 6)[0],
                'share_below_min_ratio': round_values([row.share_below_min_ratio], 6)[0],
                'mean_p_mad': round_values([row.mean_p_mad], 6)[0],
            }
            for name, row in rows.items()
        }
        path = write_summary(document, out / 'crisis.json')
        study.printer.table(
            [(name, *values.values()) for name, values in document.items()],
            header=('Controller', 'Mean min Γ', 'Median min Γ', 'Share below β', 'Mean p-MAD'),
            divider=True
        )
        study.printer.good(f'Summary written to {path}.')

    _guarded(command, quiet)


def main() -> None:
    app()
