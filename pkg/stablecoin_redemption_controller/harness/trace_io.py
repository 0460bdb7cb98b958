'''
This module contains the readers and writers of traces and study summaries.
'''

import csv
import srsly

from pathlib import Path
from typing import Dict, List, Union
from wasabi import Printer

from stablecoin_redemption_controller.constants import CSV_PRECISION
from stablecoin_redemption_controller.constants import TRACE_COLUMNS
from stablecoin_redemption_controller.harness.episode import EpisodeHeader
from stablecoin_redemption_controller.harness.episode import EpisodeTrace

PathLike = Union[str, Path]


def trace_file_name(header: EpisodeHeader) -> str:
    '''
    This function names the files of an episode after its scenario, controller, arbitrage gain and seed.
    '''
    return f'{header.scenario.kind}_{header.controller}_arb{header.agents.arbitrage_gain:g}_seed{header.seed}'


def _format(value, precision: int) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return f'{float(value):.{precision}f}'


def trace_rows(trace: EpisodeTrace, precision: int=CSV_PRECISION) -> List[List[str]]:
    '''
    This function formats the records of a trace as rows of text, in the column order of the CSV header.
    '''
    return [
        [_format(getattr(record, column), precision) for column in TRACE_COLUMNS]
        for record in trace.records
    ]


def write_trace_csv(trace: EpisodeTrace, path: PathLike, precision: int=CSV_PRECISION) -> Path:
    '''
    This function writes the records of a trace as CSV, with floats at a fixed number of decimals.

    Parameters:
    trace(EpisodeTrace): The trace.
    path(str | Path): The file to write.
    precision(int): Decimals of the floats.

    Returns:
    Path: The file written.
    '''
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as output:
        writer = csv.writer(output)
        writer.writerow(TRACE_COLUMNS)
        writer.writerows(trace_rows(trace, precision))
    return path


def write_trace_header(trace: EpisodeTrace, path: PathLike) -> Path:
    '''
    This function writes the header of a trace as JSON, so the episode can be replayed.
    '''
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    srsly.write_json(path, trace.header.dict())
    return path


def read_trace_header(path: PathLike) -> EpisodeHeader:
    '''
    This function reads a header written by write_trace_header.
    '''
    return EpisodeHeader.parse_obj(srsly.read_json(Path(path)))


def write_trace(trace: EpisodeTrace, directory: PathLike, precision: int=CSV_PRECISION) -> Path:
    '''
    This function writes the CSV and the JSON header of a trace into a directory.

    Returns:
    Path: The CSV file.
    '''
    name = trace_file_name(trace.header)
    directory = Path(directory)
    write_trace_header(trace, directory / f'{name}.json')
    return write_trace_csv(trace, directory / f'{name}.csv', precision)


def write_summary(document: Dict, path: PathLike) -> Path:
    '''
    This function writes a study summary as JSON.
    '''
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    srsly.write_json(path, document)
    return path


def print_summary_table(document: Dict, printer: Printer) -> None:
    '''
    This function prints the p-MAD and r-MAD of a study: one row per cell, then the pooled Avg., Median and Std. Dev. rows.

    Parameters:
    document(Dict): The summary, as returned by StudySummary.to_document.
    printer(Printer): Where to print.

    Returns:
    None.
    '''
    controllers = document['study']['controllers']
    header = ['Arbitrage', 'Scenario'] + [f'{name} {metric}' for name in controllers for metric in ('p-MAD', 'r-MAD')]
    cells = {}
    for cell in document['cells']:
        cells.setdefault((cell['arbitrage_level'], cell['scenario']), {})[cell['controller']] = cell

    rows = []
    for (level, scenario), by_controller in cells.items():
        row = [f'{level:g}', scenario]
        for name in controllers:
            cell = by_controller.get(name, {})
            row += [cell.get('p_mad', ''), cell.get('r_mad', '')]
        rows.append(row)
    for label, by_controller in document['pooled'].items():
        row = [label, '']
        for name in controllers:
            row += [by_controller[name]['p_mad'], by_controller[name]['r_mad']]
        rows.append(row)

    printer.table(rows, header=header, divider=True)
