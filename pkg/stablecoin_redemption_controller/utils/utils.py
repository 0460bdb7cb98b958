'''
This module contains functions that will be used for miscelaneus tasks across the library.
'''

import numpy as np

from confection import Config
from pathlib import Path
from pydantic import BaseModel
from pydantic import ValidationError
from typing import Dict, Iterable, Type, TypeVar
from typing import Union
from wasabi import Printer

from stablecoin_redemption_controller.exceptions import ConfigError
from stablecoin_redemption_controller.exceptions import NumericalAbortError

ModelType = TypeVar('ModelType', bound=BaseModel)

CONFIG_SECTIONS = ('scenario', 'agents', 'protocol', 'speculator', 'forecaster', 'controller', 'study')


def get_printer(verbose: bool=True) -> Printer:
    '''
    This function creates the printer used to report progress and timings.

    Parameters:
    verbose(bool): Whether the messages are shown.

    Returns:
    Printer: A wasabi printer. It prints nothing when verbose is False.
    '''
    return Printer(no_print=not verbose)


def ensure_finite(name: str, *values: Union[float, np.ndarray]) -> None:
    '''
    This function checks that every value passed is finite.

    Parameters:
    name(str): Name of the quantity, used in the error message.
    values(float | np.ndarray): The values to check.

    Returns:
    None.
    '''
    for value in values:
        if not np.all(np.isfinite(value)):
            raise NumericalAbortError(f'Non-finite value found in {name}: {value}')


def derive_seed(master_seed: int, *keys: int) -> int:
    '''
    This function derives an independent integer seed from a master seed and a sequence of keys, e.g. (cell, episode).

    Parameters:
    master_seed(int): The seed of the whole study.
    keys(int): Position of the stream inside the study.

    Returns:
    int: A 63 bit seed. The same inputs always give the same seed.
    '''
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(key) for key in keys))
    low, high = sequence.generate_state(2, dtype=np.uint32)
    return int((int(high) << 31) ^ int(low))


def counter_based_generator(seed: int, stream: int=0) -> np.random.Generator:
    '''
    This function creates a counter-based random generator (Philox) keyed by a seed and a stream number.

    Parameters:
    seed(int): The episode seed.
    stream(int): Number of the independent stream, e.g. 0 for demand and 1 for collateral price.

    Returns:
    np.random.Generator: The generator.
    '''
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def read_config_file(path: Union[str, Path]) -> Dict[str, Dict]:
    '''
    This function reads a configuration file with sections such as [scenario] or [agents].

    Parameters:
    path(str | Path): Path of the configuration file.

    Returns:
    Dict[str, Dict]: One dictionary of overrides per section.
    '''
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f'Configuration file {path} does not exist.')

    try:
        config = Config().from_disk(path)
    except Exception as error:
        raise ConfigError(f'Configuration file {path} could not be parsed: {error}') from error

    unknown = [section for section in config if section not in CONFIG_SECTIONS]
    if len(unknown) > 0:
        raise ConfigError('Unknown configuration sections: ' + ', '.join(unknown))

    return {section: dict(values) for section, values in config.items()}


def build_model(model: Type[ModelType], overrides: Dict=None, **defaults) -> ModelType:
    '''
    This function creates a configuration model from defaults and overrides, converting validation errors into configuration errors.

    Parameters:
    model(Type[BaseModel]): The pydantic model to create.
    overrides(Dict): Values that replace the defaults.
    defaults: The default values.

    Returns:
    BaseModel: The validated model.
    '''
    values = {**defaults, **(overrides or {})}
    try:
        return model(**values)
    except ValidationError as error:
        raise ConfigError(f'Invalid {model.__name__}: {error}') from error


def round_values(values: Iterable[float], precision: int) -> list:
    '''
    This function rounds a list of values, leaving None untouched.
    '''
    return [None if value is None else round(float(value), precision) for value in values]
