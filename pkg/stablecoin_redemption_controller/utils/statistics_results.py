import statistics

from dataclasses import dataclass
from typing import Iterable


@dataclass
class StatisticsResults:
    '''
    This data class stores the mean, median and standard deviation of a metric over several episodes.
    '''
    mean: float=0
    median: float=0
    std: float=0
    count: int=0

    @classmethod
    def from_values(cls, values: Iterable[float]) -> 'StatisticsResults':
        '''
        This method calculates the statistics of a list of values. The statistics module works with exact fractions, so the result does not depend on the order of the values.

        Parameters:
        values(Iterable[float]): The values to summarize.

        Returns:
        StatisticsResults: The mean, median and population standard deviation. All zero when no values are given.
        '''
        values = [float(value) for value in values]
        if len(values) == 0:
            return cls()

        return cls(
            mean=statistics.mean(values),
            median=statistics.median(values),
            std=statistics.pstdev(values),
            count=len(values)
        )
