'''
This module contains the exceptions raised by the library besides the plain ValueError used for invalid arguments.
'''


class ConfigError(ValueError):
    '''
    Raised when a configuration file or a configuration model is invalid.
    '''


class NumericalAbortError(ArithmeticError):
    '''
    Raised when a computation produces NaN or Inf values and cannot continue.
    '''
