'''
This module contains the helpers used across the library: printing, configuration files, seeds and statistics.
'''
