'''
This module contains the registries where the factories of controllers and forecasters are stored, so components can be created by name.
'''

import catalogue

controllers = catalogue.create('stablecoin_redemption_controller', 'controllers', entry_points=False)
forecasters = catalogue.create('stablecoin_redemption_controller', 'forecasters', entry_points=False)
