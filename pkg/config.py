import os
import json
import logging

from wavepacket import GridSpec

log = logging.getLogger(__name__)

default_config_file = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'qif_config.json')

class GridConfig():
    """
    Configuration for the momentum grid shared by every grid computation.
    Defaults can be overridden by a json config file, the QIF_GRID_N
    environment variable and explicit command line flags, in that order.
    """
    env_var = 'QIF_GRID_N'

    default_configs = {
        'n_points': 4096,
        'p_min': -16.0,
        'p_max': 16.0,
        }

    #name: {'description': 'text', 'sources': [where it may be overridden from]}
    config_options = {
        'n_points': {'description': 'Number of grid nodes (power of two)', 'sources': ['file', 'env', 'flag']},
        'p_min': {'description': 'Lowest momentum node in units of W', 'sources': ['file', 'flag']},
        'p_max': {'description': 'Momentum span end (excluded) in units of W', 'sources': ['file', 'flag']},
        }

    converters = {
        'n_points': int,
        'p_min': float,
        'p_max': float,
        }

    def __init__(self, config_file = None, environ = None):
        self.config_file = config_file
        self.environ = os.environ if environ is None else environ

    def load_file(self):
        """
        Return the overrides stored in the json config file, or {} if there
        is no file
        """
        filename = self.config_file
        if filename is None:
            if not os.path.exists(default_config_file):
                return {}
            filename = default_config_file
        with open(filename, 'r') as fp:
            data = json.load(fp)
        grid = data.get('grid', {})
        for key in grid.keys():
            if key not in self.config_options:
                log.warning('Ignoring unknown grid config key %r in %s', key, filename)
        return self.permitted(grid, 'file')

    def load_env(self):
        value = self.environ.get(self.env_var, None)
        if value is None or value.strip() == '':
            return {}
        return self.permitted({'n_points': value.strip()}, 'env')

    def permitted(self, config, source):
        result = {}
        for key, val in config.items():
            option = self.config_options.get(key, None)
            if option is None or source not in option['sources']:
                continue
            if val is None:
                continue
            result[key] = self.converters[key](val)
        return result

    def get_instance_config(self, config = {}):
        """
        Update default configs with file, environment and permitted flag
        overrides
        """
        instance_config = dict(self.default_configs)
        instance_config.update(self.load_file())
        instance_config.update(self.load_env())
        instance_config.update(self.permitted(config, 'flag'))
        return instance_config

    def get_config_options(self, config = {}):
        lines = []
        lines.append('Grid Configuration Options:')
        instance_config = self.get_instance_config(config)
        for key in self.config_options.keys():
            lines.append(f'{key}: {instance_config[key]} / {self.default_configs[key]}')
        return ' | '.join(lines)

    def grid(self, config = {}):
        """
        Build the GridSpec described by the merged configuration
        """
        instance_config = self.get_instance_config(config)
        log.debug('Grid configuration %s', instance_config)
        return GridSpec(**instance_config)
