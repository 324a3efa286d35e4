import json
import logging

import pytest

from config import GridConfig
from wavepacket import GridSpec


@pytest.fixture
def config_file(tmp_path):
    def write(grid):
        path = tmp_path / 'qif_config.json'
        path.write_text(json.dumps({'grid': grid}))
        return str(path)
    return write


def test_defaults(config_file):
    config = GridConfig(config_file({}), environ={})
    assert config.grid() == GridSpec()


def test_file_overrides(config_file):
    config = GridConfig(config_file({'n_points': 1024, 'p_min': -8}), environ={})
    assert config.grid() == GridSpec(1024, -8.0, 16.0)


def test_env_overrides_file(config_file):
    config = GridConfig(config_file({'n_points': 1024}), environ={'QIF_GRID_N': '2048'})
    assert config.grid().n_points == 2048
    assert GridConfig(config_file({}), environ={'QIF_GRID_N': '  '}).grid().n_points == 4096


def test_flags_override_env(config_file):
    config = GridConfig(config_file({}), environ={'QIF_GRID_N': '2048'})
    grid = config.grid({'n_points': 512, 'p_min': None, 'p_max': 4.0})
    assert grid == GridSpec(512, -16.0, 4.0)


def test_unknown_keys_warn(config_file, caplog):
    config = GridConfig(config_file({'n_points': 1024, 'spacing': 3}), environ={})
    with caplog.at_level(logging.WARNING):
        instance = config.get_instance_config()
    assert 'spacing' not in instance
    assert 'spacing' in caplog.text


def test_invalid_grid_size(config_file):
    with pytest.raises(ValueError):
        GridConfig(config_file({}), environ={'QIF_GRID_N': '1000'}).grid()
    with pytest.raises(ValueError):
        GridConfig(config_file({}), environ={'QIF_GRID_N': 'many'}).grid()


def test_config_options_listing(config_file):
    text = GridConfig(config_file({'p_max': 8}), environ={}).get_config_options()
    assert text.startswith('Grid Configuration Options:')
    assert 'p_max: 8.0 / 16.0' in text
