"""
Configuration Management System
Handles loading and accessing configuration from YAML files
"""

import copy
import yaml
from pathlib import Path
from typing import Any, Dict, List, Optional


REQUIRED_SECTIONS = ('experiment', 'generation', 'solver', 'oracles', 'logging')


class ConfigManager:
    """Manages toolkit configuration from YAML files"""

    def __init__(self, config_path: Optional[str] = None, data: Optional[Dict[str, Any]] = None):
        self.config_path = Path(config_path) if config_path else None
        self.config_data: Dict[str, Any] = {}
        if data is not None:
            self.config_data = _merge(self._get_default_config(), data)
        else:
            self.load_config()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ConfigManager':
        """Build a configuration from an in-memory mapping layered over the defaults"""
        return cls(data=data)

    def load_config(self) -> None:
        """Load configuration from YAML file"""
        try:
            if self.config_path is None:
                raise FileNotFoundError("No configuration file given")
            if not self.config_path.exists():
                raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

            with open(self.config_path, 'r') as file:
                loaded = yaml.safe_load(file) or {}
            self.config_data = _merge(self._get_default_config(), loaded)

        except FileNotFoundError as e:
            print(f"Error loading configuration: {e}")
            self.config_data = self._get_default_config()
        except yaml.YAMLError as e:
            print(f"Error loading configuration: {e}")
            # Load default configuration if file load fails
            self.config_data = self._get_default_config()

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation
        e.g., 'solver.tol' -> config['solver']['tol']
        """
        keys = key.split('.')
        value = self.config_data

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def validate_config(self) -> List[str]:
        """Return a list of configuration problems (empty when valid)"""
        problems = []
        for section in REQUIRED_SECTIONS:
            if not isinstance(self.config_data.get(section), dict):
                problems.append(f"missing section '{section}'")

        tol = self.get('solver.tol')
        if not isinstance(tol, (int, float)) or tol <= 0:
            problems.append(f"solver.tol must be a positive number, got {tol!r}")

        max_iter = self.get('solver.max_iter')
        if not isinstance(max_iter, int) or max_iter < 1:
            problems.append(f"solver.max_iter must be a positive integer, got {max_iter!r}")

        seeds = self.get('experiment.seeds')
        if seeds is not None and (not isinstance(seeds, list) or not seeds):
            problems.append("experiment.seeds must be a non-empty list")

        grid = self.get('experiment.grid') or {}
        if not isinstance(grid, dict):
            problems.append("experiment.grid must be a mapping of axis name to value list")
        else:
            for axis, values in grid.items():
                if not isinstance(values, list) or not values:
                    problems.append(f"experiment.grid.{axis} must be a non-empty list")

        xi = self.get('experiment.xi', 'auto')
        if not (xi == 'auto' or isinstance(xi, (int, float, dict))):
            problems.append(f"experiment.xi must be a number, 'auto' or a calibration mapping, got {xi!r}")

        return problems

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.config_data)

    def _get_default_config(self) -> Dict[str, Any]:
        """Return default configuration if file loading fails"""
        return {
            'experiment': {
                'params': {
                    'kind': 'GammaReg', 'n': 1000, 'k': 125, 'd': 100,
                    'delta': 0.005, 'gamma': 0.005, 'xi': 2.0, 'kappa': 1.0,
                    'core_style': 'regular', 'outer_style': 'matching',
                },
                'grid': {},
                'adversary': {'strategy': 'none'},
                'seeds': [0],
                'tol': 1e-5,
                'max_iter': 50000,
                'xi': 2.0,
                'output_dir': 'results',
                'workers': 1,
                'check_monotone': True,
                'brute_force_max_n': 24,
            },
            'generation': {
                'max_retries': 50,
                'core_attempts': 200,
            },
            'solver': {
                'tol': 1e-5,
                'max_iter': 50000,
                'rho': 1.0,
                'adapt_interval': 50,
                'check_interval': 10,
                'balance_factor': 10.0,
                'log_interval': 1000,
            },
            'rounding': {
                'slack_factor': 10.0,
            },
            'oracles': {
                'calibration_cache': 'results/calibration_cache.json',
                'brute_force_max_n': 22,
            },
            'logging': {
                'level': 'INFO',
                'file_path': 'logs/semirandom_dks.log',
                'console_output': True,
            },
            'monitoring': {
                'enabled': True,
                'metrics_file': 'logs/metrics.json',
            },
        }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively layer ``override`` on top of ``base``"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged
