"""
Experiment Configuration
Parameter grid, seeds, adversary and solver settings of one experiment
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from generation.model_params import AdversarySpec, ModelParams
from oracles.calibration import CalibrationCache, calibrate_xi
from utils.config_manager import ConfigManager
from utils.errors import ParameterError

XiSource = Union[float, str, Dict[str, Any]]

DEFAULT_CALIBRATION = {'trials': 20, 'seed': 0}


@dataclass
class ExperimentConfig:
    """``grid`` maps ModelParams field names to value lists; the sweep is their Cartesian product.

    ``xi`` is a number, ``'auto'`` or a calibration mapping ``{trials, seed}``;
    the last two estimate xi per grid point with ``calibrate_xi``.
    """

    params: ModelParams
    grid: Dict[str, List[Any]] = field(default_factory=dict)
    adversary: AdversarySpec = field(default_factory=AdversarySpec)
    seeds: List[int] = field(default_factory=lambda: [0])
    tol: float = 1e-5
    max_iter: int = 50000
    xi: XiSource = 2.0
    output_dir: str = 'results'
    workers: int = 1
    check_monotone: bool = True
    brute_force_max_n: int = 24

    def validate(self) -> 'ExperimentConfig':
        if not self.seeds:
            raise ParameterError("seeds must be a non-empty list")
        for seed in self.seeds:
            if int(seed) != seed or not 0 <= seed < 2 ** 64:
                raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
        fields = set(ModelParams.__dataclass_fields__)
        for axis, values in self.grid.items():
            if axis not in fields:
                raise ParameterError(f"Unknown grid axis '{axis}'")
            if not isinstance(values, (list, tuple)) or not values:
                raise ParameterError(f"Grid axis '{axis}' must be a non-empty list")
            for value in values:
                if isinstance(value, float) and not math.isfinite(value):
                    raise ParameterError(f"Grid axis '{axis}' holds a non-finite value {value}")
        if self.tol <= 0 or self.max_iter < 1:
            raise ParameterError(f"Need tol > 0 and max_iter >= 1, got tol={self.tol}, max_iter={self.max_iter}")
        if self.workers < 1:
            raise ParameterError(f"workers must be at least 1, got {self.workers}")
        if not (self.xi == 'auto' or isinstance(self.xi, dict)
                or (isinstance(self.xi, (int, float)) and self.xi > 0)):
            raise ParameterError(f"xi must be a positive number, 'auto' or a calibration mapping, got {self.xi!r}")
        self.adversary.validate()
        return self

    def grid_points(self) -> List[ModelParams]:
        """Grid points in axis order, last axis varying fastest"""
        if not self.grid:
            return [self.params]
        axes = list(self.grid)
        return [self.params.with_updates(**dict(zip(axes, values)))
                for values in itertools.product(*(self.grid[axis] for axis in axes))]

    def resolve_xi(self, params: ModelParams, cache: Optional[CalibrationCache] = None,
                   workers: int = 1) -> float:
        if isinstance(self.xi, (int, float)) and not isinstance(self.xi, bool):
            return float(self.xi)
        spec = dict(DEFAULT_CALIBRATION)
        if isinstance(self.xi, dict):
            spec.update(self.xi)
        return calibrate_xi(params.n, params.k, params.p, int(spec['trials']), int(spec['seed']),
                            workers=workers, cache=cache)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'params': self.params.to_dict(),
            'grid': {axis: list(values) for axis, values in self.grid.items()},
            'adversary': self.adversary.to_dict(),
            'seeds': list(self.seeds),
            'tol': self.tol,
            'max_iter': self.max_iter,
            'xi': self.xi,
            'output_dir': self.output_dir,
            'workers': self.workers,
            'check_monotone': self.check_monotone,
            'brute_force_max_n': self.brute_force_max_n,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        data = dict(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ParameterError(f"Unknown experiment fields: {sorted(unknown)}")
        if 'params' not in data:
            raise ParameterError("experiment.params is required")
        data['params'] = ModelParams.from_dict(data['params'])
        data['adversary'] = AdversarySpec.from_dict(data.get('adversary'))
        data['grid'] = dict(data.get('grid') or {})
        data['seeds'] = [int(seed) for seed in data.get('seeds', [0])]
        return cls(**data).validate()

    @classmethod
    def from_config(cls, config: ConfigManager) -> 'ExperimentConfig':
        return cls.from_dict(config.get('experiment', {}))
