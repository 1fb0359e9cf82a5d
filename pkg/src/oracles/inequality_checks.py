"""
Inequality Checks
Numerical checks of the expander quadratic-form bound and of the general vs regular guarantee comparison
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from generation.model_params import ModelKind, ModelParams
from graphs.weighted_graph import WeightedGraph
from oracles.spectral import certify_expander
from rounding.guarantees import guarantee_bounds
from utils.errors import ParameterError
from utils.logger import get_logger

logger = get_logger('inequality_checks')


def quadratic_form_bound_check(graph: WeightedGraph, d_prime: float, lam: float,
                               U: np.ndarray) -> Tuple[float, float, bool]:
    """U^T A U against ((d' - lam)/m) (sum U)^2 + lam ||U||^2 on a certified expander"""
    certificate = certify_expander(graph, d_prime, lam)
    if not certificate:
        raise ParameterError(f"Graph is not a certified ({d_prime}, {lam})-expander: {certificate.to_dict()}")
    vector = np.asarray(U, dtype=float).ravel()
    m = graph.vertex_count
    if vector.shape[0] != m:
        raise ParameterError(f"U has {vector.shape[0]} entries, graph has {m} vertices")

    lhs = float(vector @ graph.adjacency_matrix() @ vector)
    rhs = (d_prime - lam) / m * float(vector.sum()) ** 2 + lam * float(vector @ vector)
    return lhs, rhs, lhs <= rhs + 1e-9 * (1.0 + abs(rhs))


def _open_grid(upper: float, resolution: int) -> np.ndarray:
    return upper * np.arange(1, resolution + 1) / (resolution + 1)


@dataclass
class TauComparison:
    """Counts behind ``tau_comparison_check``"""

    domain_points: int = 0
    domain_failures: List[Tuple[float, float]] = field(default_factory=list)
    rate_points: int = 0
    rate_failures: int = 0
    gamma_points: int = 0
    gamma_failures: int = 0
    exp_points: int = 0
    exp_failures: int = 0

    @property
    def passed(self) -> bool:
        return not (self.domain_failures or self.rate_failures or self.gamma_failures or self.exp_failures)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'domain_points': self.domain_points,
            'domain_failures': [list(point) for point in self.domain_failures],
            'rate_points': self.rate_points,
            'rate_failures': self.rate_failures,
            'gamma_points': self.gamma_points,
            'gamma_failures': self.gamma_failures,
            'exp_points': self.exp_points,
            'exp_failures': self.exp_failures,
            'passed': self.passed,
        }


def _compare_pair(general: ModelParams, regular: ModelParams) -> bool:
    return guarantee_bounds(general).bound >= guarantee_bounds(regular).bound


def tau_comparison_details(grid_resolution: int = 100, parameter_resolution: int = 10,
                           n: int = 2000, k: int = 100, d: float = 40.0, xi: float = 2.0) -> TauComparison:
    if int(grid_resolution) != grid_resolution or grid_resolution < 2:
        raise ParameterError(f"grid_resolution must be an integer >= 2, got {grid_resolution}")
    if int(parameter_resolution) != parameter_resolution or parameter_resolution < 2:
        raise ParameterError(f"parameter_resolution must be an integer >= 2, got {parameter_resolution}")
    result = TauComparison()

    # sqrt(x + y) > y / (1 - x) on x, y > 0, x + y < 1
    axis = np.arange(1, grid_resolution) / grid_resolution
    x, y = np.meshgrid(axis, axis, indexing='ij')
    inside = x + y < 1.0
    holds = np.sqrt(x + y) > y / (1.0 - x)
    result.domain_points = int(inside.sum())
    result.domain_failures = [(float(a), float(b)) for a, b in zip(x[inside & ~holds], y[inside & ~holds])]

    # rate forms up to constants: x = delta + gamma, y = sqrt(delta n / (d k))
    rate_deltas = _open_grid(min(1.0, d * k / n), parameter_resolution)
    for delta in rate_deltas:
        for gamma in _open_grid(1.0, parameter_resolution):
            rx, ry = delta + gamma, math.sqrt(delta * n / (d * k))
            if rx + ry >= 1.0:
                continue
            result.rate_points += 1
            general = math.sqrt(rx + ry)
            regular = 1.0 / math.sqrt(1.0 + (d * k / (delta * n)) * (1.0 - gamma - delta) ** 2)
            if not general > regular:
                result.rate_failures += 1

    # literal bounds wherever the general-kind guarantee is usable
    delta_max = (1.0 / (12.0 * xi)) ** 2 * d * k / n
    for delta in _open_grid(delta_max, parameter_resolution):
        for gamma in _open_grid(1.0 / 24.0, parameter_resolution):
            general = ModelParams(ModelKind.GAMMA, n, k, d, float(delta), gamma=float(gamma), xi=xi)
            if not guarantee_bounds(general).valid:
                continue
            regular = general.with_updates(kind=ModelKind.GAMMA_REG, core_style='regular')
            result.gamma_points += 1
            if not _compare_pair(general, regular):
                result.gamma_failures += 1

    d_prime = 4
    for delta in _open_grid(delta_max, parameter_resolution):
        for lam in _open_grid(float(d_prime), parameter_resolution):
            general = ModelParams(ModelKind.EXP, n, k, d, float(delta), d_prime=d_prime, lam=float(lam), xi=xi)
            if not guarantee_bounds(general).valid:
                continue
            regular = general.with_updates(kind=ModelKind.EXP_REG, core_style='regular')
            result.exp_points += 1
            if not _compare_pair(general, regular):
                result.exp_failures += 1

    logger.info(f"Guarantee comparison: domain {result.domain_points} points, gamma grid "
                f"{result.gamma_points}, exp grid {result.exp_points}, passed={result.passed}")
    return result


def tau_comparison_check(grid_resolution: int = 100) -> bool:
    return tau_comparison_details(grid_resolution).passed
