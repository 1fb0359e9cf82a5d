"""
Spectral Calibration
Monte-Carlo estimate of xi in ||B|| <= xi * sqrt(n p) for centered bipartite Bernoulli blocks
"""

import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from oracles.spectral import spectral_norm
from utils.errors import ParameterError
from utils.logger import get_logger

logger = get_logger('calibration')


@dataclass(frozen=True)
class CalibrationResult:
    n: int
    k: int
    p: float
    trials: int
    seed: int
    ratios: List[float]

    @property
    def xi(self) -> float:
        return max(self.ratios)

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'k': self.k, 'p': self.p, 'trials': self.trials, 'seed': self.seed,
                'xi': self.xi, 'ratios': list(self.ratios)}


def deviation_matrix(n: int, k: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """B = H - E[H] on the S x (V \\ S) blocks (S = first k vertices), zero elsewhere"""
    block = (rng.random((k, n - k)) < p).astype(float) - p
    matrix = np.zeros((n, n))
    matrix[:k, k:] = block
    matrix[k:, :k] = block.T
    return matrix


def cross_deviation_matrix(adjacency: np.ndarray, planted: Sequence[int], p: float) -> np.ndarray:
    """B built from an observed adjacency matrix instead of a fresh sample"""
    planted = np.asarray(planted, dtype=int)
    outside = np.setdiff1d(np.arange(adjacency.shape[0]), planted)
    matrix = np.zeros_like(adjacency, dtype=float)
    matrix[np.ix_(planted, outside)] = adjacency[np.ix_(planted, outside)] - p
    matrix[np.ix_(outside, planted)] = adjacency[np.ix_(outside, planted)] - p
    return matrix


def _trial_ratio(n: int, k: int, p: float, seed: np.random.SeedSequence) -> float:
    rng = np.random.default_rng(seed)
    return spectral_norm(deviation_matrix(n, k, p, rng)) / math.sqrt(n * p)


def calibration_trials(n: int, k: int, p: float, trials: int, seed: int = 0,
                       workers: int = 1, kappa: float = 1.0) -> CalibrationResult:
    """Per-trial ratios ||B|| / sqrt(np); trial i always uses child seed i"""
    if not 0 < k < n:
        raise ParameterError(f"Need 0 < k < n, got k={k}, n={n}")
    if not 0 < p <= 1:
        raise ParameterError(f"p must lie in (0, 1], got {p}")
    if int(trials) != trials or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials}")
    if n * p < kappa * math.log(n):
        logger.warning(f"np = {n * p:.3g} is below kappa*log(n) = {kappa * math.log(n):.3g}")

    seeds = np.random.SeedSequence(int(seed)).spawn(int(trials))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            ratios = list(pool.map(lambda s: _trial_ratio(n, k, p, s), seeds))
    else:
        ratios = [_trial_ratio(n, k, p, s) for s in seeds]

    logger.info(f"Calibration n={n} k={k} p={p} trials={trials}: xi = {max(ratios):.4f}")
    return CalibrationResult(n, k, float(p), int(trials), int(seed), ratios)


def calibrate_xi(n: int, k: int, p: float, trials: int, seed: int = 0, workers: int = 1,
                 cache: Optional['CalibrationCache'] = None) -> float:
    """Largest observed ||B|| / sqrt(np) over ``trials`` samples"""
    if cache is not None:
        cached = cache.get(n, k, p, trials, seed)
        if cached is not None:
            return cached['xi']
    result = calibration_trials(n, k, p, trials, seed, workers)
    if cache is not None:
        cache.put(result)
    return result.xi


class CalibrationCache:
    """JSON file of calibration results keyed by (n, k, p, trials, seed)"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.logger = get_logger('calibration_cache')

    @staticmethod
    def key(n: int, k: int, p: float, trials: int, seed: int) -> str:
        return f"n={n},k={k},p={float(p)!r},trials={trials},seed={seed}"

    def _read(self) -> Dict[str, Any]:
        if not self.path.exists():
            return {}
        try:
            with open(self.path, 'r') as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.error(f"Ignoring unreadable calibration cache {self.path}: {e}")
            return {}

    def get(self, n: int, k: int, p: float, trials: int, seed: int) -> Optional[Dict[str, Any]]:
        with self._lock:
            return self._read().get(self.key(n, k, p, trials, seed))

    def put(self, result: CalibrationResult) -> None:
        with self._lock:
            data = self._read()
            data[self.key(result.n, result.k, result.p, result.trials, result.seed)] = result.to_dict()
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'w') as handle:
                json.dump(data, handle, indent=2, sort_keys=True)
