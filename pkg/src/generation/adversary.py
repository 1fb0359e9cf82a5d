"""
Monotone Adversary
Deletes logged cross and outer edges; planted edges are never candidates
"""

from typing import List

import numpy as np

from graphs.weighted_graph import Edge
from generation.model_params import AdversarySpec
from generation.planted_instance import PlantedInstance
from utils.logger import get_logger

logger = get_logger('adversary')


def apply_adversary(instance: PlantedInstance, spec: AdversarySpec) -> PlantedInstance:
    """Return a copy of ``instance`` with the adversary's deletions applied and logged"""
    spec.validate()
    if spec.strategy == 'none':
        return instance.with_deletions(())

    cross = [(u, v) for u, v, _ in instance.cross_edge_log]
    outer = [(u, v) for u, v, _ in instance.outer_edge_log]
    rng = np.random.default_rng(spec.seed)

    if spec.strategy == 'random_fraction':
        deleted = _sample(cross, spec.q_cross, rng) + _sample(outer, spec.q_outer, rng)
    else:
        deleted = _target_high_degree(instance, cross + outer, spec.count)

    result = instance.with_deletions(tuple(deleted))
    logger.info(f"Adversary '{spec.strategy}' deleted {len(deleted)} of "
                f"{len(cross) + len(outer)} logged edges")
    return result


def _sample(pool: List[Edge], fraction: float, rng: np.random.Generator) -> List[Edge]:
    if fraction >= 1.0:
        return list(pool)
    if fraction <= 0.0 or not pool:
        return []
    keep = rng.random(len(pool)) < fraction
    return [edge for edge, chosen in zip(pool, keep) if chosen]


def _target_high_degree(instance: PlantedInstance, pool: List[Edge], count: int) -> List[Edge]:
    """Strip every logged edge touching the ``count`` heaviest vertices (ties by index)"""
    if count <= 0:
        return []
    degrees = instance.pre_adversary_graph().degrees()
    order = sorted(range(instance.n), key=lambda i: (-degrees[i], i))
    targets = set(order[:count])
    return [(u, v) for u, v in pool if u in targets or v in targets]
