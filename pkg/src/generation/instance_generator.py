"""
Instance Generator
Composes the builders into one of the four planted models
"""

from typing import Any, Dict, Optional

import numpy as np

from graphs.weighted_graph import VertexSubset
from generation.adversary import apply_adversary
from generation.builders import build_dense_core, build_expander, build_gamma_part, plant_cross_edges
from generation.model_params import AdversarySpec, ModelParams
from generation.planted_instance import PlantedInstance
from utils.errors import ParameterError
from utils.logger import get_logger


class InstanceGenerator:
    """Builds planted instances; the same (params, adversary, seed) always gives the same instance"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        config = config or {}
        self.logger = get_logger('instance_generator')
        self.max_retries = config.get('max_retries', 50)
        self.core_attempts = config.get('core_attempts', 200)

    def generate(self, params: ModelParams, adversary_spec: Optional[AdversarySpec] = None,
                 seed: int = 0) -> PlantedInstance:
        params.validate()
        if not 0 <= int(seed) < 2 ** 64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if params.below_probability_floor:
            self.logger.warning(
                f"p = {params.p:.3g} is below kappa*log(n)/n = "
                f"{params.kappa * np.log(params.n) / params.n:.3g}; high-probability claims do not apply")

        core_seed, outer_seed, cross_seed = np.random.SeedSequence(int(seed)).spawn(3)
        k, m = params.k, params.m

        core = build_dense_core(k, params.d, params.core_style, core_seed, self.core_attempts)
        if params.kind.is_expander:
            outer = build_expander(m, int(params.d_prime), params.lam, outer_seed, self.max_retries)
        else:
            outer = build_gamma_part(m, params.gamma, params.d, outer_seed, params.outer_style,
                                     self.max_retries)

        graph, cross_log = plant_cross_edges(core, outer, params.p, cross_seed)
        outer_log = tuple((u + k, v + k, w) for u, v, w in outer.edges())

        instance = PlantedInstance(
            graph=graph,
            planted=VertexSubset.interval(0, k),
            params=params,
            seed=int(seed),
            cross_edge_log=cross_log,
            outer_edge_log=outer_log,
        )
        self.logger.info(
            f"Generated {params.kind.value} instance n={params.n} k={k}: "
            f"{graph.edge_count} edges ({len(cross_log)} cross, {len(outer_log)} outer)")

        if adversary_spec is not None and adversary_spec.strategy != 'none':
            instance = apply_adversary(instance, adversary_spec)
        return instance


def generate(params: ModelParams, adversary_spec: Optional[AdversarySpec] = None, seed: int = 0,
             config: Optional[Dict[str, Any]] = None) -> PlantedInstance:
    return InstanceGenerator(config).generate(params, adversary_spec, seed)
