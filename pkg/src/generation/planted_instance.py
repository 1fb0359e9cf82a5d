"""
Planted Instance
Generated graph together with its hidden planted set and generation logs
"""

from dataclasses import dataclass, field
from typing import Tuple

from graphs.weighted_graph import Edge, VertexSubset, WeightedEdge, WeightedGraph
from generation.model_params import ModelParams


@dataclass(frozen=True)
class PlantedInstance:
    """Graph plus hidden planted set; the generator plants 0..k-1, loaded files may use any k vertices"""

    graph: WeightedGraph
    planted: VertexSubset
    params: ModelParams
    seed: int
    adversary_log: Tuple[Edge, ...] = ()
    cross_edge_log: Tuple[WeightedEdge, ...] = ()
    outer_edge_log: Tuple[WeightedEdge, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def k(self) -> int:
        return len(self.planted)

    @property
    def outside(self) -> VertexSubset:
        return self.planted.complement(self.n)

    def pre_adversary_graph(self) -> WeightedGraph:
        """The graph with every adversary deletion restored"""
        if not self.adversary_log:
            return self.graph
        logged = {(u, v): w for u, v, w in self.cross_edge_log + self.outer_edge_log}
        return self.graph.with_edges((u, v, logged[(u, v)]) for u, v in self.adversary_log)

    def core_graph(self) -> WeightedGraph:
        return self.graph.induced_subgraph(self.planted)[0]

    def outer_graph(self, pre_adversary: bool = False) -> WeightedGraph:
        graph = self.pre_adversary_graph() if pre_adversary else self.graph
        return graph.induced_subgraph(self.outside)[0]

    def planted_density_target(self) -> float:
        """kd/2, the planted weight every recovery clause is measured against"""
        return self.params.k * self.params.d / 2.0

    def with_deletions(self, deleted: Tuple[Edge, ...]) -> 'PlantedInstance':
        return PlantedInstance(
            graph=self.pre_adversary_graph().without_edges(deleted),
            planted=self.planted,
            params=self.params,
            seed=self.seed,
            adversary_log=tuple(sorted(deleted)),
            cross_edge_log=self.cross_edge_log,
            outer_edge_log=self.outer_edge_log,
        )
