"""
Weighted Graph
Immutable undirected graph with non-negative edge weights and subset density arithmetic
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from utils.errors import EmptySubsetError, ParameterError, VertexIndexError

Edge = Tuple[int, int]
WeightedEdge = Tuple[int, int, float]

# Absolute tolerance used for every density comparison
DENSITY_TOL = 1e-9


@dataclass(frozen=True)
class VertexSubset:
    """A set of vertex indices; iteration is in increasing order"""

    members: frozenset

    @classmethod
    def of(cls, vertices: Iterable[int]) -> 'VertexSubset':
        return cls(frozenset(int(v) for v in vertices))

    @classmethod
    def interval(cls, start: int, stop: int) -> 'VertexSubset':
        return cls(frozenset(range(start, stop)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.members

    def sorted(self) -> List[int]:
        return sorted(self.members)

    def intersection(self, other: 'VertexSubset') -> 'VertexSubset':
        return VertexSubset(self.members & other.members)

    def difference(self, other: 'VertexSubset') -> 'VertexSubset':
        return VertexSubset(self.members - other.members)

    def complement(self, n: int) -> 'VertexSubset':
        return VertexSubset(frozenset(range(n)) - self.members)

    def validate(self, n: int) -> 'VertexSubset':
        for v in self.members:
            if not 0 <= v < n:
                raise VertexIndexError(f"Vertex {v} outside [0, {n})")
        return self


SubsetLike = Union[VertexSubset, Iterable[int]]


def as_subset(subset: SubsetLike) -> VertexSubset:
    if isinstance(subset, VertexSubset):
        return subset
    return VertexSubset.of(subset)


class WeightedGraph:
    """Symmetric weighted graph on vertices 0..n-1 stored as a sparse pair map"""

    def __init__(self, vertex_count: int, weights: Optional[Dict[Edge, float]] = None):
        if int(vertex_count) != vertex_count or vertex_count < 0:
            raise ParameterError(f"vertex_count must be a non-negative integer, got {vertex_count}")
        self._n = int(vertex_count)
        self._weights: Dict[Edge, float] = {}
        self._adjacency: Optional[np.ndarray] = None

        for (u, v), w in (weights or {}).items():
            key = self._key(u, v)
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise ParameterError(f"Edge {key} has invalid weight {w}")
            if key in self._weights:
                raise ParameterError(f"Edge {key} given twice")
            if w > 0:
                self._weights[key] = w

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[float]]) -> 'WeightedGraph':
        """Build from (u, v) or (u, v, w) tuples; missing weights default to 1"""
        weights: Dict[Edge, float] = {}
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            key = (min(u, v), max(u, v))
            if key in weights:
                raise ParameterError(f"Edge {key} given twice")
            weights[key] = w
        return cls(vertex_count, weights)

    @classmethod
    def from_adjacency(cls, matrix: np.ndarray) -> 'WeightedGraph':
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParameterError("Adjacency matrix must be square")
        if not np.allclose(matrix, matrix.T, atol=0.0, rtol=0.0):
            raise ParameterError("Adjacency matrix must be symmetric")
        rows, cols = np.nonzero(np.triu(matrix, k=1))
        return cls(matrix.shape[0], {(int(i), int(j)): float(matrix[i, j]) for i, j in zip(rows, cols)})

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def n(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return len(self._weights)

    def _check_vertex(self, i: int) -> int:
        if int(i) != i or not 0 <= i < self._n:
            raise VertexIndexError(f"Vertex {i} outside [0, {self._n})")
        return int(i)

    def _key(self, u: int, v: int) -> Edge:
        u, v = self._check_vertex(u), self._check_vertex(v)
        if u == v:
            raise ParameterError(f"Self loop at vertex {u} is not allowed")
        return (u, v) if u < v else (v, u)

    def weight(self, u: int, v: int) -> float:
        if u == v:
            self._check_vertex(u)
            return 0.0
        return self._weights.get(self._key(u, v), 0.0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.weight(u, v) > 0

    def edges(self) -> List[WeightedEdge]:
        """All edges as (u, v, w) with u < v, sorted"""
        return [(u, v, w) for (u, v), w in sorted(self._weights.items())]

    def edge_keys(self) -> List[Edge]:
        return sorted(self._weights)

    def total_weight(self) -> float:
        return math.fsum(self._weights.values())

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (read-only, cached)"""
        if self._adjacency is None:
            matrix = np.zeros((self._n, self._n))
            if self._weights:
                keys = np.array(list(self._weights.keys()), dtype=int)
                values = np.fromiter(self._weights.values(), dtype=float, count=len(self._weights))
                matrix[keys[:, 0], keys[:, 1]] = values
                matrix[keys[:, 1], keys[:, 0]] = values
            matrix.setflags(write=False)
            self._adjacency = matrix
        return self._adjacency

    def weighted_degree(self, i: int) -> float:
        return float(self.adjacency_matrix()[self._check_vertex(i)].sum())

    def degrees(self) -> np.ndarray:
        return self.adjacency_matrix().sum(axis=1)

    def _indices(self, subset: SubsetLike) -> np.ndarray:
        members = as_subset(subset).validate(self._n)
        return np.array(members.sorted(), dtype=int)

    def rho(self, subset: SubsetLike) -> float:
        """Total edge weight strictly inside ``subset``"""
        idx = self._indices(subset)
        if idx.size < 2:
            return 0.0
        return float(self.adjacency_matrix()[np.ix_(idx, idx)].sum() / 2.0)

    def average_degree(self, subset: SubsetLike) -> float:
        idx = self._indices(subset)
        if idx.size == 0:
            raise EmptySubsetError("average_degree needs a non-empty subset")
        return 2.0 * self.rho(idx.tolist()) / idx.size

    def density(self, subset: SubsetLike) -> float:
        """rho(W)/|W|, the quantity maximized by the densest-subgraph oracle"""
        idx = self._indices(subset)
        if idx.size == 0:
            raise EmptySubsetError("density needs a non-empty subset")
        return self.rho(idx.tolist()) / idx.size

    def induced_subgraph(self, subset: SubsetLike) -> Tuple['WeightedGraph', List[int]]:
        """Subgraph on ``subset`` reindexed to 0..|subset|-1, plus the old index of each new vertex"""
        mapping = self._indices(subset).tolist()
        position = {old: new for new, old in enumerate(mapping)}
        weights = {
            (position[u], position[v]): w
            for (u, v), w in self._weights.items()
            if u in position and v in position
        }
        return WeightedGraph(len(mapping), weights), mapping

    def without_edges(self, pairs: Iterable[Sequence[int]]) -> 'WeightedGraph':
        removed = {self._key(int(p[0]), int(p[1])) for p in pairs}
        return WeightedGraph(self._n, {e: w for e, w in self._weights.items() if e not in removed})

    def with_edges(self, edges: Iterable[WeightedEdge]) -> 'WeightedGraph':
        """Copy with extra edges added; pairs already present are rejected"""
        weights = dict(self._weights)
        for u, v, w in edges:
            key = self._key(int(u), int(v))
            if key in weights:
                raise ParameterError(f"Edge {key} already present")
            weights[key] = float(w)
        return WeightedGraph(self._n, weights)

    def disjoint_union(self, other: 'WeightedGraph') -> 'WeightedGraph':
        """This graph on 0..n-1 followed by ``other`` on n..n+m-1"""
        offset = self._n
        weights = dict(self._weights)
        weights.update({(u + offset, v + offset): w for (u, v), w in other._weights.items()})
        return WeightedGraph(self._n + other._n, weights)

    def scaled(self, factor: float) -> 'WeightedGraph':
        if factor <= 0:
            raise ParameterError(f"Scale factor must be positive, got {factor}")
        return WeightedGraph(self._n, {e: w * factor for e, w in self._weights.items()})

    def complement(self) -> 'WeightedGraph':
        """Unit-weight complement of the edge set"""
        weights = {
            (u, v): 1.0
            for u in range(self._n)
            for v in range(u + 1, self._n)
            if (u, v) not in self._weights
        }
        return WeightedGraph(self._n, weights)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_weighted_edges_from(self.edges())
        return graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._n == other._n and self._weights == other._weights

    def __hash__(self) -> int:
        return hash((self._n, frozenset(self._weights.items())))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self._n}, edges={len(self._weights)})"
