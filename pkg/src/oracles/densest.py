"""
Densest Subgraph Oracles
Exact max-density subgraph via min cuts, the LP feasibility map, and brute-force DkS
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.flow import minimum_cut

from graphs.weighted_graph import VertexSubset, WeightedGraph
from utils.errors import EnumerationSizeError, ParameterError
from utils.logger import get_logger

logger = get_logger('densest')

SOURCE = -1
SINK = -2
BRUTE_FORCE_MAX_N = 22


@dataclass(frozen=True)
class LpDensestResult:
    """max_W rho(W)/|W| and a set attaining it"""

    value: float
    witness: VertexSubset

    def to_dict(self) -> Dict[str, Any]:
        return {'value': self.value, 'witness': self.witness.sorted()}


def _flow_network(graph: WeightedGraph, threshold: float) -> nx.DiGraph:
    """Source side of a min cut is a set W maximizing rho(W) - threshold*|W|"""
    network = nx.DiGraph()
    network.add_node(SOURCE)
    network.add_node(SINK)
    degrees = graph.degrees()
    for i in range(graph.vertex_count):
        network.add_edge(SOURCE, i, capacity=float(degrees[i]))
        network.add_edge(i, SINK, capacity=2.0 * threshold)
    for u, v, w in graph.edges():
        network.add_edge(u, v, capacity=w)
        network.add_edge(v, u, capacity=w)
    return network


def _update_threshold(network: nx.DiGraph, vertex_count: int, threshold: float) -> None:
    for i in range(vertex_count):
        network[i][SINK]['capacity'] = 2.0 * threshold


def _source_side(network: nx.DiGraph) -> frozenset:
    _, (reachable, _) = minimum_cut(network, SOURCE, SINK, capacity='capacity')
    return frozenset(v for v in reachable if v >= 0)


def densest_subgraph(graph: WeightedGraph, resolution: float = None) -> LpDensestResult:
    """Exact maximum of rho(W)/|W| over non-empty W.

    Binary search on the density threshold with a min-cut test, then a
    fractional-programming polish from the best set found so the returned
    value is attained by the witness.
    """
    n = graph.vertex_count
    if n == 0:
        raise ParameterError("densest_subgraph needs a non-empty graph")
    if graph.edge_count == 0:
        return LpDensestResult(0.0, VertexSubset.of([0]))

    total = graph.total_weight()
    if resolution is None:
        resolution = 1e-9 * (1.0 + total)

    best = frozenset(range(n))
    lo = graph.density(best)
    hi = float(graph.degrees().max()) / 2.0
    network = _flow_network(graph, lo)

    iterations = 0
    while hi - lo > resolution:
        mid = (lo + hi) / 2.0
        _update_threshold(network, n, mid)
        members = _source_side(network)
        iterations += 1
        if members and graph.density(members) > mid:
            best = members
            lo = graph.density(members)
        else:
            hi = mid

    # Each polish step strictly increases the attained density
    while True:
        _update_threshold(network, n, lo)
        members = _source_side(network)
        iterations += 1
        if not members:
            break
        value = graph.density(members)
        if value <= lo + 1e-12 * (1.0 + lo):
            break
        best, lo = members, value

    logger.debug(f"Densest subgraph value {lo:.9g} on {len(best)} vertices after {iterations} cuts")
    return LpDensestResult(lo, VertexSubset(best))


@dataclass(frozen=True)
class LpMapReport:
    """Violations of the LP constraints under x_ij = G_ij/sum G_ii, y_i = G_ii/sum G_ii"""

    empty: bool
    max_violation: float
    violations: Dict[str, float]
    lp_objective: float
    densest_value: float
    objective_within_densest: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'empty': self.empty,
            'max_violation': self.max_violation,
            'violations': dict(self.violations),
            'lp_objective': self.lp_objective,
            'densest_value': self.densest_value,
            'objective_within_densest': self.objective_within_densest,
        }


def check_lp_feasibility_map(graph_outer: WeightedGraph, gram_outer: np.ndarray,
                             densest_value: float = None) -> LpMapReport:
    """Map an SDP solution restricted to V \\ S into the densest-subgraph LP and recheck it"""
    gram_outer = np.asarray(gram_outer, dtype=float)
    m = graph_outer.vertex_count
    if gram_outer.shape != (m, m):
        raise ParameterError(f"Gram block shape {gram_outer.shape} does not match {m} outer vertices")

    if densest_value is None:
        densest_value = densest_subgraph(graph_outer).value if m else 0.0

    mass = float(np.trace(gram_outer))
    if mass <= 0:
        zero = {name: 0.0 for name in ('x_le_y_i', 'x_le_y_j', 'y_sum', 'x_nonneg', 'y_nonneg')}
        return LpMapReport(True, 0.0, zero, 0.0, densest_value, True)

    y = np.diag(gram_outer) / mass
    edges = graph_outer.edges()
    if edges:
        u = np.array([e[0] for e in edges])
        v = np.array([e[1] for e in edges])
        w = np.array([e[2] for e in edges])
        x = gram_outer[u, v] / mass
        violations = {
            'x_le_y_i': float(max(0.0, (x - y[u]).max())),
            'x_le_y_j': float(max(0.0, (x - y[v]).max())),
            'x_nonneg': float(max(0.0, (-x).max())),
        }
        objective = float(w @ x)
    else:
        violations = {'x_le_y_i': 0.0, 'x_le_y_j': 0.0, 'x_nonneg': 0.0}
        objective = 0.0
    violations['y_sum'] = float(max(0.0, y.sum() - 1.0))
    violations['y_nonneg'] = float(max(0.0, (-y).max()))

    return LpMapReport(
        empty=False,
        max_violation=max(violations.values()),
        violations=violations,
        lp_objective=objective,
        densest_value=densest_value,
        objective_within_densest=objective <= densest_value + 1e-6,
    )


def brute_force_dks(graph: WeightedGraph, k: int, max_n: int = BRUTE_FORCE_MAX_N,
                    chunk_size: int = 4096) -> Tuple[VertexSubset, float]:
    """Exact densest k-subgraph by enumeration; ties go to the lexicographically smallest set"""
    n = graph.vertex_count
    if n > max_n:
        raise EnumerationSizeError(f"Refusing to enumerate subsets of a {n}-vertex graph (limit {max_n})")
    if not 0 <= k <= n:
        raise ParameterError(f"Need 0 <= k <= n, got k={k}, n={n}")
    if k < 2:
        return VertexSubset.of(range(k)), 0.0

    adjacency = graph.adjacency_matrix()
    best_set: Tuple[int, ...] = tuple(range(k))
    best_value = -1.0
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, chunk_size))
        if not chunk:
            break
        index = np.array(chunk, dtype=int)
        values = adjacency[index[:, :, None], index[:, None, :]].sum(axis=(1, 2)) / 2.0
        position = int(np.argmax(values))
        if values[position] > best_value + 1e-12:
            best_value = float(values[position])
            best_set = chunk[position]

    return VertexSubset.of(best_set), graph.rho(best_set)
