"""
Instance Builders
Dense core, outer expander or gamma-bounded part, and random cross edges
"""

from typing import Tuple, Union

import networkx as nx
import numpy as np

from graphs.weighted_graph import WeightedEdge, WeightedGraph
from oracles.densest import densest_subgraph
from oracles.spectral import certify_expander
from utils.errors import ParameterError, RetryExhaustedError
from utils.logger import get_logger

logger = get_logger('builders')

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]

GAMMA_SHRINK = 0.9
DENSITY_TOL = 1e-9


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


def _nx_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2 ** 32))


def _from_networkx(graph: nx.Graph, m: int) -> WeightedGraph:
    return WeightedGraph(m, {(min(u, v), max(u, v)): 1.0 for u, v in graph.edges()})


def random_regular_graph(m: int, d: int, seed: SeedLike = None) -> WeightedGraph:
    """Simple unit-weight d-regular graph on m vertices from the pairing model.

    Above half density the complement is sampled instead.
    """
    if int(d) != d or not 0 <= d < m:
        raise ParameterError(f"Need integer 0 <= d < m, got d={d}, m={m}")
    d = int(d)
    if (m * d) % 2:
        raise ParameterError(f"m*d must be even, got m={m}, d={d}")

    rng = _rng(seed)
    if d > (m - 1) / 2:
        return random_regular_graph(m, m - 1 - d, rng).complement()
    if d == 0:
        return WeightedGraph(m)
    return _from_networkx(nx.random_regular_graph(d, m, seed=_nx_seed(rng)), m)


def build_dense_core(k: int, d: float, style: str = 'regular', seed: SeedLike = None,
                     attempts: int = 200) -> WeightedGraph:
    """Planted graph on k vertices with average weighted degree exactly d"""
    rng = _rng(seed)
    if style == 'regular':
        if int(d) != d or not 0 < d < k or (k * int(d)) % 2:
            raise ParameterError(f"Regular core needs integer 0 < d < k with k*d even, got k={k}, d={d}")
        return random_regular_graph(k, int(d), rng)

    if style != 'weighted_random':
        raise ParameterError(f"Unknown core style '{style}'")
    if not d > 0 or k < 2:
        raise ParameterError(f"weighted_random core needs d > 0 and k >= 2, got k={k}, d={d}")

    probability = min(1.0, d / (k - 1))
    for _ in range(attempts):
        support = _from_networkx(nx.gnp_random_graph(k, probability, seed=_nx_seed(rng)), k)
        if support.edge_count == 0:
            continue
        weights = 1.0 - rng.random(support.edge_count)  # uniform on (0, 1]
        weights *= (k * d / 2.0) / weights.sum()
        return WeightedGraph(k, {edge: float(w) for edge, w in zip(support.edge_keys(), weights)})
    raise RetryExhaustedError(f"weighted_random core stayed empty after {attempts} draws", attempts)


def build_expander(m: int, d_prime: int, lam_target: float, seed: SeedLike = None,
                   max_retries: int = 50) -> WeightedGraph:
    """Certified (d', lambda)-expander on m vertices"""
    if int(d_prime) != d_prime or not 0 <= d_prime < m or (m * int(d_prime)) % 2:
        raise ParameterError(f"Need integer d' < m with m*d' even, got m={m}, d'={d_prime}")
    if not lam_target > 0:
        raise ParameterError(f"lam_target must be positive, got {lam_target}")

    rng = _rng(seed)
    best = float('inf')
    for attempt in range(1, max_retries + 1):
        graph = random_regular_graph(m, int(d_prime), rng)
        certificate = certify_expander(graph, d_prime, lam_target)
        best = min(best, certificate.second_abs_eigenvalue)
        if certificate.passed:
            logger.info(f"Certified ({d_prime}, {lam_target})-expander on {m} vertices: "
                        f"lambda = {certificate.second_abs_eigenvalue:.6f} (attempt {attempt})")
            return graph
    raise RetryExhaustedError(
        f"No ({d_prime}, {lam_target})-expander on {m} vertices in {max_retries} tries; best lambda {best:.6f}",
        max_retries, best)


def build_gamma_part(m: int, gamma: float, d: float, seed: SeedLike = None, style: str = 'random',
                     max_retries: int = 50) -> WeightedGraph:
    """Graph on m vertices with max_W rho(W)/|W| <= gamma*d, checked by the exact oracle"""
    bound = gamma * d
    if not bound > 0:
        raise ParameterError(f"gamma*d must be positive, got {bound}")
    rng = _rng(seed)

    if style == 'empty' or m < 2:
        return WeightedGraph(m)

    if style == 'matching':
        if bound < 0.5:
            raise ParameterError(f"A matching has density 1/2 > gamma*d = {bound:.6g}")
        order = rng.permutation(m)
        pairs = {(int(min(a, b)), int(max(a, b))): 1.0 for a, b in zip(order[0::2], order[1::2])}
        graph = WeightedGraph(m, pairs)
        _certify_gamma(graph, bound)
        return graph

    if style != 'random':
        raise ParameterError(f"Unknown gamma-part style '{style}'")

    target = min(2.0 * bound * GAMMA_SHRINK, m - 1)
    best = float('inf')
    for attempt in range(1, max_retries + 1):
        graph = _from_networkx(nx.gnp_random_graph(m, target / (m - 1), seed=_nx_seed(rng)), m)
        value = densest_subgraph(graph).value
        best = min(best, value)
        if value <= bound + DENSITY_TOL:
            logger.info(f"Gamma part on {m} vertices: max density {value:.6f} <= {bound:.6f} "
                        f"(attempt {attempt})")
            return graph
        target *= GAMMA_SHRINK
    raise RetryExhaustedError(
        f"No gamma part with max density <= {bound:.6g} in {max_retries} tries", max_retries, best)


def _certify_gamma(graph: WeightedGraph, bound: float) -> float:
    value = densest_subgraph(graph).value
    if value > bound + DENSITY_TOL:
        raise RetryExhaustedError(f"Gamma part has density {value:.6g} > {bound:.6g}", 1, value)
    logger.info(f"Gamma part on {graph.vertex_count} vertices: max density {value:.6f} <= {bound:.6f}")
    return value


def plant_cross_edges(core: WeightedGraph, outer: WeightedGraph, p: float,
                      seed: SeedLike = None) -> Tuple[WeightedGraph, Tuple[WeightedEdge, ...]]:
    """Union of core (0..k-1) and outer (k..n-1) plus each S x (V \\ S) pair with probability p"""
    if not 0 <= p <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    rng = _rng(seed)
    k, m = core.vertex_count, outer.vertex_count
    union = core.disjoint_union(outer)

    chosen = rng.random((k, m)) < p
    rows, cols = np.nonzero(chosen)
    cross_log = tuple((int(i), int(k + j), 1.0) for i, j in zip(rows, cols))
    return union.with_edges(cross_log), cross_log
