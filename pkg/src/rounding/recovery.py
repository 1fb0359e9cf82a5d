"""
Recovery
Threshold the SDP vector norms into T, then greedily prune T down to k vertices
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np

from graphs.weighted_graph import SubsetLike, VertexSubset, WeightedGraph, as_subset
from generation.planted_instance import PlantedInstance
from rounding.guarantees import GuaranteeParams, guarantee_bounds
from sdp.sdp_solution import SdpSolution
from utils.errors import ParameterError
from utils.logger import get_logger

logger = get_logger('recovery')

SolutionLike = Union[SdpSolution, np.ndarray]


def _norms(solution: SolutionLike) -> np.ndarray:
    if isinstance(solution, SdpSolution):
        return solution.vertex_norms()
    gram = np.asarray(solution, dtype=float)
    return np.clip(np.diag(gram)[:gram.shape[0] - 1], 0.0, 1.0)


def threshold_set(solution: SolutionLike, alpha: float, eta: float) -> VertexSubset:
    """T = {i : clamped ||X_i||^2 >= 1 - alpha*eta}"""
    product = 0.0 if eta == 0 else alpha * eta
    if not product < 1.0:
        raise ParameterError(f"alpha*eta = {product} makes the threshold vacuous")
    norms = _norms(solution)
    return VertexSubset.of(np.flatnonzero(norms >= 1.0 - product).tolist())


def greedy_prune(graph: WeightedGraph, T: SubsetLike, k: int,
                 solution: Optional[SolutionLike] = None) -> VertexSubset:
    """Cut or pad T to exactly k vertices.

    Larger T: drop the vertex of least weighted degree inside the current
    set, degrees recomputed every step, ties to the smallest index. Smaller
    T: add outside vertices by decreasing ||X_i||^2 when a solution is given,
    otherwise by index.
    """
    n = graph.vertex_count
    if int(k) != k or not 0 <= k <= n:
        raise ParameterError(f"Need 0 <= k <= n, got k={k}, n={n}")
    members = as_subset(T).validate(n).sorted()

    if len(members) == k:
        return VertexSubset.of(members)

    if len(members) < k:
        inside = set(members)
        outside = [v for v in range(n) if v not in inside]
        if solution is not None:
            norms = _norms(solution)
            outside.sort(key=lambda v: (-norms[v], v))
        return VertexSubset.of(members + outside[:k - len(members)])

    index = np.array(members, dtype=int)
    block = graph.adjacency_matrix()[np.ix_(index, index)]
    alive = np.ones(len(members), dtype=bool)
    for _ in range(len(members) - k):
        degrees = block @ alive.astype(float)
        degrees[~alive] = np.inf
        alive[int(np.argmin(degrees))] = False
    return VertexSubset.of(index[alive].tolist())


def pruning_ratio_holds(graph: WeightedGraph, T: SubsetLike, Q: SubsetLike, k: int) -> Optional[bool]:
    """rho(Q) >= k(k-1) / (|T|(|T|-1)) * rho(T); None when |T| < k or k < 2"""
    size = len(as_subset(T))
    if size < k or k < 2:
        return None
    ratio = k * (k - 1) / (size * (size - 1))
    return graph.rho(Q) >= ratio * graph.rho(T) - 1e-9 * (1.0 + graph.rho(T))


def heavy_edges_contained(graph: WeightedGraph, gram: np.ndarray, level: float, T: SubsetLike) -> bool:
    """Every edge with G_uv >= level has both endpoints in T"""
    members = as_subset(T)
    return all(u in members and v in members for u, v, _ in graph.edges() if gram[u, v] >= level)


@dataclass(frozen=True)
class RecoveryResult:
    T: VertexSubset
    Q: VertexSubset
    rho_Q: float
    rho_T_cap_S: float
    size_T: int
    size_Q_cap_S: int
    size_T_cap_S: int
    target: float
    guarantee: GuaranteeParams
    flags: Dict[str, Optional[bool]] = field(default_factory=dict)
    checks: Dict[str, Optional[bool]] = field(default_factory=dict)

    @property
    def density_ratio(self) -> float:
        """rho(Q) / (kd/2), informational"""
        return self.rho_Q / self.target if self.target else 0.0

    @property
    def passed(self) -> Optional[bool]:
        if not self.guarantee.valid:
            return None
        return all(self.flags.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'T': self.T.sorted(),
            'Q': self.Q.sorted(),
            'rho_Q': self.rho_Q,
            'rho_T_cap_S': self.rho_T_cap_S,
            'size_T': self.size_T,
            'size_Q_cap_S': self.size_Q_cap_S,
            'size_T_cap_S': self.size_T_cap_S,
            'target': self.target,
            'density_ratio': self.density_ratio,
            'guarantee': self.guarantee.to_dict(),
            'flags': dict(self.flags),
            'checks': dict(self.checks),
            'passed': self.passed,
        }


def recover(instance: PlantedInstance, solution: SdpSolution, eta_override: Optional[float] = None,
            tol: float = 1e-5, slack_factor: float = 10.0) -> RecoveryResult:
    """Threshold, prune and score against the planted set"""
    params = instance.params
    graph = instance.graph
    k, n = params.k, instance.n
    if solution.n != n:
        raise ParameterError(f"Solution has {solution.n} vertices, instance has {n}")

    guarantee = guarantee_bounds(params, eta_override)
    level = guarantee.threshold_level
    if level > 0:
        T = threshold_set(solution, guarantee.alpha, guarantee.eta)
    else:
        logger.warning(f"Threshold level {level:.3g} is vacuous; every vertex enters T")
        T = VertexSubset.interval(0, n)
    Q = greedy_prune(graph, T, k, solution)

    S = instance.planted
    target = instance.planted_density_target()
    rho_Q = graph.rho(Q)
    rho_T_cap_S = graph.rho(T.intersection(S))
    slack = slack_factor * tol * target
    bound = guarantee.bound

    flags: Dict[str, Optional[bool]] = {}
    valid = guarantee.valid
    flags['rho_Q'] = rho_Q >= (1.0 - bound) * target - slack if valid else None
    if params.kind.is_regular:
        flags['overlap'] = len(Q.intersection(S)) >= (1.0 - bound / 6.0) * k if valid else None
    else:
        flags['size_T'] = len(T) <= k * (1.0 + bound / 5.0) if valid else None
        flags['rho_T_cap_S'] = rho_T_cap_S >= (1.0 - bound / 2.0) * target - slack if valid else None

    checks = _structural_checks(instance, solution, guarantee, T, Q)

    result = RecoveryResult(
        T=T, Q=Q, rho_Q=rho_Q, rho_T_cap_S=rho_T_cap_S,
        size_T=len(T), size_Q_cap_S=len(Q.intersection(S)), size_T_cap_S=len(T.intersection(S)),
        target=target, guarantee=guarantee, flags=flags, checks=checks,
    )
    logger.info(f"Recovery: |T|={result.size_T} |Q cap S|={result.size_Q_cap_S}/{k} "
                f"rho(Q)/target={result.density_ratio:.4f} bound={bound:.4f} passed={result.passed}")
    return result


def _structural_checks(instance: PlantedInstance, solution: SdpSolution, guarantee: GuaranteeParams,
                       T: VertexSubset, Q: VertexSubset) -> Dict[str, Optional[bool]]:
    """Statements that follow from the constraints alone, plus informational regular-kind counts"""
    graph = instance.graph
    k = instance.params.k
    gram = solution.for_rounding()
    norms = solution.vertex_norms()
    level = guarantee.threshold_level
    checks: Dict[str, Optional[bool]] = {}

    if 0 < level:
        checks['size_T_bound'] = len(T) * level <= float(norms.sum()) + 1e-9
        checks['edge_containment'] = heavy_edges_contained(graph, gram, level, T)
    else:
        checks['size_T_bound'] = None
        checks['edge_containment'] = None
    checks['pruning_ratio'] = pruning_ratio_holds(graph, T, Q, k)

    if instance.params.kind.is_regular and guarantee.valid and guarantee.alpha * guarantee.eta < 1:
        S = instance.planted
        outside = len(T) - len(T.intersection(S))
        checks['T_cap_S_size'] = len(T.intersection(S)) >= (1.0 - 1.0 / guarantee.alpha) * k
        checks['T_outside_size'] = outside <= guarantee.eta * k / (1.0 - guarantee.alpha * guarantee.eta)
    return checks
