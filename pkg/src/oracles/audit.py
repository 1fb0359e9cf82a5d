"""
Mass-Split Audit
Splits the SDP mass into planted, cross and outer parts and checks each against its bound
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from generation.planted_instance import PlantedInstance
from oracles.calibration import cross_deviation_matrix
from oracles.densest import check_lp_feasibility_map
from oracles.spectral import spectral_norm
from rounding.guarantees import guarantee_bounds
from sdp.sdp_solution import SdpSolution
from utils.errors import ParameterError
from utils.logger import get_logger

logger = get_logger('audit')


@dataclass(frozen=True)
class AuditReport:
    """Masses are ordered-pair sums of A_ij <X_i, X_j>; ``mass_cross`` counts S x (V \\ S) once"""

    mass_SS: float
    mass_cross: float
    mass_outer: float
    objective: float
    bound_cross: float
    bound_outer: float
    mean_edge_inner: Optional[float]
    mean_vertex_norm: float
    eta: float
    xi: float
    flags: Dict[str, Optional[bool]] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def identity_residual(self) -> float:
        return abs(self.mass_SS + 2.0 * self.mass_cross + self.mass_outer - 2.0 * self.objective)

    @property
    def passed(self) -> bool:
        return all(value for value in self.flags.values() if value is not None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mass_SS': self.mass_SS,
            'mass_cross': self.mass_cross,
            'mass_outer': self.mass_outer,
            'objective': self.objective,
            'identity_residual': self.identity_residual,
            'bound_cross': self.bound_cross,
            'bound_outer': self.bound_outer,
            'mean_edge_inner': self.mean_edge_inner,
            'mean_vertex_norm': self.mean_vertex_norm,
            'eta': self.eta,
            'xi': self.xi,
            'flags': dict(self.flags),
            'details': dict(self.details),
            'passed': self.passed,
        }


def audit_mass_split(instance: PlantedInstance, solution: SdpSolution, xi: Optional[float] = None,
                     tol: float = 1e-5, slack_factor: float = 10.0,
                     lp_map: bool = True) -> AuditReport:
    """Recompute the three masses and every bound that applies to the instance's model kind"""
    params = instance.params if xi is None else instance.params.with_updates(xi=float(xi))
    n, k, d, p = params.n, params.k, params.d, params.p
    if solution.n != instance.n:
        raise ParameterError(f"Solution has {solution.n} vertices, instance has {instance.n}")

    gram = solution.gram[:n, :n]
    adjacency = instance.graph.adjacency_matrix()
    S = np.array(instance.planted.sorted(), dtype=int)
    outside = np.array(instance.outside.sorted(), dtype=int)
    inner, cross, outer = np.ix_(S, S), np.ix_(S, outside), np.ix_(outside, outside)
    weighted = adjacency * gram

    mass_SS = float(weighted[inner].sum())
    mass_cross = float(weighted[cross].sum())
    mass_outer = float(weighted[outer].sum())

    mu = float(solution.vertex_norms()[S].mean())
    spread = max(mu * (1.0 - mu), 0.0)
    slack = slack_factor * tol * (1.0 + k * d)

    bound_cross = 3.0 * p * k ** 2 * (1.0 - mu) + params.xi * k * math.sqrt(n * p) * math.sqrt(spread)
    details: Dict[str, Any] = {}
    if params.kind.is_expander:
        bound_outer = (params.lam * k + params.d_prime * k ** 2 / (n - k)) * (1.0 - mu)
        details['bound_outer_tight'] = (params.lam * k + (params.d_prime - params.lam) * k ** 2 / (n - k)) * (1.0 - mu)
    else:
        bound_outer = 2.0 * params.gamma * d * k * (1.0 - mu)

    planted_weight = instance.graph.rho(instance.planted)
    mean_edge_inner = mass_SS / (2.0 * planted_weight) if planted_weight > 0 else None
    guarantee = guarantee_bounds(params)
    eta = guarantee.eta

    flags: Dict[str, Optional[bool]] = {
        'cross': mass_cross <= bound_cross + slack,
        'outer': mass_outer <= bound_outer + slack,
    }
    if params.kind.is_regular:
        flags['core'] = mass_SS <= k * d * mu + slack
        flags['vertex_norm'] = mu >= 1.0 - eta - slack_factor * tol
    else:
        flags['edge_inner'] = (mean_edge_inner >= 1.0 - eta - slack_factor * tol
                               if mean_edge_inner is not None else None)

    identity_residual = abs(mass_SS + 2.0 * mass_cross + mass_outer - 2.0 * solution.objective)
    checks: Dict[str, Optional[bool]] = {
        'identity': identity_residual <= 1e-6 * (1.0 + abs(solution.objective)),
    }

    # constraint-only consequences
    cross_inner = float(gram[cross].sum())
    details['cross_inner_sum'] = cross_inner
    details['cross_inner_bound'] = 3.0 * k ** 2 * (1.0 - mu)
    checks['cross_inner'] = cross_inner <= details['cross_inner_bound'] + slack

    pair_mean = float(gram[inner].mean())
    details['pair_mean'] = pair_mean
    details['pair_mean_bound'] = 1.0 - 4.0 * (1.0 - mu)
    checks['pair_inner'] = pair_mean >= details['pair_mean_bound'] - slack_factor * tol

    deviation = cross_deviation_matrix(instance.pre_adversary_graph().adjacency_matrix(), S, p)
    b_norm = spectral_norm(deviation)
    deviation_sum = float((deviation * gram).sum())
    details['b_norm'] = b_norm
    details['b_norm_ratio'] = b_norm / math.sqrt(n * p)
    details['deviation_sum'] = deviation_sum
    details['deviation_bound'] = 2.0 * k * b_norm * math.sqrt(spread)
    checks['deviation'] = deviation_sum <= details['deviation_bound'] + slack

    if params.kind.is_expander:
        checks['outer_tight'] = mass_outer <= details['bound_outer_tight'] + slack
    elif lp_map:
        report = check_lp_feasibility_map(instance.outer_graph(), gram[outer])
        details['lp_map'] = report.to_dict()
        checks['lp_map_feasible'] = report.max_violation <= slack_factor * tol * (1.0 + k)
        checks['lp_map_objective'] = report.objective_within_densest
        checks['outer_density'] = report.densest_value <= params.gamma * d + 1e-9

    details['checks'] = checks
    logger.info(f"Audit: cross {mass_cross:.4g} <= {bound_cross:.4g}, outer {mass_outer:.4g} <= "
                f"{bound_outer:.4g}, mu={mu:.5f}, eta={eta:.5f}")

    return AuditReport(
        mass_SS=mass_SS, mass_cross=mass_cross, mass_outer=mass_outer, objective=solution.objective,
        bound_cross=bound_cross, bound_outer=bound_outer, mean_edge_inner=mean_edge_inner,
        mean_vertex_norm=mu, eta=eta, xi=params.xi, flags=flags, details=details,
    )
