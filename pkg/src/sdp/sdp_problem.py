"""
SDP Problem
Gram-matrix formulation of the densest-k-subgraph relaxation.

Rows/columns 0..n-1 hold the vertex vectors X_i, index n holds the unit
vector I. The relaxation maximizes 1/2 sum_ij A_ij <X_i, X_j> subject to

    trace      sum_i G_ii = k
    row_sum    sum_j G_ij <= k G_ii                 (j over vertices, j = i included)
    nonneg     G_ij >= 0                            (i < j)
    dominance  G_ij <= G_ii                         (i != j)
    cap        G_ii <= 1
    tie        G_iI = G_ii
    unit       G_II = 1
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from graphs.weighted_graph import SubsetLike, WeightedGraph, as_subset
from utils.errors import ParameterError

CONSTRAINT_FAMILIES = ('trace', 'row_sum', 'nonneg', 'dominance', 'cap', 'tie', 'unit')


@dataclass(frozen=True, eq=False)
class SdpProblem:
    n: int
    k: int
    C: np.ndarray

    @property
    def dimension(self) -> int:
        return self.n + 1

    @property
    def constraint_counts(self) -> Dict[str, int]:
        n = self.n
        return {
            'trace': 1,
            'row_sum': n,
            'nonneg': n * (n - 1) // 2,
            'dominance': n * (n - 1),
            'cap': n,
            'tie': n,
            'unit': 1,
        }

    def objective(self, gram: np.ndarray) -> float:
        return float(np.sum(self.C * gram))

    def indicator_gram(self, subset: SubsetLike) -> np.ndarray:
        """Integral solution: X_i = I for i in ``subset``, X_i = 0 otherwise"""
        members = as_subset(subset).validate(self.n)
        x = np.zeros(self.dimension)
        x[members.sorted()] = 1.0
        x[self.n] = 1.0
        return np.outer(x, x)


def build_problem(graph: WeightedGraph, k: int) -> SdpProblem:
    n = graph.vertex_count
    if int(k) != k or not 1 <= k <= n:
        raise ParameterError(f"Need integer 1 <= k <= n, got k={k}, n={n}")
    C = np.zeros((n + 1, n + 1))
    C[:n, :n] = graph.adjacency_matrix() / 2.0
    C.setflags(write=False)
    return SdpProblem(n=n, k=int(k), C=C)
