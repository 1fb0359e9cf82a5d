"""
Spectral Oracles
Spectral norm of symmetric matrices and the (d', lambda)-expander certificate
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from graphs.weighted_graph import WeightedGraph
from utils.errors import ParameterError

EIGEN_TOL = 1e-9


def _check_symmetric(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"Expected a square matrix, got shape {matrix.shape}")
    scale = float(np.abs(matrix).max()) if matrix.size else 0.0
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12 * (1.0 + scale)):
        raise ParameterError("Matrix is not symmetric")
    return matrix


def spectral_norm(matrix: np.ndarray, tol: float = EIGEN_TOL, max_iter: int = 500, seed: int = 0) -> float:
    """Largest absolute eigenvalue of a symmetric matrix.

    Power iteration runs on M @ M so eigenvalues of equal magnitude and
    opposite sign share one eigenspace. The residual test is relative; when
    it does not pass within ``max_iter`` steps a full eigendecomposition
    gives the answer.
    """
    matrix = _check_symmetric(matrix)
    n = matrix.shape[0]
    if n == 0 or not np.any(matrix):
        return 0.0

    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    x /= np.linalg.norm(x)

    for _ in range(max_iter):
        y = matrix @ (matrix @ x)
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            break
        lam = float(x @ y)
        x_new = y / y_norm
        residual = np.linalg.norm(matrix @ (matrix @ x_new) - lam * x_new)
        x = x_new
        if residual <= tol * lam:
            return float(np.sqrt(float(x @ (matrix @ (matrix @ x)))))

    return float(np.abs(np.linalg.eigvalsh(matrix)).max())


@dataclass(frozen=True)
class ExpanderCertificate:
    """Result of certify_expander; ``passed`` is the boolean verdict"""

    passed: bool
    regular: bool
    degree: float
    top_eigenvalue: float
    second_abs_eigenvalue: float
    lam: float

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'regular': self.regular,
            'degree': self.degree,
            'top_eigenvalue': self.top_eigenvalue,
            'second_abs_eigenvalue': self.second_abs_eigenvalue,
            'lam': self.lam,
        }


def certify_expander(graph: WeightedGraph, d_prime: float, lam: float) -> ExpanderCertificate:
    """True iff the graph is d'-regular and every non-top eigenvalue has |.| <= lam"""
    adjacency = graph.adjacency_matrix()
    degrees = graph.degrees()
    regular = bool(degrees.size == 0 or np.all(np.abs(degrees - d_prime) <= EIGEN_TOL))

    if graph.vertex_count == 0:
        return ExpanderCertificate(regular, regular, float(d_prime), 0.0, 0.0, float(lam))

    eigenvalues = np.linalg.eigvalsh(adjacency)  # ascending
    top = float(eigenvalues[-1])
    second = float(np.abs(eigenvalues[:-1]).max()) if eigenvalues.size > 1 else 0.0
    passed = regular and second <= lam + EIGEN_TOL
    return ExpanderCertificate(passed, regular, float(d_prime), top, second, float(lam))
