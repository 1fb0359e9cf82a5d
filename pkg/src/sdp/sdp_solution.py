"""
SDP Solution
Solved Gram matrix, constraint recheck, vector extraction and the solution dump file
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from utils.errors import FormatVersionError, InstanceFormatError

SOLUTION_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FeasibilityReport:
    """Max violation per constraint family, raw and scaled (trace and row_sum divided by k)"""

    violations: Dict[str, float]
    scaled: Dict[str, float]
    min_eigenvalue: float
    dominance_pair: Optional[Tuple[int, int]]

    @property
    def max_scaled(self) -> float:
        return max(max(self.scaled.values()), max(0.0, -self.min_eigenvalue))

    def passes(self, tol: float) -> bool:
        return self.max_scaled <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            'violations': dict(self.violations),
            'scaled': dict(self.scaled),
            'min_eigenvalue': self.min_eigenvalue,
            'dominance_pair': list(self.dominance_pair) if self.dominance_pair else None,
        }


def feasibility_report(gram: np.ndarray, k: int, check_psd: bool = True) -> FeasibilityReport:
    """Recompute every constraint residual directly from G"""
    gram = np.asarray(gram, dtype=float)
    n = gram.shape[0] - 1
    block = gram[:n, :n]
    diag = np.diag(block)
    off = ~np.eye(n, dtype=bool)

    violations = {
        'trace': abs(float(diag.sum()) - k),
        'row_sum': max(0.0, float((block.sum(axis=1) - k * diag).max())) if n else 0.0,
        'nonneg': max(0.0, float(-block[off].min())) if n > 1 else 0.0,
        'dominance': 0.0,
        'cap': max(0.0, float((diag - 1.0).max())) if n else 0.0,
        'tie': float(max(np.abs(gram[:n, n] - diag).max(), np.abs(gram[n, :n] - diag).max())) if n else 0.0,
        'unit': abs(float(gram[n, n]) - 1.0),
    }

    pair = None
    if n > 1:
        excess = np.where(off, block - diag[:, None], -np.inf)
        i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
        if excess[i, j] > 0:
            violations['dominance'] = float(excess[i, j])
            pair = (int(i), int(j))

    scaled = dict(violations)
    scaled['trace'] /= max(k, 1)
    scaled['row_sum'] /= max(k, 1)

    min_eigenvalue = float(np.linalg.eigvalsh((gram + gram.T) / 2.0)[0]) if check_psd else 0.0
    return FeasibilityReport(violations, scaled, min_eigenvalue, pair)


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """Gram matrix G over (X_0..X_{n-1}, I) with solve diagnostics"""

    gram: np.ndarray
    k: int
    objective: float
    residuals: Dict[str, float] = field(default_factory=dict)
    iterations: int = 0
    converged: bool = True
    wall_time: float = 0.0
    dual_bound: Optional[float] = None

    @property
    def n(self) -> int:
        return self.gram.shape[0] - 1

    def vertex_norms(self) -> np.ndarray:
        """Squared norms ||X_i||^2 clamped into [0, 1]"""
        return np.clip(np.diag(self.gram)[:self.n], 0.0, 1.0)

    def for_rounding(self) -> np.ndarray:
        """G with the diagonal clamped into [0, 1] and G_iI re-tied to it"""
        gram = np.array(self.gram, dtype=float)
        n = self.n
        norms = self.vertex_norms()
        gram[np.arange(n), np.arange(n)] = norms
        gram[:n, n] = norms
        gram[n, :n] = norms
        return gram

    def feasibility(self) -> FeasibilityReport:
        return feasibility_report(self.gram, self.k)

    def summary(self) -> Dict[str, Any]:
        return {
            'objective': self.objective,
            'dual_bound': self.dual_bound,
            'residuals': dict(self.residuals),
            'iterations': self.iterations,
            'converged': self.converged,
            'wall_time': self.wall_time,
        }


def extract_vectors(solution: Union[SdpSolution, np.ndarray]) -> np.ndarray:
    """Rows v_0..v_n with <v_i, v_j> = G_ij; negative eigenvalues are clamped to 0"""
    gram = solution.gram if isinstance(solution, SdpSolution) else np.asarray(solution, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh((gram + gram.T) / 2.0)
    return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))


def save_solution(solution: SdpSolution, path: Union[str, Path]) -> Path:
    """Header line with the summary as JSON, then G row-major with 17 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {'format_version': SOLUTION_FORMAT_VERSION, 'n': solution.n, 'k': solution.k}
    header.update(solution.summary())
    np.savetxt(path, solution.gram, fmt='%.17g', header=json.dumps(header), comments='# ')
    return path


def load_solution(path: Union[str, Path]) -> SdpSolution:
    path = Path(path)
    try:
        with open(path, 'r') as handle:
            first = handle.readline()
    except OSError as e:
        raise InstanceFormatError(f"Cannot read {path}: {e}") from e
    if not first.startswith('#'):
        raise InstanceFormatError("Solution file must start with a '#' header line", line=1)
    try:
        header = json.loads(first[1:].strip())
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"Malformed solution header: {e.msg}", line=1) from e

    version = header.get('format_version')
    if version != SOLUTION_FORMAT_VERSION:
        raise FormatVersionError(version, SOLUTION_FORMAT_VERSION)
    for name in ('n', 'k', 'objective'):
        if name not in header:
            raise InstanceFormatError(f"Missing header field '{name}'", line=1, field=name)

    try:
        gram = np.loadtxt(path, comments='#', ndmin=2)
    except ValueError as e:
        raise InstanceFormatError(f"Malformed Gram matrix: {e}") from e
    size = header['n'] + 1
    if gram.shape != (size, size):
        raise InstanceFormatError(f"Gram matrix has shape {gram.shape}, expected {(size, size)}",
                                  field='gram')

    return SdpSolution(
        gram=gram,
        k=int(header['k']),
        objective=float(header['objective']),
        residuals=dict(header.get('residuals') or {}),
        iterations=int(header.get('iterations', 0)),
        converged=bool(header.get('converged', True)),
        wall_time=float(header.get('wall_time', 0.0)),
        dual_bound=header.get('dual_bound'),
    )


def solution_from_gram(gram: np.ndarray, k: int, C: np.ndarray) -> SdpSolution:
    """Wrap a hand-built Gram matrix (fixtures, integral solutions) as a converged solution"""
    gram = np.asarray(gram, dtype=float)
    report = feasibility_report(gram, k)
    residuals = dict(report.scaled)
    residuals['min_eigenvalue'] = report.min_eigenvalue
    return SdpSolution(gram=gram, k=int(k), objective=float(np.sum(C * gram)), residuals=residuals)
