"""
ADMM Solver
Consensus ADMM for the Gram-matrix relaxation.

The feasible set is split into four blocks, each with a cheap exact
projection. Blocks work on unsymmetrized copies so row constraints separate:

    psd        symmetric positive semidefinite matrices
    row_sum    sum_j Z_ij <= k Z_ii for every vertex row
    dominance  0 <= Z_ij <= Z_ii <= 1 for every vertex row
    affine     Z_ii = Z_iI = Z_Ii, sum_i Z_ii = k, Z_II = 1

Each iteration projects G - U_b onto block b, averages the copies into G
with the objective gradient step, then updates the scaled duals U_b. The
duals also give an upper bound on the optimum (see ``dual_bound``); the run
stops when the PSD copy is feasible to ``tol``, the dual residual is below
``tol`` and the gap to that bound is below ``tol``.
"""

import time
from typing import Any, Dict, List, Optional

import numpy as np

from sdp.sdp_problem import SdpProblem
from sdp.sdp_solution import SdpSolution, feasibility_report
from utils.errors import ParameterError, SolverNotConvergedError
from utils.logger import get_logger

BLOCK_NAMES = ('psd', 'row_sum', 'dominance', 'affine')


def project_psd(matrix: np.ndarray) -> np.ndarray:
    sym = (matrix + matrix.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    return (eigenvectors * np.maximum(eigenvalues, 0.0)) @ eigenvectors.T


def project_row_sums(matrix: np.ndarray, n: int, k: int) -> np.ndarray:
    """Per vertex row, project onto the halfspace sum_j Z_ij - k Z_ii <= 0"""
    result = np.array(matrix, dtype=float)
    block = result[:n, :n]
    excess = block.sum(axis=1) - k * np.diag(block)
    coefficient = np.ones((n, n))
    np.fill_diagonal(coefficient, 1.0 - k)
    norm_squared = (n - 1) + (1.0 - k) ** 2
    block -= (np.maximum(excess, 0.0) / norm_squared)[:, None] * coefficient
    return result


def project_dominance(matrix: np.ndarray, n: int) -> np.ndarray:
    """Per vertex row, project (a = Z_ii, b = off-diagonal Z_ij) onto {0 <= b_j <= a <= 1}"""
    result = np.array(matrix, dtype=float)
    block = result[:n, :n]
    a0 = np.diag(block).copy()
    if n == 1:
        block[0, 0] = min(max(a0[0], 0.0), 1.0)
        return result

    off = ~np.eye(n, dtype=bool)
    b0 = block[off].reshape(n, n - 1)
    ordered = -np.sort(-b0, axis=1)
    prefix = np.concatenate([np.zeros((n, 1)), np.cumsum(ordered, axis=1)], axis=1)
    candidates = (a0[:, None] + prefix) / np.arange(1, n + 1)[None, :]
    following = np.concatenate([ordered, np.full((n, 1), -np.inf)], axis=1)
    # smallest m whose average already dominates the (m+1)-th largest entry
    m = np.argmax(candidates >= following, axis=1)
    a = np.clip(candidates[np.arange(n), m], 0.0, 1.0)

    block[off] = np.clip(b0, 0.0, a[:, None]).ravel()
    block[np.arange(n), np.arange(n)] = a
    return result


def project_affine(matrix: np.ndarray, n: int, k: int) -> np.ndarray:
    result = np.array(matrix, dtype=float)
    index = np.arange(n)
    tied = (result[index, index] + result[index, n] + result[n, index]) / 3.0
    tied += (k - tied.sum()) / n
    result[index, index] = tied
    result[index, n] = tied
    result[n, index] = tied
    result[n, n] = 1.0
    return result


def initial_gram(n: int, k: int) -> np.ndarray:
    """Uniform feasible point: every vertex vector with squared norm k/n"""
    gram = np.full((n + 1, n + 1), k * (k - 1) / (n * (n - 1)) if n > 1 else 0.0)
    index = np.arange(n)
    gram[index, index] = k / n
    gram[index, n] = k / n
    gram[n, index] = k / n
    gram[n, n] = 1.0
    return gram


def dual_bound(duals: List[np.ndarray], rho: float, n: int, k: int) -> float:
    """Upper bound on the optimum from multipliers Y_b = rho * U_b.

    Valid whenever sym(C + sum_b Y_b) = 0, which the G-update maintains. Each
    block contributes the support function of -Y_b over the block intersected
    with the box that contains every feasible point (entries in [0, 1],
    trace k + 1).
    """
    psd_m, row_m, dom_m, aff_m = (-rho * u for u in duals)
    index = np.arange(n)
    off = ~np.eye(n, dtype=bool)

    # psd: <M, Z> <= lambda_max(M) * trace(Z)
    bound = float(np.linalg.eigvalsh((psd_m + psd_m.T) / 2.0)[-1]) * (k + 1)

    # row_sum cone: the polar part is non-positive on the cone
    projected = project_row_sums(row_m, n, k)
    corner = projected[n, n]
    projected[n, n] = 0.0
    bound += float(np.maximum(projected, 0.0).sum()) + corner

    # dominance rows exactly, the I row and column through the box
    rows = np.diag(dom_m)[:n] + np.where(off, np.maximum(dom_m[:n, :n], 0.0), 0.0).sum(axis=1)
    bound += float(np.maximum(rows, 0.0).sum())
    bound += float(np.maximum(dom_m[:n, n], 0.0).sum() + np.maximum(dom_m[n, :n], 0.0).sum())
    bound += float(dom_m[n, n])

    # affine: tied triples take the k largest coefficients
    triples = np.sort(aff_m[index, index] + aff_m[index, n] + aff_m[n, index])[::-1]
    whole = int(np.floor(k))
    bound += float(triples[:whole].sum())
    if whole < n and k > whole:
        bound += float(max(triples[whole], 0.0) * (k - whole))
    bound += float(np.where(off, np.maximum(aff_m[:n, :n], 0.0), 0.0).sum())
    bound += float(aff_m[n, n])
    return bound


class AdmmSolver:
    """First-order solver for SdpProblem instances"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        config = config or {}
        self.logger = get_logger('admm_solver')
        self.tol = config.get('tol', 1e-5)
        self.max_iter = config.get('max_iter', 50000)
        self.rho = config.get('rho', 1.0)
        self.adapt_interval = config.get('adapt_interval', 50)
        self.check_interval = config.get('check_interval', 10)
        self.log_interval = config.get('log_interval', 1000)
        self.balance_factor = config.get('balance_factor', 10.0)

    def solve(self, problem: SdpProblem, tol: Optional[float] = None,
              max_iter: Optional[int] = None) -> SdpSolution:
        tol = self.tol if tol is None else tol
        max_iter = self.max_iter if max_iter is None else max_iter
        if tol <= 0 or max_iter < 1:
            raise ParameterError(f"Need tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}")

        n, k, C = problem.n, problem.k, problem.C
        blocks = len(BLOCK_NAMES)
        c_norm = float(np.linalg.norm(C))
        rho = self.rho * max(1.0, float(np.abs(C).max()))

        projections = (
            project_psd,
            lambda m: project_row_sums(m, n, k),
            lambda m: project_dominance(m, n),
            lambda m: project_affine(m, n, k),
        )

        start = time.perf_counter()
        G = initial_gram(n, k)
        duals = [np.zeros_like(G) for _ in range(blocks)]
        best: Optional[Dict[str, Any]] = None

        for iteration in range(1, max_iter + 1):
            copies = [project(G - u) for project, u in zip(projections, duals)]
            G_prev = G
            average = sum(z + u for z, u in zip(copies, duals)) / blocks
            G = (average + average.T) / 2.0 + C / (blocks * rho)
            for z, u in zip(copies, duals):
                u += z - G

            if iteration % self.check_interval == 0 or iteration == max_iter:
                X = copies[0]
                objective = problem.objective(X)
                report = feasibility_report(X, k, check_psd=False)
                primal = report.max_scaled
                dual = rho * np.sqrt(blocks) * float(np.linalg.norm(G - G_prev)) / (1.0 + c_norm)
                upper = dual_bound(duals, rho, n, k)
                gap = abs(upper - objective) / (1.0 + abs(objective))
                score = max(primal, dual, gap)
                residuals = {**report.scaled, 'primal': primal, 'dual': dual, 'gap': gap}

                if best is None or score < best['score']:
                    best = {'score': score, 'gram': X.copy(), 'objective': objective, 'bound': upper,
                            'residuals': residuals, 'iteration': iteration}

                if iteration % self.log_interval == 0:
                    self.logger.debug(f"iter {iteration}: obj={objective:.8g} bound={upper:.8g} "
                                      f"primal={primal:.2e} dual={dual:.2e} gap={gap:.2e} rho={rho:.3g}")

                if score <= tol:
                    elapsed = time.perf_counter() - start
                    self.logger.info(f"Converged in {iteration} iterations ({elapsed:.1f}s): "
                                     f"objective {objective:.8g}, gap {gap:.2e}")
                    return SdpSolution(gram=X, k=k, objective=objective, residuals=residuals,
                                       iterations=iteration, converged=True, wall_time=elapsed,
                                       dual_bound=upper)

            if iteration % self.adapt_interval == 0:
                primal_norm = np.sqrt(sum(float(np.linalg.norm(z - G)) ** 2 for z in copies))
                dual_norm = rho * np.sqrt(blocks) * float(np.linalg.norm(G - G_prev))
                if primal_norm > self.balance_factor * dual_norm:
                    rho *= 2.0
                    for u in duals:
                        u /= 2.0
                elif dual_norm > self.balance_factor * primal_norm:
                    rho /= 2.0
                    for u in duals:
                        u *= 2.0

        elapsed = time.perf_counter() - start
        best_solution = SdpSolution(gram=best['gram'], k=k, objective=best['objective'],
                                    residuals=best['residuals'], iterations=max_iter, converged=False,
                                    wall_time=elapsed, dual_bound=best['bound'])
        self.logger.error(f"No convergence after {max_iter} iterations; best score {best['score']:.2e} "
                          f"at iteration {best['iteration']}")
        raise SolverNotConvergedError(
            f"SDP solver did not reach tol={tol} within {max_iter} iterations",
            best_solution=best_solution, residuals=best['residuals'])


def solve(problem: SdpProblem, tol: float = 1e-5, max_iter: int = 50000,
          config: Optional[Dict[str, Any]] = None) -> SdpSolution:
    return AdmmSolver(config).solve(problem, tol=tol, max_iter=max_iter)
