"""
Experiment Pipeline
generate -> solve -> recover -> audit for one (grid point, seed), and sweeps over grids
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from generation.adversary import apply_adversary
from generation.instance_generator import InstanceGenerator
from generation.model_params import AdversarySpec, ModelParams
from harness.experiment_config import ExperimentConfig
from harness.result_store import ResultStore
from oracles.audit import audit_mass_split
from oracles.calibration import CalibrationCache
from oracles.densest import brute_force_dks
from rounding.recovery import recover
from sdp.admm_solver import AdmmSolver
from sdp.sdp_problem import build_problem
from sdp.sdp_solution import SdpSolution
from utils.config_manager import ConfigManager
from utils.errors import DksError, SolverNotConvergedError
from utils.logger import get_logger
from utils.performance_monitor import PerformanceMonitor

# Recorded as a failed row; anything else aborts the sweep
RUN_FAILURES = (DksError, np.linalg.LinAlgError, FloatingPointError)


class ExperimentRunner:
    """Runs pipelines with the generator, solver and monitor configured from one ConfigManager"""

    def __init__(self, config: Optional[ConfigManager] = None, store: Optional[ResultStore] = None):
        self.config = config or ConfigManager.from_dict({})
        self.logger = get_logger('pipeline')
        self.generator = InstanceGenerator(self.config.get('generation', {}))
        self.solver_config = dict(self.config.get('solver', {}))
        self.slack_factor = self.config.get('rounding.slack_factor', 10.0)
        self.monitor = PerformanceMonitor(self.config.get('monitoring', {}))
        self.store = store
        cache_path = self.config.get('oracles.calibration_cache')
        self.calibration_cache = CalibrationCache(cache_path) if cache_path else None

    def _solve(self, instance, tol: float, max_iter: int) -> Tuple[SdpSolution, Optional[str]]:
        problem = build_problem(instance.graph, instance.k)
        solver = AdmmSolver(self.solver_config)
        try:
            return solver.solve(problem, tol=tol, max_iter=max_iter), None
        except SolverNotConvergedError as e:
            self.logger.warning(f"Continuing with best iterate: {e}")
            return e.best_solution, str(e)

    def run_pipeline(self, experiment: ExperimentConfig, seed: int,
                     params: Optional[ModelParams] = None) -> Dict[str, Any]:
        """One row; solver non-convergence is recorded in ``error`` and the best iterate is still scored"""
        params = params or experiment.params
        tol, max_iter = experiment.tol, experiment.max_iter
        self.monitor.reset_run()

        with self.monitor.stage('calibrate'):
            xi = experiment.resolve_xi(params, self.calibration_cache, experiment.workers)
        params = params.with_updates(xi=xi)

        row: Dict[str, Any] = {
            'config': {
                'params': params.to_dict(),
                'adversary': experiment.adversary.to_dict(),
                'tol': tol,
                'max_iter': max_iter,
                'xi': xi,
                'solver': self.solver_config,
                'generation': dict(self.config.get('generation', {})),
            },
            'seed': int(seed),
            'error': None,
        }

        with self.monitor.stage('generate'):
            instance = self.generator.generate(params, experiment.adversary, seed)
        with self.monitor.stage('solve'):
            solution, error = self._solve(instance, tol, max_iter)
        row['error'] = error
        with self.monitor.stage('recover'):
            recovery = recover(instance, solution, tol=tol, slack_factor=self.slack_factor)
        with self.monitor.stage('audit'):
            audit = audit_mass_split(instance, solution, xi=xi, tol=tol, slack_factor=self.slack_factor)

        row['solution'] = solution.summary()
        row['recovery'] = recovery.to_dict()
        row['audit'] = audit.to_dict()

        if instance.n <= experiment.brute_force_max_n:
            with self.monitor.stage('brute_force'):
                witness, value = brute_force_dks(instance.graph, instance.k, max_n=experiment.brute_force_max_n)
            row['brute_force'] = {
                'value': value,
                'witness': witness.sorted(),
                'sdp_objective': solution.objective,
                'dominance': value <= solution.objective + self.slack_factor * tol * (1.0 + abs(solution.objective)),
            }

        if experiment.check_monotone and experiment.adversary.strategy == 'none':
            with self.monitor.stage('monotone'):
                row['monotone'] = self._monotone_check(instance, solution, seed, tol, max_iter)

        row['timings'] = self.monitor.stage_times()
        row['passed'] = row_pass_flags(row)
        if self.store is not None:
            self.store.append(row)

        self.logger.info(f"{params.kind.value} n={params.n} k={params.k} seed={seed}: "
                         f"objective {solution.objective:.6g}, recovery={recovery.passed}, audit={audit.passed}")
        return row

    def _monotone_check(self, instance, solution: SdpSolution, seed: int, tol: float,
                        max_iter: int) -> Dict[str, Any]:
        """Delete every cross edge and re-solve; the optimum cannot increase"""
        stripped = apply_adversary(instance, AdversarySpec.delete_all_cross(seed))
        after, error = self._solve(stripped, tol, max_iter)
        before = solution.objective
        recovery = recover(stripped, after, tol=tol, slack_factor=self.slack_factor)
        return {
            'objective_before': before,
            'objective_after': after.objective,
            'holds': after.objective <= before + 2.0 * tol * (1.0 + abs(before)),
            'recovery_passed': recovery.passed,
            'error': error,
        }

    def _guarded(self, experiment: ExperimentConfig, params: ModelParams, seed: int) -> Dict[str, Any]:
        try:
            return self.run_pipeline(experiment, seed, params)
        except RUN_FAILURES as e:
            self.logger.error(f"Run failed for {params.kind.value} n={params.n} seed={seed}: {e}")
            row = {'config': {'params': params.to_dict(), 'adversary': experiment.adversary.to_dict(),
                              'tol': experiment.tol, 'max_iter': experiment.max_iter},
                   'seed': int(seed), 'error': f"{type(e).__name__}: {e}"}
            row['passed'] = row_pass_flags(row)
            if self.store is not None:
                self.store.append(row)
            return row

    def sweep(self, experiment: ExperimentConfig) -> Dict[str, Any]:
        """Rows for every grid point x seed, in grid order, plus aggregate pass rates"""
        jobs = [(params, seed) for params in experiment.grid_points() for seed in experiment.seeds]
        self.logger.info(f"Sweep: {len(jobs)} runs on {experiment.workers} worker(s)")

        if experiment.workers > 1:
            with ThreadPoolExecutor(max_workers=experiment.workers) as pool:
                rows = list(pool.map(lambda job: self._guarded(experiment, *job), jobs))
        else:
            rows = [self._guarded(experiment, params, seed) for params, seed in jobs]

        summary = {
            'experiment': experiment.to_dict(),
            'aggregates': aggregate_pass_rates(rows),
            'performance': self.monitor.get_performance_summary(),
        }
        if self.store is not None:
            self.store.write_summary(summary)
        self.monitor.save_metrics()

        overall = summary['aggregates']['clauses']
        for clause, counts in sorted(overall.items()):
            self.logger.info(f"{clause}: {counts['passed']}/{counts['evaluated']}")
        return {'rows': rows, **summary}


def row_pass_flags(row: Dict[str, Any]) -> Dict[str, Optional[bool]]:
    """Flatten every pass/fail flag of a row into ``section.flag`` names"""
    flags: Dict[str, Optional[bool]] = {}
    for section in ('recovery', 'audit'):
        body = row.get(section) or {}
        for name, value in (body.get('flags') or {}).items():
            flags[f"{section}.{name}"] = value
    for name, value in ((row.get('audit') or {}).get('details', {}).get('checks') or {}).items():
        flags[f"audit.checks.{name}"] = value
    for name, value in ((row.get('recovery') or {}).get('checks') or {}).items():
        flags[f"recovery.checks.{name}"] = value
    if 'brute_force' in row:
        flags['brute_force.dominance'] = row['brute_force']['dominance']
    if 'monotone' in row:
        flags['monotone.holds'] = row['monotone']['holds']
    flags['completed'] = row.get('error') is None
    return flags


def _point_key(row: Dict[str, Any]) -> str:
    params = (row.get('config') or {}).get('params') or {}
    return ','.join(f"{key}={params[key]}" for key in sorted(params) if key != 'xi')


def _count(rows: Iterable[Dict[str, Any]]) -> Dict[str, Dict[str, Any]]:
    clauses: Dict[str, Dict[str, Any]] = {}
    for row in rows:
        for name, value in row_pass_flags(row).items():
            entry = clauses.setdefault(name, {'passed': 0, 'evaluated': 0})
            if value is None:
                continue
            entry['evaluated'] += 1
            entry['passed'] += int(bool(value))
    for entry in clauses.values():
        entry['rate'] = entry['passed'] / entry['evaluated'] if entry['evaluated'] else None
    return clauses


def aggregate_pass_rates(rows: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Pass counts per clause overall and per grid point, recomputed from the rows alone"""
    points: Dict[str, List[Dict[str, Any]]] = {}
    for row in rows:
        points.setdefault(_point_key(row), []).append(row)
    return {
        'runs': len(rows),
        'errors': sum(1 for row in rows if row.get('error')),
        'clauses': _count(rows),
        'per_point': {key: _count(group) for key, group in points.items()},
    }


def run_pipeline(experiment: ExperimentConfig, seed: int, params: Optional[ModelParams] = None,
                 config: Optional[ConfigManager] = None, store: Optional[ResultStore] = None) -> Dict[str, Any]:
    return ExperimentRunner(config, store).run_pipeline(experiment, seed, params)


def sweep(experiment: ExperimentConfig, config: Optional[ConfigManager] = None,
          store: Optional[ResultStore] = None) -> Dict[str, Any]:
    return ExperimentRunner(config, store).sweep(experiment)
