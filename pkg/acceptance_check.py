#!/usr/bin/env python3
"""
Semi-Random DkS Acceptance Check
Desk-scale runs of the recovery guarantees, audits and oracle checks
"""

import argparse
import itertools
import math
import sys
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

# Add src to Python path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from generation.builders import build_expander
from generation.model_params import ModelParams
from graphs.weighted_graph import WeightedGraph
from harness.experiment_config import ExperimentConfig
from harness.pipeline import ExperimentRunner
from oracles.calibration import calibrate_xi, calibration_trials
from oracles.densest import brute_force_dks, densest_subgraph
from oracles.inequality_checks import quadratic_form_bound_check, tau_comparison_details
from sdp.admm_solver import AdmmSolver
from sdp.sdp_problem import build_problem
from sdp.sdp_solution import solution_from_gram
from utils.config_manager import ConfigManager
from utils.logger import setup_logging

FULL_SCALE = {
    'gamma_reg': dict(kind='GammaReg', n=1000, k=125, d=100, delta=0.005, gamma=0.005, outer_style='matching'),
    'gamma': dict(kind='Gamma', n=1000, k=125, d=100, delta=0.005, gamma=0.005, outer_style='matching'),
    'exp': dict(kind='Exp', n=2000, k=400, d=300, delta=0.005, d_prime=9, lam=7.0),
}
QUICK_SCALE = {
    'gamma_reg': dict(kind='GammaReg', n=400, k=80, d=64, delta=0.005, gamma=0.008, outer_style='matching'),
    'gamma': dict(kind='Gamma', n=400, k=80, d=64, delta=0.003, gamma=0.008, outer_style='matching'),
    'exp': dict(kind='Exp', n=600, k=120, d=90, delta=0.005, d_prime=9, lam=7.0),
}


def complete_graph(m: int) -> WeightedGraph:
    return WeightedGraph.from_edges(m, [(u, v, 1.0) for u, v in itertools.combinations(range(m), 2)])


def cycle_graph(m: int) -> WeightedGraph:
    return WeightedGraph.from_edges(m, [(i, (i + 1) % m, 1.0) for i in range(m)])


def random_graph(n: int, p: float, rng: np.random.Generator) -> WeightedGraph:
    edges = [(u, v, float(rng.integers(1, 4))) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return WeightedGraph.from_edges(n, edges)


def enumerated_density(graph: WeightedGraph) -> float:
    n = graph.vertex_count
    return max(graph.density(subset) for size in range(1, n + 1)
               for subset in itertools.combinations(range(n), size))


class AcceptanceChecker:
    """Runs every acceptance criterion and prints a PASS/FAIL table"""

    def __init__(self, quick: bool = False, seeds: int = 10):
        self.quick = quick
        self.scale = QUICK_SCALE if quick else FULL_SCALE
        self.seeds = list(range(3 if quick else seeds))
        self.config = ConfigManager.from_dict({
            'monitoring': {'enabled': False},
            'oracles': {'calibration_cache': None},
            'solver': {'tol': 1e-4 if quick else 1e-5},
        })
        self.logger = setup_logging(self.config.get('logging', {}))
        self.tol = self.config.get('solver.tol')
        self.check_results: Dict[str, Dict[str, Any]] = {}
        self.monotone_rows: List[Dict[str, Any]] = []

    def run_all_checks(self) -> bool:
        self.logger.info(f"Starting acceptance checks ({'quick' if self.quick else 'full'} scale)")

        checks = [
            ('GammaReg recovery', self.check_gamma_reg),
            ('Gamma recovery', self.check_gamma),
            ('Exp audit', self.check_exp_audit),
            ('Oracle equivalence', self.check_oracles),
            ('Spectral calibration', self.check_calibration),
            ('Quadratic-form bound', self.check_quadratic_form),
            ('Guarantee comparison', self.check_tau_comparison),
            ('Monotone adversary', self.check_monotone),
            ('SDP sanity', self.check_sdp_sanity),
        ]

        for check_name, check_func in checks:
            try:
                self.logger.info(f"Running check: {check_name}")
                passed, message = check_func()
                self.check_results[check_name] = {'passed': passed, 'message': message}
            except Exception as e:
                self.check_results[check_name] = {'passed': False, 'message': f'ERROR: {str(e)}'}
                self.logger.error(f"Check {check_name} failed: {e}")

        return self.print_results()

    def _rows(self, name: str, check_monotone: bool = False) -> List[Dict[str, Any]]:
        params = ModelParams.from_dict(self.scale[name])
        experiment = ExperimentConfig(params=params, seeds=self.seeds, tol=self.tol,
                                      max_iter=50000, xi=2.0, check_monotone=check_monotone,
                                      brute_force_max_n=0).validate()
        return ExperimentRunner(self.config).sweep(experiment)['rows']

    @staticmethod
    def _rate(rows: List[Dict[str, Any]], flags: List[str]) -> int:
        return sum(1 for row in rows if all(row.get('passed', {}).get(flag) for flag in flags))

    def check_gamma_reg(self):
        rows = self._rows('gamma_reg', check_monotone=True)
        self.monotone_rows = rows
        good = self._rate(rows, ['recovery.rho_Q', 'recovery.overlap'])
        bound = rows[0]['recovery']['guarantee']['bound'] if 'recovery' in rows[0] else float('nan')
        return good >= math.ceil(0.9 * len(rows)), f"{good}/{len(rows)} seeds, tau'={bound:.4f}"

    def check_gamma(self):
        rows = self._rows('gamma')
        good = self._rate(rows, ['recovery.rho_Q', 'recovery.size_T', 'recovery.rho_T_cap_S'])
        ratios = [row['recovery']['density_ratio'] for row in rows if 'recovery' in row]
        return good >= math.ceil(0.9 * len(rows)), f"{good}/{len(rows)} seeds, min rho(Q)/(kd/2)={min(ratios):.3f}"

    def check_exp_audit(self):
        rows = self._rows('exp')
        good = self._rate(rows, ['audit.cross', 'audit.outer', 'audit.edge_inner'])
        return good >= math.ceil(0.8 * len(rows)), f"{good}/{len(rows)} seeds"

    def check_oracles(self):
        rng = np.random.default_rng(7)
        count = 10 if self.quick else 50
        for _ in range(count):
            graph = random_graph(int(rng.integers(2, 11 if self.quick else 15)), 0.4, rng)
            if abs(densest_subgraph(graph).value - enumerated_density(graph)) > 1e-9:
                return False, "densest_subgraph disagrees with enumeration"
        solver = AdmmSolver({'tol': 1e-4, 'max_iter': 20000})
        for _ in range(count):
            n = int(rng.integers(6, 13 if self.quick else 21))
            graph = random_graph(n, 0.3, rng)
            k = int(rng.integers(2, min(8, n) + 1))
            _, value = brute_force_dks(graph, k)
            solution = solver.solve(build_problem(graph, k), tol=1e-4)
            if value > solution.objective + 10 * 1e-4 * (1.0 + solution.objective):
                return False, f"brute force {value} exceeds SDP {solution.objective} at n={n}, k={k}"
        return True, f"{2 * count} random instances"

    def check_calibration(self):
        n, k, p, trials = 400, 100, 0.05, 10 if self.quick else 50
        xi = calibrate_xi(n, k, p, trials, seed=0)
        fresh = calibration_trials(n, k, p, trials, seed=1)
        holds = sum(1 for ratio in fresh.ratios if ratio <= xi)
        return xi <= 3.0 and holds == trials, f"xi={xi:.3f}, fresh {holds}/{trials}"

    def check_quadratic_form(self):
        rng = np.random.default_rng(3)
        cases = [(cycle_graph(6), 2, 2.0), (complete_graph(8), 7, 1.0),
                 (build_expander(100, 9, 7.0, seed=11), 9, 7.0)]
        for graph, d_prime, lam in cases:
            lhs, rhs, _ = quadratic_form_bound_check(graph, d_prime, lam, np.ones(graph.vertex_count))
            if abs(lhs - rhs) > 1e-9 * (1.0 + abs(rhs)):
                return False, f"all-ones equality fails on m={graph.vertex_count}"
            for _ in range(200):
                if not quadratic_form_bound_check(graph, d_prime, lam, rng.normal(size=graph.vertex_count))[2]:
                    return False, f"random vector violates the bound on m={graph.vertex_count}"
        return True, "C_6, K_8, (9, 7)-expander"

    def check_tau_comparison(self):
        details = tau_comparison_details(grid_resolution=100, parameter_resolution=10)
        return details.passed and details.gamma_points > 0, (
            f"{details.domain_points} domain points, {details.gamma_points} Gamma and "
            f"{details.exp_points} Exp parameter points")

    def check_monotone(self):
        rows = [row for row in self.monotone_rows if 'monotone' in row]
        if not rows:
            return False, "no monotone rows (GammaReg check did not run)"
        holds = sum(1 for row in rows if row['monotone']['holds'])
        return holds == len(rows), f"{holds}/{len(rows)} seeds"

    def check_sdp_sanity(self):
        solver = AdmmSolver({'max_iter': 20000})
        solution = solver.solve(build_problem(complete_graph(20), 20), tol=self.tol)
        if abs(solution.objective - 190.0) > 10 * self.tol * 191.0:
            return False, f"K_20 objective {solution.objective}"
        base = solver.solve(build_problem(cycle_graph(10), 4), tol=self.tol).objective
        scaled = solver.solve(build_problem(cycle_graph(10).scaled(2.5), 4), tol=self.tol).objective
        if abs(scaled - 2.5 * base) > 10 * self.tol * (1.0 + scaled):
            return False, f"scaling C_10 by 2.5 moved the objective from {base} to {scaled}"
        problem = build_problem(cycle_graph(10), 4)
        fixture = solution_from_gram(problem.indicator_gram([0, 1, 2, 3]), 4, problem.C)
        report = fixture.feasibility()
        exact = all(value == 0.0 for value in report.violations.values())
        return exact and report.passes(1e-12) and abs(fixture.objective - 3.0) < 1e-12, (
            f"K_20 objective {solution.objective:.6f}, indicator objective {fixture.objective}")

    def print_results(self) -> bool:
        """Print check results summary"""
        print("\n" + "=" * 70)
        print("ACCEPTANCE CHECK RESULTS")
        print("=" * 70)

        passed_count = 0
        total_count = len(self.check_results)

        for check_name, result in self.check_results.items():
            status = "PASS" if result['passed'] else "FAIL"
            print(f"{check_name:25} {status:6} {result['message']}")

            if result['passed']:
                passed_count += 1

        print("-" * 70)
        print(f"SUMMARY: {passed_count}/{total_count} checks passed")
        print("=" * 70)

        return passed_count == total_count


def main():
    """Main check function"""
    parser = argparse.ArgumentParser(description='Run the acceptance checks')
    parser.add_argument('--quick', action='store_true', help='scaled-down instances and fewer seeds')
    parser.add_argument('--seeds', type=int, default=10, help='seeds per model at full scale')
    args = parser.parse_args()

    checker = AcceptanceChecker(quick=args.quick, seeds=args.seeds)
    success = checker.run_all_checks()

    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
