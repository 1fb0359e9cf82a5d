#!/usr/bin/env python3
"""
Semi-Random DkS Toolkit - Main Application Entry Point
Planted densest k-subgraph instances, SDP recovery and audits from the command line
"""

import argparse
import json
import signal
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add src to Python path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from generation.instance_generator import InstanceGenerator
from generation.model_params import ModelParams
from generation.planted_instance import PlantedInstance
from graphs.instance_io import load_instance, save_instance
from harness.experiment_config import ExperimentConfig
from harness.pipeline import ExperimentRunner
from harness.result_store import ResultStore, encode_row
from oracles.audit import audit_mass_split
from oracles.calibration import CalibrationCache, calibration_trials
from oracles.densest import brute_force_dks
from rounding.recovery import recover
from sdp.admm_solver import AdmmSolver
from sdp.sdp_problem import build_problem
from sdp.sdp_solution import load_solution, save_solution
from utils.config_manager import ConfigManager
from utils.errors import (
    EnumerationSizeError,
    InstanceFormatError,
    ParameterError,
    RetryExhaustedError,
    SolverNotConvergedError,
)
from utils.logger import setup_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARAMETER = 2
EXIT_NOT_CONVERGED = 3
EXIT_RETRY_EXHAUSTED = 4

PARAM_FLAGS = {
    'kind': 'kind', 'n': 'n', 'k': 'k', 'd': 'd', 'delta': 'delta', 'd_prime': 'd_prime',
    'lam': 'lam', 'gamma': 'gamma', 'core_style': 'core_style', 'outer_style': 'outer_style',
}


class DksToolkit:
    """Application class behind every subcommand"""

    def __init__(self, config_path: Optional[str] = None):
        self.config = ConfigManager(config_path) if config_path else ConfigManager.from_dict({})
        self.logger = setup_logging(self.config.get('logging', {}))
        for problem in self.config.validate_config():
            self.logger.warning(f"Configuration problem: {problem}")

    # Shared helpers

    def model_params(self, args: argparse.Namespace) -> ModelParams:
        data = dict(self.config.get('experiment.params', {}))
        for flag, name in PARAM_FLAGS.items():
            value = getattr(args, flag, None)
            if value is not None:
                data[name] = value
        return ModelParams.from_dict(data)

    def experiment(self, args: argparse.Namespace) -> ExperimentConfig:
        data = dict(self.config.get('experiment', {}))
        data['params'] = self.model_params(args).to_dict()
        if getattr(args, 'seed', None) is not None:
            data['seeds'] = [args.seed]
        if getattr(args, 'tol', None) is not None:
            data['tol'] = args.tol
        if getattr(args, 'out', None) is not None:
            data['output_dir'] = args.out
        xi = getattr(args, 'xi', None)
        if xi is not None:
            data['xi'] = xi if xi == 'auto' else float(xi)
        return ExperimentConfig.from_dict(data)

    def output_dir(self, args: argparse.Namespace) -> Path:
        path = Path(args.out or self.config.get('experiment.output_dir', 'results'))
        path.mkdir(parents=True, exist_ok=True)
        return path

    def emit(self, payload: Dict[str, Any], args: argparse.Namespace, name: str) -> None:
        text = encode_row(payload)
        print(text)
        if getattr(args, 'out', None):
            target = self.output_dir(args) / name
            target.write_text(text + '\n')
            self.logger.info(f"Wrote {target}")

    # Subcommands

    def cmd_generate(self, args: argparse.Namespace) -> int:
        experiment = self.experiment(args)
        seed = experiment.seeds[0]
        generator = InstanceGenerator(self.config.get('generation', {}))
        instance = generator.generate(experiment.params, experiment.adversary, seed)
        target = self.output_dir(args) / f"instance_{experiment.params.kind.value}_n{instance.n}_seed{seed}.txt"
        save_instance(instance, target)
        print(target)
        return EXIT_OK

    def cmd_solve(self, args: argparse.Namespace) -> int:
        instance = load_instance(args.instance)
        solver = AdmmSolver(self.config.get('solver', {}))
        tol = args.tol if args.tol is not None else self.config.get('solver.tol', 1e-5)
        max_iter = args.max_iter or self.config.get('solver.max_iter', 50000)
        target = self.output_dir(args) / f"{Path(args.instance).stem}.solution.txt"
        try:
            solution = solver.solve(build_problem(instance.graph, instance.k), tol=tol, max_iter=max_iter)
        except SolverNotConvergedError as e:
            save_solution(e.best_solution, target)
            self.logger.error(f"Best iterate written to {target}")
            raise
        save_solution(solution, target)
        print(target)
        return EXIT_OK

    def resolve_xi(self, args: argparse.Namespace, instance: PlantedInstance) -> PlantedInstance:
        """Instance whose params carry the --xi value (a number or 'auto')"""
        if args.xi is None:
            return instance
        params = instance.params
        if args.xi == 'auto':
            xi = ExperimentConfig(params=params, xi='auto').resolve_xi(params, self._cache())
        else:
            xi = float(args.xi)
        return replace(instance, params=params.with_updates(xi=xi))

    def cmd_recover(self, args: argparse.Namespace) -> int:
        instance = self.resolve_xi(args, load_instance(args.instance))
        solution = load_solution(args.solution)
        result = recover(instance, solution, eta_override=args.eta,
                         tol=args.tol if args.tol is not None else self.config.get('solver.tol', 1e-5),
                         slack_factor=self.config.get('rounding.slack_factor', 10.0))
        self.emit(result.to_dict(), args, 'recovery.json')
        return EXIT_OK

    def cmd_audit(self, args: argparse.Namespace) -> int:
        instance = self.resolve_xi(args, load_instance(args.instance))
        solution = load_solution(args.solution)
        report = audit_mass_split(instance, solution,
                                  tol=args.tol if args.tol is not None else self.config.get('solver.tol', 1e-5),
                                  slack_factor=self.config.get('rounding.slack_factor', 10.0))
        self.emit(report.to_dict(), args, 'audit.json')
        return EXIT_OK

    def cmd_calibrate(self, args: argparse.Namespace) -> int:
        params = self.model_params(args)
        p = args.p if args.p is not None else params.p
        seed = args.seed if args.seed is not None else 0
        cache = self._cache()
        cached = cache.get(params.n, params.k, p, args.trials, seed) if cache else None
        if cached is None:
            result = calibration_trials(params.n, params.k, p, args.trials, seed, workers=args.workers,
                                        kappa=params.kappa)
            if cache:
                cache.put(result)
            cached = result.to_dict()
        self.emit(cached, args, 'calibration.json')
        return EXIT_OK

    def cmd_brute_check(self, args: argparse.Namespace) -> int:
        if args.instance:
            instance = load_instance(args.instance)
        else:
            experiment = self.experiment(args)
            generator = InstanceGenerator(self.config.get('generation', {}))
            instance = generator.generate(experiment.params, experiment.adversary, experiment.seeds[0])
        max_n = self.config.get('oracles.brute_force_max_n', 22)
        tol = args.tol if args.tol is not None else self.config.get('solver.tol', 1e-5)
        witness, value = brute_force_dks(instance.graph, instance.k, max_n=max_n)
        solution = AdmmSolver(self.config.get('solver', {})).solve(build_problem(instance.graph, instance.k), tol=tol)
        slack = self.config.get('rounding.slack_factor', 10.0) * tol * (1.0 + abs(solution.objective))
        dominance = value <= solution.objective + slack
        self.emit({'n': instance.n, 'k': instance.k, 'brute_force_value': value, 'witness': witness.sorted(),
                   'sdp_objective': solution.objective, 'dominance': dominance}, args, 'brute_check.json')
        return EXIT_OK if dominance else EXIT_FAILURE

    def cmd_sweep(self, args: argparse.Namespace) -> int:
        experiment = self.experiment(args)
        store = ResultStore(experiment.output_dir)
        result = ExperimentRunner(self.config, store).sweep(experiment)
        print(json.dumps(result['aggregates']['clauses'], indent=2, sort_keys=True))
        print(store.rows_path)
        return EXIT_OK

    def _cache(self) -> Optional[CalibrationCache]:
        path = self.config.get('oracles.calibration_cache')
        return CalibrationCache(path) if path else None

    def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, f"cmd_{args.command.replace('-', '_')}")
        try:
            return handler(args)
        except (ParameterError, InstanceFormatError, EnumerationSizeError) as e:
            self.logger.error(f"{args.command}: {e}")
            return EXIT_PARAMETER
        except SolverNotConvergedError as e:
            self.logger.error(f"{args.command}: {e}")
            return EXIT_NOT_CONVERGED
        except RetryExhaustedError as e:
            self.logger.error(f"{args.command}: {e} (best value {e.best_value})")
            return EXIT_RETRY_EXHAUSTED
        except Exception as e:
            self.logger.error(f"{args.command} failed: {e}")
            return EXIT_FAILURE


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--kind', choices=['Exp', 'ExpReg', 'Gamma', 'GammaReg'])
    parser.add_argument('-n', type=int)
    parser.add_argument('-k', type=int)
    parser.add_argument('-d', type=float)
    parser.add_argument('--delta', type=float)
    parser.add_argument('--d-prime', dest='d_prime', type=int)
    parser.add_argument('--lam', type=float)
    parser.add_argument('--gamma', type=float)
    parser.add_argument('--core-style', dest='core_style')
    parser.add_argument('--outer-style', dest='outer_style')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Semi-random densest k-subgraph toolkit')
    parser.add_argument('--config', help='YAML configuration file')
    sub = parser.add_subparsers(dest='command', required=True)

    def command(name: str, help_text: str, xi: bool = False) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument('--seed', type=int)
        cmd.add_argument('--tol', type=float)
        cmd.add_argument('--out')
        if xi:
            cmd.add_argument('--xi', help="xi value or 'auto'")
        return cmd

    generate = command('generate', 'Generate a planted instance file')
    _add_param_flags(generate)

    solve = command('solve', 'Solve the SDP relaxation of an instance')
    solve.add_argument('--instance', required=True)
    solve.add_argument('--max-iter', dest='max_iter', type=int)

    for name, help_text in (('recover', 'Threshold and prune an SDP solution'),
                            ('audit', 'Audit the mass split of an SDP solution')):
        cmd = command(name, help_text, xi=True)
        cmd.add_argument('--instance', required=True)
        cmd.add_argument('--solution', required=True)
        if name == 'recover':
            cmd.add_argument('--eta', type=float)

    calibrate = command('calibrate', 'Estimate xi by Monte-Carlo')
    _add_param_flags(calibrate)
    calibrate.add_argument('--p', type=float)
    calibrate.add_argument('--trials', type=int, default=20)
    calibrate.add_argument('--workers', type=int, default=1)

    brute = command('brute-check', 'Compare exhaustive DkS with the SDP value on a small instance')
    _add_param_flags(brute)
    brute.add_argument('--instance')

    sweep_cmd = command('sweep', 'Run the configured experiment grid', xi=True)
    _add_param_flags(sweep_cmd)
    return parser


def signal_handler(signum, frame):
    """Handle system signals for graceful shutdown"""
    print("\nReceived shutdown signal. Stopping...")
    sys.exit(EXIT_FAILURE)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    args = build_parser().parse_args(argv)
    app = DksToolkit(args.config)
    return app.run(args)


if __name__ == "__main__":
    sys.exit(main())
