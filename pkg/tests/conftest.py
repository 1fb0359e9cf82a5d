"""Shared fixtures: small graphs, tiny planted instances and integral solutions"""

import itertools
import sys
from pathlib import Path

import pytest

# Add src to Python path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / 'src'))

from generation.instance_generator import InstanceGenerator  # noqa: E402
from generation.model_params import ModelParams  # noqa: E402
from graphs.weighted_graph import WeightedGraph  # noqa: E402
from sdp.sdp_problem import build_problem  # noqa: E402
from sdp.sdp_solution import solution_from_gram  # noqa: E402
from utils.config_manager import ConfigManager  # noqa: E402


def complete_graph(m: int) -> WeightedGraph:
    return WeightedGraph.from_edges(m, [(u, v, 1.0) for u, v in itertools.combinations(range(m), 2)])


def cycle_graph(m: int) -> WeightedGraph:
    return WeightedGraph.from_edges(m, [(i, (i + 1) % m, 1.0) for i in range(m)])


def integral_solution(instance):
    problem = build_problem(instance.graph, instance.k)
    return solution_from_gram(problem.indicator_gram(instance.planted), instance.k, problem.C)


@pytest.fixture
def triangle():
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])


@pytest.fixture
def path4():
    return WeightedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def gamma_reg_params():
    return ModelParams('GammaReg', n=24, k=6, d=2, delta=0.5, gamma=0.25,
                       core_style='regular', outer_style='matching')


@pytest.fixture
def gamma_params():
    return ModelParams('Gamma', n=24, k=6, d=3.0, delta=0.5, gamma=0.5, outer_style='random')


@pytest.fixture
def exp_params():
    return ModelParams('Exp', n=30, k=6, d=3.0, delta=0.5, d_prime=4, lam=3.9)


@pytest.fixture
def quiet_config(tmp_path):
    return ConfigManager.from_dict({
        'monitoring': {'enabled': False, 'metrics_file': str(tmp_path / 'metrics.json')},
        'logging': {'file_output': False, 'console_output': False},
        'oracles': {'calibration_cache': None},
        'solver': {'max_iter': 5000},
    })


@pytest.fixture
def gamma_reg_instance(gamma_reg_params):
    return InstanceGenerator().generate(gamma_reg_params, seed=3)


@pytest.fixture
def gamma_instance(gamma_params):
    return InstanceGenerator().generate(gamma_params, seed=5)


@pytest.fixture
def exp_instance(exp_params):
    return InstanceGenerator().generate(exp_params, seed=7)
