"""Tests for threshold and greedy-prune recovery"""

import numpy as np
import pytest

from conftest import integral_solution
from graphs.weighted_graph import VertexSubset, WeightedGraph
from rounding.recovery import greedy_prune, heavy_edges_contained, pruning_ratio_holds, recover, threshold_set
from utils.errors import ParameterError


def _gram(norms):
    return np.diag(list(norms) + [1.0])


class TestThresholdSet:

    def test_level_is_inclusive(self):
        T = threshold_set(_gram([0.1, 0.9, 0.2, 0.8]), alpha=2.0, eta=0.1)
        assert T.sorted() == [1, 3]

    def test_zero_eta_keeps_full_norms(self):
        assert threshold_set(_gram([1.0, 0.99, 1.0]), alpha=np.inf, eta=0.0).sorted() == [0, 2]

    def test_vacuous_threshold(self):
        with pytest.raises(ParameterError):
            threshold_set(_gram([0.5, 0.5]), alpha=10.0, eta=0.1)

    def test_norms_are_clamped(self):
        assert threshold_set(_gram([1.3, -0.2]), alpha=1.0, eta=0.5).sorted() == [0]


class TestGreedyPrune:

    def test_removes_lowest_degree_first(self, path4):
        assert greedy_prune(path4, range(4), 2).sorted() == [2, 3]

    def test_exact_size_is_untouched(self, path4):
        assert greedy_prune(path4, [0, 3], 2).sorted() == [0, 3]

    def test_pads_by_index_without_solution(self, path4):
        assert greedy_prune(path4, [3], 3).sorted() == [0, 1, 3]

    def test_pads_by_norm_with_solution(self, path4):
        gram = _gram([0.1, 0.9, 0.2, 0.8])
        assert greedy_prune(path4, [0], 3, gram).sorted() == [0, 1, 3]

    def test_weighted_degrees(self, triangle):
        assert greedy_prune(triangle, range(3), 2).sorted() == [0, 2]

    def test_star_keeps_center(self):
        star = WeightedGraph.from_edges(5, [(0, leaf) for leaf in range(1, 5)])
        Q = greedy_prune(star, range(5), 3)
        assert Q.sorted() == [0, 3, 4]
        assert star.rho(Q) == 2.0

    def test_invalid_k(self, path4):
        with pytest.raises(ParameterError):
            greedy_prune(path4, range(4), 5)


class TestPruningRatio:

    def test_holds_after_pruning(self, gamma_instance):
        graph = gamma_instance.graph
        T = VertexSubset.interval(0, 12)
        Q = greedy_prune(graph, T, 6)
        assert pruning_ratio_holds(graph, T, Q, 6)

    @pytest.mark.parametrize('seed', range(25))
    def test_holds_on_random_weighted_graphs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(6, 14))
        weights = np.triu(rng.random((n, n)) * (rng.random((n, n)) < 0.5), 1)
        graph = WeightedGraph.from_adjacency(weights + weights.T)
        k = int(rng.integers(2, n))
        T = rng.choice(n, size=int(rng.integers(k, n + 1)), replace=False)
        Q = greedy_prune(graph, T, k)
        assert len(Q) == k and set(Q.sorted()) <= set(T.tolist())
        assert pruning_ratio_holds(graph, T, Q, k)

    def test_undefined_for_small_T(self, path4):
        assert pruning_ratio_holds(path4, [0], [0, 1], 2) is None


class TestEdgeContainment:

    def test_edge_at_the_level_counts_as_heavy(self, path4):
        gram = _gram([0.6, 0.6, 0.0, 0.0])
        gram[0, 1] = gram[1, 0] = 0.6
        assert heavy_edges_contained(path4, gram, 0.6, [0, 1])
        assert not heavy_edges_contained(path4, gram, 0.6, [0])

    def test_no_slack_below_the_level(self, path4):
        # an edge a hair under the level is not heavy, one at the level is
        gram = _gram([0.6, 0.6, 0.6, 0.0])
        gram[1, 2] = gram[2, 1] = 0.6 - 1e-7
        assert heavy_edges_contained(path4, gram, 0.6, [1])
        gram[1, 2] = gram[2, 1] = 0.6
        assert not heavy_edges_contained(path4, gram, 0.6, [1])


class TestRecover:

    def test_integral_solution_recovers_planted_set(self, gamma_reg_instance):
        result = recover(gamma_reg_instance, integral_solution(gamma_reg_instance), eta_override=0.01)
        assert result.T == gamma_reg_instance.planted
        assert result.Q == gamma_reg_instance.planted
        assert result.rho_Q == pytest.approx(result.target)
        assert result.density_ratio == pytest.approx(1.0)
        assert result.passed
        assert set(result.flags) == {'rho_Q', 'overlap'}
        assert all(result.checks.values())

    def test_general_kind_flags(self, gamma_instance):
        result = recover(gamma_instance, integral_solution(gamma_instance), eta_override=0.01)
        assert set(result.flags) == {'rho_Q', 'size_T', 'rho_T_cap_S'}
        assert result.size_T == 6 and result.size_T_cap_S == 6
        assert result.flags['size_T']
        assert result.checks['edge_containment']

    def test_vacuous_level_takes_every_vertex(self, gamma_reg_instance):
        result = recover(gamma_reg_instance, integral_solution(gamma_reg_instance), eta_override=0.5)
        assert result.size_T == gamma_reg_instance.n
        assert len(result.Q) == gamma_reg_instance.k
        assert result.passed is None
        assert all(flag is None for flag in result.flags.values())

    def test_dimension_mismatch(self, gamma_reg_instance, exp_instance):
        with pytest.raises(ParameterError):
            recover(gamma_reg_instance, integral_solution(exp_instance))

    def test_to_dict(self, gamma_reg_instance):
        data = recover(gamma_reg_instance, integral_solution(gamma_reg_instance), eta_override=0.01).to_dict()
        assert data['Q'] == list(range(6))
        assert data['guarantee']['overridden'] is True
        assert data['passed'] is True
