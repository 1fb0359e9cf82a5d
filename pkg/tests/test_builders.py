"""Tests for the instance building blocks"""

import numpy as np
import pytest

from conftest import complete_graph
from generation.builders import (
    build_dense_core,
    build_expander,
    build_gamma_part,
    plant_cross_edges,
    random_regular_graph,
)
from graphs.weighted_graph import WeightedGraph
from oracles.densest import densest_subgraph
from oracles.spectral import certify_expander
from utils.errors import ParameterError, RetryExhaustedError


class TestRandomRegularGraph:

    @pytest.mark.parametrize('m,d', [(10, 3), (12, 4), (9, 0), (11, 8), (20, 19)])
    def test_degrees_are_exact(self, m, d):
        graph = random_regular_graph(m, d, seed=1)
        assert np.all(graph.degrees() == d)
        assert graph.edge_count == m * d // 2

    def test_same_seed_same_graph(self):
        assert random_regular_graph(30, 6, seed=9) == random_regular_graph(30, 6, seed=9)

    def test_odd_stub_count(self):
        with pytest.raises(ParameterError):
            random_regular_graph(7, 3, seed=0)

    def test_degree_out_of_range(self):
        with pytest.raises(ParameterError):
            random_regular_graph(5, 5, seed=0)


class TestDenseCore:

    def test_regular_core(self):
        core = build_dense_core(12, 4, 'regular', seed=2)
        assert np.all(core.degrees() == 4)

    def test_weighted_random_core_has_exact_average_degree(self):
        core = build_dense_core(15, 6.5, 'weighted_random', seed=3)
        assert core.average_degree(range(15)) == pytest.approx(6.5)
        assert all(w > 0 for _, _, w in core.edges())

    def test_bad_style(self):
        with pytest.raises(ParameterError):
            build_dense_core(10, 3, 'clique', seed=0)

    def test_regular_core_needs_integer_degree(self):
        with pytest.raises(ParameterError):
            build_dense_core(10, 3.5, 'regular', seed=0)


class TestExpander:

    def test_certified(self):
        graph = build_expander(40, 4, 3.9, seed=5)
        assert certify_expander(graph, 4, 3.9)

    def test_complete_graph_is_the_only_candidate(self):
        graph = build_expander(6, 5, 1.0, seed=0)
        assert graph == complete_graph(6)

    def test_unreachable_lambda_reports_best(self):
        with pytest.raises(RetryExhaustedError) as info:
            build_expander(20, 3, 0.1, seed=0, max_retries=3)
        assert info.value.attempts == 3
        assert info.value.best_value > 0.1


class TestGammaPart:

    def test_matching_has_density_one_half(self):
        graph = build_gamma_part(10, 0.25, 2.0, seed=1, style='matching')
        assert graph.edge_count == 5
        assert densest_subgraph(graph).value == pytest.approx(0.5)

    def test_matching_needs_room(self):
        with pytest.raises(ParameterError):
            build_gamma_part(10, 0.1, 2.0, seed=1, style='matching')

    def test_random_style_is_reproducible(self):
        assert build_gamma_part(30, 0.5, 4.0, seed=6) == build_gamma_part(30, 0.5, 4.0, seed=6)
        assert build_dense_core(15, 6.5, 'weighted_random', seed=6) == build_dense_core(15, 6.5, 'weighted_random', seed=6)

    def test_random_style_is_certified(self):
        graph = build_gamma_part(30, 0.5, 4.0, seed=2, style='random')
        assert densest_subgraph(graph).value <= 2.0 + 1e-9

    def test_empty_style(self):
        assert build_gamma_part(8, 0.1, 1.0, seed=0, style='empty').edge_count == 0


class TestCrossEdges:

    def test_cross_edges_only_between_parts(self):
        core = complete_graph(4)
        outer = complete_graph(5)
        graph, log = plant_cross_edges(core, outer, 0.5, seed=8)
        assert graph.edge_count == core.edge_count + outer.edge_count + len(log)
        assert all(u < 4 <= v for u, v, _ in log)

    def test_probability_extremes(self):
        core, outer = complete_graph(3), complete_graph(3)
        assert plant_cross_edges(core, outer, 0.0, seed=0)[1] == ()
        assert len(plant_cross_edges(core, outer, 1.0, seed=0)[1]) == 9

    def test_cross_count_is_binomial(self):
        k, m, p = 40, 160, 0.05
        mean, spread = p * k * m, np.sqrt(k * m * p * (1.0 - p))
        counts = [len(plant_cross_edges(WeightedGraph(k), WeightedGraph(m), p, seed=seed)[1])
                  for seed in range(10)]
        assert all(abs(count - mean) <= 4.0 * spread for count in counts)
        assert abs(np.mean(counts) - mean) <= 4.0 * spread / np.sqrt(len(counts))

    def test_invalid_probability(self):
        with pytest.raises(ParameterError):
            plant_cross_edges(complete_graph(2), complete_graph(2), 1.5)
