"""Tests for the quadratic-form bound and the guarantee comparison"""

import numpy as np
import pytest

from conftest import complete_graph, cycle_graph
from oracles.inequality_checks import (
    TauComparison,
    quadratic_form_bound_check,
    tau_comparison_check,
    tau_comparison_details,
)
from utils.errors import ParameterError


class TestQuadraticFormBound:

    @pytest.mark.parametrize('graph,d_prime,lam', [
        (cycle_graph(6), 2, 2.0),
        (complete_graph(8), 7, 1.0),
    ])
    def test_equality_at_all_ones(self, graph, d_prime, lam):
        lhs, rhs, holds = quadratic_form_bound_check(graph, d_prime, lam, np.ones(graph.vertex_count))
        assert lhs == pytest.approx(rhs)
        assert holds

    @pytest.mark.parametrize('seed', range(5))
    def test_random_vectors(self, seed):
        U = np.random.default_rng(seed).normal(size=8)
        lhs, rhs, holds = quadratic_form_bound_check(complete_graph(8), 7, 1.0, U)
        assert holds
        assert lhs <= rhs + 1e-9

    def test_uncertified_graph(self):
        with pytest.raises(ParameterError):
            quadratic_form_bound_check(cycle_graph(6), 2, 1.5, np.ones(6))

    def test_wrong_length(self):
        with pytest.raises(ParameterError):
            quadratic_form_bound_check(cycle_graph(6), 2, 2.0, np.ones(5))


class TestTauComparison:

    def test_small_grid_passes(self):
        result = tau_comparison_details(grid_resolution=20)
        assert result.passed
        assert result.domain_points > 0 and not result.domain_failures
        assert result.rate_points > 0 and result.rate_failures == 0
        assert result.gamma_points > 0 and result.gamma_failures == 0
        assert result.exp_points > 0 and result.exp_failures == 0

    def test_domain_point_count(self):
        # interior lattice points (i/r, j/r) with i + j < r
        assert tau_comparison_details(grid_resolution=8, parameter_resolution=2).domain_points == 21

    def test_check_wrapper(self):
        assert tau_comparison_check(grid_resolution=10)

    @pytest.mark.parametrize('resolution', [1, 0, 2.5])
    def test_invalid_resolution(self, resolution):
        with pytest.raises(ParameterError):
            tau_comparison_details(grid_resolution=resolution)

    def test_invalid_parameter_resolution(self):
        with pytest.raises(ParameterError):
            tau_comparison_details(grid_resolution=10, parameter_resolution=1)

    def test_failures_fail(self):
        assert not TauComparison(rate_failures=1).passed
        assert TauComparison().to_dict()['passed'] is True
