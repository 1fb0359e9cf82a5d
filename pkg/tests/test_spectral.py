"""Tests for spectral norms and expander certificates"""

import numpy as np
import pytest

from conftest import complete_graph, cycle_graph
from oracles.spectral import certify_expander, spectral_norm
from utils.errors import ParameterError


class TestSpectralNorm:

    def test_matches_eigendecomposition(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(30, 30))
        matrix = a + a.T
        assert spectral_norm(matrix) == pytest.approx(np.abs(np.linalg.eigvalsh(matrix)).max(), rel=1e-7)

    def test_opposite_eigenvalues(self):
        matrix = np.diag([3.0, -3.0, 1.0])
        assert spectral_norm(matrix) == pytest.approx(3.0)

    def test_bipartite_block(self):
        block = np.ones((2, 3))
        matrix = np.zeros((5, 5))
        matrix[:2, 2:] = block
        matrix[2:, :2] = block.T
        assert spectral_norm(matrix) == pytest.approx(np.sqrt(6.0))

    def test_zero_and_empty(self):
        assert spectral_norm(np.zeros((4, 4))) == 0.0
        assert spectral_norm(np.zeros((0, 0))) == 0.0

    def test_rejects_asymmetric(self):
        with pytest.raises(ParameterError):
            spectral_norm(np.array([[0.0, 1.0], [2.0, 0.0]]))


class TestCertifyExpander:

    @pytest.mark.parametrize('m', range(3, 13))
    def test_complete_graphs(self, m):
        assert certify_expander(complete_graph(m), m - 1, 1.0)

    def test_cycle(self):
        assert certify_expander(cycle_graph(6), 2, 2.0)
        certificate = certify_expander(cycle_graph(6), 2, 1.5)
        assert not certificate
        assert certificate.second_abs_eigenvalue == pytest.approx(2.0)

    def test_irregular_graph_fails(self, path4):
        certificate = certify_expander(path4, 2, 2.0)
        assert not certificate.regular
        assert not certificate.passed
