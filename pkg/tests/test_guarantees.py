"""Tests for the closed-form recovery guarantees"""

import math

import pytest

from generation.model_params import ModelKind, ModelParams
from rounding.guarantees import (
    compute_eta,
    compute_eta_prime,
    eta_prime_bracket,
    guarantee_bounds,
)
from utils.errors import ParameterError


def _gamma_reg():
    return ModelParams('GammaReg', n=1000, k=125, d=100, delta=0.005, gamma=0.005, outer_style='matching')


def _gamma():
    return ModelParams('Gamma', n=1000, k=125, d=100, delta=0.005, gamma=0.005, outer_style='matching')


def _exp():
    return ModelParams('Exp', n=2000, k=400, d=300, delta=0.005, d_prime=9, lam=7.0)


class TestEta:

    def test_gamma_eta(self):
        assert compute_eta(_gamma()) == pytest.approx(0.08)

    def test_exp_eta(self):
        expected = 0.03 + 2.0 * math.sqrt(10.0 / 120000.0) + 7.0 / 300.0 + 9.0 * 400.0 / (1600.0 * 300.0)
        assert compute_eta(_exp()) == pytest.approx(expected)
        assert compute_eta(_exp()) == pytest.approx(0.07909, abs=1e-5)

    def test_eta_grows_with_xi(self):
        assert compute_eta(_gamma().with_updates(xi=3.0)) > compute_eta(_gamma())

    def test_eta_rejects_regular_kinds(self):
        with pytest.raises(ParameterError):
            compute_eta(_gamma_reg())


class TestEtaPrime:

    def test_gamma_reg_eta_prime(self):
        assert eta_prime_bracket(_gamma_reg()) == pytest.approx(0.96)
        assert compute_eta_prime(_gamma_reg()) == pytest.approx(1.0 / 145.0)

    def test_statement_variant_drops_n(self):
        assert compute_eta_prime(_gamma_reg(), statement_variant=True) == pytest.approx(1.0 / 144001.0)

    def test_exp_reg_bracket(self):
        params = ModelParams('ExpReg', n=2000, k=400, d=300, delta=0.005, d_prime=9, lam=7.0)
        assert eta_prime_bracket(params) == pytest.approx(1.0 - 7.0 / 300.0 - 0.0075 - 0.03)

    def test_bracket_rejects_general_kinds(self):
        with pytest.raises(ParameterError):
            eta_prime_bracket(_gamma())


class TestGuaranteeBounds:

    def test_gamma_reg(self):
        guarantee = guarantee_bounds(_gamma_reg())
        assert guarantee.kind == ModelKind.GAMMA_REG
        assert guarantee.bound == pytest.approx(5.0 / math.sqrt(145.0))
        assert guarantee.bound == pytest.approx(0.41523, abs=1e-5)
        assert guarantee.alpha == pytest.approx(2.0 * math.sqrt(145.0))
        assert guarantee.valid
        assert guarantee.bound_statement_variant == pytest.approx(5.0 / math.sqrt(144001.0))

    def test_gamma(self):
        guarantee = guarantee_bounds(_gamma())
        assert guarantee.bound == pytest.approx(0.9798, abs=1e-4)
        assert guarantee.alpha == pytest.approx(1.0 / math.sqrt(0.24))
        assert guarantee.threshold_level == pytest.approx(1.0 - 0.08 / math.sqrt(0.24))
        assert guarantee.valid
        assert guarantee.bracket is None

    def test_large_eta_is_invalid(self, gamma_params):
        guarantee = guarantee_bounds(gamma_params)
        assert guarantee.bound > 1.0
        assert not guarantee.valid

    def test_non_positive_bracket_is_invalid(self):
        params = _gamma_reg().with_updates(gamma=0.45, delta=0.05)
        assert eta_prime_bracket(params) < 0
        assert not guarantee_bounds(params).valid

    def test_override(self):
        guarantee = guarantee_bounds(_gamma_reg(), eta_override=0.01)
        assert guarantee.overridden
        assert guarantee.bound == pytest.approx(0.5)
        assert guarantee.alpha == pytest.approx(20.0)
        assert guarantee.threshold_level == pytest.approx(0.8)

    def test_zero_override(self):
        guarantee = guarantee_bounds(_gamma(), eta_override=0.0)
        assert guarantee.alpha == math.inf
        assert guarantee.threshold_level == 1.0
        assert not guarantee.valid

    def test_negative_override(self):
        with pytest.raises(ParameterError):
            guarantee_bounds(_gamma(), eta_override=-0.1)

    def test_to_dict(self):
        data = guarantee_bounds(_gamma_reg()).to_dict()
        assert data['kind'] == 'GammaReg'
        assert data['overridden'] is False
        assert set(data) >= {'eta', 'alpha', 'bound', 'valid', 'eta_statement_variant'}
