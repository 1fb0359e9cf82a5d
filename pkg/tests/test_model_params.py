"""Tests for model parameters and adversary specs"""

import pytest

from generation.model_params import AdversarySpec, ModelKind, ModelParams
from utils.errors import ParameterError


class TestModelParams:

    def test_kind_is_parsed_and_styles_defaulted(self):
        params = ModelParams('ExpReg', n=100, k=20, d=4, delta=0.1, d_prime=3, lam=2.0)
        assert params.kind is ModelKind.EXP_REG
        assert params.core_style == 'regular'
        assert params.outer_style == 'expander'
        gamma = ModelParams('Gamma', n=100, k=20, d=4.0, delta=0.1, gamma=0.2)
        assert gamma.core_style == 'weighted_random'
        assert gamma.outer_style == 'random'

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            ModelParams('Planted', n=10, k=2, d=1, delta=0.1)

    def test_p_and_m(self, gamma_reg_params):
        assert gamma_reg_params.p == pytest.approx(0.5 * 2 / 6)
        assert gamma_reg_params.m == 18

    def test_fixtures_validate(self, gamma_reg_params, gamma_params, exp_params):
        for params in (gamma_reg_params, gamma_params, exp_params):
            assert params.validate() is params

    @pytest.mark.parametrize('changes', [
        {'k': 0},
        {'k': 24},
        {'delta': 0.0},
        {'delta': 1.5},
        {'d': 6},
        {'d': 2.5},
        {'core_style': 'weighted_random'},
        {'gamma': 0.0},
        {'gamma': 0.1},                 # matching density 1/2 above gamma*d
        {'xi': 0.0},
    ])
    def test_invalid_gamma_reg(self, gamma_reg_params, changes):
        with pytest.raises(ParameterError):
            gamma_reg_params.with_updates(**changes).validate()

    @pytest.mark.parametrize('changes', [
        {'lam': 4.0},
        {'d_prime': 24},
        {'lam': -1.0},
        {'outer_style': 'random'},
    ])
    def test_invalid_exp(self, exp_params, changes):
        with pytest.raises(ParameterError):
            exp_params.with_updates(**changes).validate()

    def test_odd_expander_stub_count(self):
        params = ModelParams('Exp', n=31, k=6, d=3.0, delta=0.5, d_prime=3, lam=2.5)
        with pytest.raises(ParameterError):
            params.validate()

    def test_probability_floor_flag(self):
        low = ModelParams('Gamma', n=1000, k=100, d=10.0, delta=0.01, gamma=0.1)
        assert low.below_probability_floor
        high = low.with_updates(delta=1.0)
        assert not high.below_probability_floor

    def test_dict_round_trip(self, exp_params):
        data = exp_params.to_dict()
        assert data['kind'] == 'Exp'
        assert ModelParams.from_dict({**data, 'p': 0.25}) == exp_params

    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ParameterError):
            ModelParams.from_dict({'kind': 'Gamma', 'n': 10, 'k': 2, 'd': 1.0, 'delta': 0.1, 'alpha': 1})
        with pytest.raises(ParameterError):
            ModelParams.from_dict({'n': 10})


class TestAdversarySpec:

    def test_defaults(self):
        assert AdversarySpec.none().strategy == 'none'
        spec = AdversarySpec.delete_all_cross(seed=4)
        assert (spec.strategy, spec.q_cross, spec.q_outer, spec.seed) == ('random_fraction', 1.0, 0.0, 4)

    @pytest.mark.parametrize('data', [
        {'strategy': 'erase_planted'},
        {'strategy': 'random_fraction', 'q_cross': 1.5},
        {'strategy': 'target_high_degree', 'count': -1},
        {'strategy': 'none', 'budget': 3},
    ])
    def test_invalid(self, data):
        with pytest.raises(ParameterError):
            AdversarySpec.from_dict(data)

    def test_from_none(self):
        assert AdversarySpec.from_dict(None) == AdversarySpec()
