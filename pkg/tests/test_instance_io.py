"""Tests for the instance file format"""

import pytest

from generation.adversary import apply_adversary
from generation.model_params import AdversarySpec
from graphs.instance_io import (
    FORMAT_VERSION,
    instance_to_fields,
    load_instance,
    parse_instance,
    save_instance,
    dump_fields,
)
from utils.errors import FormatVersionError, InstanceFormatError


def _document(instance, **changes):
    fields = instance_to_fields(instance)
    fields.update(changes)
    return dump_fields(fields)


class TestRoundTrip:

    def test_save_and_load_preserve_everything(self, gamma_instance, tmp_path):
        attacked = apply_adversary(gamma_instance, AdversarySpec('random_fraction', q_cross=0.5, seed=1))
        path = save_instance(attacked, tmp_path / 'instance.txt')
        loaded = load_instance(path)
        assert loaded.graph == attacked.graph
        assert loaded.planted == attacked.planted
        assert loaded.params == attacked.params
        assert loaded.seed == attacked.seed
        assert loaded.adversary_log == attacked.adversary_log
        assert loaded.cross_edge_log == attacked.cross_edge_log
        assert loaded.pre_adversary_graph() == gamma_instance.graph

    def test_weights_are_bit_exact(self, gamma_instance, tmp_path):
        loaded = load_instance(save_instance(gamma_instance, tmp_path / 'instance.txt'))
        assert [w for _, _, w in loaded.graph.edges()] == [w for _, _, w in gamma_instance.graph.edges()]

    def test_one_field_per_line(self, gamma_reg_instance):
        lines = dump_fields(instance_to_fields(gamma_reg_instance)).splitlines()
        assert lines[0] == '{' and lines[-1] == '}'
        assert lines[1].startswith('"format_version"')
        assert len(lines) == 10


class TestValidation:

    def test_version_mismatch(self, gamma_reg_instance):
        with pytest.raises(FormatVersionError) as info:
            parse_instance(_document(gamma_reg_instance, format_version=FORMAT_VERSION + 1))
        assert info.value.field == 'format_version'

    def test_missing_field(self, gamma_reg_instance):
        fields = instance_to_fields(gamma_reg_instance)
        del fields['planted_set']
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(dump_fields(fields))
        assert info.value.field == 'planted_set'

    def test_bad_edge_reports_line(self, gamma_reg_instance):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(_document(gamma_reg_instance, edges=[[0, 1, -2.0]]))
        assert info.value.field == 'edges'
        assert info.value.line == 5

    def test_edge_endpoint_order(self, gamma_reg_instance):
        with pytest.raises(InstanceFormatError):
            parse_instance(_document(gamma_reg_instance, edges=[[3, 1, 1.0]]))

    def test_planted_set_size(self, gamma_reg_instance):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(_document(gamma_reg_instance, planted_set=[0, 1, 2]))
        assert info.value.field == 'planted_set'

    def test_seed_range(self, gamma_reg_instance):
        with pytest.raises(InstanceFormatError):
            parse_instance(_document(gamma_reg_instance, seed=2 ** 64))

    def test_adversary_log_must_be_logged_edges(self, gamma_reg_instance):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(_document(gamma_reg_instance, adversary_log=[[0, 1]]))
        assert info.value.field == 'adversary_log'

    def test_invalid_params(self, gamma_reg_instance):
        params = gamma_reg_instance.params.to_dict()
        params['delta'] = 2.0
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(_document(gamma_reg_instance, params=params))
        assert info.value.field == 'params'

    def test_malformed_json(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"format_version": 1,')

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(InstanceFormatError):
            load_instance(tmp_path / 'missing.txt')

