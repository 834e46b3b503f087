"""
Unit tests for instance_io.py - instance, function and result file formats.
"""

import io
import json
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

import config
from extension import ExtensionPolicy, PartialFunction, WidthMismatch, extend, oracle_solve
from generators import DIAMOND_PAIRS, EXAMPLE3, gen_example1, line_loset
from instance_io import (
    decode_number,
    encode_number,
    function_from_dict,
    function_to_dict,
    hasse_pairs,
    instance_from_dict,
    instance_to_dict,
    load_function,
    load_instance,
    oracle_to_dict,
    outcome_to_dict,
    spec_from_dict,
    write_function_tsv,
    write_json,
)
from poset import LipextError, OrderValidationError, PointSet, make_poset


@pytest.fixture(autouse=True)
def default_config():
    config.reset_config()
    yield
    config.reset_config()


def chain2():
    return make_poset([[0, 1], [1, 0]], [[True, True], [False, True]])


class TestNumbers:
    """Tests for encode_number and decode_number."""

    def test_infinities_as_strings(self):
        assert encode_number(math.inf) == "+inf"
        assert encode_number(-math.inf) == "-inf"
        assert encode_number(np.float64(0.5)) == 0.5

    def test_decode(self):
        assert decode_number("+inf") == math.inf
        assert decode_number("-inf") == -math.inf
        assert decode_number(2) == 2.0

    def test_decode_rejects_other_strings(self):
        with pytest.raises(LipextError):
            decode_number("nan")


class TestInstances:
    """Tests for instance JSON."""

    def test_hasse_pairs_of_diamond(self):
        """The closure is dropped back to the covering pairs."""
        assert hasse_pairs(gen_example1(0.6, 0.3)) == [list(p) for p in DIAMOND_PAIRS]

    def test_diamond_survives_a_file(self, tmp_path):
        poset = gen_example1(0.6, 0.3)
        path = tmp_path / "diamond.json"
        write_json(instance_to_dict(poset), str(path))
        loaded = load_instance(str(path))
        assert np.array_equal(loaded.dist, poset.dist)
        assert np.array_equal(loaded.geq, poset.geq)
        assert loaded.labels == poset.labels

    def test_geq_matrix_form(self):
        data = {"dist": [[0, 1], [1, 0]], "order": {"geq": [[1, 1], [0, 1]]}}
        poset = instance_from_dict(data)
        assert poset.geq[0, 1] and not poset.geq[1, 0]
        assert poset.labels is None

    def test_missing_order_is_equality(self):
        poset = instance_from_dict({"dist": [[0, 1], [1, 0]]})
        assert np.array_equal(poset.geq, np.eye(2, dtype=bool))

    def test_pair_out_of_range(self):
        with pytest.raises(LipextError):
            instance_from_dict({"dist": [[0, 1], [1, 0]], "order": {"pairs": [[0, 5]]}})

    def test_wrong_structure_is_a_lipext_error(self):
        """Parseable JSON of the wrong shape is a validation error, not a TypeError."""
        bad = [
            [1, 2],
            {"labels": ["x"]},
            {"dist": 5},
            {"dist": [[0, 1], [1, 0]], "order": [[0, 1]]},
            {"dist": [[0, 1], [1, 0]], "order": {"pairs": [[0, "1"]]}},
            {"dist": [[0, 1], [1, 0]], "order": {"pairs": [[0, 1, 1]]}},
        ]
        for data in bad:
            with pytest.raises(LipextError):
                instance_from_dict(data)

    def test_nan_distance_rejected(self):
        data = json.loads('{"dist": [[0, NaN], [NaN, 0]]}')
        with pytest.raises(LipextError):
            instance_from_dict(data)

    def test_closure_off_requires_transitive_pairs(self):
        data = {
            "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
            "order": {"pairs": [[0, 1], [1, 2]], "closure": False},
        }
        with pytest.raises(OrderValidationError):
            instance_from_dict(data)


class TestFunctions:
    """Tests for function JSON."""

    def test_rows_follow_listed_domain(self):
        """Domain [2, 0] is stored sorted with its rows moved along."""
        f = function_from_dict({"domain": [2, 0], "values": [[5.0], [1.0]], "K": 2})
        assert f.domain.members == (0, 2)
        assert f.values[:, 0].tolist() == [1.0, 5.0]
        assert f.K == 2.0

    def test_scalar_values(self):
        f = function_from_dict({"domain": [0, 1], "values": [1.0, 0.0]})
        assert f.width == 1
        assert f.K == 1.0

    def test_infinite_entries(self):
        f = function_from_dict({"domain": [0], "values": [["+inf", 1]]})
        assert f.values[0].tolist() == [math.inf, 1.0]

    def test_repeated_point(self):
        with pytest.raises(LipextError):
            function_from_dict({"domain": [0, 0], "values": [1, 2]})

    def test_row_count(self):
        with pytest.raises(LipextError):
            function_from_dict({"domain": [0, 1], "values": [1]})

    def test_ragged_rows(self):
        with pytest.raises(WidthMismatch):
            function_from_dict({"domain": [0, 1], "values": [[1, 2], [3]]})

    def test_wrong_structure_is_a_lipext_error(self):
        bad = [
            "f",
            {"domain": [0]},
            {"domain": [0], "values": 5},
            {"domain": "0", "values": [1]},
            {"domain": [0.5], "values": [1]},
            {"domain": [0], "values": [{"v": 1}]},
        ]
        for data in bad:
            with pytest.raises(LipextError):
                function_from_dict(data)

    def test_file_and_dict_agree(self, tmp_path):
        f = PartialFunction(PointSet.of([0, 3]), [[1.0, 2.0], [0.0, 0.5]], K=1.5)
        path = tmp_path / "f.json"
        write_json(function_to_dict(f), str(path))
        loaded = load_function(str(path), 4)
        assert loaded.domain == f.domain
        assert np.array_equal(loaded.values, f.values)
        assert loaded.K == 1.5


class TestResults:
    """Tests for result serialization."""

    def test_write_json_text(self, tmp_path):
        path = tmp_path / "out.json"
        text = write_json({"a": 1}, str(path))
        assert text.endswith("}\n")
        assert path.read_text() == text
        assert json.loads(text) == {"a": 1}

    def test_outcome_dict(self):
        f = PartialFunction(PointSet.of([1]), [0.0], K=1.0)
        outcome = extend(chain2(), f, ExtensionPolicy("min"))
        data = outcome_to_dict(outcome, intervals=True)
        assert data["status"] == "Feasible"
        assert data["F"] == [[0.0], [0.0]]
        assert data["permutation"] == [0]
        assert data["policy"] == {"selector": "min", "point_order": "ascending"}
        assert data["intervals"][0]["b"] == "+inf"
        assert data["intervals"][0]["lo"] == 0.0
        json.dumps(data)

    def test_outcome_dict_without_intervals(self):
        f = PartialFunction(PointSet.of([1]), [0.0], K=1.0)
        assert "intervals" not in outcome_to_dict(extend(chain2(), f))

    def test_oracle_dict(self):
        f = PartialFunction(PointSet.of([1]), [0.0], K=1.0)
        data = oracle_to_dict(oracle_solve(chain2(), f))
        assert data["feasible"]
        assert data["Fmin"] == [[0.0], [0.0]]
        assert data["Fmax"] == [[1.0], [0.0]]


class TestSpecsAndTsv:
    """Tests for generator specs and TSV tables."""

    def test_nested_instances(self):
        A = instance_to_dict(line_loset([0.0, 1.0]))
        B = instance_to_dict(line_loset([0.0, 0.5]))
        spec, seed = spec_from_dict({"kind": EXAMPLE3, "params": {"A": A, "B": B, "theta": 1.0}})
        assert spec.kind == EXAMPLE3
        assert spec.params["A"].n == 2
        assert seed is None

    def test_seed(self):
        spec, seed = spec_from_dict({"kind": "random_loset", "params": {"n": 4}, "seed": "7"})
        assert seed == 7
        assert spec.params == {"n": 4}

    def test_tsv_table(self):
        out = io.StringIO()
        write_function_tsv([1.0, -math.inf], labels=["top", "bottom"], stream=out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "point\tlabel\tv0"
        assert lines[1] == "0\ttop\t1.0"
        assert lines[2] == "1\tbottom\t-inf"
