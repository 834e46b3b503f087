"""
Shared fixtures for integration tests.

Writes the instance and function files the CLI tests read, once per module,
and resets CONFIG around every test so no config.yaml or environment
override leaks in.
"""

import json
import math
import os
import sys

import pytest

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

import config
import lipext
from generators import gen_example1, line_loset
from instance_io import instance_to_dict, write_json

SQRT2 = math.sqrt(2)

# x = (1,-1), y = (0,0), z = (0,-1) under the coordinatewise order
PLANE_WITNESS = {
    "labels": ["x", "y", "z"],
    "dist": [[0.0, SQRT2, 1.0], [SQRT2, 0.0, 1.0], [1.0, 1.0, 0.0]],
    "order": {"pairs": [[0, 2], [1, 2]], "closure": True},
}

TWO_CHAIN = {
    "labels": ["x", "y"],
    "dist": [[0.0, 1.0], [1.0, 0.0]],
    "order": {"pairs": [[0, 1]]},
}

FUNCTIONS = {
    "bottom_zero": {"domain": [1], "values": [[0.0]], "K": 1.0},
    "chain_total": {"domain": [0, 1], "values": [[0.75], [0.25]], "K": 1.0},
    "chain_decreasing": {"domain": [0, 1], "values": [[0.0], [1.0]], "K": 1.0},
    "witness": {"domain": [0, 1], "values": [[SQRT2], [0.0]], "K": 1.0},
    "line_ends": {"domain": [0, 2], "values": [[0.0], [0.6]], "K": 1.0},
    "line_all": {"domain": [0, 1, 2], "values": [[0.0], [0.4], [0.5]], "K": 1.0},
    "line_constant": {"domain": [0, 2], "values": [[0.3], [0.3]], "K": 1.0},
    "line_vector": {"domain": [0, 2], "values": [[0.0, 0.1], [0.6, 0.2]], "K": 1.0},
}


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    """Paths of every fixture file, keyed by name."""
    root = tmp_path_factory.mktemp("lipext")
    instances = {
        "diamond_radial": instance_to_dict(gen_example1(0.6, 0.3)),
        "diamond_d2_only": instance_to_dict(gen_example1(0.7, 0.4)),
        "line3": instance_to_dict(line_loset([0.0, 0.5, 1.0])),
        "plane_witness": PLANE_WITNESS,
        "two_chain": TWO_CHAIN,
        "bad_metric": {"dist": [[0, -1], [-1, 0]]},
    }
    paths = {}
    for name, data in {**instances, **FUNCTIONS}.items():
        path = root / f"{name}.json"
        write_json(data, str(path))
        paths[name] = str(path)

    malformed = root / "malformed.json"
    malformed.write_text('{"dist": [[0, 1], [1, 0]')
    paths["malformed"] = str(malformed)

    shapes = {
        "list_instance": [1, 2],
        "string_pair": {"dist": [[0, 1], [1, 0]], "order": {"pairs": [[0, "1"]]}},
        "nan_instance": {"dist": [[0, float("nan")], [float("nan"), 0]]},
        "scalar_values": {"domain": [0], "values": 5},
        "nan_value": {"domain": [1], "values": [[float("nan")]], "K": 1.0},
    }
    for name, data in shapes.items():
        path = root / f"{name}.json"
        path.write_text(json.dumps(data))
        paths[name] = str(path)

    paths["missing"] = str(root / "does_not_exist.json")
    paths["root"] = str(root)
    return paths


@pytest.fixture(autouse=True)
def clean_config():
    config.reset_config()
    yield
    config.reset_config()


@pytest.fixture
def run(tmp_path):
    """lipext.main with a config path that does not exist."""
    no_config = str(tmp_path / "no_config.yaml")

    def _run(*argv):
        return lipext.main(["--config", no_config, *argv])

    return _run
