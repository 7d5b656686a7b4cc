import json
import os
import pathlib

import pytest

jsonschema = pytest.importorskip("jsonschema")

SOURCE = pathlib.Path(os.environ.get("PACNFL_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
SCHEMA = json.loads((SOURCE / "docs" / "config.schema.json").read_text())
CONFIGS = sorted((SOURCE / "configs").glob("*.json"))


def validator():
    cls = jsonschema.validators.validator_for(SCHEMA)
    cls.check_schema(SCHEMA)
    return cls(SCHEMA)


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.name)
def test_shipped_config_matches_schema(path):
    validator().validate(json.loads(path.read_text()))


@pytest.mark.parametrize(
    "body",
    [
        {"command": "construct", "class": {"task": "distribution"}},
        {"command": "learn", "seed": 1, "class": {"task": "fish", "members": []}, "learner": {"kind": "erm"}, "target": 0, "m": 1},
        {"command": "learn", "seed": 1, "class": {"task": "distribution", "members": []}, "learner": {"kind": "truncation"}, "target": 0, "m": 1},
        {"command": "dominate", "seed": 1, "f": [1, 2]},
        {"command": "nfl-exact", "seed": 1, "class": {"task": "distribution", "members": []}, "m": 2, "learners": {"kind": "erm"}, "jobs": 0},
    ],
)
def test_schema_rejects(body):
    assert not validator().is_valid(body)
