from io import StringIO
import json

import pytest
from yaml import safe_load

from bohrstrip.settings import Settings
from bohrstrip.util import settings_to_sample

try:
    from pydantic.v1 import ValidationError
except ImportError:
    from pydantic import ValidationError


def test_schema_json():
    schema = Settings.schema_json(indent=2)
    assert "Configuration for bohrstrip runs" in json.loads(schema)["description"]


def test_extra_fields_ignored():
    s = Settings(extra=1)
    assert not hasattr(s, "extra")


def test_defaults_loaded():
    settings = Settings()
    assert settings.seed == 0
    assert settings.construct_.p == 5
    assert settings.budgets.grid_points == 12_000_000
    assert settings.embed.lambdas == [(1.0, 0.0)]
    assert settings.perturb.k == 2


def test_defaults_override_constructor():
    settings = Settings(**{"construct": {"K": 2}, "embed": {"lambdas": [0.5, [0, 1], {"im": 2}]}})
    assert settings.construct_.K == 2
    assert settings.embed.lambdas == [(0.5, 0.0), (0.0, 1.0), (0.0, 2.0)]


def test_defaults_override_env_var(monkeypatch):
    monkeypatch.setenv("BOHRSTRIP_BUDGETS.MAX_TERMS", "1000")
    settings = Settings()
    assert settings.budgets.max_terms == 1000


def test_none_section_is_default():
    assert Settings(construct=None).construct_ == Settings().construct_


@pytest.mark.parametrize(
    "config",
    [
        {"construct": {"m": 5, "p": 5}},
        {"construct": {"p": 9}},
        {"embed": {"M_max": 5, "p": 5}},
        {"algebra": {"m": 3, "M": 3}},
        {"perturb": {"epsilon": 0}},
        {"embed": {"lambdas": [[1, 2, 3]]}},
        {"seed": -1},
    ],
)
def test_invalid_settings(config):
    with pytest.raises(ValidationError):
        Settings(**config)


def test_schema_to_sample():
    sample = settings_to_sample()
    settings = Settings(**safe_load(StringIO(sample)))
    default_settings = Settings()
    assert settings.dict() == default_settings.dict()
    assert "# Valid options are: l1, l2" in sample


def test_construct_section_alias(monkeypatch):
    settings = Settings(construct={"K": 2})
    assert settings.construct_.K == 2
    assert Settings(construct_={"K": 3}).construct_.K == 3
    assert settings.dict(by_alias=True)["construct"]["K"] == 2
    monkeypatch.setenv("BOHRSTRIP_CONSTRUCT.SAMPLES", "16")
    assert Settings().construct_.samples == 16
