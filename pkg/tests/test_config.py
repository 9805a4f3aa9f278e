import json

import pytest

from germforge.io.config import (
    BOUND_ENV,
    DEFAULT_BOUND,
    ConfigError,
    EngineConfig,
    load_config,
    resolve_bound,
    save_config,
)


def test_bound_precedence():
    config = EngineConfig(bound=12)
    environ = {BOUND_ENV: "20"}
    assert resolve_bound(5, config, environ) == 5
    assert resolve_bound(None, config, environ) == 20
    assert resolve_bound(None, config, {}) == 12
    assert resolve_bound(None, None, {}) == DEFAULT_BOUND == 32


def test_empty_environment_value_is_ignored():
    assert resolve_bound(None, None, {BOUND_ENV: ""}) == 32


@pytest.mark.parametrize("value", ["0", "-3", "many", "2.5"])
def test_bad_environment_bound(value):
    with pytest.raises(ConfigError):
        resolve_bound(None, None, {BOUND_ENV: value})


def test_bad_flag_bound():
    with pytest.raises(ConfigError):
        resolve_bound(0)


@pytest.mark.parametrize(
    "kwargs",
    [{"bound": 0}, {"jobs": -1}, {"bound": True}, {"output_format": "xml"}],
)
def test_invalid_settings(kwargs):
    with pytest.raises(ConfigError):
        EngineConfig(**kwargs)


def test_save_and_load(tmp_path):
    path = save_config(EngineConfig(bound=8, jobs=2, output_format="csv"), tmp_path / "nested" / "cfg.json")
    assert json.loads(path.read_text())["bound"] == 8
    config = load_config(path)
    assert (config.bound, config.jobs, config.output_format, config.quiet) == (8, 2, "csv", False)


def test_unknown_keys(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"bound": 4, "colour": "red"}))
    with pytest.raises(ConfigError):
        load_config(path)


def test_malformed_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("{bound")
    with pytest.raises(ConfigError):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "absent.json")
