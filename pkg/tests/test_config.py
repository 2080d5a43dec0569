"""Test configuration management."""

import json
from pathlib import Path

import pytest

from config import Settings, get_settings, reset_settings
from config.experiment import ExperimentConfig, load_experiment, parse_experiment
from core import ConfigError
from stepfn import StepFunction


SHOCK_CONFIG = {
    "schema_version": 1,
    "domain": {"kind": "half_line"},
    "flux": {"coefficients": [[0.0, 0.0, 0.5]]},
    "eps": 1.0,
    "horizon": 1.0,
    "initial": {"breakpoints": [1.0], "values": [1.0, 0.0]},
    "boundary": {"values": [1.0]},
}


def test_settings_creation():
    """Test that settings can be created with defaults."""
    settings = Settings()

    assert settings.log_level == "INFO"
    assert settings.event_tolerance == 1e-11
    assert settings.max_events == 200_000
    assert settings.quadrature_order == 6
    assert settings.worker_threads == 4


def test_settings_from_environment(monkeypatch):
    """Test FT_ environment variables, including the FT_LOG alias."""
    monkeypatch.setenv("FT_LOG", "DEBUG")
    monkeypatch.setenv("FT_MAX_EVENTS", "17")
    reset_settings()
    try:
        settings = get_settings()
        assert settings.log_level == "DEBUG"
        assert settings.max_events == 17
        assert get_settings() is settings
    finally:
        reset_settings()


def test_event_tau_scales_with_horizon():
    """Test the event merging tolerance."""
    settings = Settings(event_tolerance=1e-11)

    assert settings.event_tau(0.5) == 1e-11
    assert settings.event_tau(10.0) == pytest.approx(1e-10)


def test_parse_experiment():
    """Test a valid experiment config."""
    config = parse_experiment(json.dumps(SHOCK_CONFIG))

    assert config.schema_version == 1
    assert config.domain.kind == "half_line"
    problem = config.to_problem()
    assert problem.flux(0.0, 1.0) == 0.5
    assert problem.u_o == StepFunction.make([1.0], [1.0, 0.0])
    assert problem.u_b.end == 1.0
    assert problem.u_b2 is None


def test_unsorted_breakpoints_rejected_with_line():
    """Test that validation errors name the JSON path and line."""
    raw = dict(SHOCK_CONFIG, initial={"breakpoints": [2.0, 1.0], "values": [0.0, 1.0, 0.0]})
    text = json.dumps(raw, indent=2)

    with pytest.raises(ConfigError) as excinfo:
        parse_experiment(text, "shock.json")

    message = str(excinfo.value)
    assert message.startswith("shock.json:")
    assert "initial.breakpoints" in message
    line = int(message.split(":")[1])
    assert '"breakpoints"' in text.splitlines()[line - 1]


def test_invalid_json_rejected():
    """Test malformed JSON."""
    with pytest.raises(ConfigError, match="invalid JSON"):
        parse_experiment('{"eps": 1.0,', "broken.json")


@pytest.mark.parametrize("field, value", [("eps", 0.0), ("horizon", -1.0), ("schema_version", 2)])
def test_positivity_and_version(field, value):
    """Test eps > 0, T > 0 and the schema version."""
    with pytest.raises(ConfigError):
        parse_experiment(json.dumps(dict(SHOCK_CONFIG, **{field: value})))


def test_segment_requires_right_boundary():
    """Test segment configs need boundary_right data and a length."""
    raw = dict(SHOCK_CONFIG, domain={"kind": "segment", "length": 2.0})
    with pytest.raises(ConfigError):
        parse_experiment(json.dumps(raw))

    raw["boundary_right"] = {"values": [0.0]}
    config = parse_experiment(json.dumps(raw))
    problem = config.to_problem()
    assert problem.domain.is_segment
    assert problem.u_o.end == 2.0

    with pytest.raises(ConfigError):
        parse_experiment(json.dumps(dict(raw, domain={"kind": "segment"})))


def test_time_grid():
    """Test the default and explicit time grids."""
    config = ExperimentConfig.model_validate(dict(SHOCK_CONFIG, options={"time_samples": 4}))
    assert config.time_grid() == [0.0, 0.25, 0.5, 0.75, 1.0]

    config = ExperimentConfig.model_validate(dict(SHOCK_CONFIG, options={"times": [0.0, 0.5, 2.0]}))
    assert config.time_grid() == [0.0, 0.5]


def test_load_experiment(tmp_path):
    """Test loading from disk and a missing file."""
    path = tmp_path / "shock.json"
    path.write_text(json.dumps(SHOCK_CONFIG), encoding="utf-8")

    assert load_experiment(path).eps == 1.0
    with pytest.raises(ConfigError, match="cannot read"):
        load_experiment(tmp_path / "missing.json")


@pytest.mark.parametrize("name", ["shock", "boundary_rarefaction", "transport_nonaut", "segment"])
def test_shipped_experiments_load(name):
    """Test that the example configs under data/experiments validate and build problems."""
    path = Path(__file__).resolve().parent.parent / "data" / "experiments" / f"{name}.json"
    config = load_experiment(path)

    problem = config.to_problem()
    assert problem.horizon == config.horizon
    assert problem.eps == config.eps
