import pytest
from pydantic import ValidationError

from hardball.config import Command, Generator, RunConfig, Tolerances, load_settings, reload_settings


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("HARDBALL_THREADS", "2")
    monkeypatch.setenv("HARDBALL_TOLERANCES__MONO", "1e-6")
    settings = reload_settings()
    assert settings.threads == 2
    assert settings.tolerances.mono == pytest.approx(1e-6)
    assert settings.tolerances.contact == Tolerances().contact
    assert load_settings() is settings


def test_tolerances_must_be_positive():
    with pytest.raises(ValidationError):
        Tolerances(contact=0.0)


def test_run_config_needs_one_scenario_source():
    with pytest.raises(ValidationError):
        RunConfig(command=Command.SIMULATE)
    config = RunConfig(command=Command.SIMULATE, generator=Generator.LINE)
    assert config.n == 4
    assert config.tolerances == Tolerances()


def test_run_config_events_only_for_verify(tmp_path):
    with pytest.raises(ValidationError):
        RunConfig(command=Command.SIMULATE, events_file=tmp_path / "events.jsonl")
    RunConfig(command=Command.VERIFY, events_file=tmp_path / "events.jsonl")


def test_bounds_need_no_scenario():
    assert RunConfig(command=Command.BOUNDS, delta=1.0).delta == 1.0
    with pytest.raises(ValidationError):
        RunConfig(command=Command.BOUNDS, delta=0.0)
