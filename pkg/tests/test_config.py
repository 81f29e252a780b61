import pytest

from config.environment import Config
from src.cli.main import EXIT_USAGE, main


def test_defaults_are_valid():
    assert Config.validate_config() is True


def test_every_bad_setting_is_reported(monkeypatch):
    monkeypatch.setattr(Config, "EPSILON", 0.0)
    monkeypatch.setattr(Config, "NEIGHBORS", 3)
    monkeypatch.setattr(Config, "DELTA", -1)
    with pytest.raises(ValueError) as excinfo:
        Config.validate_config()
    message = str(excinfo.value)
    assert "NCSP_EPSILON" in message
    assert "NCSP_NEIGHBORS" in message
    assert "NCSP_DELTA" in message


def test_cli_refuses_bad_environment(monkeypatch, capsys):
    monkeypatch.setattr(Config, "NBB", 1)
    assert main(["solve", "--problem", "sphere-plane"]) == EXIT_USAGE
    assert "NCSP_NBB" in capsys.readouterr().err
