"""Tests for runtime configuration."""

from typing import TYPE_CHECKING

from src.rolltree import config

if TYPE_CHECKING:
    from _pytest.logging import LogCaptureFixture
    from _pytest.monkeypatch import MonkeyPatch


def test_flag_wins_over_environment(monkeypatch: "MonkeyPatch") -> None:
    """An explicit flag overrides the environment."""
    monkeypatch.setenv(config.THREADS_ENV_VAR, "8")
    assert config.resolve_threads(3) == 3


def test_environment_used_without_flag(monkeypatch: "MonkeyPatch") -> None:
    """The environment variable applies when no flag is given."""
    monkeypatch.setenv(config.THREADS_ENV_VAR, "4")
    assert config.resolve_threads() == 4


def test_default_without_flag_or_environment(monkeypatch: "MonkeyPatch") -> None:
    """Falls back to the import-time default."""
    monkeypatch.delenv(config.THREADS_ENV_VAR, raising=False)
    monkeypatch.setattr(config, "DEFAULT_THREADS", 1)
    assert config.resolve_threads() == 1


def test_non_positive_threads_clamped(caplog: "LogCaptureFixture") -> None:
    """Zero or negative counts become 1 with a warning."""
    assert config.resolve_threads(0) == 1
    assert "non-positive thread count" in caplog.text
