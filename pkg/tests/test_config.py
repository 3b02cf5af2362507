"""Unit tests for config module."""

from __future__ import annotations

import pytest

from relchar_check.config import DEFAULT_SEED, Settings


class TestSettingsValidation:
    def _make_settings(self, **overrides) -> Settings:
        """Create a Settings instance with defaults and optional overrides."""
        defaults = {
            "catalog_path": None,
            "jobs": 1,
            "seed": DEFAULT_SEED,
            "points": 5,
            "weyl_cap": 4_000_000,
            "max_resample": 50,
            "sample_bound": 7,
            "shell_depth": 12,
            "tolerance": 1e-9,
            "log_dir": "runs",
            "slow": False,
        }
        defaults.update(overrides)
        return Settings(**defaults)

    def test_valid_settings(self) -> None:
        settings = self._make_settings()
        settings.validate()  # Should not raise

    def test_invalid_points(self) -> None:
        settings = self._make_settings(points=0)
        with pytest.raises(ValueError, match="points must be >= 1"):
            settings.validate()

    def test_negative_jobs(self) -> None:
        settings = self._make_settings(jobs=-1)
        with pytest.raises(ValueError, match="jobs must be >= 0"):
            settings.validate()

    def test_invalid_sample_bound(self) -> None:
        settings = self._make_settings(sample_bound=1)
        with pytest.raises(ValueError, match="sample_bound must be >= 2"):
            settings.validate()

    def test_invalid_shell_depth(self) -> None:
        settings = self._make_settings(shell_depth=100)
        with pytest.raises(ValueError, match="shell_depth must be in"):
            settings.validate()

    def test_invalid_tolerance(self) -> None:
        settings = self._make_settings(tolerance=0.1)
        with pytest.raises(ValueError, match="tolerance must be in"):
            settings.validate()

    def test_empty_log_dir(self) -> None:
        settings = self._make_settings(log_dir="")
        with pytest.raises(ValueError, match="log_dir cannot be empty"):
            settings.validate()

    def test_missing_catalog_file(self, tmp_path) -> None:
        settings = self._make_settings(catalog_path=str(tmp_path / "nope.json"))
        with pytest.raises(ValueError, match="catalog file not found"):
            settings.validate()

    def test_multiple_errors(self) -> None:
        settings = self._make_settings(points=0, max_resample=0)
        with pytest.raises(ValueError) as exc_info:
            settings.validate()
        assert "points" in str(exc_info.value)
        assert "max_resample" in str(exc_info.value)


class TestSettingsFromEnv:
    def test_defaults(self, monkeypatch, tmp_path) -> None:
        monkeypatch.chdir(tmp_path)
        for name in ("RELCHAR_CATALOG", "RELCHAR_SEED", "RELCHAR_JOBS", "RELCHAR_POINTS", "RELCHAR_SLOW"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings.from_env()
        assert settings.catalog_path is None
        assert settings.seed == DEFAULT_SEED
        assert settings.points == 5
        assert not settings.slow

    def test_env_values(self, monkeypatch, tmp_path) -> None:
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("RELCHAR_SEED", "7")
        monkeypatch.setenv("RELCHAR_JOBS", "3")
        monkeypatch.setenv("RELCHAR_SLOW", "yes")
        settings = Settings.from_env()
        assert settings.seed == 7
        assert settings.workers == 3
        assert settings.slow

    def test_malformed_values_fall_back(self, monkeypatch, tmp_path) -> None:
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("RELCHAR_POINTS", "many")
        monkeypatch.setenv("RELCHAR_SEED", "x")
        settings = Settings.from_env()
        assert settings.points == 5
        assert settings.seed == DEFAULT_SEED

    def test_overrides_ignore_none(self) -> None:
        settings = TestSettingsValidation()._make_settings()
        assert settings.with_overrides(points=None) is settings
        assert settings.with_overrides(points=2, seed=None).points == 2

    def test_zero_jobs_means_cpu_count(self) -> None:
        settings = TestSettingsValidation()._make_settings(jobs=0)
        assert settings.workers >= 1
