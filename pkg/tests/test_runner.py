"""Unit tests for runner module."""

from __future__ import annotations

import json

import pytest

from relchar_check.config import DEFAULT_SEED, Settings
from relchar_check.runner import JsonlLogger, RunReport, run_suite
from relchar_check.validators import CheckResult, CheckStatus, UnknownModelError


def _settings(tmp_path, **overrides) -> Settings:
    defaults = {
        "catalog_path": None,
        "jobs": 1,
        "seed": DEFAULT_SEED,
        "points": 2,
        "weyl_cap": 4_000_000,
        "max_resample": 50,
        "sample_bound": 7,
        "shell_depth": 12,
        "tolerance": 1e-9,
        "log_dir": str(tmp_path / "runs"),
        "slow": False,
    }
    defaults.update(overrides)
    return Settings(**defaults)


class TestJsonlLogger:
    def test_writes_one_object_per_line(self, tmp_path) -> None:
        with JsonlLogger(str(tmp_path)) as logger:
            logger.write({"type": "check", "value": "1/2"})
            logger.write({"type": "summary"})
            path = logger.path
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        first = json.loads(lines[0])
        assert first["value"] == "1/2"
        assert "ts" in first

    def test_lazy_open(self, tmp_path) -> None:
        logger = JsonlLogger(str(tmp_path / "logs"))
        assert not logger.path.exists()
        logger.close()

    def test_non_ascii_kept(self, tmp_path) -> None:
        with JsonlLogger(str(tmp_path)) as logger:
            logger.write({"delta": "ζ(1)L(1,η)"})
        assert "ζ(1)L(1,η)" in logger.path.read_text(encoding="utf-8")


class TestRunReport:
    def _report(self, *statuses: CheckStatus) -> RunReport:
        results = [CheckResult("delta", f"m{i}", s) for i, s in enumerate(statuses)]
        return RunReport(["verify", "delta"], "abc", DEFAULT_SEED, results)

    def test_exit_code_pass(self) -> None:
        assert self._report(CheckStatus.PASS, CheckStatus.SKIP).exit_code == 0

    def test_exit_code_fail(self) -> None:
        assert self._report(CheckStatus.PASS, CheckStatus.FAIL).exit_code == 1

    def test_to_dict(self) -> None:
        d = self._report(CheckStatus.PASS).to_dict()
        assert d["command"] == ["verify", "delta"]
        assert d["summary"] == {"pass": 1, "fail": 0, "skip": 0}
        assert d["checks"][0]["suite"] == "delta"
        assert "seconds" not in d
        assert "seconds" not in d["checks"][0]


class TestRunSuite:
    def test_delta_suite_logged(self, tmp_path) -> None:
        report = run_suite("delta", _settings(tmp_path))
        assert report.ok
        assert len(report.results) == 11
        events = [json.loads(line) for line in open(report.log_path, encoding="utf-8")]
        assert events[0]["type"] == "command"
        assert events[-1]["type"] == "summary"
        assert all("seconds" in e for e in events if e["type"] == "check")
        assert sum(1 for e in events if e["type"] == "check") == 11

    def test_model_filter(self, tmp_path) -> None:
        report = run_suite("thetaplus", _settings(tmp_path), model="trilinear")
        assert report.ok
        assert {r.name for r in report.results} == {"trilinear/closure", "trilinear/brute-force"}

    def test_same_seed_same_report(self, tmp_path) -> None:
        a = run_suite("relchar", _settings(tmp_path), model="GL4xGL2")
        b = run_suite("relchar", _settings(tmp_path), model="GL4xGL2")
        assert [r.values for r in a.results] == [r.values for r in b.results]

    def test_unknown_model(self, tmp_path) -> None:
        with pytest.raises(UnknownModelError, match="Did you mean"):
            run_suite("delta", _settings(tmp_path), model="GSp6xGSp")

    def test_unknown_suite(self, tmp_path) -> None:
        with pytest.raises(ValueError, match="unknown suite"):
            run_suite("everything", _settings(tmp_path))
