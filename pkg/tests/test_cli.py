"""Unit tests for cli module."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from relchar_check.catalog import default_catalog, load_catalog
from relchar_check.cli import build_parser, main, u_from_q


@pytest.fixture(autouse=True)
def _isolated_env(tmp_path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("RELCHAR_LOG_DIR", str(tmp_path / "runs"))
    monkeypatch.setenv("RELCHAR_JOBS", "1")
    monkeypatch.setenv("RELCHAR_POINTS", "2")
    monkeypatch.delenv("RELCHAR_CATALOG", raising=False)
    monkeypatch.delenv("RELCHAR_SEED", raising=False)


class TestUFromQ:
    def test_square(self) -> None:
        assert u_from_q("9") == Fraction(1, 3)

    def test_rational_square(self) -> None:
        assert u_from_q("4/9") == Fraction(3, 2)

    def test_not_square(self) -> None:
        with pytest.raises(ValueError, match="not the square"):
            u_from_q("3")

    def test_negative(self) -> None:
        with pytest.raises(ValueError, match="positive"):
            u_from_q("-4")


class TestParser:
    def test_json_after_subcommand(self) -> None:
        args = build_parser().parse_args(["verify", "delta", "--json"])
        assert args.json and args.suite == "delta"

    def test_theta_or_random_required(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["relchar", "GL6"])

    def test_q_and_u_exclusive(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["relchar", "GL6", "--random", "--q", "9", "--u", "1/3"])

    def test_unknown_suite(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["verify", "everything"])


class TestModelsCommand:
    def test_list(self) -> None:
        assert main(["models", "list"]) == 0

    def test_show_case_insensitive(self) -> None:
        assert main(["models", "show", "gsp6xgsp4"]) == 0

    def test_show_unknown(self, capsys) -> None:
        assert main(["models", "show", "GSp6xGSp"]) == 2
        assert "Did you mean" in capsys.readouterr().out

    def test_export_file(self, tmp_path) -> None:
        path = tmp_path / "catalog.json"
        assert main(["models", "export", "-o", str(path)]) == 0
        assert load_catalog(str(path)).version == default_catalog().version

    def test_export_stdout(self, capsys) -> None:
        assert main(["models", "export"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert len(document["models"]) == 11


class TestVerifyCommand:
    def test_delta(self) -> None:
        assert main(["verify", "delta"]) == 0

    def test_json(self, tmp_path) -> None:
        assert main(["verify", "thetaplus", "--model", "trilinear", "--json"]) == 0
        logs = list((tmp_path / "runs").glob("*.jsonl"))
        assert len(logs) == 1

    def test_json_repeats_with_seed(self, capsys) -> None:
        outputs = []
        for _ in range(2):
            assert main(["verify", "padic", "--seed", "5", "--json"]) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        report = json.loads(outputs[0])
        assert report["seed"] == 5
        assert all("seconds" not in c for c in report["checks"])

    def test_bad_points(self, capsys) -> None:
        assert main(["verify", "delta", "--points", "0"]) == 1
        assert "Configuration error" in capsys.readouterr().out

    def test_unknown_model(self) -> None:
        assert main(["verify", "delta", "--model", "F4"]) == 2

    def test_catalog_from_env(self, tmp_path, monkeypatch) -> None:
        monkeypatch.setenv("RELCHAR_CATALOG", str(tmp_path / "missing.json"))
        assert main(["verify", "delta"]) == 1


class TestRelcharCommand:
    def test_random_point(self) -> None:
        assert main(["relchar", "GL4xGL2", "--random", "--seed", "3"]) == 0

    def test_with_coweight(self) -> None:
        assert main(["relchar", "GL4xGL2", "--random", "--t", "1,0,0,0,1,0", "--json"]) == 0

    def test_json_repeats_with_seed(self, capsys) -> None:
        outputs = []
        for _ in range(2):
            assert main(["relchar", "GL4xGL2", "--random", "--seed", "3", "--json"]) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        assert json.loads(outputs[0])["model"] == "GL4xGL2"

    def test_random_point_with_q_is_generic(self, capsys) -> None:
        assert main(["relchar", "trilinear", "--random", "--q", "1", "--json"]) == 1
        assert "differ from 1" in capsys.readouterr().out

    def test_constraint_violation(self, capsys) -> None:
        code = main(["relchar", "GL6", "--theta", "tau1=2,tau2=3,tau3=5,tau4=7,tau5=1/2,tau6=1"])
        assert code == 1
        assert "torus constraint" in capsys.readouterr().out

    def test_bad_q(self) -> None:
        assert main(["relchar", "GL6", "--random", "--q", "3"]) == 1

    def test_bad_coweight(self) -> None:
        assert main(["relchar", "GL4xGL2", "--random", "--t", "1,0"]) == 1
