"""Unit tests for catalog module."""

from __future__ import annotations

import json

import pytest

from relchar_check.catalog import (
    CATALOG_SCHEMA,
    catalog_json,
    default_catalog,
    expand_pm,
    export_catalog,
    load_catalog,
    model_from_dict,
    weyl_orbit,
)
from relchar_check.validators import ModelDataError, UnknownModelError

MODEL_NAMES = [
    "trilinear", "GL4xGL2", "GU4xGU2", "GSp6xGSp4", "GL6", "GU6",
    "GSp10", "GSp6xGL2", "GSO8xGL2", "GSO12", "E7",
]


def _minimal_entry(**overrides) -> dict:
    entry = {
        "name": "PGL2",
        "basis": ["e1", "e2"],
        "roots": [{"name": "a1", "root": "e1-e2"}],
        "theta": [{"weight": "e1"}, {"weight": "e2"}, {"weight": "-e1"}, {"weight": "-e2"}],
        "colors": {"a1": ["e1", "-e2"]},
        "degrees_g": ["1", "2"],
        "degrees_h": ["1"],
    }
    entry.update(overrides)
    return entry


class TestHelpers:
    def test_expand_pm(self) -> None:
        assert expand_pm("e1±e2±e3") == ["e1+e2+e3", "e1+e2-e3", "e1-e2+e3", "e1-e2-e3"]

    def test_expand_without_sign(self) -> None:
        assert expand_pm("e1") == ["e1"]

    def test_weyl_orbit(self) -> None:
        datum = default_catalog().get("GL6").datum
        orbit = weyl_orbit(datum, (2, 0, 0, 0, 0, 0))
        assert len(orbit) == 6


class TestEmbeddedCatalog:
    def test_names(self) -> None:
        assert default_catalog().names() == MODEL_NAMES

    def test_case_insensitive_get(self) -> None:
        assert default_catalog().get("gsp6xgsp4").name == "GSp6xGSp4"

    def test_unknown_model(self) -> None:
        with pytest.raises(UnknownModelError, match="GSp6xGSp4"):
            default_catalog().get("GSp6xGSp")

    def test_select(self) -> None:
        catalog = default_catalog()
        assert len(catalog.select(None)) == len(MODEL_NAMES)
        assert len(catalog.select("all")) == len(MODEL_NAMES)
        assert [m.name for m in catalog.select("E7")] == ["E7"]

    def test_rho_dimensions(self) -> None:
        catalog = default_catalog()
        dims = {m.name: m.theta_dimension for m in catalog.select(None)}
        assert dims["trilinear"] == 8
        assert dims["GL4xGL2"] == 20
        assert dims["GSp6xGSp4"] == 32
        assert dims["E7"] == 56

    def test_e7_reduction_chain(self) -> None:
        names = [r.name for r in default_catalog().reductions_for("E7")]
        assert names == ["E7-over-D6", "E7-D6-over-A5", "E7-A5-over-A3A1", "E7-A3A1-over-A1A1A1"]

    def test_unknown_reduction(self) -> None:
        with pytest.raises(UnknownModelError):
            default_catalog().reduction("E8-over-D7")

    def test_version_stable(self) -> None:
        version = default_catalog().version
        assert len(version) == 16
        assert version == default_catalog().version


class TestInterchange:
    def test_export_schema(self) -> None:
        document = export_catalog(default_catalog())
        assert document["schema"] == CATALOG_SCHEMA
        assert len(document["models"]) == len(MODEL_NAMES)

    def test_round_trip_keeps_version(self, tmp_path) -> None:
        path = tmp_path / "catalog.json"
        path.write_text(catalog_json(default_catalog()), encoding="utf-8")
        loaded = load_catalog(str(path))
        assert loaded.source == str(path)
        assert loaded.version == default_catalog().version

    def test_default_path(self) -> None:
        assert load_catalog(None) is default_catalog()

    def test_unreadable_file(self, tmp_path) -> None:
        with pytest.raises(ModelDataError, match="cannot read catalog"):
            load_catalog(str(tmp_path / "missing.json"))

    def test_bad_json(self, tmp_path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ModelDataError, match="cannot read catalog"):
            load_catalog(str(path))

    def test_wrong_schema(self, tmp_path) -> None:
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"schema": "other/2", "models": []}), encoding="utf-8")
        with pytest.raises(ModelDataError, match="unsupported catalog schema"):
            load_catalog(str(path))

    def test_duplicate_model(self, tmp_path) -> None:
        path = tmp_path / "dup.json"
        document = {"schema": CATALOG_SCHEMA, "models": [_minimal_entry(), _minimal_entry()]}
        path.write_text(json.dumps(document), encoding="utf-8")
        with pytest.raises(ModelDataError, match="duplicate model"):
            load_catalog(str(path))

    def test_reduction_to_unknown_model(self, tmp_path) -> None:
        path = tmp_path / "red.json"
        document = {
            "schema": CATALOG_SCHEMA,
            "models": [_minimal_entry()],
            "reductions": [{"name": "x", "model": "GL2", "inner": []}],
        }
        path.write_text(json.dumps(document), encoding="utf-8")
        with pytest.raises(ModelDataError, match="unknown model"):
            load_catalog(str(path))


class TestModelFromDict:
    def test_minimal_entry(self) -> None:
        model = model_from_dict(_minimal_entry())
        model.check()
        assert model.theta_dimension == 4
        assert model.constraint is None

    def test_missing_field(self) -> None:
        entry = _minimal_entry()
        del entry["degrees_h"]
        with pytest.raises(ModelDataError, match="missing field"):
            model_from_dict(entry)

    def test_too_many_colours(self) -> None:
        with pytest.raises(ModelDataError, match="one or two colours"):
            model_from_dict(_minimal_entry(colors={"a1": ["e1", "-e2", "e2"]}))

    def test_colours_must_sum_to_coroot(self) -> None:
        model = model_from_dict(_minimal_entry(colors={"a1": ["e1", "e2"]}))
        with pytest.raises(ModelDataError, match="do not sum to its coroot"):
            model.check()

    def test_wrong_rho_dim(self) -> None:
        model = model_from_dict(_minimal_entry(rho_dim=6))
        with pytest.raises(ModelDataError, match="expected 6"):
            model.check()
