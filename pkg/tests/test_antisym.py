"""Unit tests for antisym module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from relchar_check.antisym import (
    AntisymMode,
    AntisymReport,
    PowerRow,
    antisym_vanish_check,
    coset_orbit,
    coset_reduction_check,
    full_antisym,
    reduction_data,
)
from relchar_check.catalog import default_catalog
from relchar_check.models import Reduction
from relchar_check.validators import AntisymDiscrepancy, ModelDataError, WeylCapError
from relchar_check.weylsum import sample_points

SEED = 11


def _reduction(name: str):
    catalog = default_catalog()
    red = catalog.reduction(name)
    return catalog.get(red.model), red


class TestReductionData:
    def test_gl6_theta1(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        data = reduction_data(model, red)
        assert len(data.theta1) == 4
        assert data.outer is None

    def test_orbit_sizes(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        assert len(coset_orbit(model, reduction_data(model, red))) == 15
        model, red = _reduction("GL4xGL2-over-trilinear")
        assert len(coset_orbit(model, reduction_data(model, red))) == 6

    @pytest.mark.parametrize("name,size", [("E7-over-D6", 126), ("E7-D6-over-A5", 32)])
    def test_exceptional_orbit_sizes(self, name: str, size: int) -> None:
        model, red = _reduction(name)
        assert len(coset_orbit(model, reduction_data(model, red))) == size

    def test_golden_mismatch(self) -> None:
        model = default_catalog().get("GL6")
        red = Reduction("bad", "GL6", ("a1", "a2", "a3", "a5"), golden_theta1=("e1+e2+e3",))
        with pytest.raises(ModelDataError, match="differs from the recorded set"):
            reduction_data(model, red)

    def test_inner_outside_outer(self) -> None:
        model = default_catalog().get("GL6")
        red = Reduction("bad", "GL6", ("a1", "a4"), outer=("a1", "a2"))
        with pytest.raises(ModelDataError, match="not among the outer roots"):
            reduction_data(model, red)


class TestCosetReduction:
    @pytest.mark.parametrize("name", [
        "GL6-over-GL4xGL2",
        "GL4xGL2-over-trilinear",
        "GSp6GL2-over-trilinear",
        "E7-over-D6",
        "E7-D6-over-A5",
        "E7-A3A1-over-A1A1A1",
    ])
    def test_coset_sum_is_one(self, name: str) -> None:
        model, red = _reduction(name)
        report = coset_reduction_check(model, red, sample_points(model, 2, SEED), with_outer=False)
        assert report.ok
        assert all(row.coset == 1 for row in report.rows)

    def test_chain_with_outer(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        report = coset_reduction_check(model, red, sample_points(model, 2, SEED))
        assert report.ok
        assert all(row.outer is not None for row in report.rows)

    def test_no_points(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        assert not coset_reduction_check(model, red, []).ok


class TestAntisymVanishing:
    @pytest.mark.parametrize("name", ["GL6-over-GL4xGL2", "GSO8-over-trilinear", "GSp10-over-GL4xGL2"])
    def test_coset_mode(self, name: str) -> None:
        model, red = _reduction(name)
        report = antisym_vanish_check(model, red, strict=True)
        assert report.ok
        assert report.rows[0].power == 0
        assert report.rows[0].coefficient == 1

    def test_subgroup_mode(self) -> None:
        model, red = _reduction("GL4xGL2-over-trilinear")
        report = antisym_vanish_check(model, red, AntisymMode.SUBGROUP)
        assert report.ok
        assert report.rows[0].expected == 8

    def test_subgroup_budget(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        with pytest.raises(WeylCapError, match="budget"):
            antisym_vanish_check(model, red, AntisymMode.SUBGROUP, budget=10)

    def test_full_mode_refused(self) -> None:
        model, red = _reduction("GL6-over-GL4xGL2")
        with pytest.raises(ValueError, match="full_antisym"):
            antisym_vanish_check(model, red, AntisymMode.FULL)


class TestFullAntisym:
    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GU4xGU2", "GSp6xGSp4", "GL6"])
    def test_constant_survives(self, name: str) -> None:
        report = full_antisym(default_catalog().get(name), strict=True)
        assert report.ok
        assert report.mode == AntisymMode.FULL

    def test_limit(self) -> None:
        with pytest.raises(ValueError, match="exceeds the full expansion limit"):
            full_antisym(default_catalog().get("E7"))


class TestDiscrepancy:
    def _report(self, row: PowerRow) -> AntisymReport:
        return AntisymReport("demo", AntisymMode.COSET, 3, rows=[row])

    def test_survivor_raises(self) -> None:
        report = self._report(PowerRow(2, 3, 1, ["e1-e2"], Fraction(0), Fraction(0)))
        assert not report.ok
        with pytest.raises(AntisymDiscrepancy, match=r"u\^2 keeps the monomial"):
            report.raise_for_discrepancy()

    def test_wrong_coefficient_raises(self) -> None:
        report = self._report(PowerRow(0, 1, 0, [], Fraction(2), Fraction(1)))
        with pytest.raises(AntisymDiscrepancy, match="expected 1"):
            report.raise_for_discrepancy()

    def test_clean_report(self) -> None:
        report = self._report(PowerRow(0, 1, 0, [], Fraction(1), Fraction(1)))
        report.raise_for_discrepancy()
        assert report.first_discrepancy() is None
