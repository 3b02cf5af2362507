"""Unit tests for models module."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from relchar_check.catalog import default_catalog
from relchar_check.models import (
    IAlphaKind,
    MotiveFactor,
    brute_force_theta_plus,
    check_point,
    complete_point,
    delta_ratio,
    expected_constant,
    random_point,
    render_factors,
    theta_plus,
)
from relchar_check.ratfun import LaurentPoly, SatakePoint
from relchar_check.validators import ConstraintError

SPLIT_SIZES = {"trilinear": 4, "GL4xGL2": 10, "GL6": 10, "GSp6xGSp4": 16, "GSp10": 16, "GSO12": 16, "E7": 28}


def _model(name: str):
    return default_catalog().get(name)


class TestMotiveFactor:
    def test_parse_and_token(self) -> None:
        f = MotiveFactor.parse("L3")
        assert f.twisted and f.degree == 3
        assert f.token == "L3"
        assert f.render() == "L(3,η)"

    def test_render_factors(self) -> None:
        factors = [MotiveFactor(False, 1), MotiveFactor(True, 1), MotiveFactor(False, 1), MotiveFactor(False, 4)]
        assert render_factors(factors) == "ζ(1)²ζ(4)L(1,η)"


class TestThetaPlus:
    @pytest.mark.parametrize("name", sorted(default_catalog().names()))
    def test_matches_recorded_set(self, name: str) -> None:
        model = _model(name)
        computed = theta_plus(model).keys(model)
        golden = frozenset(model.key(w.coords) for w in model.golden_theta_plus)
        assert computed == golden

    @pytest.mark.parametrize("name,size", sorted(SPLIT_SIZES.items()))
    def test_sizes(self, name: str, size: int) -> None:
        assert len(theta_plus(_model(name))) == size

    def test_half_of_theta(self) -> None:
        model = _model("GSp6xGSp4")
        plus = theta_plus(model)
        assert 2 * sum(w.degree for w in plus.elements) == model.theta_dimension == 32

    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GU4xGU2"])
    def test_brute_force_agrees(self, name: str) -> None:
        model = _model(name)
        assert brute_force_theta_plus(model).keys(model) == theta_plus(model).keys(model)

    def test_levi_closure(self) -> None:
        model = _model("trilinear")
        sub = theta_plus(model, [0])
        assert 0 < len(sub) <= len(theta_plus(model))


class TestDelta:
    @pytest.mark.parametrize("name", sorted(default_catalog().names()))
    def test_table_or_erratum(self, name: str) -> None:
        model = _model(name)
        rendered = render_factors(delta_ratio(model))
        if model.delta_erratum:
            assert rendered in model.delta_erratum
        else:
            assert rendered == model.table_delta

    def test_gu6_twisted(self) -> None:
        assert "L(" in render_factors(delta_ratio(_model("GU6")))

    def test_trilinear_corrected(self) -> None:
        assert render_factors(delta_ratio(_model("trilinear"))) == "ζ(1)³ζ(2)²"


class TestExpectedConstant:
    def _u(self, names, power: int) -> LaurentPoly:
        return LaurentPoly.var(names, "u", power)

    def test_trilinear(self) -> None:
        model = _model("trilinear")
        assert expected_constant(model) == 1 - self._u(model.names, 4)

    def test_gsp6_gsp4(self) -> None:
        model = _model("GSp6xGSp4")
        u = lambda k: self._u(model.names, k)  # noqa: E731
        assert expected_constant(model) == (1 - u(4)) ** 2 * (1 - u(8))

    def test_gl4_gl2(self) -> None:
        model = _model("GL4xGL2")
        u = lambda k: self._u(model.names, k)  # noqa: E731
        assert expected_constant(model) == (1 - u(2)) * (1 - u(4)) ** 2

    def test_gu4_gu2(self) -> None:
        model = _model("GU4xGU2")
        u = lambda k: self._u(model.names, k)  # noqa: E731
        assert expected_constant(model) == (1 - u(4)) ** 2 * (1 + u(2))


class TestPoints:
    def test_key_modulo_constraint(self) -> None:
        model = _model("GL6")
        c = (2, 0, -2, 0, 0, 2)
        shifted = tuple(a + 2 * z for a, z in zip(c, model.constraint))
        assert model.key(c) == model.key(shifted)

    def test_complete_point_solves_pivot(self) -> None:
        model = _model("GL6")
        point = complete_point(model, {0: Fraction(2), 1: Fraction(3)}, Fraction(1, 3))
        assert point.tau[5] == Fraction(1, 6)
        check_point(model, point)

    def test_constraint_violation(self) -> None:
        model = _model("GL6")
        with pytest.raises(ConstraintError, match="torus constraint"):
            complete_point(model, {i: Fraction(2) for i in range(6)}, Fraction(1, 3))

    def test_wrong_dimension(self) -> None:
        with pytest.raises(ConstraintError, match="coordinates"):
            check_point(_model("GL6"), SatakePoint((Fraction(1),), Fraction(1, 3)))

    def test_random_point_respects_constraint(self) -> None:
        model = _model("E7")
        rng = np.random.default_rng(1)
        for _ in range(5):
            check_point(model, random_point(model, rng, 7))

    def test_unconstrained_model(self) -> None:
        model = _model("GSp6xGSp4")
        assert model.constraint is None
        assert model.key((1, 2, 3, 4, 5)) == (1, 2, 3, 4, 5)


class TestIAlphaKinds:
    def test_split_and_upsi(self) -> None:
        model = _model("GL6")
        assert model.ialpha_kind("a1") == IAlphaKind.SPLIT
        assert model.ialpha_kind("a2") == IAlphaKind.UPSI

    def test_unitary(self) -> None:
        model = _model("GU4xGU2")
        assert model.ialpha_kind("a1") == IAlphaKind.UNITARY_TWO
