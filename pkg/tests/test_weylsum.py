"""Unit tests for weylsum module."""

from __future__ import annotations

import os
from fractions import Fraction

import pytest

from relchar_check.catalog import default_catalog
from relchar_check.lattice import Weight, delta_half_exponent, enumerate_weyl
from relchar_check.models import complete_point, expected_constant
from relchar_check.ratfun import RatFun, SatakePoint
from relchar_check.validators import ConstraintError, PoleError, WeylCapError
from relchar_check.weylsum import (
    act,
    b_ratio_consistency,
    check_generic,
    delta_point,
    inverse_element,
    random_weyl_images,
    relchar,
    sample_points,
    weyl_sum_constant,
    weyl_sum_literal,
    weyl_sum_symbolic,
    weyl_sum_value,
    ws_value,
)

SEED = 7
SLOW = os.getenv("RELCHAR_SLOW", "").lower() in {"1", "true", "yes", "on"}


def _model(name: str):
    return default_catalog().get(name)


class TestPoints:
    def test_same_seed_same_points(self) -> None:
        model = _model("GL4xGL2")
        a = [p.to_dict() for p in sample_points(model, 3, SEED)]
        b = [p.to_dict() for p in sample_points(model, 3, SEED)]
        assert a == b

    def test_points_are_generic(self) -> None:
        model = _model("GSp6xGL2")
        for point in sample_points(model, 3, SEED):
            check_generic(model, point)

    def test_identity_point_rejected(self) -> None:
        model = _model("trilinear")
        point = complete_point(model, {}, Fraction(1, 3))
        with pytest.raises(PoleError):
            check_generic(model, point)


    @pytest.mark.parametrize("u", [Fraction(1), Fraction(-1)])
    def test_unit_u_rejected(self, u: Fraction) -> None:
        model = _model("trilinear")
        point = sample_points(model, 1, SEED)[0]
        with pytest.raises(PoleError, match="differ from 1"):
            check_generic(model, SatakePoint(point.tau, u))

    @pytest.mark.parametrize("name", default_catalog().names())
    def test_sampled_points_are_nondegenerate(self, name: str) -> None:
        model = _model(name)
        for point in sample_points(model, 3, SEED):
            assert point.u * point.u != 1
            assert expected_constant(model).evaluate(point.values()) != 0
    def test_delta_point(self) -> None:
        model = _model("GL6")
        point = delta_point(model)
        assert point.u == Fraction(1, 9)
        assert point.tau[0] == Fraction(3) ** 5


class TestWeylElements:
    def test_inverse_of_inverse(self) -> None:
        for w in enumerate_weyl(_model("trilinear").datum):
            assert inverse_element(inverse_element(w)).matrix == w.matrix

    def test_act_composes_with_inverse(self) -> None:
        model = _model("GL4xGL2")
        point = sample_points(model, 1, SEED)[0]
        for w in list(enumerate_weyl(model.datum))[:10]:
            back = act(inverse_element(w), act(w, point))
            assert back.to_dict() == point.to_dict()


class TestWeylSumConstant:
    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GU4xGU2", "GSp6xGSp4", "GL6", "GSp6xGL2"])
    def test_constant(self, name: str) -> None:
        model = _model(name)
        report = weyl_sum_constant(model, sample_points(model, 2, SEED))
        assert report.ok, report.first_mismatch()

    @pytest.mark.skipif(not SLOW, reason="set RELCHAR_SLOW=1 for the exceptional group")
    def test_constant_e7(self) -> None:
        model = _model("E7")
        report = weyl_sum_constant(model, sample_points(model, 1, SEED), jobs=2)
        assert report.ok

    def test_needs_points(self) -> None:
        with pytest.raises(ValueError, match="at least one point"):
            weyl_sum_constant(_model("trilinear"), [])

    def test_direct_matches_alternant(self) -> None:
        model = _model("GL4xGL2")
        for point in sample_points(model, 2, SEED):
            assert weyl_sum_value(model, point, mode="direct") == weyl_sum_value(model, point)

    def test_unknown_mode(self) -> None:
        model = _model("trilinear")
        with pytest.raises(ValueError, match="unknown summation mode"):
            weyl_sum_value(model, sample_points(model, 1, SEED)[0], mode="guess")

    def test_parallel_fold_agrees(self) -> None:
        model = _model("GSp6xGSp4")
        point = sample_points(model, 1, SEED)[0]
        assert weyl_sum_value(model, point, jobs=2) == weyl_sum_value(model, point, jobs=1)

    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GSp6xGSp4", "GU6"])
    def test_invariant_under_random_weyl_elements(self, name: str) -> None:
        model = _model(name)
        point = sample_points(model, 1, SEED)[0]
        base = weyl_sum_value(model, point)
        images = random_weyl_images(model, point, 20, SEED)
        assert len(images) == 20
        assert all(weyl_sum_value(model, image) == base for image in images)

    def test_random_images_repeat_with_seed(self) -> None:
        model = _model("GL4xGL2")
        point = sample_points(model, 1, SEED)[0]
        a = [image.twist for image in random_weyl_images(model, point, 5, 3)]
        b = [image.twist for image in random_weyl_images(model, point, 5, 3)]
        assert a == b


class TestSymbolicSums:
    def test_literal_trilinear(self) -> None:
        model = _model("trilinear")
        assert weyl_sum_literal(model) == expected_constant(model)

    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GU4xGU2"])
    def test_symbolic(self, name: str) -> None:
        model = _model(name)
        residual = weyl_sum_symbolic(model) - expected_constant(model)
        assert isinstance(residual, RatFun)
        assert residual.cancel().is_zero()

    def test_symbolic_cap(self) -> None:
        with pytest.raises(WeylCapError, match="symbolic Weyl sums"):
            weyl_sum_symbolic(_model("E7"))


class TestBRatios:
    def test_unit_u_is_undefined(self) -> None:
        model = _model("GL4xGL2")
        point = sample_points(model, 1, SEED)[0]
        with pytest.raises(PoleError):
            b_ratio_consistency(model, "a1", [SatakePoint(point.tau, Fraction(1))])

    @pytest.mark.parametrize("name,root", [
        ("GL4xGL2", "a1"),
        ("GL4xGL2", "a'"),
        ("GL6", "a2"),
        ("GU4xGU2", "a1"),
        ("GU4xGU2", "a2"),
        ("GSp6xGSp4", "a3"),
    ])
    def test_ratio_matches_beta(self, name: str, root: str) -> None:
        model = _model(name)
        rows = b_ratio_consistency(model, root, sample_points(model, 3, SEED))
        assert all(r.ok for r in rows)


class TestWsValue:
    def test_zero_coweight_is_constant(self) -> None:
        model = _model("GL4xGL2")
        point = sample_points(model, 1, SEED)[0]
        assert ws_value(model, (0,) * model.dim, point) == weyl_sum_value(model, point)

    def test_non_dominant_rejected(self) -> None:
        model = _model("trilinear")
        point = sample_points(model, 1, SEED)[0]
        with pytest.raises(ConstraintError, match="not dominant"):
            ws_value(model, (-2, 2, 0, 0, 0, 0), point)

    def test_unnormalized_scales(self) -> None:
        model = _model("trilinear")
        point = sample_points(model, 1, SEED)[0]
        t = tuple(4 * c for c in model.datum.rho_vee.coords)
        normalized = ws_value(model, t, point)
        raw = ws_value(model, t, point, normalized=False)
        assert normalized != 0
        assert raw != normalized

    def test_trilinear_first_basis_coweight(self) -> None:
        model = _model("trilinear")
        point = sample_points(model, 1, SEED)[0]
        t = (2, 0, 0, 0, 0, 0)
        exponent = 2 * delta_half_exponent(model.datum, Weight(t))
        assert exponent.denominator == 1
        literal = weyl_sum_literal(model, lam=t).evaluate(point.values())
        assert ws_value(model, t, point) == literal * point.u ** int(exponent)
        assert weyl_sum_value(model, point, lam=t, mode="direct") == literal


class TestRelchar:
    @pytest.mark.parametrize("name", ["trilinear", "GL4xGL2", "GSp6xGSp4", "GU6"])
    def test_assemblies_agree(self, name: str) -> None:
        model = _model(name)
        for point in sample_points(model, 2, SEED):
            value = relchar(model, point)
            assert value.value == value.via_beta
            assert value.l_adjoint != 0

    def test_to_dict(self) -> None:
        model = _model("trilinear")
        d = relchar(model, sample_points(model, 1, SEED)[0]).to_dict()
        assert set(d) == {"delta", "L(1/2,rho_X)", "L(1,Ad)", "via_beta", "value"}
