"""Unit tests for ratfun module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from relchar_check.ratfun import (
    LaurentMono,
    LaurentPoly,
    RatFun,
    SatakePoint,
    eval_coords,
    geometric_closed_form,
    geometric_partial_sum,
    l_eta_factor,
    torus_names,
    zeta_factor,
)
from relchar_check.validators import DimensionError, DivergentSeriesError, PoleError, RelcharError

NAMES = ("x", "u")


def _x(power: int = 1) -> LaurentPoly:
    return LaurentPoly.var(NAMES, "x", power)


def _u(power: int = 1) -> LaurentPoly:
    return LaurentPoly.var(NAMES, "u", power)


class TestLaurentPoly:
    def test_zero_coefficients_dropped(self) -> None:
        p = LaurentPoly(NAMES, {(1, 0): 0, (0, 1): 2})
        assert len(p) == 1

    def test_arithmetic(self) -> None:
        p = (1 - _x()) * (1 + _x())
        assert p == 1 - _x(2)

    def test_negative_powers(self) -> None:
        assert _x(-1) * _x() == 1

    def test_power(self) -> None:
        assert (1 + _x()) ** 3 == 1 + 3 * _x() + 3 * _x(2) + _x(3)

    def test_evaluate(self) -> None:
        p = 2 * _x(-1) + _u(2)
        assert p.evaluate((Fraction(1, 2), 3)) == 13

    def test_evaluate_pole(self) -> None:
        with pytest.raises(PoleError):
            _x(-1).evaluate((0, 1))

    def test_specialize_square(self) -> None:
        p = 1 + _u(4)
        assert p.specialize_square("u", Fraction(1, 3)) == Fraction(10, 9)

    def test_specialize_square_odd(self) -> None:
        with pytest.raises(RelcharError, match="odd power"):
            _u(3).specialize_square("u", 2)

    def test_exact_div(self) -> None:
        assert (1 - _x(3)).exact_div(1 - _x()) == 1 + _x() + _x(2)

    def test_inexact_div(self) -> None:
        with pytest.raises(RelcharError, match="not exact"):
            (1 + _x(2)).exact_div(1 - _x())

    def test_variable_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            _x() + LaurentPoly.var(("y", "u"), "y")

    def test_sympy_round_trip(self) -> None:
        p = 3 * _x(2) * _u() - Fraction(1, 2)
        assert LaurentPoly.from_sympy(p.to_sympy(), NAMES) == p


class TestRatFun:
    def test_normalized_equality(self) -> None:
        a = RatFun(1 - _x(2), 1 - _x())
        assert a == RatFun(1 + _x())

    def test_field_operations(self) -> None:
        f = RatFun(LaurentPoly.const(NAMES, 1), 1 - _x())
        g = f - 1
        assert g == RatFun(_x(), 1 - _x())
        assert f * (1 - _x()) == 1
        assert (f / f) == 1

    def test_zero_denominator(self) -> None:
        with pytest.raises(ZeroDivisionError):
            RatFun(_x(), LaurentPoly.zero(NAMES))

    def test_evaluate_pole(self) -> None:
        f = RatFun(LaurentPoly.const(NAMES, 1), 1 - _x())
        with pytest.raises(PoleError):
            f.evaluate((1, 1))

    def test_series(self) -> None:
        f = RatFun(LaurentPoly.const(NAMES, 1), 1 - _x())
        assert f.series([0], 3) == 1 + _x() + _x(2) + _x(3)

    def test_cancel(self) -> None:
        f = RatFun(1 - _x(2), (1 - _x()) * (1 + _u()))
        reduced = f.cancel()
        assert reduced == f
        assert len(reduced.den) <= 2


class TestFactors:
    def test_geometric(self) -> None:
        ratio = LaurentMono(Fraction(1), (1, 0))
        closed = geometric_closed_form(ratio, NAMES)
        partial = geometric_partial_sum(ratio, NAMES, 4)
        tail = RatFun(_x(4), 1 - _x())
        assert closed - partial == tail

    def test_divergent(self) -> None:
        with pytest.raises(DivergentSeriesError):
            geometric_closed_form(LaurentMono(Fraction(1), (0, 0)), NAMES)

    def test_zeta_and_l_eta(self) -> None:
        # zeta(1) L(1, eta) is the zeta of the quadratic extension at 1.
        names = torus_names(1)
        product = zeta_factor(names, 1) * l_eta_factor(names, 1)
        assert product == zeta_factor(names, 2)
        point = (Fraction(1), Fraction(1, 3))
        assert product.evaluate(point) == 1 / (1 - Fraction(1, 81))


class TestSatakePoint:
    def test_torus_names(self) -> None:
        assert torus_names(2) == ("tau1", "tau2", "u")

    def test_q(self) -> None:
        assert SatakePoint((Fraction(2),), Fraction(1, 3)).q == 9

    def test_nonzero(self) -> None:
        with pytest.raises(PoleError):
            SatakePoint((Fraction(0),), Fraction(1, 3))

    def test_eval_coords(self) -> None:
        point = SatakePoint((Fraction(2), Fraction(3)), Fraction(1, 2))
        assert eval_coords((2, -1), point) == Fraction(4, 3)

    def test_inverse(self) -> None:
        point = SatakePoint((Fraction(2), Fraction(3)), Fraction(1, 2))
        assert eval_coords((2, -1), point.inverse()) == Fraction(3, 4)

    def test_twisted_values_refused(self) -> None:
        point = SatakePoint((Fraction(2),), Fraction(1, 2)).inverse()
        with pytest.raises(RelcharError, match="no plain coordinate values"):
            point.values()

    def test_dimension(self) -> None:
        point = SatakePoint((Fraction(2),), Fraction(1, 2))
        with pytest.raises(DimensionError):
            eval_coords((1, 1), point)

    def test_to_dict(self) -> None:
        point = SatakePoint((Fraction(2), Fraction(-1, 3)), Fraction(1, 2))
        assert point.to_dict() == {"tau1": "2", "tau2": "-1/3", "u": "1/2"}
