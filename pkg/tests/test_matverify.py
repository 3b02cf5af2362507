"""Unit tests for matverify module."""

from __future__ import annotations

import pytest

from relchar_check.matverify import (
    EPS,
    FIELD,
    X,
    FnMatrix,
    FnScalar,
    FormKind,
    check_borel,
    check_membership,
    gl_form,
    gso_form,
    gsp_form,
    gu_form,
    torus_coweight,
    unimodularity_check,
)
from relchar_check.validators import DimensionError, IdentityError, MembershipError, ModelDataError


def _s(text: str) -> FnScalar:
    return FnScalar.parse(text)


class TestFnScalar:
    def test_root_squares_to_eps(self) -> None:
        assert _s("x*r") * _s("r") == _s("eps*x")

    def test_rationalized_denominator(self) -> None:
        assert _s("1/(1-r)") == _s("(1+r)/(1-eps)")

    def test_division(self) -> None:
        a = _s("x+r")
        assert a / a == 1

    def test_conjugate_and_norm(self) -> None:
        a = _s("x+r")
        assert a.conjugate() == _s("x-r")
        assert a.norm() == FIELD.from_sympy(X**2 - EPS)

    def test_real(self) -> None:
        assert _s("x/(1-y)").is_real
        assert not _s("r").is_real

    def test_powers(self) -> None:
        assert _s("x") ** -2 == _s("1/x**2")
        assert _s("x") ** 0 == 1

    def test_zero_denominator(self) -> None:
        with pytest.raises(ModelDataError, match="zero denominator"):
            _s("1/(r*r-eps)")

    def test_unparseable(self) -> None:
        with pytest.raises(ModelDataError, match="cannot parse"):
            _s("x**")

    def test_division_by_zero(self) -> None:
        with pytest.raises(ZeroDivisionError):
            _s("x") / 0


class TestFnMatrix:
    def test_inverse(self) -> None:
        m = FnMatrix.from_rows([[1, "x"], [0, 1]])
        assert m.inverse() == FnMatrix.from_rows([[1, "-x"], [0, 1]])
        assert m @ m.inverse() == FnMatrix.identity(2)

    def test_inverse_with_root(self) -> None:
        m = FnMatrix.from_rows([["r", 0], [0, "1+r"]])
        assert m @ m.inverse() == FnMatrix.identity(2)

    def test_det(self) -> None:
        m = FnMatrix.from_rows([["x", 1], ["y", 1]])
        assert m.det() == _s("x-y")

    def test_block_diag(self) -> None:
        a = FnMatrix.from_rows([[1, 2], [3, 4]])
        m = FnMatrix.block_diag(a, FnMatrix.identity(1))
        assert m.shape == (3, 3)
        assert m[2, 2] == 1
        assert m[0, 2] == 0

    def test_upper(self) -> None:
        assert FnMatrix.from_rows([[1, "x"], [0, 1]]).is_upper()
        assert not FnMatrix.from_rows([[1, 0], ["x", 1]]).is_upper()

    def test_first_difference(self) -> None:
        a = FnMatrix.from_rows([[1, 0], [0, 1]])
        b = FnMatrix.from_rows([[1, 0], ["x", 1]])
        assert a.first_difference(b) == (1, 0)
        assert a.first_difference(a) is None


class TestForms:
    def test_labels(self) -> None:
        assert gsp_form(2).label == "GSp4"
        assert gso_form(1).kind == FormKind.GSO
        assert gu_form(2).size == 4

    def test_scalar_similitude(self) -> None:
        assert check_membership(FnMatrix.scalar(4, 2), gsp_form(2)) == 4

    def test_not_symplectic(self) -> None:
        g = FnMatrix.from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        with pytest.raises(MembershipError, match="not in GSp4"):
            check_membership(g, gsp_form(2))

    def test_singular(self) -> None:
        with pytest.raises(MembershipError, match="singular"):
            check_membership(FnMatrix.scalar(2, 0), gl_form(2))

    def test_wrong_size(self) -> None:
        with pytest.raises(DimensionError):
            check_membership(FnMatrix.identity(2), gsp_form(2))

    def test_gl_blocks(self) -> None:
        g = FnMatrix.from_rows([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        with pytest.raises(MembershipError, match="not block diagonal"):
            check_membership(g, gl_form(4, [2, 2]))

    def test_unitary_similitude(self) -> None:
        g = FnMatrix.from_rows([["r", 0], [0, "-r"]])
        assert check_membership(g, gu_form(1)) == _s("eps")

    def test_borel(self) -> None:
        b = FnMatrix.from_rows([["x", 1], [0, "1/x"]])
        assert check_borel(b, gl_form(2)) == 1
        with pytest.raises(MembershipError, match="not upper triangular"):
            check_borel(b.transpose(), gl_form(2))


class TestTorusCoweight:
    def test_gl(self) -> None:
        diag = [_s("x"), _s("1"), _s("1/x")]
        assert torus_coweight(diag, _s("x"), [("GL", 3)]) == (2, 0, -2)

    def test_gsp(self) -> None:
        diag = [_s("x**2"), _s("x"), _s("1"), _s("1/x")]
        assert torus_coweight(diag, _s("x"), [("GSp", 2)]) == (3, 1)

    def test_not_a_power(self) -> None:
        with pytest.raises(IdentityError, match="not a power"):
            torus_coweight([_s("y")], _s("x"), [("GL", 1)])

    def test_coverage(self) -> None:
        with pytest.raises(DimensionError):
            torus_coweight([_s("x"), _s("x")], _s("x"), [("GL", 1)])


class TestUnimodularity:
    def test_unipotent(self) -> None:
        eta = FnMatrix.from_rows([[1, 1], [0, 1]])
        report = unimodularity_check("demo", eta, FnMatrix.from_rows([[1, -1], [0, 1]]), gl_form(2))
        assert report.det == 1
        assert report.similitude == "1"

    def test_determinant(self) -> None:
        with pytest.raises(ModelDataError, match="expected"):
            unimodularity_check("demo", FnMatrix.from_rows([[2, 0], [0, 1]]))

    def test_non_integer_entry(self) -> None:
        with pytest.raises(ModelDataError, match="not an integer"):
            unimodularity_check("demo", FnMatrix.from_rows([[1, "x"], [0, 1]]))

    def test_displayed_inverse_mismatch(self) -> None:
        eta = FnMatrix.from_rows([[1, 1], [0, 1]])
        with pytest.raises(ModelDataError, match="displayed eta"):
            unimodularity_check("demo", eta, FnMatrix.identity(2))
