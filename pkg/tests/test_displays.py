"""Unit tests for displays module."""

from __future__ import annotations

import pytest

from relchar_check import displays
from relchar_check.catalog import default_catalog
from relchar_check.displays import (
    DISPLAYS,
    check_eta,
    displayed_models,
    displays_for,
    make_form,
    verify_color_identity,
    verify_model_identities,
)
from relchar_check.matverify import FnMatrix, FnScalar, FormKind, HPattern, unimodularity_check, verify_identity, verify_u_form
from relchar_check.validators import IdentityError, MembershipError, ModelDataError, UnknownModelError

IDENTITY_CASES = [(d.model, i.root) for d in DISPLAYS.values() for i in d.identities]


class TestMakeForm:
    @pytest.mark.parametrize("label,kind,size", [
        ("GSp6", FormKind.GSP, 6),
        ("GSp'10", FormKind.GSP, 10),
        ("GSO12", FormKind.GSO, 12),
        ("GU4", FormKind.GU, 4),
        ("GL6", FormKind.GL, 6),
    ])
    def test_labels(self, label: str, kind: FormKind, size: int) -> None:
        form = make_form(label)
        assert form.kind == kind
        assert form.size == size

    def test_gl_product(self) -> None:
        assert make_form("GL2^3").blocks == (2, 2, 2)

    def test_unknown(self) -> None:
        with pytest.raises(ModelDataError, match="unknown group label"):
            make_form("F4")


class TestRegistry:
    def test_displayed_models(self) -> None:
        names = displayed_models()
        assert "trilinear" in names
        assert "E7" not in names
        assert "GSp6xGL2" in names

    def test_displays_for_unknown(self) -> None:
        with pytest.raises(UnknownModelError):
            displays_for("E7")

    def test_unknown_root(self) -> None:
        with pytest.raises(UnknownModelError, match="trilinear:a1"):
            displays_for("trilinear").identity("a9")

    def test_display_models_in_catalog(self) -> None:
        catalog = default_catalog()
        for name in displayed_models():
            assert catalog.get(name).name == name


class TestEta:
    @pytest.mark.parametrize("name", sorted(DISPLAYS))
    def test_unimodular(self, name: str) -> None:
        report = check_eta(name)
        assert report.det in (1, -1)

    def test_orthogonal_similitude(self) -> None:
        assert check_eta("GSO8xGL2").similitude == "-1"

    def test_gsp6xgl2_under_j6(self) -> None:
        assert check_eta("GSp6xGL2").similitude == "-1"

    def test_gsp6xgl2_not_under_block_form(self) -> None:
        eta = FnMatrix.from_rows(displays_for("GSp6xGL2").eta)
        with pytest.raises(ModelDataError, match=r"form entry \(3,4\) is 1, expected -1"):
            unimodularity_check("GSp6xGL2", eta, None, make_form("GSp'6"))


class TestIdentities:
    @pytest.mark.parametrize("model,root", IDENTITY_CASES)
    def test_identity_holds(self, model: str, root: str) -> None:
        report = verify_color_identity(default_catalog().get(model), root)
        assert report.color_ok

    def test_trilinear_colours_read_off(self) -> None:
        reports = verify_model_identities(default_catalog().get("trilinear"))
        assert [r.root for r in reports] == ["a1", "a2", "a3"]
        assert all(r.beta is not None and r.beta == r.expected for r in reports)

    def test_upsi_identity(self) -> None:
        report = verify_color_identity(default_catalog().get("GL6"), "a2")
        assert report.kind == "u-form"
        assert report.character
        assert report.to_dict()["beta"] is None

class TestUnitaryIdentities:
    def test_gu6_trace_character(self) -> None:
        report = verify_color_identity(default_catalog().get("GU6"), "a2")
        assert report.kind == "u-form"
        assert FnScalar.parse(report.character) == FnScalar.parse("-2*x")

    def test_gu6_unconjugated_x_prime(self) -> None:
        disp = displays_for("GU6")
        ident = disp.identity("a2")
        eta = FnMatrix.from_rows(disp.eta)
        lhs = FnMatrix.from_rows(ident.unipotent) @ eta
        plain = FnMatrix.from_rows(
            displays._unipotent(6, e14="-x+y*r", e24="-x+y*r", e35="x-y*r", e36="x-y*r")
        )
        with pytest.raises(IdentityError, match=r"entry \(3,5\)"):
            verify_u_form(default_catalog().get("GU6"), "a2", lhs, eta, plain, FnScalar.parse("-2*x"), form=make_form("GU6"))

    @pytest.mark.parametrize("model,root", [("GU6", "a1"), ("GU4xGU2", "a2"), ("GU4xGU2", "a'")])
    def test_similitudes_real(self, model: str, root: str) -> None:
        report = verify_color_identity(default_catalog().get(model), root)
        assert report.similitudes
        assert all("sqrt" not in v for v in report.similitudes.values())

    def test_gu4_printed_h_is_conjugate(self) -> None:
        model = default_catalog().get("GU4xGU2")
        disp = displays_for("GU4xGU2")
        ident = disp.identity("a'")
        eta = FnMatrix.from_rows(disp.eta)
        lhs = eta @ FnMatrix.from_rows(ident.unipotent)
        printed = FnMatrix.from_rows((("1-x*r", "-x*r/(1+x*r)"), ("0", "1/(1+x*r)")))
        with pytest.raises(MembershipError, match="middle block of g differs from h"):
            verify_identity(
                model,
                "a'",
                lhs,
                eta,
                FnMatrix.from_rows(ident.b),
                FnMatrix.from_rows(ident.g),
                printed,
                HPattern.CORNER,
                make_form("GU4"),
                make_form("GU2"),
            )
