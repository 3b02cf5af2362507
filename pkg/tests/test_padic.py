"""Unit tests for padic module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from relchar_check.padic import (
    QUAD_NAMES,
    RANK_ONE_NAMES,
    check_nonresidue,
    count_residues,
    i_alpha_type_t,
    i_alpha_type_t_closed_form,
    i_alpha_upsi_check,
    phi0_weight,
    phi_fourier_check,
    quad_ext_61_closed_form,
    quad_ext_61_symbolic,
    quad_ext_62_cell_counts,
    quad_ext_62_cells,
    quad_ext_62_closed_form,
    quad_ext_integral_61,
    quad_ext_integral_62,
    rank_one_closed_form,
    rank_one_integral,
    rank_one_shells,
    rank_one_truncation,
    residue_stabilization,
    shell_total,
    unit_volume,
)
from relchar_check.validators import RelcharError

FIELDS = [(3, 2), (5, 2)]


class TestShells:
    def test_unit_volume(self) -> None:
        assert unit_volume(RANK_ONE_NAMES).evaluate((1, 1, Fraction(1, 3))) == Fraction(8, 9)

    def test_rank_one_shells_partition(self) -> None:
        measure, _ = shell_total(rank_one_shells())
        assert measure == 1

    def test_rank_one_closed_form(self) -> None:
        assert rank_one_integral() == rank_one_closed_form()

    def test_type_t(self) -> None:
        assert i_alpha_type_t() == i_alpha_type_t_closed_form()

    def test_upsi(self) -> None:
        shells, closed = i_alpha_upsi_check()
        assert shells == closed

    def test_phi0_weight(self) -> None:
        names = ("t", "u")
        third = (1, Fraction(1, 3))
        assert phi0_weight(names, 2).evaluate(third) == 1
        assert phi0_weight(names, -1).evaluate(third) == Fraction(-1, 8)
        assert phi0_weight(names, -2).is_zero()


class TestTruncation:
    def test_within_bound(self) -> None:
        check = rank_one_truncation(9, Fraction(1, 2), Fraction(-1, 3), depth=12)
        assert check.tail_identity
        assert check.ok

    def test_shallow_depth_still_bounded(self) -> None:
        assert rank_one_truncation(25, Fraction(2), Fraction(1, 5), depth=2).ok

    def test_divergent_parameters(self) -> None:
        with pytest.raises(RelcharError, match="needs"):
            rank_one_truncation(9, Fraction(3), Fraction(1, 2))


class TestResidues:
    def test_nonresidue(self) -> None:
        check_nonresidue(3, 2)
        check_nonresidue(5, 2)

    @pytest.mark.parametrize("p,eps", [(3, 1), (5, 4), (4, 3), (3, 3)])
    def test_bad_field(self, p: int, eps: int) -> None:
        with pytest.raises(ValueError):
            check_nonresidue(p, eps)

    @pytest.mark.parametrize("p,eps", FIELDS)
    def test_conic_zeros(self, p: int, eps: int) -> None:
        counts = count_residues(p, eps, 2, cells=(0,))
        assert counts.zeros(0) == p
        assert counts.singular[0] == 0

    def test_deep_cells(self) -> None:
        counts = count_residues(3, 2, 2)
        assert counts.zeros(1) == counts.zeros(2) == 2

    def test_stabilization(self) -> None:
        measures = residue_stabilization(3, 2)
        assert set(measures) == {0, 1, 2}

    def test_stabilization_bound(self) -> None:
        with pytest.raises(ValueError, match="below the lower level"):
            residue_stabilization(3, 2, levels=(2, 3), bound=2)


class TestQuadraticExtension:
    def test_first_integral_generic(self) -> None:
        assert quad_ext_61_symbolic() == quad_ext_61_closed_form()

    @pytest.mark.parametrize("s_sigma,expected", [(1, 81), (3, 108)])
    def test_first_integral_without_eta(self, s_sigma: int, expected: int) -> None:
        # At s_eta = 0 both sides are q(q - 1)/(1 - s_sigma/q); here q = 9.
        values = (Fraction(s_sigma), Fraction(0), Fraction(1, 3))
        assert quad_ext_61_symbolic().evaluate(values) == expected
        assert quad_ext_61_closed_form().evaluate(values) == expected

    @pytest.mark.parametrize("p,eps", FIELDS)
    def test_first_integral_counted(self, p: int, eps: int) -> None:
        counted = quad_ext_integral_61(p, eps)
        closed = quad_ext_61_closed_form().specialize_square("u", Fraction(1, p))
        assert counted.series([0, 1], 6) == closed.series([0, 1], 6)

    def test_first_integral_names(self) -> None:
        assert quad_ext_61_closed_form().names == QUAD_NAMES

    def test_second_integral(self) -> None:
        assert quad_ext_integral_62() == quad_ext_62_closed_form()

    @pytest.mark.parametrize("p,eps", FIELDS)
    def test_second_integral_cells(self, p: int, eps: int) -> None:
        for k, cell in enumerate(quad_ext_62_cells(depth=2)):
            symbolic = cell.contribution.specialize("s_eta", 1).specialize_square("u", Fraction(1, p))
            assert symbolic == quad_ext_62_cell_counts(p, eps, k)

    def test_cell_zero_is_volume_of_x(self) -> None:
        assert quad_ext_62_cell_counts(3, 2, 0) == Fraction(8, 9)


class TestFourier:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_phi0_recovered(self, p: int) -> None:
        rows = phi_fourier_check(p)
        assert [r.valuation for r in rows] == [1, 0, -1, -2, -3]
        assert all(r.ok for r in rows)

    def test_other_unit(self) -> None:
        assert all(r.ok for r in phi_fourier_check(5, unit=2))

    def test_row_dict(self) -> None:
        row = phi_fourier_check(3, m_max=1)[-1]
        d = row.to_dict()
        assert d["valuation"] == -1
        assert d["expected"] == "-1/2"
