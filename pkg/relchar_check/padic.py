from __future__ import annotations

"""Unramified p-adic integrals behind the rank-one computations.

Design:
- Unramified characters are formal: chi(x) = s^{v(x)}. Integrals are split
  into valuation shells whose measures are exact in u = q^{-1/2}, and every
  family of shells is summed as a geometric series.
- Shell measures come with a completeness check (they add up to the volume
  of the region they partition).
- The two quadratic-extension integrals are cross-checked by counting
  residues mod p^m with numpy, including a stabilization test between
  consecutive levels.
- The one concrete additive character lives in phi_fourier_check; its
  sums are complex floats compared within a tolerance.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_SHELL_DEPTH, FLOAT_TOLERANCE
from .ratfun import LaurentMono, LaurentPoly, RatFun, geometric_closed_form
from .validators import RelcharError, StabilizationError, format_rational

__all__ = [
    "RANK_ONE_NAMES",
    "QUAD_NAMES",
    "UPSI_NAMES",
    "ShellMeasure",
    "shell_total",
    "unit_volume",
    "valuation_shells",
    "rank_one_shells",
    "rank_one_integral",
    "rank_one_closed_form",
    "TruncationCheck",
    "rank_one_truncation",
    "i_alpha_type_t",
    "i_alpha_type_t_closed_form",
    "check_nonresidue",
    "ResidueCount",
    "count_residues",
    "residue_stabilization",
    "quad_ext_61_symbolic",
    "quad_ext_61_closed_form",
    "quad_ext_integral_61",
    "quad_ext_62_cells",
    "quad_ext_62_cell_counts",
    "quad_ext_integral_62",
    "quad_ext_62_closed_form",
    "FourierRow",
    "phi_fourier_check",
    "phi0_weight",
    "i_alpha_upsi_shells",
    "i_alpha_upsi_check",
]

RANK_ONE_NAMES: Tuple[str, ...] = ("s1", "s2", "u")
QUAD_NAMES: Tuple[str, ...] = ("s_sigma", "s_eta", "u")
UPSI_NAMES: Tuple[str, ...] = ("t", "u")


def _mono(names: Sequence[str], coeff: Fraction = Fraction(1), **exps: int) -> LaurentPoly:
    return LaurentPoly.monomial(names, tuple(exps.get(n, 0) for n in names), coeff)


def _rf(names: Sequence[str], value: object) -> RatFun:
    return RatFun.of(value, names)  # type: ignore[arg-type]


def _q(names: Sequence[str]) -> RatFun:
    """q = u^{-2}."""
    return RatFun(LaurentPoly.var(names, "u", -2))


def _tail(names: Sequence[str], **exps: int) -> RatFun:
    """sum_{k>=1} x^k = x/(1 - x) for the monomial x."""
    x = LaurentMono(Fraction(1), tuple(exps.get(n, 0) for n in names))
    return geometric_closed_form(x, names) - 1


@dataclass(frozen=True)
class ShellMeasure:
    """A family of valuation shells: its total measure and its contribution to an integral."""

    pattern: str
    measure: RatFun
    contribution: RatFun


def shell_total(shells: Sequence[ShellMeasure]) -> Tuple[RatFun, RatFun]:
    """(sum of measures, sum of contributions)."""
    names = shells[0].measure.names
    measure = RatFun.const(names, 0)
    value = RatFun.const(names, 0)
    for s in shells:
        measure = measure + s.measure
        value = value + s.contribution
    return measure, value


def unit_volume(names: Sequence[str]) -> RatFun:
    """vol(O^x) = 1 - q^{-1}."""
    return _rf(names, 1 - _mono(names, u=2))


def valuation_shells(names: Sequence[str]) -> List[ShellMeasure]:
    """O split as {v = 0} and {v >= 1}; vol(O) = 1."""
    return [
        ShellMeasure("v(a)=0", unit_volume(names), unit_volume(names)),
        ShellMeasure("v(a)>=1", RatFun(_mono(names, u=2)), RatFun(_mono(names, u=2))),
    ]


# -- rank one -------------------------------------------------------------------


def rank_one_shells(names: Sequence[str] = RANK_ONE_NAMES) -> List[ShellMeasure]:
    """Cells of int_O (chi1 |.|^{-1/2})(1 + a) (chi2 |.|^{-1/2})(a) da.

    On v(a) = k >= 1 the integrand is (s2 u^{-1})^k with measure
    u^{2k}(1 - u^2), symmetrically for v(1 + a) = k, and it is 1 on the
    remaining units.
    """
    one_minus = unit_volume(names)
    return [
        ShellMeasure("v(a)>=1", RatFun(_mono(names, u=2)), one_minus * _tail(names, s2=1, u=1)),
        ShellMeasure("v(1+a)>=1", RatFun(_mono(names, u=2)), one_minus * _tail(names, s1=1, u=1)),
        ShellMeasure("v(a)=v(1+a)=0", _rf(names, 1 - _mono(names, Fraction(2), u=2)),
                     _rf(names, 1 - _mono(names, Fraction(2), u=2))),
    ]


def rank_one_integral(names: Sequence[str] = RANK_ONE_NAMES) -> RatFun:
    """q times the rank-one integral, assembled from its shells."""
    measure, value = shell_total(rank_one_shells(names))
    if measure != 1:
        raise RelcharError("rank-one shells do not partition O")
    return _q(names) * value


def rank_one_closed_form(names: Sequence[str] = RANK_ONE_NAMES) -> RatFun:
    """q - 2 + (q - 1)(u s1 + u s2 - 2 u^2 s1 s2) / ((1 - u s1)(1 - u s2))."""
    q = _q(names)
    s1 = _mono(names, s1=1, u=1)
    s2 = _mono(names, s2=1, u=1)
    frac = RatFun(s1 + s2 - _mono(names, Fraction(2), s1=1, s2=1, u=2), (1 - s1) * (1 - s2))
    return q - 2 + (q - 1) * frac


@dataclass
class TruncationCheck:
    depth: int
    partial: float
    closed: float
    bound: float
    tail_identity: bool

    @property
    def ok(self) -> bool:
        return self.tail_identity and abs(self.closed - self.partial) <= self.bound + FLOAT_TOLERANCE


def rank_one_truncation(
    q: int,
    s1: Fraction,
    s2: Fraction,
    depth: int = DEFAULT_SHELL_DEPTH,
) -> TruncationCheck:
    """Sum the first `depth` shells at a concrete q and bound what is left.

    The exact tail q(1 - u^2) sum_i (s_i u)^{n+1}/(1 - s_i u) is checked as a
    rational-function identity; the numeric comparison needs |s_i| u < 1.
    """
    names = RANK_ONE_NAMES
    partial = _rf(names, 1 - _mono(names, Fraction(2), u=2))
    for k in range(1, depth + 1):
        partial = partial + unit_volume(names) * RatFun(_mono(names, s1=k, u=k) + _mono(names, s2=k, u=k))
    partial = _q(names) * partial
    tail = RatFun.const(names, 0)
    for var in ("s1", "s2"):
        x = _mono(names, u=1, **{var: 1})
        tail = tail + RatFun(x ** (depth + 1), 1 - x)
    tail = _q(names) * unit_volume(names) * tail
    identity = rank_one_closed_form(names) - partial == tail

    u = float(q) ** -0.5
    r = np.array([float(s1) * u, float(s2) * u])
    if np.any(np.abs(r) >= 1):
        raise RelcharError(f"truncation check needs |s| q^(-1/2) < 1, got s1={s1}, s2={s2}")
    powers = r[:, None] ** np.arange(1, depth + 1)[None, :]
    partial_f = q * ((1 - 2 / q) + (1 - 1 / q) * powers.sum())
    closed_f = q - 2 + (q - 1) * (r.sum() - 2 * r.prod()) / np.prod(1 - r)
    bound = q * (1 - 1 / q) * float(np.sum(np.abs(r) ** (depth + 1) / (1 - np.abs(r))))
    return TruncationCheck(depth, float(partial_f), float(closed_f), bound, identity)


def i_alpha_type_t(names: Sequence[str] = RANK_ONE_NAMES) -> RatFun:
    """I_alpha for a Type-T root: 1 + the rank-one integral at s1 = e^beta, s2 = e^{alpha^vee - beta}."""
    return 1 + rank_one_integral(names)


def i_alpha_type_t_closed_form(names: Sequence[str] = RANK_ONE_NAMES) -> RatFun:
    """(q - 1)(1 - u^2 s1 s2) / ((1 - u s1)(1 - u s2))."""
    s1 = _mono(names, s1=1, u=1)
    s2 = _mono(names, s2=1, u=1)
    return (_q(names) - 1) * RatFun(1 - s1 * s2, (1 - s1) * (1 - s2))


# -- residue counting --------------------------------------------------------------


def check_nonresidue(p: int, eps: int) -> None:
    if p % 2 == 0 or p < 3:
        raise ValueError(f"q must be an odd prime, got {p}")
    if eps % p == 0 or pow(eps, (p - 1) // 2, p) != p - 1:
        raise ValueError(f"eps={eps} is not a unit quadratic non-residue mod {p}")


def _valuations(values: np.ndarray, p: int, level: int) -> np.ndarray:
    """v_p of residues mod p^level, with 0 mapped to `level`."""
    v = np.zeros(values.shape, dtype=np.int64)
    for j in range(1, level + 1):
        v += (values % p**j == 0)
    return v


def _grid(p: int, level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    mod = p**level
    r = np.arange(mod, dtype=np.int64)
    x, y = np.meshgrid(r, r, indexing="ij")
    in_x = (x % p != 0) | (y % p != 0)
    return x, y, in_x


@dataclass
class ResidueCount:
    """Counts of (x, y) in X mod p^m by the valuation of x^2 - eps y^2 - x after scaling by p^k.

    `counts[k][j]` is the number of residues in cell k with v(f_k) = j; the
    last bucket j = m collects v(f_k) >= m.
    """

    p: int
    eps: int
    level: int
    counts: Dict[int, List[int]] = field(default_factory=dict)
    singular: Dict[int, int] = field(default_factory=dict)

    def measure(self, k: int, j: int) -> Fraction:
        return Fraction(self.counts[k][j], self.p ** (2 * self.level))

    def zeros(self, k: int) -> int:
        """Residue points of X mod p with f_k = 0, read off the level-m counts."""
        z = sum(self.measure(k, j) for j in range(1, self.level + 1)) * self.p**2
        if z.denominator != 1:
            raise StabilizationError(f"cell {k}: zero count {z} is not an integer")
        return int(z)


def count_residues(p: int, eps: int, level: int, cells: Sequence[int] = (0, 1, 2)) -> ResidueCount:
    """Count f_k = p^k (x^2 - eps y^2) - x over X mod p^level."""
    check_nonresidue(p, eps)
    mod = p**level
    x, y, in_x = _grid(p, level)
    norm = (x * x - eps * y * y) % mod
    out = ResidueCount(p, eps, level)
    for k in cells:
        f = (p**k * norm - x) % mod
        v = _valuations(f, p, level)
        out.counts[k] = np.bincount(v[in_x], minlength=level + 1).tolist()
        # Zeros mod p where both partials vanish too; Hensel lifting needs none.
        dx = (2 * p**k * x - 1) % p
        dy = (2 * p**k * eps * y) % p
        out.singular[k] = int(np.count_nonzero(in_x & (f % p == 0) & (dx == 0) & (dy == 0)))
    return out


def residue_stabilization(p: int, eps: int, levels: Tuple[int, int] = (3, 4), bound: int = 2) -> Dict[int, List[Fraction]]:
    """Rescaled counts for v(f_k) = j, j <= bound, must agree between the two levels."""
    lo, hi = levels
    if bound >= lo:
        raise ValueError(f"bound {bound} must be below the lower level {lo}")
    a = count_residues(p, eps, lo)
    b = count_residues(p, eps, hi)
    out: Dict[int, List[Fraction]] = {}
    for k in a.counts:
        ma = [a.measure(k, j) for j in range(bound + 1)]
        mb = [b.measure(k, j) for j in range(bound + 1)]
        if ma != mb:
            raise StabilizationError(f"cell {k}: measures {ma} at level {lo} but {mb} at level {hi}")
        if a.singular[k] or b.singular[k]:
            raise StabilizationError(f"cell {k}: {a.singular[k]} singular zeros mod {p}")
        out[k] = ma
    return out


# -- the first quadratic-extension integral --------------------------------------


def _cell_61(names: Sequence[str], zeros: RatFun) -> RatFun:
    """int_X sigma(f_k) = q^{-2}[(q^2 - 1 - Z) + Z (1 - q^{-1}) s/(1 - q^{-1} s)] for Z smooth zeros.

    A smooth zero class has volume q^{-2}; its part with v(f) = j has volume
    (1 - q^{-1}) q^{-1-j}.
    """
    q = _q(names)
    smooth = unit_volume(names) * q * _tail(names, s_sigma=1, u=2)
    return RatFun(_mono(names, u=4)) * ((q * q - 1 - zeros) + zeros * smooth)


def _assemble_61(names: Sequence[str], zero_cell: RatFun, deep_cell: RatFun) -> RatFun:
    """1 + q^2 sum_k q^{-2k} (s_eta s_sigma)^k J_k, with J_k = J_1 for k >= 1."""
    q = _q(names)
    return 1 + q * q * (zero_cell + deep_cell * _tail(names, s_sigma=1, s_eta=1, u=4))


def quad_ext_61_symbolic(names: Sequence[str] = QUAD_NAMES) -> RatFun:
    """The first integral for generic q: q smooth zeros in cell 0 (a conic), q - 1 deeper."""
    q = _q(names)
    return _assemble_61(names, _cell_61(names, q), _cell_61(names, q - 1))


def quad_ext_61_closed_form(names: Sequence[str] = QUAD_NAMES) -> RatFun:
    """q^2(1 - q^{-1})(1 - q^{-4} s_sigma^2 s_eta) / ((1 - q^{-1} s_sigma)(1 - q^{-2} s_sigma s_eta))."""
    q = _q(names)
    num = 1 - _mono(names, s_sigma=2, s_eta=1, u=8)
    den = (1 - _mono(names, s_sigma=1, u=2)) * (1 - _mono(names, s_sigma=1, s_eta=1, u=4))
    return q * q * unit_volume(names) * RatFun(num, den)


def quad_ext_integral_61(p: int, eps: int, level: int = 4, names: Sequence[str] = QUAD_NAMES) -> RatFun:
    """The first integral at q = p, with zero counts read off residues mod p^level.

    Besides the zero counts, every measured shell 1 <= j < level is compared
    with its Hensel-lifted value Z (1 - q^{-1}) q^{-1-j}.
    """
    counts = count_residues(p, eps, level, cells=(0, 1, 2))
    zeros = {}
    for k in (0, 1, 2):
        if counts.singular[k]:
            raise StabilizationError(f"cell {k}: {counts.singular[k]} singular zeros mod {p}")
        z = counts.zeros(k)
        for j in range(1, level):
            lifted = Fraction(z * (p - 1), p ** (j + 2))
            if counts.measure(k, j) != lifted:
                raise StabilizationError(
                    f"cell {k}: measure {counts.measure(k, j)} of v(f)={j} differs from the lifted {lifted}"
                )
        zeros[k] = z
    if zeros[1] != zeros[2]:
        raise StabilizationError(f"deep cells disagree: {zeros[1]} and {zeros[2]} zeros")
    value = _assemble_61(names, _cell_61(names, _rf(names, zeros[0])), _cell_61(names, _rf(names, zeros[1])))
    return value.specialize_square("u", Fraction(1, p))


# -- the second quadratic-extension integral --------------------------------------


def phi0_weight(names: Sequence[str], v: int) -> RatFun:
    """phi_0 on a shell of valuation v: 1, -1/(q - 1) or 0."""
    if v >= 0:
        return RatFun.const(names, 1)
    if v == -1:
        return -RatFun(_mono(names, u=2), 1 - _mono(names, u=2))
    return RatFun.const(names, 0)


def _x_shells(names: Sequence[str], k: int) -> List[Tuple[int, RatFun, bool]]:
    """Shells of X by v(x): (j, measure, open-ended), the last one being v(x) >= max(k, 1).

    Points of X with v(x) >= 1 have a unit y.
    """
    vol = unit_volume(names)
    last = max(k, 1)
    shells = [(0, vol, False)]
    for j in range(1, last):
        shells.append((j, RatFun(_mono(names, u=2 * j)) * vol * vol, False))
    shells.append((last, RatFun(_mono(names, u=2 * last)) * vol, True))
    return shells


def quad_ext_62_cells(depth: int = 4, names: Sequence[str] = ("s_eta", "u")) -> List[ShellMeasure]:
    """Cell k: s_eta^k int_X phi_0(2 p^{-k} x/(x^2 - eps y^2)) for k = 0..depth.

    On X the norm is a unit, so the argument has valuation v(x) - k. The
    factor |x^2 - eps y^2|^{-1} cancels the measure of the scaling.
    """
    cells = []
    for k in range(depth + 1):
        shells = _x_shells(names, k)
        measure = RatFun.const(names, 0)
        value = RatFun.const(names, 0)
        for j, m, _ in shells:
            measure = measure + m
            value = value + m * phi0_weight(names, j - k)
        if measure != 1 - _mono(names, u=4):
            raise RelcharError(f"cell {k}: shells of X do not add up to 1 - q^-2")
        cells.append(ShellMeasure(f"p^{k}X", measure, RatFun(_mono(names, s_eta=k)) * value))
    return cells


def quad_ext_62_cell_counts(p: int, eps: int, k: int) -> Fraction:
    """int_X phi_0(2 p^{-k} x/N) counted over residues mod p^{k+2}."""
    check_nonresidue(p, eps)
    level = k + 2
    mod = p**level
    x, y, in_x = _grid(p, level)
    norm = (x * x - eps * y * y) % mod
    if np.any(in_x & (norm % p == 0)):
        raise RelcharError(f"x^2 - {eps} y^2 has a nontrivial zero mod {p}")
    v = _valuations(x, p, level)[in_x] - k
    total = Fraction(int(np.count_nonzero(v >= 0)))
    total -= Fraction(int(np.count_nonzero(v == -1)), p - 1)
    return total / p ** (2 * level)


def quad_ext_integral_62(depth: int = 4, names: Sequence[str] = ("s_eta", "u")) -> RatFun:
    """1 + q^2 sum_k cell_k."""
    _, value = shell_total(quad_ext_62_cells(depth, names))
    return 1 + _q(names) * _q(names) * value


def quad_ext_62_closed_form(names: Sequence[str] = ("s_eta", "u")) -> RatFun:
    """q^2 (1 - q^{-2} s_eta)."""
    return _q(names) * _q(names) * _rf(names, 1 - _mono(names, s_eta=1, u=4))


# -- phi_0 as a Fourier transform --------------------------------------------------


@dataclass(frozen=True)
class FourierRow:
    valuation: int
    value: complex
    expected: Fraction
    tolerance: float = FLOAT_TOLERANCE

    @property
    def ok(self) -> bool:
        return abs(self.value - float(self.expected)) <= self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {
            "valuation": self.valuation,
            "value": f"{self.value.real:.12g}{self.value.imag:+.12g}j",
            "expected": format_rational(self.expected),
        }


def _phi0_expected(p: int, v: int) -> Fraction:
    if v >= 0:
        return Fraction(1)
    if v == -1:
        return Fraction(-1, p - 1)
    return Fraction(0)


def phi_fourier_check(p: int, m_max: int = 3, unit: int = 1, tolerance: float = FLOAT_TOLERANCE) -> List[FourierRow]:
    """phi_0(x) = vol(O^x)^{-1} int_{O^x} psi(x y) dy for v(x) = 1, 0, -1, ..., -m_max.

    psi(a/p^j) = exp(2 pi i a/p^j) is trivial on O; the integral over units
    is a normalized sum over (Z/p^m)^x with m = max(j, 1).
    """
    rows = []
    for v in range(1, -m_max - 1, -1):
        j = max(-v, 0)
        m = max(j, 1)
        y = np.arange(p**m, dtype=np.int64)
        y = y[y % p != 0]
        if j == 0:
            # x in O: psi(x y) = 1.
            phases = np.zeros(len(y))
        else:
            phases = 2 * np.pi * ((unit * y) % p**j) / p**j
        integral = np.exp(1j * phases).sum() / p**m
        value = complex(integral / (1 - 1 / p))
        rows.append(FourierRow(v, value, _phi0_expected(p, v), tolerance))
    return rows


# -- the (U, psi) rank-one integral -------------------------------------------------


def i_alpha_upsi_shells(depth: int = 4, names: Sequence[str] = UPSI_NAMES) -> List[ShellMeasure]:
    """Shells v(a) = k of int_O t^{v(a)} |a|^{-1} phi_0(a^{-1}) da, plus the remainder v(a) > depth."""
    vol = unit_volume(names)
    shells = []
    for k in range(depth + 1):
        measure = RatFun(_mono(names, u=2 * k)) * vol
        value = measure * RatFun(_mono(names, t=k, u=-2 * k)) * phi0_weight(names, -k)
        shells.append(ShellMeasure(f"v(a)={k}", measure, value))
    # phi_0(a^{-1}) = 0 once v(a) >= 2.
    shells.append(ShellMeasure(f"v(a)>{depth}", RatFun(_mono(names, u=2 * depth + 2)), RatFun.const(names, 0)))
    return shells


def i_alpha_upsi_check(depth: int = 4, names: Sequence[str] = UPSI_NAMES) -> Tuple[RatFun, RatFun]:
    """(1 + q * shell sum, q(1 - q^{-1} t)); the two must agree."""
    shells = i_alpha_upsi_shells(depth, names)
    measure, value = shell_total(shells)
    if measure != 1:
        raise RelcharError("(U,psi) shells do not partition O")
    q = _q(names)
    closed = q * _rf(names, 1 - _mono(names, t=1, u=2))
    return 1 + q * value, closed
