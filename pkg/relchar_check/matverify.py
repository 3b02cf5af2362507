from __future__ import annotations

"""Exact verification of the decomposition identities behind the colours.

Design:
- Entries live in F(x, y, eps)[r] with r^2 = eps: a pair (a, b) of sympy
  fraction-field elements stands for a + b*r. Split identities never use r.
- A matrix is a pair of DomainMatrix objects (A, B) for A + B*r, so products
  and inverses stay inside sympy's dense field arithmetic.
- Group membership is a similitude test against a defining form; for GU the
  form is Hermitian and the test conjugates entrywise (r -> -r).
- Colours are read off the torus part of the Borel factor: every diagonal
  entry must be a power of the identity's base, and the exponents are turned
  into a doubled-integer coweight in the model's basis.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .models import ModelSpec
from .validators import DimensionError, IdentityError, MembershipError, ModelDataError

__all__ = [
    "X",
    "Y",
    "EPS",
    "ROOT_EPS",
    "FIELD",
    "FnScalar",
    "FnMatrix",
    "FormKind",
    "GroupForm",
    "gsp_form",
    "gsp_prime_form",
    "gso_form",
    "gu_form",
    "gl_form",
    "check_membership",
    "check_borel",
    "HPattern",
    "check_h_membership",
    "torus_coweight",
    "IdentityReport",
    "verify_identity",
    "verify_u_form",
    "UnimodularReport",
    "unimodularity_check",
]

X, Y, EPS = sympy.symbols("x y eps")
# Stands for sqrt(eps) in transcribed entries.
ROOT_EPS = sympy.Symbol("r")

FIELD = QQ.frac_field(X, Y, EPS)

_LOCALS = {"x": X, "y": Y, "eps": EPS, "r": ROOT_EPS}

# Largest |k| tried when matching a diagonal entry against base**k
_MAX_TORUS_EXPONENT = 6


def _split_root(expr: sympy.Expr) -> Tuple[sympy.Expr, sympy.Expr]:
    """Write a polynomial in r as p0 + p1*r using r^2 = eps."""
    reduced = sympy.expand(sympy.rem(sympy.expand(expr), ROOT_EPS**2 - EPS, ROOT_EPS))
    return reduced.subs(ROOT_EPS, 0), sympy.expand(reduced.coeff(ROOT_EPS, 1))


# -- scalars -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FnScalar:
    """a + b*sqrt(eps) with a, b in Q(x, y, eps)."""

    a: object
    b: object = FIELD.zero

    @classmethod
    def of(cls, value: object) -> "FnScalar":
        if isinstance(value, FnScalar):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(FIELD.convert(value), FIELD.zero)

    @classmethod
    def parse(cls, text: str) -> "FnScalar":
        """Parse an entry such as '-x/(1-x)' or '1-x*r' (r is sqrt(eps))."""
        try:
            expr = sympy.sympify(text, locals=_LOCALS)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise ModelDataError(f"cannot parse matrix entry '{text}'") from e
        num, den = sympy.fraction(sympy.together(expr))
        n0, n1 = _split_root(num)
        d0, d1 = _split_root(den)
        norm = sympy.expand(d0 * d0 - EPS * d1 * d1)
        if norm == 0:
            raise ModelDataError(f"matrix entry '{text}' has a zero denominator")
        a = FIELD.from_sympy(sympy.cancel((n0 * d0 - EPS * n1 * d1) / norm))
        b = FIELD.from_sympy(sympy.cancel((n1 * d0 - n0 * d1) / norm))
        return cls(a, b)

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b

    @property
    def is_real(self) -> bool:
        return not self.b

    def __add__(self, other: object) -> "FnScalar":
        o = FnScalar.of(other)
        return FnScalar(self.a + o.a, self.b + o.b)

    def __sub__(self, other: object) -> "FnScalar":
        o = FnScalar.of(other)
        return FnScalar(self.a - o.a, self.b - o.b)

    def __neg__(self) -> "FnScalar":
        return FnScalar(-self.a, -self.b)

    def __mul__(self, other: object) -> "FnScalar":
        o = FnScalar.of(other)
        eps = FIELD.from_sympy(EPS)
        return FnScalar(self.a * o.a + eps * self.b * o.b, self.a * o.b + self.b * o.a)

    def norm(self) -> object:
        """N(a + b r) = a^2 - eps b^2, an element of Q(x, y, eps)."""
        return self.a * self.a - FIELD.from_sympy(EPS) * self.b * self.b

    def inverse(self) -> "FnScalar":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("FnScalar division by zero")
        return FnScalar(self.a / n, -self.b / n)

    def __truediv__(self, other: object) -> "FnScalar":
        return self * FnScalar.of(other).inverse()

    def __pow__(self, k: int) -> "FnScalar":
        base = self if k >= 0 else self.inverse()
        out = FnScalar.of(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self) -> "FnScalar":
        return FnScalar(self.a, -self.b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (FnScalar, int, str)):
            return NotImplemented
        o = FnScalar.of(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((str(self.a), str(self.b)))

    def to_sympy(self) -> sympy.Expr:
        return FIELD.to_sympy(self.a) + FIELD.to_sympy(self.b) * sympy.sqrt(EPS)

    def __str__(self) -> str:
        return str(sympy.simplify(self.to_sympy()))


# -- matrices ------------------------------------------------------------------


def _dm(rows: Sequence[Sequence[object]], n: int, m: int) -> DomainMatrix:
    return DomainMatrix([list(r) for r in rows], (n, m), FIELD)


def _zeros(n: int, m: int) -> DomainMatrix:
    return _dm([[FIELD.zero] * m for _ in range(n)], n, m)


def _scalar_dm(n: int, value: object) -> DomainMatrix:
    return _dm([[value if i == j else FIELD.zero for j in range(n)] for i in range(n)], n, n)


class FnMatrix:
    """Matrix A + B*sqrt(eps) over Q(x, y, eps)."""

    def __init__(self, re: DomainMatrix, im: Optional[DomainMatrix] = None):
        self.re = re
        self.im = im if im is not None else _zeros(*re.shape)
        if self.re.shape != self.im.shape:
            raise DimensionError(f"parts have shapes {self.re.shape} and {self.im.shape}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "FnMatrix":
        """Build from rows of entries (strings, ints or FnScalar)."""
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise DimensionError("ragged matrix rows")
        cells = [[FnScalar.of(v) for v in r] for r in rows]
        return cls(_dm([[c.a for c in r] for r in cells], n, m), _dm([[c.b for c in r] for r in cells], n, m))

    @classmethod
    def identity(cls, n: int) -> "FnMatrix":
        return cls(_scalar_dm(n, FIELD.one))

    @classmethod
    def scalar(cls, n: int, value: object) -> "FnMatrix":
        s = FnScalar.of(value)
        return cls.from_rows([[s if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "FnMatrix") -> "FnMatrix":
        size = sum(b.shape[0] for b in blocks)
        rows: List[List[FnScalar]] = [[FnScalar.of(0)] * size for _ in range(size)]
        off = 0
        for blk in blocks:
            k = blk.shape[0]
            for i in range(k):
                for j in range(k):
                    rows[off + i][off + j] = blk[i, j]
            off += k
        return cls.from_rows(rows)

    @classmethod
    def block_antidiag(cls, *blocks: "FnMatrix") -> "FnMatrix":
        """Blocks placed on the anti-diagonal, first block in the top-right corner."""
        k = blocks[0].shape[0]
        size = k * len(blocks)
        rows: List[List[FnScalar]] = [[FnScalar.of(0)] * size for _ in range(size)]
        for bi, blk in enumerate(blocks):
            col = size - (bi + 1) * k
            for i in range(k):
                for j in range(k):
                    rows[bi * k + i][col + j] = blk[i, j]
        return cls.from_rows(rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.re.shape

    @property
    def size(self) -> int:
        n, m = self.shape
        if n != m:
            raise DimensionError(f"matrix is not square: {self.shape}")
        return n

    def __getitem__(self, ij: Tuple[int, int]) -> FnScalar:
        i, j = ij
        return FnScalar(self.re.to_list()[i][j], self.im.to_list()[i][j])

    def rows(self) -> List[List[FnScalar]]:
        re, im = self.re.to_list(), self.im.to_list()
        return [[FnScalar(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(re, im)]

    def block(self, i: int, j: int, k: int = 2) -> "FnMatrix":
        return FnMatrix(self.re[i * k:(i + 1) * k, j * k:(j + 1) * k], self.im[i * k:(i + 1) * k, j * k:(j + 1) * k])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FnMatrix":
        full = self.rows()
        return FnMatrix.from_rows([[full[i][j] for j in cols] for i in rows])

    def __add__(self, other: "FnMatrix") -> "FnMatrix":
        return FnMatrix(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "FnMatrix") -> "FnMatrix":
        return FnMatrix(self.re - other.re, self.im - other.im)

    def __matmul__(self, other: "FnMatrix") -> "FnMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        eps = _scalar_dm(self.shape[1], FIELD.from_sympy(EPS))
        re = self.re * other.re + self.im * eps * other.im
        im = self.re * other.im + self.im * other.re
        return FnMatrix(re, im)

    def transpose(self) -> "FnMatrix":
        return FnMatrix(self.re.transpose(), self.im.transpose())

    def conjugate(self) -> "FnMatrix":
        return FnMatrix(self.re, -self.im)

    def _real_form(self) -> DomainMatrix:
        # A + B r  <->  [[A, eps B], [B, A]]
        n = self.size
        eps = FIELD.from_sympy(EPS)
        re, im = self.re.to_list(), self.im.to_list()
        rows = [re[i] + [eps * v for v in im[i]] for i in range(n)]
        rows += [im[i] + re[i] for i in range(n)]
        return _dm(rows, 2 * n, 2 * n)

    def inverse(self) -> "FnMatrix":
        n = self.size
        try:
            inv = self._real_form().inv()
        except Exception as e:  # sympy raises DMNonInvertibleMatrixError
            raise IdentityError("matrix is singular") from e
        rows = inv.to_list()
        return FnMatrix(_dm([r[:n] for r in rows[:n]], n, n), _dm([r[:n] for r in rows[n:]], n, n))

    def norm_det(self) -> object:
        """det of the real form, i.e. N(det g); nonzero iff g is invertible."""
        return self._real_form().det()

    def det(self) -> FnScalar:
        """det for matrices without a sqrt(eps) part."""
        if not self.is_real:
            raise DimensionError("det() is only defined here for real matrices")
        return FnScalar(self.re.det())

    @property
    def is_real(self) -> bool:
        return self.im.is_zero_matrix

    def is_upper(self) -> bool:
        return self.re.is_upper and self.im.is_upper

    def diagonal(self) -> List[FnScalar]:
        return [self[i, i] for i in range(self.size)]

    def first_difference(self, other: "FnMatrix") -> Optional[Tuple[int, int]]:
        if self.shape != other.shape:
            raise DimensionError(f"shapes {self.shape} and {other.shape} differ")
        diff = (self - other).rows()
        for i, row in enumerate(diff):
            for j, v in enumerate(row):
                if not v.is_zero:
                    return (i, j)
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FnMatrix):
            return NotImplemented
        return self.shape == other.shape and self.re == other.re and self.im == other.im

    def __repr__(self) -> str:
        return f"FnMatrix({[[str(v) for v in r] for r in self.rows()]})"


# -- forms ---------------------------------------------------------------------


class FormKind(Enum):
    """Kind of defining form of a group."""

    GSP = "GSp"
    GSO = "GSO"
    GU = "GU"
    GL = "GL"


@dataclass(frozen=True, eq=False)
class GroupForm:
    kind: FormKind
    size: int
    matrix: Optional[FnMatrix] = None
    # Block sizes of a product of GL factors sharing one matrix.
    blocks: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == FormKind.GL:
            return
        f = self.matrix
        if f is None or f.size != self.size:
            raise ModelDataError(f"{self.kind.value}{self.size}: defining matrix missing or of wrong size")
        if not f.norm_det():
            raise ModelDataError(f"{self.kind.value}{self.size}: defining matrix is singular")
        if self.kind == FormKind.GSP and f.transpose() != FnMatrix.scalar(self.size, -1) @ f:
            raise ModelDataError(f"GSp{self.size}: form is not antisymmetric")
        if self.kind == FormKind.GSO and f.transpose() != f:
            raise ModelDataError(f"GSO{self.size}: form is not symmetric")
        if self.kind == FormKind.GU and f.transpose().conjugate() != f:
            raise ModelDataError(f"GU{self.size}: form is not Hermitian")

    @property
    def label(self) -> str:
        return f"{self.kind.value}{self.size}"


def _antidiag(n: int, value: int = 1) -> List[List[int]]:
    return [[value if i + j == n - 1 else 0 for j in range(n)] for i in range(n)]


def gsp_form(n: int) -> GroupForm:
    """J_2n = [[0, -w_n], [w_n, 0]]."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][2 * n - 1 - i] = -1
        rows[n + i][n - 1 - i] = 1
    return GroupForm(FormKind.GSP, 2 * n, FnMatrix.from_rows(rows))


_J2 = [[0, -1], [1, 0]]


def gsp_prime_form(n: int) -> GroupForm:
    """J'_2n: J_2 in every anti-diagonal 2x2 block."""
    j2 = FnMatrix.from_rows(_J2)
    return GroupForm(FormKind.GSP, 2 * n, FnMatrix.block_antidiag(*([j2] * n)))


def gso_form(n: int) -> GroupForm:
    """L_4n: anti-diagonal 2x2 blocks, J_2 in the upper half and -J_2 below."""
    j2 = FnMatrix.from_rows(_J2)
    neg = FnMatrix.from_rows([[-v for v in r] for r in _J2])
    return GroupForm(FormKind.GSO, 4 * n, FnMatrix.block_antidiag(*([j2] * n + [neg] * n)))


def gu_form(n: int) -> GroupForm:
    """w_2n, the anti-diagonal identity, as a Hermitian form."""
    return GroupForm(FormKind.GU, 2 * n, FnMatrix.from_rows(_antidiag(2 * n)))


def gl_form(n: int, blocks: Sequence[int] = ()) -> GroupForm:
    return GroupForm(FormKind.GL, n, None, tuple(blocks))


def _fmt(v: FnScalar) -> str:
    return str(v)


def check_membership(g: FnMatrix, form: GroupForm, what: str = "g") -> FnScalar:
    """Return the similitude factor l(g); raise MembershipError otherwise.

    GSp/GSO: g^t F g = l F.  GU: conj(g)^t F g = l F with l in the base field.
    GL: invertibility (and the block pattern of a product of GL factors); l = 1.
    """
    if g.shape != (form.size, form.size):
        raise DimensionError(f"{what} is {g.shape[0]}x{g.shape[1]}, {form.label} needs {form.size}x{form.size}")
    if not g.norm_det():
        raise MembershipError(f"{what} is singular, not in {form.label}")
    if form.kind == FormKind.GL:
        off = 0
        bounds = []
        for b in form.blocks:
            bounds.extend([(off, off + b)] * b)
            off += b
        if bounds:
            for i, row in enumerate(g.rows()):
                lo, hi = bounds[i]
                for j, v in enumerate(row):
                    if not (lo <= j < hi) and not v.is_zero:
                        raise MembershipError(
                            f"{what} is not block diagonal in {form.label}: entry ({i + 1},{j + 1}) = {_fmt(v)}"
                        )
        return FnScalar.of(1)
    assert form.matrix is not None
    lhs = g.transpose().conjugate() if form.kind == FormKind.GU else g.transpose()
    prod = lhs @ form.matrix @ g
    f_rows = form.matrix.rows()
    p_rows = prod.rows()
    factor: Optional[FnScalar] = None
    for i, row in enumerate(f_rows):
        for j, f in enumerate(row):
            if not f.is_zero:
                factor = p_rows[i][j] / f
                break
        if factor is not None:
            break
    assert factor is not None
    for i, row in enumerate(f_rows):
        for j, f in enumerate(row):
            if p_rows[i][j] != factor * f:
                raise MembershipError(
                    f"{what} not in {form.label}: form entry ({i + 1},{j + 1}) is {_fmt(p_rows[i][j])}, "
                    f"expected {_fmt(factor * f)}"
                )
    if form.kind == FormKind.GU and not factor.is_real:
        raise MembershipError(f"{what} not in {form.label}: similitude {_fmt(factor)} is not in the base field")
    return factor


def check_borel(b: FnMatrix, form: GroupForm, what: str = "b") -> FnScalar:
    """Upper-triangular element of the group; returns its similitude factor."""
    if not b.is_upper():
        for i, row in enumerate(b.rows()):
            for j in range(i):
                if not row[j].is_zero:
                    raise MembershipError(f"{what} is not upper triangular: entry ({i + 1},{j + 1}) = {_fmt(row[j])}")
    return check_membership(b, form, what)


class HPattern(Enum):
    """How the subgroup H sits inside G."""

    # (g, h) with g = [[a,0,b],[0,h,0],[c,0,d]] and l([[a,b],[c,d]]) = l(h)
    CORNER = "corner"
    # (diag(a, h), h)
    LEVI = "levi"
    # diag(h, h, ..., h)
    DIAGONAL = "diagonal"


def check_h_membership(
    g: FnMatrix,
    h: FnMatrix,
    pattern: HPattern,
    g_form: GroupForm,
    h_form: GroupForm,
) -> FnScalar:
    """Check that (g, h) is the image of an element of H; returns l(h)."""
    n, k = g.size, h.size
    l_h = check_membership(h, h_form, "h")
    if pattern == HPattern.DIAGONAL:
        if n % k:
            raise DimensionError(f"h of size {k} does not tile g of size {n}")
        expected = FnMatrix.block_diag(*([h] * (n // k)))
        where = g.first_difference(expected)
        if where is not None:
            i, j = where
            raise MembershipError(f"g is not diag(h,...,h): entry ({i + 1},{j + 1}) = {_fmt(g[i, j])}")
        return l_h
    l_g = check_membership(g, g_form, "g")
    if pattern == HPattern.LEVI:
        lo = n - k
        for i, row in enumerate(g.rows()):
            for j, v in enumerate(row):
                if (i < lo) != (j < lo) and not v.is_zero:
                    raise MembershipError(f"g is not diag(a, h): entry ({i + 1},{j + 1}) = {_fmt(v)}")
        inner = list(range(lo, n))
        if g.submatrix(inner, inner) != h:
            raise MembershipError("lower-right block of g differs from h")
        return l_h
    inner = list(range(1, n - 1))
    outer = [0, n - 1]
    for i, row in enumerate(g.rows()):
        for j, v in enumerate(row):
            if ((i in outer) != (j in outer)) and not v.is_zero:
                raise MembershipError(f"g does not fix the middle block: entry ({i + 1},{j + 1}) = {_fmt(v)}")
    if g.submatrix(inner, inner) != h:
        raise MembershipError("middle block of g differs from h")
    corner = g.submatrix(outer, outer)
    corner_form = gu_form(1) if g_form.kind == FormKind.GU else gsp_form(1)
    l_c = check_membership(corner, corner_form, "corner of g")
    if l_c != l_h or l_g != l_h:
        raise MembershipError(f"similitudes differ: l(corner) = {_fmt(l_c)}, l(h) = {_fmt(l_h)}")
    return l_h


# -- colour read-off -----------------------------------------------------------


def _exponent(entry: FnScalar, base: FnScalar) -> int:
    for k in range(_MAX_TORUS_EXPONENT + 1):
        for s in ((k, -k) if k else (0,)):
            if base**s == entry:
                return s
    raise IdentityError(f"diagonal entry {entry} is not a power of {base}")


def torus_coweight(diagonal: Sequence[FnScalar], base: FnScalar, factors: Sequence[Tuple[str, int]]) -> Tuple[int, ...]:
    """Doubled coweight of a diagonal torus element whose entries are powers of base.

    GL_n contributes n coordinates k_i. GSp_2n, with torus
    diag(t_1..t_n, c/t_n..c/t_1), contributes a_i - c/2 for i = 1..n.
    """
    exps = [_exponent(d, base) for d in diagonal]
    out: List[int] = []
    pos = 0
    for kind, n in factors:
        if kind == "GL":
            out.extend(2 * e for e in exps[pos:pos + n])
            pos += n
        elif kind == "GSp":
            part = exps[pos:pos + 2 * n]
            sims = {part[i] + part[2 * n - 1 - i] for i in range(n)}
            if len(sims) != 1:
                raise IdentityError(f"torus part {part} is not in GSp{2 * n}")
            c = sims.pop()
            out.extend(2 * part[i] - c for i in range(n))
            pos += 2 * n
        else:
            raise ModelDataError(f"no torus read-off for factor kind {kind}")
    if pos != len(exps):
        raise DimensionError(f"torus factors cover {pos} of {len(exps)} diagonal entries")
    return tuple(out)


# -- identities ----------------------------------------------------------------


@dataclass
class IdentityReport:
    model: str
    root: str
    kind: str
    similitudes: Dict[str, str] = field(default_factory=dict)
    # Colour read off the identity, and the catalogued one (doubled coords).
    beta: Optional[Tuple[int, ...]] = None
    expected: Optional[Tuple[int, ...]] = None
    character: Optional[str] = None

    @property
    def color_ok(self) -> bool:
        return self.beta is None or self.beta == self.expected

    def to_dict(self) -> Dict[str, object]:
        return {
            "model": self.model,
            "root": self.root,
            "kind": self.kind,
            "similitudes": dict(self.similitudes),
            "beta": list(self.beta) if self.beta is not None else None,
            "expected": list(self.expected) if self.expected is not None else None,
            "character": self.character,
        }


def verify_identity(
    model: ModelSpec,
    root: str,
    lhs: FnMatrix,
    eta: FnMatrix,
    b: FnMatrix,
    g: FnMatrix,
    h: FnMatrix,
    pattern: HPattern,
    g_form: GroupForm,
    h_form: GroupForm,
    base: Optional[FnScalar] = None,
    torus: Sequence[Tuple[str, int]] = (),
    h_torus: Sequence[Tuple[str, int]] = (),
) -> IdentityReport:
    """Check lhs == b * eta * g with b in B and (g, h) in H, then read off the colour.

    For two-factor models the second factor of the identity is
    I = h^-1 * I * h, so the Borel element there is h^-1 and it contributes
    the remaining torus coordinates.
    """
    rhs = b @ eta @ g
    where = lhs.first_difference(rhs)
    if where is not None:
        i, j = where
        raise IdentityError(
            f"{model.name} {root}: entry ({i + 1},{j + 1}) is {lhs[i, j]} on the left, {rhs[i, j]} on the right"
        )
    report = IdentityReport(model.name, root, "borel")
    report.similitudes["b"] = str(check_borel(b, g_form, "b"))
    report.similitudes["h"] = str(check_h_membership(g, h, pattern, g_form, h_form))
    h_inv = h.inverse()
    if pattern != HPattern.DIAGONAL:
        report.similitudes["h^-1"] = str(check_borel(h_inv, h_form, "h^-1"))
    if base is None:
        return report
    diag = b.diagonal() + (h_inv.diagonal() if h_torus else [])
    mu = torus_coweight(diag, base, list(torus) + list(h_torus))
    colors = model.colors.get(root)
    if not colors:
        raise ModelDataError(f"{model.name}: no catalogued colour for {root}")
    report.beta = model.key(tuple(-m for m in mu))
    report.expected = model.key(colors[0].coords)
    if report.beta != report.expected:
        raise IdentityError(
            f"{model.name} {root}: identity gives colour {model.render(report.beta)}, "
            f"catalog has {model.render(report.expected)}"
        )
    return report


def verify_u_form(
    model: ModelSpec,
    root: str,
    lhs: FnMatrix,
    eta: FnMatrix,
    u: FnMatrix,
    character: FnScalar,
    block: int = 2,
    form: Optional[GroupForm] = None,
) -> IdentityReport:
    """Check x_{-alpha}(a) eta == eta u with u block-unipotent and lambda(u) == character.

    lambda(u) is the sum of the traces of the blocks just above the diagonal;
    a nonzero linear character is what the (U, psi) roots need. In a unitary
    group u must preserve the form and lambda(u) = tr_{E/F} tr X for the
    first block X above the diagonal.
    """
    rhs = eta @ u
    where = lhs.first_difference(rhs)
    if where is not None:
        i, j = where
        raise IdentityError(
            f"{model.name} {root}: entry ({i + 1},{j + 1}) is {lhs[i, j]} on the left, {rhs[i, j]} on the right"
        )
    n = u.size // block
    ident = FnMatrix.identity(block)
    for i in range(n):
        if u.block(i, i, block) != ident:
            raise MembershipError(f"{model.name} {root}: diagonal block {i + 1} of u is not the identity")
        for j in range(i):
            if u.block(i, j, block).first_difference(FnMatrix.scalar(block, 0)) is not None:
                raise MembershipError(f"{model.name} {root}: block ({i + 1},{j + 1}) of u is not zero")
    lam = FnScalar.of(0)
    if form is not None and form.kind == FormKind.GU:
        check_membership(u, form, "u")
        first = u.block(0, 1, block)
        for d in range(block):
            lam = lam + first[d, d] + first[d, d].conjugate()
    else:
        for i in range(n - 1):
            sub = u.block(i, i + 1, block)
            for d in range(block):
                lam = lam + sub[d, d]
    if lam != character:
        raise IdentityError(f"{model.name} {root}: lambda(u) = {lam}, expected {character}")
    if lam.is_zero:
        raise IdentityError(f"{model.name} {root}: lambda(u) vanishes identically")
    report = IdentityReport(model.name, root, "u-form")
    report.character = str(lam)
    return report


# -- unimodularity ---------------------------------------------------------------


@dataclass
class UnimodularReport:
    model: str
    det: int
    similitude: Optional[str] = None


def _as_int(v: FnScalar) -> Optional[int]:
    if not v.is_real:
        return None
    expr = FIELD.to_sympy(v.a)
    return int(expr) if expr.is_Integer else None


def unimodularity_check(
    model: str,
    eta: FnMatrix,
    eta_inv: Optional[FnMatrix] = None,
    form: Optional[GroupForm] = None,
) -> UnimodularReport:
    """eta has integer entries, det +-1 and an integral inverse (equal to eta_inv when given)."""
    for i, row in enumerate(eta.rows()):
        for j, v in enumerate(row):
            if _as_int(v) is None:
                raise ModelDataError(f"{model}: eta entry ({i + 1},{j + 1}) = {v} is not an integer")
    det = _as_int(eta.det())
    if det not in (1, -1):
        raise ModelDataError(f"{model}: det(eta) = {eta.det()}, expected +-1")
    inv = eta.inverse()
    for i, row in enumerate(inv.rows()):
        for j, v in enumerate(row):
            if _as_int(v) is None:
                raise ModelDataError(f"{model}: eta^-1 entry ({i + 1},{j + 1}) = {v} is not an integer")
    if eta_inv is not None:
        where = inv.first_difference(eta_inv)
        if where is not None:
            i, j = where
            raise ModelDataError(
                f"{model}: displayed eta^-1 differs at ({i + 1},{j + 1}): {eta_inv[i, j]} vs {inv[i, j]}"
            )
    report = UnimodularReport(model, int(det))
    if form is not None:
        try:
            report.similitude = str(check_membership(eta, form, "eta"))
        except MembershipError as e:
            raise ModelDataError(f"{model}: {e}") from e
    return report
