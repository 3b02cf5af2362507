from __future__ import annotations

"""Transcribed decomposition identities and open-orbit representatives.

Each identity is stored the way it is displayed: the unipotent x_{-alpha}(x),
which side of eta it multiplies, and the factors b, g, h of the right-hand
side. Entries are strings in x, y, eps and r (r stands for sqrt(eps)).

Identities displayed as a conjugation x_{-alpha}(x) eta = g0 eta g0^-1 are
stored with b = g0, g = g0^-1 and h = h0^-1.

E7 has no matrix realization here. The orthogonal models, GSp10 and
GSp6xGL2 carry only eta; their colours rest on the trilinear computation.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .matverify import (
    FnMatrix,
    FnScalar,
    GroupForm,
    HPattern,
    IdentityReport,
    UnimodularReport,
    gl_form,
    gso_form,
    gsp_form,
    gsp_prime_form,
    gu_form,
    unimodularity_check,
    verify_identity,
    verify_u_form,
)
from .models import ModelSpec
from .validators import ModelDataError, UnknownModelError

__all__ = [
    "Identity",
    "ModelDisplays",
    "DISPLAYS",
    "displays_for",
    "displayed_models",
    "make_form",
    "verify_color_identity",
    "verify_model_identities",
    "check_eta",
]

Rows = Tuple[Tuple[str, ...], ...]


def _rows(*rows: Sequence[object]) -> Rows:
    return tuple(tuple(str(v) for v in r) for r in rows)


def _unipotent(n: int, **entries: str) -> Rows:
    """Identity plus entries given as e.g. e21='x' (1-based row, column)."""
    cells = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    for key, value in entries.items():
        i, j = int(key[1]) - 1, int(key[2]) - 1
        cells[i][j] = value
    return tuple(tuple(r) for r in cells)


def _diag(*entries: object) -> Rows:
    n = len(entries)
    return tuple(tuple(str(entries[i]) if i == j else "0" for j in range(n)) for i in range(n))


def _blocks(*blocks: Sequence[Sequence[object]]) -> Rows:
    """Block-diagonal rows from square blocks."""
    size = sum(len(b) for b in blocks)
    cells = [["0"] * size for _ in range(size)]
    off = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, v in enumerate(row):
                cells[off + i][off + j] = str(v)
        off += len(blk)
    return tuple(tuple(r) for r in cells)


def _antiblocks(*blocks: Sequence[Sequence[object]]) -> Rows:
    """eta0 * w0 for eta0 = diag(blocks) and w0 the block anti-diagonal identity."""
    k = len(blocks[0])
    size = k * len(blocks)
    cells = [["0"] * size for _ in range(size)]
    for bi, blk in enumerate(blocks):
        col = size - (bi + 1) * k
        for i, row in enumerate(blk):
            for j, v in enumerate(row):
                cells[bi * k + i][col + j] = str(v)
    return tuple(tuple(r) for r in cells)


_I2 = ((1, 0), (0, 1))
_S = ((0, 1), (1, 0))
_SN = ((0, 1), (1, 1))


@dataclass(frozen=True)
class Identity:
    root: str
    unipotent: Rows
    # "left": x eta = b eta g.  "right": eta x = b eta g.
    side: str = "left"
    b: Rows = ()
    # Empty when g is diag(h, ..., h).
    g: Rows = ()
    h: Rows = ()
    # Base of the torus powers in b (and h^-1); empty for non-split identities.
    base: str = ""
    # (U, psi) form: x eta = eta u with lambda(u) = character.
    u: Rows = ()
    character: str = ""

    @property
    def kind(self) -> str:
        return "u-form" if self.u else "borel"


@dataclass(frozen=True)
class ModelDisplays:
    model: str
    group: str
    eta: Rows
    eta_inv: Rows = ()
    h_group: str = ""
    pattern: HPattern = HPattern.DIAGONAL
    torus: Tuple[Tuple[str, int], ...] = ()
    h_torus: Tuple[Tuple[str, int], ...] = ()
    identities: Tuple[Identity, ...] = ()
    # Similitude factor of eta in the group's defining form.
    eta_similitude: str = "1"

    def identity(self, root: str) -> Identity:
        for ident in self.identities:
            if ident.root == root:
                return ident
        raise UnknownModelError(f"{self.model}:{root}", [f"{self.model}:{i.root}" for i in self.identities])


def make_form(label: str) -> GroupForm:
    """'GSp6', "GSp'10", 'GSO12', 'GU4', 'GL4' or a product of GL blocks 'GL2^3'."""
    if label.startswith("GSp'"):
        return gsp_prime_form(int(label[4:]) // 2)
    if label.startswith("GSp"):
        return gsp_form(int(label[3:]) // 2)
    if label.startswith("GSO"):
        return gso_form(int(label[3:]) // 4)
    if label.startswith("GU"):
        return gu_form(int(label[2:]) // 2)
    if label.startswith("GL"):
        if "^" in label:
            n, k = (int(v) for v in label[2:].split("^"))
            return gl_form(n * k, [n] * k)
        return gl_form(int(label[2:]))
    raise ModelDataError(f"unknown group label '{label}'")


# -- data ----------------------------------------------------------------------

_TRILINEAR = ModelDisplays(
    model="trilinear",
    group="GL2^3",
    eta=_blocks(_I2, _S, _SN),
    eta_inv=_blocks(_I2, _S, ((-1, 1), (1, 0))),
    h_group="GL2",
    pattern=HPattern.DIAGONAL,
    torus=(("GL", 2), ("GL", 2), ("GL", 2)),
    identities=(
        Identity(
            root="a1",
            unipotent=_unipotent(6, e21="x"),
            b=_blocks(
                (("1/(1-x)", 0), (0, 1)),
                ((1, "-x/(1-x)"), (0, "1/(1-x)")),
                (("1/(1-x)", "-x/(1-x)"), (0, 1)),
            ),
            h=_rows(("1-x", 0), ("x", 1)),
            base="1-x",
        ),
        Identity(
            root="a2",
            unipotent=_unipotent(6, e43="x"),
            b=_blocks(
                ((1, "-x/(1-x)"), (0, "1/(1-x)")),
                (("1/(1-x)", 0), (0, 1)),
                (("1/(1-x)", 0), (0, 1)),
            ),
            h=_rows((1, "x"), (0, "1-x")),
            base="1-x",
        ),
        Identity(
            root="a3",
            unipotent=_unipotent(6, e65="x"),
            b=_blocks(
                ((1, 0), (0, "1/(1+x)")),
                (("1/(1+x)", 0), (0, 1)),
                (("1/(1+x)", 0), (0, 1)),
            ),
            h=_diag(1, "1+x"),
            base="1+x",
        ),
    ),
)

_GSP6_ETA = _rows(
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, -1, -1, 1, 0, 0),
    (-1, 0, -1, 0, 1, 0),
    (0, -1, 0, 0, 0, 1),
)

_GSP6XGSP4 = ModelDisplays(
    model="GSp6xGSp4",
    group="GSp6",
    eta=_GSP6_ETA,
    eta_inv=_rows(
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0),
        (0, 1, 1, 1, 0, 0),
        (1, 0, 1, 0, 1, 0),
        (0, 1, 0, 0, 0, 1),
    ),
    h_group="GSp4",
    pattern=HPattern.CORNER,
    torus=(("GSp", 3),),
    h_torus=(("GSp", 2),),
    identities=(
        Identity(
            root="a1",
            unipotent=_unipotent(6, e21="x", e65="-x"),
            g=_rows(
                (1, 0, 0, 0, 0, 0),
                (0, "1/(1+x)", "-x/(1+x)", 0, "x/(1+x)", 0),
                (0, 0, 1, 0, 0, 0),
                (0, 0, 0, "1/(1+x)", "x/(1+x)", 0),
                (0, 0, 0, 0, 1, 0),
                ("x/(1+x)", 0, 0, 0, 0, "1/(1+x)"),
            ),
            h=_rows(
                ("1/(1+x)", "-x/(1+x)", 0, "x/(1+x)"),
                (0, 1, 0, 0),
                (0, 0, "1/(1+x)", "x/(1+x)"),
                (0, 0, 0, 1),
            ),
            b=_rows(
                (1, 0, 0, 0, 0, 0),
                (0, "x+1", 0, 0, "-x", 0),
                (0, 0, 1, 0, 0, 0),
                (0, 0, 0, "x+1", 0, 0),
                (0, 0, 0, 0, 1, 0),
                (0, 0, 0, 0, 0, "x+1"),
            ),
            base="1+x",
        ),
        Identity(
            root="a2",
            unipotent=_unipotent(6, e32="x", e54="-x"),
            g=_rows(
                ("1/(1-x)", 0, 0, 0, 0, "-x/(1-x)"),
                (0, 1, 0, 0, 0, 0),
                (0, 0, 1, "x/(1-x)", 0, 0),
                (0, 0, 0, "1/(1-x)", 0, 0),
                (0, 0, 0, 0, "1/(1-x)", 0),
                (0, 0, 0, 0, 0, 1),
            ),
            h=_rows(
                (1, 0, 0, 0),
                (0, 1, "x/(1-x)", 0),
                (0, 0, "1/(1-x)", 0),
                (0, 0, 0, "1/(1-x)"),
            ),
            b=_rows(
                ("1-x", "x", 0, 0, 0, "x"),
                (0, 1, 0, 0, 0, 0),
                (0, 0, "1-x", "-x", 0, 0),
                (0, 0, 0, 1, 0, 0),
                (0, 0, 0, 0, "1-x", "-x"),
                (0, 0, 0, 0, 0, 1),
            ),
            base="1-x",
        ),
        Identity(
            root="a3",
            unipotent=_unipotent(6, e43="x"),
            g=_diag(1, "1/(1-x)", 1, "1/(1-x)", 1, "1/(1-x)"),
            h=_diag("1/(1-x)", 1, "1/(1-x)", 1),
            b=_diag(1, "1-x", 1, "1-x", 1, "1-x"),
            base="1-x",
        ),
        Identity(
            root="a1'",
            unipotent=_unipotent(6, e32="-x", e54="x"),
            side="right",
            g=_rows(
                ("1/(1-x)", 0, 0, 0, 0, "-x/(1-x)"),
                (0, 1, 0, 0, 0, 0),
                (0, 0, "1/(1-x)", "-x/(1-x)", 0, 0),
                (0, 0, 0, 1, 0, 0),
                (0, 0, 0, 0, "1/(1-x)", 0),
                (0, 0, 0, 0, 0, 1),
            ),
            h=_rows(
                (1, 0, 0, 0),
                (0, "1/(1-x)", "-x/(1-x)", 0),
                (0, 0, 1, 0),
                (0, 0, 0, "1/(1-x)"),
            ),
            b=_rows(
                ("1-x", "x", 0, 0, 0, "x"),
                (0, 1, 0, 0, 0, 0),
                (0, 0, 1, "x", 0, 0),
                (0, 0, 0, "1-x", 0, 0),
                (0, 0, 0, 0, "1-x", "-x"),
                (0, 0, 0, 0, 0, 1),
            ),
            base="1-x",
        ),
        Identity(
            root="a2'",
            unipotent=_unipotent(6, e43="-x"),
            side="right",
            g=_diag(1, "1/(1+x)", 1, "1/(1+x)", 1, "1/(1+x)"),
            h=_diag("1/(1+x)", 1, "1/(1+x)", 1),
            b=_diag(1, "1+x", 1, "1+x", 1, "1+x"),
            base="1+x",
        ),
    ),
)

_GL4XGL2 = ModelDisplays(
    model="GL4xGL2",
    group="GL4",
    eta=_rows((1, 0, 0, 0), (0, 1, 0, 0), (0, -1, 1, 0), (-1, 1, -1, 1)),
    eta_inv=_rows((1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0), (1, 0, 1, 1)),
    h_group="GL2",
    pattern=HPattern.LEVI,
    torus=(("GL", 4),),
    h_torus=(("GL", 2),),
    identities=(
        Identity(
            root="a1",
            unipotent=_unipotent(4, e21="x"),
            g=_rows(
                (1, 0, 0, 0),
                ("x/(x+1)", "1/(x+1)", 0, 0),
                (0, 0, "1/(x+1)", "x/(x+1)"),
                (0, 0, 0, 1),
            ),
            h=_rows(("1/(x+1)", "x/(x+1)"), (0, 1)),
            b=_rows((1, 0, 0, 0), (0, "x+1", 0, 0), (0, 0, 1, "-x"), (0, 0, 0, "x+1")),
            base="1+x",
        ),
        Identity(
            root="a2",
            unipotent=_unipotent(4, e32="x"),
            g=_rows(
                ("1/(1-x)", "-x/(1-x)", 0, 0),
                (0, 1, 0, 0),
                (0, 0, "1/(1-x)", 0),
                (0, 0, 0, "1/(1-x)"),
            ),
            h=_diag("1/(1-x)", "1/(1-x)"),
            b=_rows(("1-x", "x", 0, 0), (0, 1, 0, 0), (0, 0, "1-x", 0), (0, 0, 0, "1-x")),
            base="1-x",
        ),
        Identity(
            root="a3",
            unipotent=_unipotent(4, e43="x"),
            g=_diag("1/(1-x)", 1, 1, "1/(1-x)"),
            h=_diag(1, "1/(1-x)"),
            b=_diag("1-x", 1, 1, "1-x"),
            base="1-x",
        ),
        Identity(
            root="a'",
            unipotent=_unipotent(4, e43="-x"),
            side="right",
            g=_rows(("1/(1+x)", "x/(1+x)", 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, "1/(1+x)")),
            h=_diag(1, "1/(1+x)"),
            b=_rows(("1+x", "-x", 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, "1+x")),
            base="1+x",
        ),
    ),
)

_GL6 = ModelDisplays(
    model="GL6",
    group="GL6",
    eta=_antiblocks(_I2, _S, _SN),
    identities=(
        Identity(
            root="a2",
            unipotent=_unipotent(6, e32="x"),
            u=_unipotent(6, e46="x"),
            character="x",
        ),
        Identity(
            root="a4",
            unipotent=_unipotent(6, e54="x"),
            u=_unipotent(6, e13="-x", e23="x"),
            character="-x",
        ),
    ),
)

_GU6 = ModelDisplays(
    model="GU6",
    group="GU6",
    eta=_antiblocks(_SN, _I2, ((0, 1), (1, -1))),
    h_group="GU2",
    pattern=HPattern.DIAGONAL,
    identities=(
        Identity(
            root="a1",
            unipotent=_unipotent(6, e21="x+y*r", e65="-x+y*r"),
            b=_blocks(
                (("1/(1+x)", 0), (0, 1)),
                ((1, "-y*r/(1+x)"), (0, "1/(1+x)")),
                (("1/(1+x)", 0), (0, 1)),
            ),
            h=_rows((1, "y*r"), (0, "1+x")),
        ),
        # X' = -w2 conj(X)^t w2 in the unitary group.
        Identity(
            root="a2",
            unipotent=_unipotent(6, e32="x+y*r", e54="-x+y*r"),
            u=_unipotent(6, e14="-x+y*r", e24="-x+y*r", e35="x+y*r", e36="x+y*r"),
            character="-2*x",
        ),
        Identity(
            root="a3",
            unipotent=_unipotent(6, e43="x*r"),
            b=_blocks(
                (("1+x*r", "-x*r"), (0, "1-x*r")),
                ((1, "-x*r"), (0, "1-x**2*eps")),
                (("1-x*r", "-x*r"), (0, "1+x*r")),
            ),
            h=_rows(
                ("1/(1-x**2*eps)", "x*r/(1-x**2*eps)"),
                ("x*r/(1-x**2*eps)", "1/(1-x**2*eps)"),
            ),
        ),
    ),
)

_GU4XGU2 = ModelDisplays(
    model="GU4xGU2",
    group="GU4",
    eta=_rows((1, 0, 0, 0), (1, 1, 0, 0), (-1, 0, 1, 0), (1, 1, -1, 1)),
    eta_inv=_rows((1, 0, 0, 0), (-1, 1, 0, 0), (1, 0, 1, 0), (1, -1, 1, 1)),
    h_group="GU2",
    pattern=HPattern.CORNER,
    identities=(
        Identity(
            root="a1",
            unipotent=_unipotent(4, e21="x+y*r", e43="-x+y*r"),
            g=_rows(("1+x", 0, 0, 0), (0, 1, "y*r", 0), (0, 0, "1+x", 0), ("-y*r", 0, 0, 1)),
            h=_rows((1, "y*r"), (0, "1+x")),
            b=_rows(("1/(1+x)", 0, 0, 0), (0, 1, "-y*r/(1+x)", 0), (0, 0, "1/(1+x)", 0), (0, 0, 0, 1)),
        ),
        Identity(
            root="a2",
            unipotent=_unipotent(4, e32="x*r"),
            g=_rows((1, 0, 0, "x*r"), (0, "1+x*r", 0, 0), (0, 0, "1+x*r", 0), ("x*r", 0, 0, 1)),
            h=_diag("1+x*r", "1+x*r"),
            b=_rows(
                ("(1-x*r)/(1-x**2*eps)", "x*r/(1-x**2*eps)", "-x*r/(1-x**2*eps)", "-x*r/(1-x**2*eps)"),
                (0, "1/(1-x**2*eps)", "-x*r/(1-x**2*eps)", "-x*r/(1-x**2*eps)"),
                (0, 0, 1, "(x*r-x**2*eps)/(1-x**2*eps)"),
                (0, 0, 0, "(1-x*r)/(1-x**2*eps)"),
            ),
        ),
        # The GU2 root acts through the image of x_{-alpha2}(-x) on the right of eta.
        Identity(
            root="a'",
            unipotent=_unipotent(4, e32="-x*r"),
            side="right",
            g=_rows(
                ("1/(1-x*r)", 0, 0, "-x*r/(1-x*r)"),
                (0, "1+x*r", "x*r/(1-x*r)", 0),
                (0, 0, "1/(1-x*r)", 0),
                ("-x*r/(1-x*r)", 0, 0, "1/(1-x*r)"),
            ),
            h=_rows(("1+x*r", "x*r/(1-x*r)"), (0, "1/(1-x*r)")),
            b=_rows(
                (1, "-x*r/(1+x*r)", "x*r/(1+x*r)", "x*r/(1+x*r)"),
                (0, "(1-x*r)/(1+x*r)", 0, "x*r/(1+x*r)"),
                (0, 0, "(1-x*r)/(1+x*r)", "-x*r/(1+x*r)"),
                (0, 0, 0, 1),
            ),
        ),
    ),
)

# Open-orbit representatives of the Whittaker-induced models, eta = eta0 * w0.
_GSP10 = ModelDisplays(
    model="GSp10",
    group="GSp'10",
    eta=_antiblocks(_I2, _S, _SN, _S, ((-1, 0), (0, -1))),
    eta_similitude="-1",
)

_GSP6XGL2 = ModelDisplays(
    model="GSp6xGL2",
    group="GSp6",
    eta=_antiblocks(_I2, _S, _I2),
    eta_similitude="-1",
)

_GSO12 = ModelDisplays(
    model="GSO12",
    group="GSO12",
    eta=_antiblocks(_I2, _S, _SN, ((0, -1), (-1, -1)), ((0, -1), (-1, 0)), _I2),
    eta_similitude="-1",
)

_GSO8XGL2 = ModelDisplays(
    model="GSO8xGL2",
    group="GSO8",
    eta=_antiblocks(_I2, _S, ((0, -1), (-1, 0)), _I2),
    eta_similitude="-1",
)

DISPLAYS: Dict[str, ModelDisplays] = {
    d.model: d for d in (_TRILINEAR, _GSP6XGSP4, _GL4XGL2, _GL6, _GU6, _GU4XGU2, _GSP10, _GSP6XGL2, _GSO12, _GSO8XGL2)
}


def displayed_models() -> List[str]:
    return list(DISPLAYS)


def displays_for(model: str) -> ModelDisplays:
    try:
        return DISPLAYS[model]
    except KeyError:
        raise UnknownModelError(model, list(DISPLAYS)) from None


@lru_cache(maxsize=None)
def _matrix(rows: Rows) -> FnMatrix:
    return FnMatrix.from_rows(rows)


def verify_color_identity(model: ModelSpec, root: str) -> IdentityReport:
    """Multiply out the catalogued identity for (model, root) and check every predicate."""
    disp = displays_for(model.name)
    ident = disp.identity(root)
    eta = _matrix(disp.eta)
    x = _matrix(ident.unipotent)
    lhs = x @ eta if ident.side == "left" else eta @ x
    if ident.u:
        u = _matrix(ident.u)
        return verify_u_form(model, root, lhs, eta, u, FnScalar.parse(ident.character), form=make_form(disp.group))
    h = _matrix(ident.h)
    if ident.g:
        g = _matrix(ident.g)
    else:
        g = FnMatrix.block_diag(*([h] * (eta.size // h.size)))
    g_form = make_form(disp.group)
    h_form = make_form(disp.h_group)
    base = FnScalar.parse(ident.base) if ident.base else None
    return verify_identity(
        model,
        root,
        lhs,
        eta,
        _matrix(ident.b),
        g,
        h,
        disp.pattern,
        g_form,
        h_form,
        base=base,
        torus=disp.torus,
        h_torus=disp.h_torus,
    )


def verify_model_identities(model: ModelSpec) -> List[IdentityReport]:
    disp = displays_for(model.name)
    return [verify_color_identity(model, ident.root) for ident in disp.identities]


def check_eta(model: str) -> UnimodularReport:
    """Unimodularity of eta, agreement with a displayed inverse, and membership in G."""
    disp = displays_for(model)
    eta_inv: Optional[FnMatrix] = _matrix(disp.eta_inv) if disp.eta_inv else None
    report = unimodularity_check(model, _matrix(disp.eta), eta_inv, make_form(disp.group))
    if report.similitude is not None and FnScalar.parse(report.similitude) != FnScalar.parse(disp.eta_similitude):
        raise ModelDataError(f"{model}: l(eta) = {report.similitude}, expected {disp.eta_similitude}")
    return report
