from __future__ import annotations

"""Weights, root data and Weyl groups in doubled integer coordinates.

A weight k/2 * e_i is stored as the integer k in slot i, so half-integral
spin weights need no rational vectors. Division by 2 (or 4 for a pairing)
happens only where a rational value is reported.

Weyl groups are never stored whole. `walk_weyl` streams every element once
as a node of the canonical descent tree on the orbit of a regular vector:
the parent of a point p is s_j(p) for the first simple root with a negative
pairing. Anything that needs per-element data (matrices, Theta index
permutations, signs) rides along the same walk.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar

from .validators import DimensionError, ModelDataError, WeylCapError

__all__ = [
    "Weight",
    "RootType",
    "SimpleRoot",
    "RootDatum",
    "WeylElement",
    "WeylNode",
    "parse_weight",
    "pair",
    "reflect",
    "reflect_coords",
    "coroot_pairing",
    "coweight_pairing",
    "enumerate_weyl",
    "walk_weyl",
    "weyl_order",
    "delta_half_exponent",
    "dominant_reduction",
    "DominantForm",
]

Coords = Tuple[int, ...]
T = TypeVar("T")


@dataclass(frozen=True, order=True)
class Weight:
    """A (co)weight in doubled coordinates with the dimension of its weight space."""

    coords: Coords
    degree: int = 1

    def __post_init__(self) -> None:
        if self.degree not in (1, 2):
            raise ModelDataError(f"weight degree must be 1 or 2, got {self.degree}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-c for c in self.coords), self.degree)

    def __add__(self, other: "Weight") -> "Weight":
        _check_dims(self.coords, other.coords)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)), self.degree)

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def with_degree(self, degree: int) -> "Weight":
        return Weight(self.coords, degree)

    def real(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, 2) for c in self.coords)

    def render(self, basis: Sequence[str]) -> str:
        """Readable form such as '(e1-e2+e3)/2' or 'e1+e2'."""
        return render_coords(self.coords, basis)

    @classmethod
    def zero(cls, dim: int) -> "Weight":
        return cls((0,) * dim)


def _check_dims(a: Sequence[object], b: Sequence[object]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def render_coords(coords: Coords, basis: Sequence[str]) -> str:
    if not any(coords):
        return "0"
    halves = any(c % 2 for c in coords)
    scale = 1 if halves else 2
    parts: List[str] = []
    for c, name in zip(coords, basis):
        if c == 0:
            continue
        k = c // scale
        sign = "-" if k < 0 else "+"
        mag = "" if abs(k) == 1 else str(abs(k))
        parts.append(f"{sign}{mag}{name}")
    body = "".join(parts).lstrip("+")
    return f"({body})/2" if halves else body


# -- weight expressions ---------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*'*)|(.))")


def parse_weight(expr: str, basis: Sequence[str], degree: int = 1) -> Weight:
    """Parse a linear expression like "(e1-e2+e3)/2 + (-e1'+e2')/2".

    Grammar: sums of terms, a term is an optional integer factor times a
    basis name or a parenthesized expression, optionally divided by an
    integer. The result must be half-integral.
    """
    index = {name: i for i, name in enumerate(basis)}
    tokens: List[Tuple[str, str]] = []
    for num, name, sym in _TOKEN_RE.findall(expr):
        if num:
            tokens.append(("num", num))
        elif name:
            tokens.append(("name", name))
        elif sym.strip():
            tokens.append(("sym", sym))
    pos = 0

    def peek() -> Optional[Tuple[str, str]]:
        return tokens[pos] if pos < len(tokens) else None

    def take() -> Tuple[str, str]:
        nonlocal pos
        if pos >= len(tokens):
            raise ModelDataError(f"unexpected end of weight expression '{expr}'")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_sum() -> List[Fraction]:
        total = [Fraction(0)] * len(basis)
        sign = 1
        first = True
        while True:
            tok = peek()
            if tok is None or tok == ("sym", ")"):
                break
            if tok[0] == "sym" and tok[1] in "+-":
                take()
                sign = -1 if tok[1] == "-" else 1
            elif not first:
                raise ModelDataError(f"expected + or - in '{expr}'")
            term = parse_term()
            total = [a + sign * b for a, b in zip(total, term)]
            sign = 1
            first = False
        return total

    def parse_term() -> List[Fraction]:
        factor = Fraction(1)
        tok = take()
        if tok[0] == "num":
            factor = Fraction(int(tok[1]))
            nxt = peek()
            if nxt == ("sym", "*"):
                take()
            if nxt is None or (nxt[0] == "sym" and nxt[1] in "+-)/"):
                raise ModelDataError(f"bare integer in weight expression '{expr}'")
            tok = take()
        if tok[0] == "name":
            if tok[1] not in index:
                raise ModelDataError(f"unknown coordinate '{tok[1]}' in '{expr}'")
            vec = [Fraction(0)] * len(basis)
            vec[index[tok[1]]] = Fraction(1)
        elif tok == ("sym", "("):
            vec = parse_sum()
            if take() != ("sym", ")"):
                raise ModelDataError(f"unbalanced parentheses in '{expr}'")
        else:
            raise ModelDataError(f"unexpected token '{tok[1]}' in '{expr}'")
        if peek() == ("sym", "/"):
            take()
            den = take()
            if den[0] != "num":
                raise ModelDataError(f"division by non-integer in '{expr}'")
            factor /= int(den[1])
        return [factor * v for v in vec]

    real = parse_sum()
    if pos != len(tokens):
        raise ModelDataError(f"trailing input in weight expression '{expr}'")
    doubled = [2 * v for v in real]
    if any(d.denominator != 1 for d in doubled):
        raise ModelDataError(f"weight '{expr}' is not half-integral")
    return Weight(tuple(int(d) for d in doubled), degree)


# -- pairing and reflections -----------------------------------------------


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    _check_dims(a, b)
    return sum(x * y for x, y in zip(a, b))


def pair(a: Weight, b: Weight) -> Fraction:
    """Standard dot product of two weights in real coordinates."""
    return Fraction(_dot(a.coords, b.coords), 4)


def coroot_pairing(v: Sequence[int], root: Sequence[int]) -> int:
    """<v, alpha^vee> = 2(v, alpha)/(alpha, alpha); must be an integer."""
    num = 2 * _dot(v, root)
    den = _dot(root, root)
    k, rem = divmod(num, den)
    if rem:
        raise ModelDataError(f"non-integral pairing of {tuple(v)} with root {tuple(root)}")
    return k


def reflect_coords(root: Sequence[int], v: Sequence[int]) -> Coords:
    """Euclidean reflection of v in the hyperplane orthogonal to root.

    Valid for weights and coweights alike; the image must stay in the
    doubled lattice.
    """
    num = 2 * _dot(v, root)
    if num == 0:
        return tuple(v)
    den = _dot(root, root)
    out = []
    for x, r in zip(v, root):
        k, rem = divmod(num * r, den)
        if rem:
            raise ModelDataError(f"reflection of {tuple(v)} in {tuple(root)} leaves the lattice")
        out.append(x - k)
    return tuple(out)


def coweight_pairing(v: Sequence[int], root: Sequence[int]) -> int:
    """<alpha, v> for a coweight v; integral on the coweight lattice."""
    k, rem = divmod(_dot(v, root), 4)
    if rem:
        raise ModelDataError(f"coweight {tuple(v)} pairs non-integrally with {tuple(root)}")
    return k


def reflect(alpha: Weight, alpha_vee: Weight, v: Weight) -> Weight:
    """s_alpha(v) = v - <v, alpha^vee> alpha (Euclidean reflection)."""
    _check_dims(alpha.coords, v.coords)
    _check_dims(alpha_vee.coords, v.coords)
    num = _dot(v.coords, alpha_vee.coords)
    k, rem = divmod(num, 4)
    if rem:
        raise ModelDataError(f"non-integral pairing of {v.coords} with coroot {alpha_vee.coords}")
    return Weight(tuple(x - k * a for x, a in zip(v.coords, alpha.coords)), v.degree)


# -- root data -------------------------------------------------------------


class RootType(Enum):
    """Spherical type of a simple root."""

    T = "T"
    U_PSI = "U-psi"


@dataclass(frozen=True)
class SimpleRoot:
    name: str
    root: Weight
    kind: RootType = RootType.T
    # Root-space dimension over F (2 for the E-rational roots of unitary groups).
    degree: int = 1

    @property
    def coroot(self) -> Weight:
        r = self.root.coords
        norm = _dot(r, r)
        scaled = [Fraction(8 * c, norm) for c in r]
        if any(s.denominator != 1 for s in scaled):
            raise ModelDataError(f"coroot of {self.name} is not half-integral")
        return Weight(tuple(int(s) for s in scaled), self.degree)


@dataclass(frozen=True)
class RootDatum:
    dim: int
    basis: Tuple[str, ...]
    simple_roots: Tuple[SimpleRoot, ...]

    def __post_init__(self) -> None:
        if len(self.basis) != self.dim:
            raise ModelDataError("basis length differs from coordinate dimension")
        for sr in self.simple_roots:
            if sr.root.dim != self.dim:
                raise DimensionError(f"simple root {sr.name} has dimension {sr.root.dim}")

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    def index(self, name: str) -> int:
        for i, sr in enumerate(self.simple_roots):
            if sr.name == name:
                return i
        raise ModelDataError(f"no simple root named '{name}'")

    @cached_property
    def cartan(self) -> Tuple[Tuple[int, ...], ...]:
        """Cartan matrix a_ij = <alpha_i, alpha_j^vee>."""
        rows = []
        for a in self.simple_roots:
            rows.append(tuple(coroot_pairing(a.root.coords, b.root.coords) for b in self.simple_roots))
        return tuple(rows)

    def check_cartan(self) -> None:
        for i, row in enumerate(self.cartan):
            for j, a in enumerate(row):
                if i == j and a != 2:
                    raise ModelDataError(f"Cartan diagonal entry {i} is {a}")
                if i != j and a > 0:
                    raise ModelDataError(f"Cartan entry ({i},{j}) is positive")

    @cached_property
    def positive_roots(self) -> Tuple[Weight, ...]:
        """Closure of the simple roots under s_i, skipping s_i(alpha_i)."""
        simple = [sr.root for sr in self.simple_roots]
        seen: Dict[Coords, Weight] = {r.coords: r.with_degree(sr.degree) for r, sr in zip(simple, self.simple_roots)}
        frontier = list(seen.values())
        while frontier:
            nxt: List[Weight] = []
            for beta in frontier:
                for sr in self.simple_roots:
                    if beta.coords == sr.root.coords:
                        continue
                    img = Weight(reflect_coords(sr.root.coords, beta.coords), beta.degree)
                    if img.coords not in seen:
                        seen[img.coords] = img
                        nxt.append(img)
            frontier = nxt
        return tuple(sorted(seen.values()))

    @cached_property
    def positive_coroots(self) -> Tuple[Weight, ...]:
        out = []
        for beta in self.positive_roots:
            norm = _dot(beta.coords, beta.coords)
            scaled = [Fraction(8 * c, norm) for c in beta.coords]
            if any(s.denominator != 1 for s in scaled):
                raise ModelDataError(f"coroot of {beta.coords} is not half-integral")
            out.append(Weight(tuple(int(s) for s in scaled), beta.degree))
        return tuple(out)

    @cached_property
    def rho(self) -> Tuple[Fraction, ...]:
        """Half-sum of positive roots weighted by root-space dimension (real coords)."""
        acc = [Fraction(0)] * self.dim
        for beta in self.positive_roots:
            for i, c in enumerate(beta.coords):
                acc[i] += Fraction(c * beta.degree, 4)
        return tuple(acc)

    @cached_property
    def rho_vee(self) -> Weight:
        """Half-sum of positive coroots, doubled coordinates."""
        acc = [0] * self.dim
        for gamma in self.positive_coroots:
            for i, c in enumerate(gamma.coords):
                acc[i] += c
        halves = [Fraction(a, 2) for a in acc]
        if any(h.denominator != 1 for h in halves):
            raise ModelDataError("rho^vee is not half-integral")
        return Weight(tuple(int(h) for h in halves))

    @property
    def longest_length(self) -> int:
        return len(self.positive_roots)

    def simple_reflection(self, i: int, v: Sequence[int]) -> Coords:
        return reflect_coords(self.simple_roots[i].root.coords, v)

    def first_descent(self, p: Sequence[int], subset: Optional[Sequence[int]] = None) -> int:
        """Index of the first simple root pairing negatively with p, or -1."""
        for i in subset if subset is not None else range(self.rank):
            if _dot(p, self.simple_roots[i].root.coords) < 0:
                return i
        return -1

    def restrict(self, subset: Sequence[int]) -> "RootDatum":
        """Root datum of the Levi generated by the given simple roots."""
        return RootDatum(self.dim, self.basis, tuple(self.simple_roots[i] for i in subset))

    def reflection_matrix(self, i: int) -> Tuple[Tuple[Fraction, ...], ...]:
        """Matrix of s_i acting on (real or doubled) coordinate column vectors."""
        r = self.simple_roots[i].root.coords
        norm = _dot(r, r)
        rows = []
        for a in range(self.dim):
            rows.append(tuple(
                (Fraction(1) if a == b else Fraction(0)) - Fraction(2 * r[a] * r[b], norm)
                for b in range(self.dim)
            ))
        return tuple(rows)


# -- Weyl groups -----------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    matrix: Tuple[Tuple[Fraction, ...], ...]
    sign: int
    word: Tuple[int, ...] = field(default=(), compare=False)

    def apply(self, v: Weight) -> Weight:
        out = []
        for row in self.matrix:
            val = sum((c * x for c, x in zip(row, v.coords)), Fraction(0))
            if val.denominator != 1:
                raise ModelDataError(f"Weyl image of {v.coords} is not in the doubled lattice")
            out.append(int(val))
        return Weight(tuple(out), v.degree)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self * other (apply other first)."""
        n = len(self.matrix)
        rows = []
        for a in range(n):
            rows.append(tuple(
                sum((self.matrix[a][k] * other.matrix[k][b] for k in range(n)), Fraction(0))
                for b in range(n)
            ))
        return WeylElement(tuple(rows), self.sign * other.sign, self.word + other.word)

    def determinant(self) -> Fraction:
        return _det([list(r) for r in self.matrix])


def _det(m: List[List[Fraction]]) -> Fraction:
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class WeylNode:
    """One node of the streaming walk: the point w(rho^vee), length, payload."""

    point: Coords
    depth: int
    payload: object

    @property
    def sign(self) -> int:
        return -1 if self.depth % 2 else 1


def walk_weyl(
    datum: RootDatum,
    root_payload: T,
    step: Callable[[T, int, int], T],
    subset: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
    start: Optional[Tuple[Coords, int, T]] = None,
    max_depth: Optional[int] = None,
) -> Iterator[WeylNode]:
    """Stream all elements w of W (or W_J for a subset J) exactly once.

    Each element is identified by w(rho_J^vee). A child s_i w is generated
    when <w rho, alpha_i> > 0 and kept iff i is the first descent of the
    child, so every element has exactly one parent. `step(payload, i, shift)`
    maps the parent's payload to the child's (left multiplication by s_i),
    where shift = <alpha_i, p> and the child is p - shift * alpha_i^vee.
    """
    idx = list(subset) if subset is not None else list(range(datum.rank))
    if start is None:
        base = datum.restrict(idx).rho_vee.coords if subset is not None else datum.rho_vee.coords
        stack: List[Tuple[Coords, int, T]] = [(base, 0, root_payload)]
    else:
        stack = [start]
    roots = {i: datum.simple_roots[i].root.coords for i in idx}
    coroots = {i: datum.simple_roots[i].coroot.coords for i in idx}
    count = 0
    while stack:
        p, depth, payload = stack.pop()
        count += 1
        if cap is not None and count > cap:
            raise WeylCapError(f"Weyl enumeration exceeded cap of {cap} elements")
        yield WeylNode(p, depth, payload)
        if max_depth is not None and depth >= max_depth:
            continue
        for i in reversed(idx):
            if _dot(p, roots[i]) <= 0:
                continue
            shift = coweight_pairing(p, roots[i])
            child = tuple(a - shift * c for a, c in zip(p, coroots[i]))
            if datum.first_descent(child, idx) != i:
                continue
            stack.append((child, depth + 1, step(payload, i, shift)))


def weyl_order(datum: RootDatum, subset: Optional[Sequence[int]] = None, cap: Optional[int] = None) -> int:
    """Count W (or W_J) by walking orbit points only."""
    n = 0
    for _ in walk_weyl(datum, None, lambda _p, _i, _s: None, subset=subset, cap=cap):
        n += 1
    return n


def enumerate_weyl(
    datum: RootDatum,
    subset: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
) -> Iterator[WeylElement]:
    """Yield every Weyl element with its matrix, sign and a reduced word."""
    mats = [datum.reflection_matrix(i) for i in range(datum.rank)]
    n = datum.dim
    ident = tuple(tuple(Fraction(int(a == b)) for b in range(n)) for a in range(n))

    def step(payload: Tuple[Tuple[Tuple[Fraction, ...], ...], Tuple[int, ...]], i: int, _shift: int):
        mat, word = payload
        s = mats[i]
        rows = tuple(
            tuple(sum((s[a][k] * mat[k][b] for k in range(n) if s[a][k]), Fraction(0)) for b in range(n))
            for a in range(n)
        )
        return rows, (i,) + word

    for node in walk_weyl(datum, (ident, ()), step, subset=subset, cap=cap):
        mat, word = node.payload  # type: ignore[misc]
        yield WeylElement(mat, node.sign, word)


def delta_half_exponent(datum: RootDatum, lam: Weight) -> Fraction:
    """<rho, lam>; the value of delta_B^{1/2} on lam(varpi) is q^{<rho, lam>}."""
    _check_dims(datum.rho, lam.coords)
    return sum((r * Fraction(c, 2) for r, c in zip(datum.rho, lam.coords)), Fraction(0))


# -- dominant chamber ------------------------------------------------------


@dataclass(frozen=True)
class DominantForm:
    """Result of moving a coweight into the closed dominant chamber."""

    point: Coords
    sign: int
    word: Tuple[int, ...]
    # Simple root index fixing the point when it lies on a wall.
    fixing: Optional[int]

    @property
    def singular(self) -> bool:
        return self.fixing is not None


def dominant_reduction(datum: RootDatum, v: Sequence[int], subset: Optional[Sequence[int]] = None) -> DominantForm:
    """Reflect v into the dominant chamber of W (or W_J), recording the word.

    The sign is that of the element used. If the final point pairs to zero
    with a simple root, that reflection fixes it and the form is singular.
    """
    idx = list(subset) if subset is not None else list(range(datum.rank))
    roots = [(i, datum.simple_roots[i].root.coords) for i in idx]
    p = tuple(v)
    word: List[int] = []
    sign = 1
    moved = True
    while moved:
        moved = False
        for i, r in roots:
            if _dot(p, r) < 0:
                p = reflect_coords(r, p)
                word.append(i)
                sign = -sign
                moved = True
                break
    fixing = next((i for i, r in roots if _dot(p, r) == 0), None)
    return DominantForm(p, sign, tuple(word), fixing)
