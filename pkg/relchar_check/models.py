from __future__ import annotations

"""Spherical-pair data and the Theta+ decomposition.

A model carries its root datum, the weight multiset Theta of rho_X (weights
with the dimension of their weight space), the virtual colours of every
Type-T simple root, an optional torus constraint and the Gross motive
degree lists of G and H_0/Z.

Weights are compared modulo the torus constraint: when prod tau_i^{z_i} = 1
is imposed, two exponent vectors differing by a multiple of z evaluate
identically, so they are keyed by subtracting the multiple of z that clears
the pivot coordinate (the last i with z_i = +-1).
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .lattice import RootDatum, RootType, SimpleRoot, Weight, reflect_coords, render_coords
from .ratfun import RatFun, SatakePoint, l_eta_factor, torus_names, zeta_factor
from .validators import ConstraintError, ModelDataError, UniquenessError, PoleError, format_rational

__all__ = [
    "MotiveFactor",
    "IAlphaKind",
    "ModelSpec",
    "ThetaPlus",
    "Reduction",
    "theta_plus",
    "brute_force_theta_plus",
    "delta_ratio",
    "render_factors",
    "delta_value",
    "expected_constant",
    "random_point",
    "complete_point",
    "check_point",
]

Coords = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class MotiveFactor:
    """zeta(d), or L(d, eta) when twisted by the quadratic character of E/F."""

    twisted: bool
    degree: int

    def render(self) -> str:
        return f"L({self.degree},η)" if self.twisted else f"ζ({self.degree})"

    def value(self, names: Sequence[str]) -> RatFun:
        return l_eta_factor(names, self.degree) if self.twisted else zeta_factor(names, self.degree)

    @property
    def token(self) -> str:
        return f"L{self.degree}" if self.twisted else str(self.degree)

    @classmethod
    def parse(cls, token: str) -> "MotiveFactor":
        tok = token.strip()
        if tok.startswith("L"):
            return cls(True, int(tok[1:]))
        return cls(False, int(tok))


class IAlphaKind:
    """Closed-form family of the rank-one integral I_alpha."""

    SPLIT = "split"
    UNITARY_TWO = "unitary-2"
    UNITARY_ONE = "unitary-1"
    UPSI = "u-psi"


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    title: str
    rho_x: str
    datum: RootDatum
    theta: Tuple[Weight, ...]
    # Type-T root name -> (beta, alpha^vee - beta), or (beta,) when they coincide.
    colors: Dict[str, Tuple[Weight, ...]]
    degrees_g: Tuple[MotiveFactor, ...]
    degrees_h: Tuple[MotiveFactor, ...]
    torus_degrees: Tuple[int, ...]
    constraint: Optional[Coords] = None
    table_delta: str = ""
    delta_erratum: str = ""
    rho_dim: int = 0
    golden_theta_plus: Tuple[Weight, ...] = ()
    unitary: bool = False
    notes: Tuple[str, ...] = ()

    # -- coordinates ------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.datum.dim

    @property
    def names(self) -> Tuple[str, ...]:
        return torus_names(self.dim)

    @property
    def pivot(self) -> Optional[int]:
        if self.constraint is None:
            return None
        for i in reversed(range(len(self.constraint))):
            if self.constraint[i] in (1, -1):
                return i
        raise ModelDataError(f"{self.name}: constraint has no +-1 entry")

    def key(self, coords: Sequence[int]) -> Coords:
        """Representative of coords modulo the torus constraint."""
        c = tuple(coords)
        p = self.pivot
        if p is None or c[p] == 0:
            return c
        z = self.constraint
        m = c[p] * z[p]  # type: ignore[index]
        return tuple(a - m * b for a, b in zip(c, z))  # type: ignore[arg-type]

    def render(self, coords: Sequence[int]) -> str:
        return render_coords(tuple(coords), self.datum.basis)

    # -- derived data -----------------------------------------------------

    def theta_index(self) -> Dict[Coords, int]:
        index: Dict[Coords, int] = {}
        for i, w in enumerate(self.theta):
            k = self.key(w.coords)
            if k in index:
                raise ModelDataError(f"{self.name}: weight {w.coords} repeated in Theta")
            index[k] = i
        return index

    @property
    def theta_dimension(self) -> int:
        """dim rho_X counted with weight-space dimensions."""
        return sum(w.degree for w in self.theta)

    def simple(self, name: str) -> SimpleRoot:
        return self.datum.simple_roots[self.datum.index(name)]

    def ialpha_kind(self, name: str) -> str:
        sr = self.simple(name)
        if sr.kind == RootType.U_PSI:
            return IAlphaKind.UPSI
        cols = self.colors.get(name)
        if not cols:
            raise ModelDataError(f"{self.name}: Type-T root {name} has no colours")
        if len(cols) == 1:
            return IAlphaKind.UNITARY_ONE
        return IAlphaKind.UNITARY_TWO if sr.degree == 2 else IAlphaKind.SPLIT

    def check(self) -> None:
        """Static consistency of the catalog entry."""
        self.datum.check_cartan()
        index = self.theta_index()
        for w in self.theta:
            if w.dim != self.dim:
                raise ModelDataError(f"{self.name}: weight {w.coords} has wrong dimension")
        if self.rho_dim and self.theta_dimension != self.rho_dim:
            raise ModelDataError(f"{self.name}: Theta has dimension {self.theta_dimension}, expected {self.rho_dim}")
        if self.constraint is not None:
            for sr in self.datum.simple_roots:
                if sum(a * b for a, b in zip(sr.root.coords, self.constraint)):
                    raise ModelDataError(f"{self.name}: constraint is not orthogonal to {sr.name}")
        for i, sr in enumerate(self.datum.simple_roots):
            for w in self.theta:
                if self.key(reflect_coords(sr.root.coords, w.coords)) not in index:
                    raise ModelDataError(f"{self.name}: Theta is not stable under s_{sr.name}")
            if sr.kind == RootType.T:
                cols = self.colors.get(sr.name)
                if not cols:
                    raise ModelDataError(f"{self.name}: Type-T root {sr.name} has no colours")
                for c in cols:
                    if self.key(c.coords) not in index:
                        raise ModelDataError(f"{self.name}: colour {self.render(c.coords)} of {sr.name} not in Theta")
                total = [0] * self.dim
                for c in cols:
                    for j, x in enumerate(c.coords):
                        total[j] += x
                if len(cols) == 2 and self.key(total) != self.key(sr.coroot.coords):
                    raise ModelDataError(f"{self.name}: colours of {sr.name} do not sum to its coroot")
                if len(cols) == 1 and self.key(cols[0].coords) != self.key(sr.coroot.coords):
                    raise ModelDataError(f"{self.name}: single colour of {sr.name} is not its coroot")
            elif sr.name in self.colors:
                raise ModelDataError(f"{self.name}: (U,psi) root {sr.name} must not carry colours")


@dataclass(frozen=True)
class ThetaPlus:
    elements: Tuple[Weight, ...]

    def keys(self, model: ModelSpec) -> FrozenSet[Coords]:
        return frozenset(model.key(w.coords) for w in self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def render(self, model: ModelSpec) -> List[str]:
        return [model.render(w.coords) for w in self.elements]


@dataclass(frozen=True)
class Reduction:
    """A Weyl-sum reduction: the outer group (or the whole W) over a parabolic subgroup W_J.

    Root sets are given by simple-root names; `outer` None means all of W.
    """

    name: str
    model: str
    inner: Tuple[str, ...]
    outer: Optional[Tuple[str, ...]] = None
    golden_theta1: Tuple[str, ...] = ()
    description: str = ""

    def inner_indices(self, datum: RootDatum) -> Tuple[int, ...]:
        return tuple(datum.index(n) for n in self.inner)

    def outer_indices(self, datum: RootDatum) -> Optional[Tuple[int, ...]]:
        if self.outer is None:
            return None
        return tuple(datum.index(n) for n in self.outer)


# -- Theta+ closure -----------------------------------------------------------


def _reflect_key(model: ModelSpec, root: Coords, key: Coords) -> Coords:
    return model.key(reflect_coords(root, key))


def theta_plus(model: ModelSpec, subset: Optional[Sequence[int]] = None) -> ThetaPlus:
    """Smallest subset of Theta generated from the colours by the reflection rules.

    (U,psi) roots add w_alpha(gamma) for every member; Type-T roots add
    w_alpha(gamma) for every member that is not one of that root's colours.
    With `subset`, only those simple roots take part (Levi closure).
    """
    index = model.theta_index()
    roots = list(range(model.datum.rank)) if subset is None else list(subset)
    colour_keys: Dict[int, FrozenSet[Coords]] = {}
    members: Dict[Coords, Weight] = {}
    for i in roots:
        sr = model.datum.simple_roots[i]
        if sr.kind != RootType.T:
            continue
        ks = frozenset(model.key(c.coords) for c in model.colors.get(sr.name, ()))
        colour_keys[i] = ks
        for k in ks:
            if k not in index:
                raise ModelDataError(f"{model.name}: colour {model.render(k)} not in Theta")
            members[k] = model.theta[index[k]]

    frontier = list(members)
    while frontier:
        nxt: List[Coords] = []
        for k in frontier:
            for i in roots:
                sr = model.datum.simple_roots[i]
                if sr.kind == RootType.T and k in colour_keys[i]:
                    continue
                img = _reflect_key(model, sr.root.coords, k)
                if img not in index:
                    raise ModelDataError(f"{model.name}: closure left Theta at {model.render(img)}")
                if img not in members:
                    members[img] = model.theta[index[img]]
                    nxt.append(img)
        frontier = nxt

    _verify_theta_plus(model, frozenset(members), roots, colour_keys, full=subset is None)
    return ThetaPlus(tuple(sorted(members.values(), reverse=True)))


def _verify_theta_plus(
    model: ModelSpec,
    keys: FrozenSet[Coords],
    roots: Sequence[int],
    colour_keys: Dict[int, FrozenSet[Coords]],
    full: bool,
) -> None:
    for i in roots:
        sr = model.datum.simple_roots[i]
        image = frozenset(_reflect_key(model, sr.root.coords, k) for k in keys)
        if sr.kind == RootType.T:
            if keys - image != colour_keys[i]:
                lost = sorted(model.render(k) for k in keys - image)
                raise ModelDataError(f"{model.name}: Theta+ minus s_{sr.name}(Theta+) is {lost}, not the colours")
        elif image != keys:
            raise ModelDataError(f"{model.name}: Theta+ is not stable under (U,psi) root {sr.name}")
    if not full:
        return
    index = model.theta_index()
    negatives = frozenset(model.key(tuple(-c for c in k)) for k in keys)
    if keys & negatives:
        raise ModelDataError(f"{model.name}: Theta+ meets -Theta+")
    if keys | negatives != frozenset(index):
        raise ModelDataError(f"{model.name}: Theta+ and -Theta+ do not cover Theta")
    plus_dim = sum(model.theta[index[k]].degree for k in keys)
    if 2 * plus_dim != model.theta_dimension:
        raise ModelDataError(f"{model.name}: |Theta+| is not half of |Theta|")


def brute_force_theta_plus(model: ModelSpec, full_limit: int = 16, transversal_limit: int = 32) -> ThetaPlus:
    """Exhaustive search for the unique minimal subset satisfying the colour conditions.

    Up to `full_limit` weights every subset is tried; up to
    `transversal_limit` only subsets holding exactly one of each +-pair.
    """
    index = model.theta_index()
    keys = sorted(index)
    pos = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    perms: List[Tuple[int, ...]] = []
    conds: List[Tuple[bool, int]] = []
    for sr in model.datum.simple_roots:
        perms.append(tuple(pos[_reflect_key(model, sr.root.coords, k)] for k in keys))
        if sr.kind == RootType.T:
            mask = 0
            for c in model.colors[sr.name]:
                mask |= 1 << pos[model.key(c.coords)]
            conds.append((True, mask))
        else:
            conds.append((False, 0))
    required = 0
    for is_t, mask in conds:
        if is_t:
            required |= mask

    def image(mask: int, perm: Tuple[int, ...]) -> int:
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= 1 << perm[low.bit_length() - 1]
            m ^= low
        return out

    def satisfies(mask: int) -> bool:
        if mask & required != required:
            return False
        for perm, (is_t, cmask) in zip(perms, conds):
            img = image(mask, perm)
            if is_t:
                if mask & ~img != cmask:
                    return False
            elif img != mask:
                return False
        return True

    if n <= full_limit:
        candidates = (m for m in range(1 << n))
    elif n <= transversal_limit:
        neg = [pos[model.key(tuple(-c for c in k))] for k in keys]
        pairs = sorted({(min(i, neg[i]), max(i, neg[i])) for i in range(n)})
        if any(a == b for a, b in pairs) or len(pairs) * 2 != n:
            raise ModelDataError(f"{model.name}: Theta is not a union of +-pairs")

        def transversals():
            for bits in itertools.product((0, 1), repeat=len(pairs)):
                m = 0
                for (a, b), bit in zip(pairs, bits):
                    m |= 1 << (b if bit else a)
                yield m

        candidates = transversals()
    else:
        raise ModelDataError(f"{model.name}: |Theta| = {n} is too large for exhaustive search")

    solutions = [m for m in candidates if satisfies(m)]
    minimal = [m for m in solutions if not any(o != m and o & m == o for o in solutions)]
    if len(minimal) != 1:
        raise UniquenessError(f"{model.name}: {len(minimal)} minimal solutions found")
    chosen = minimal[0]
    return ThetaPlus(tuple(sorted((model.theta[index[keys[i]]] for i in range(n) if chosen >> i & 1), reverse=True)))


# -- motive factors -------------------------------------------------------------


def delta_ratio(model: ModelSpec) -> List[MotiveFactor]:
    """Multiset difference Delta_G / Delta_{H_0/Z} of the degree lists."""
    remaining = Counter(model.degrees_g)
    for f in model.degrees_h:
        if remaining[f] == 0:
            raise ModelDataError(f"{model.name}: {f.render()} of H_0/Z does not occur in G")
        remaining[f] -= 1
    return sorted(remaining.elements())


def render_factors(factors: Iterable[MotiveFactor]) -> str:
    """Render like 'ζ(1)²ζ(4)L(1,η)'."""
    counts = Counter(factors)
    sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
    out = []
    for f in sorted(counts):
        exp = counts[f]
        out.append(f.render() + (str(exp).translate(sup) if exp > 1 else ""))
    return "".join(out)


def delta_value(model: ModelSpec) -> RatFun:
    value = RatFun.const(model.names, 1)
    for f in delta_ratio(model):
        value = value * f.value(model.names)
    return value


def expected_constant(model: ModelSpec) -> RatFun:
    """1/Delta_{H_0/Z}(1) as a rational function of u."""
    value = RatFun.const(model.names, 1)
    for f in model.degrees_h:
        value = value / f.value(model.names)
    return value


# -- points ---------------------------------------------------------------------


def check_point(model: ModelSpec, point: SatakePoint) -> None:
    if point.dim != model.dim:
        raise ConstraintError(f"{model.name}: point has {point.dim} coordinates, expected {model.dim}")
    if model.constraint is None:
        return
    value = Fraction(1)
    for t, z in zip(point.tau, model.constraint):
        if z:
            value *= t ** z
    if value != 1:
        raise ConstraintError(
            f"{model.name}: point violates the torus constraint (product is {format_rational(value)})"
        )


def complete_point(model: ModelSpec, tau: Dict[int, Fraction], u: Fraction) -> SatakePoint:
    """Fill unassigned coordinates with 1, solving the pivot from the constraint if it is free."""
    p = model.pivot
    values = [Fraction(tau.get(i, 1)) for i in range(model.dim)]
    if any(i >= model.dim or i < 0 for i in tau):
        raise ConstraintError(f"{model.name}: coordinate index out of range")
    if p is not None and p not in tau:
        z = model.constraint
        rest = Fraction(1)
        for i, (t, e) in enumerate(zip(values, z)):  # type: ignore[arg-type]
            if i != p and e:
                if t == 0:
                    raise PoleError("tau coordinates must be nonzero")
                rest *= t ** e
        values[p] = rest ** (-z[p])  # type: ignore[index]
    point = SatakePoint(tuple(values), Fraction(u))
    check_point(model, point)
    return point


def _random_rational(rng: np.random.Generator, bound: int) -> Fraction:
    num = 0
    while num == 0:
        num = int(rng.integers(-bound, bound + 1))
    den = int(rng.integers(1, bound + 1))
    return Fraction(num, den)


def random_point(model: ModelSpec, rng: np.random.Generator, bound: int) -> SatakePoint:
    """Random constraint-respecting point with small numerators and denominators."""
    tau = {i: _random_rational(rng, bound) for i in range(model.dim) if i != model.pivot}
    u = _random_rational(rng, bound)
    return complete_point(model, tau, u)
