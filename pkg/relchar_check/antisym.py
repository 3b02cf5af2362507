from __future__ import annotations

"""Weyl-sum reductions and antisymmetrization vanishing checks.

Design:
- A reduction splits Theta_outer+ into the inner Levi's closure and the rest
  (Theta_1+). The rest must be W_J-stable, so the outer sum factors as a sum
  over W_outer/W_J times the inner constant.
- The claim that the coset sum equals 1 is checked two ways: as an exact
  sum over the orbit of (Theta_1+, Phi_1+) at sampled points, and
  symbolically by antisymmetrizing e^{-rho^vee} prod_{Theta_1+}(1 - u^deg e^gamma)
  power by power in u.
- Every surviving monomial is reported with its exponent vector; strict
  callers get an AntisymDiscrepancy.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .config import DEFAULT_WEYL_CAP, FULL_ANTISYM_LIMIT, SUBGROUP_MODE_TERM_BUDGET
from .lattice import Weight, parse_weight, reflect_coords, weyl_order
from .models import ModelSpec, Reduction, expected_constant, theta_plus
from .ratfun import SatakePoint, eval_coords
from .validators import AntisymDiscrepancy, ModelDataError, PoleError, WeylCapError, format_rational
from .weylsum import (
    AntisymTable,
    alternant_value,
    antisymmetrize,
    expand_factors,
    model_theta_plus,
    multiply_terms,
    weyl_denominator_terms,
)

__all__ = [
    "AntisymMode",
    "ReductionData",
    "reduction_data",
    "coset_orbit",
    "coset_value",
    "ChainRow",
    "CosetReport",
    "coset_reduction_check",
    "PowerRow",
    "AntisymReport",
    "antisym_vanish_check",
    "full_antisym",
]

Coords = Tuple[int, ...]
OrbitState = Tuple[FrozenSet[Coords], FrozenSet[Coords]]


class AntisymMode(Enum):
    """What is antisymmetrized, and hence which constant should survive."""

    COSET = "coset"  # Theta_1+ over W_outer; constant 1
    SUBGROUP = "subgroup"  # Theta_1+ times the W_J denominator; constant |W_J|
    FULL = "full"  # all of Theta+ over W; the model constant


@dataclass(frozen=True)
class ReductionData:
    reduction: Reduction
    outer: Optional[Tuple[int, ...]]
    inner: Tuple[int, ...]
    theta_outer: Tuple[Weight, ...]
    theta_inner: Tuple[Weight, ...]
    theta1: Tuple[Weight, ...]
    phi1: Tuple[Weight, ...]


def _keys(model: ModelSpec, weights: Sequence[Weight]) -> FrozenSet[Coords]:
    return frozenset(model.key(w.coords) for w in weights)


def reduction_data(model: ModelSpec, red: Reduction) -> ReductionData:
    """Split Theta_outer+ along the reduction and validate the split."""
    datum = model.datum
    outer = red.outer_indices(datum)
    inner = red.inner_indices(datum)
    if outer is not None and not set(inner) <= set(outer):
        raise ModelDataError(f"{red.name}: inner roots {red.inner} are not among the outer roots {red.outer}")

    theta_outer = model_theta_plus(model).elements if outer is None else theta_plus(model, outer).elements
    theta_inner = theta_plus(model, inner).elements
    inner_keys = _keys(model, theta_inner)
    if not inner_keys <= _keys(model, theta_outer):
        raise ModelDataError(f"{red.name}: the inner closure is not contained in the outer one")
    theta1 = tuple(g for g in theta_outer if model.key(g.coords) not in inner_keys)

    t1 = _keys(model, theta1)
    for i in inner:
        root = datum.simple_roots[i].root.coords
        if any(model.key(reflect_coords(root, k)) not in t1 for k in t1):
            raise ModelDataError(f"{red.name}: Theta_1+ is not stable under {datum.simple_roots[i].name}")

    if red.golden_theta1:
        golden = frozenset(model.key(parse_weight(e, datum.basis).coords) for e in red.golden_theta1)
        if golden != t1:
            missing = sorted(model.render(k) for k in golden - t1)
            extra = sorted(model.render(k) for k in t1 - golden)
            raise ModelDataError(f"{red.name}: Theta_1+ differs from the recorded set (missing {missing}, extra {extra})")

    outer_coroots = datum.restrict(outer).positive_coroots if outer is not None else datum.positive_coroots
    inner_coroots = {model.key(a.coords) for a in datum.restrict(inner).positive_coroots}
    phi1 = tuple(a for a in outer_coroots if model.key(a.coords) not in inner_coroots)
    return ReductionData(red, outer, inner, theta_outer, theta_inner, theta1, phi1)


# -- exact coset sums -------------------------------------------------------------


def _orbit_of(model: ModelSpec, start: Tuple[FrozenSet[Coords], ...], indices: Sequence[int]) -> List[Tuple[FrozenSet[Coords], ...]]:
    roots = [model.datum.simple_roots[i].root.coords for i in indices]
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for r in roots:
            moved = tuple(frozenset(model.key(reflect_coords(r, k)) for k in part) for part in state)
            if moved not in seen:
                seen.add(moved)
                order.append(moved)
                queue.append(moved)
    return order


def _marker_orbit_size(model: ModelSpec, marker: Coords, indices: Sequence[int]) -> int:
    """Orbit size of an unkeyed coweight under the reflections in indices."""
    roots = [model.datum.simple_roots[i].root.coords for i in indices]
    seen = {marker}
    queue = deque([marker])
    while queue:
        v = queue.popleft()
        for r in roots:
            moved = reflect_coords(r, v)
            if moved not in seen:
                seen.add(moved)
                queue.append(moved)
    return len(seen)


def coset_orbit(model: ModelSpec, data: ReductionData) -> List[OrbitState]:
    """W_outer-orbit of (Theta_1+, Phi_1+); its size must be |W_outer / W_J|."""
    datum = model.datum
    indices = data.outer if data.outer is not None else tuple(range(datum.rank))
    start = (_keys(model, data.theta1), _keys(model, data.phi1))
    orbit = _orbit_of(model, start, indices)

    # rho_outer^vee - rho_J^vee is dominant with stabilizer exactly W_J. It is
    # reflected unkeyed and scaled by 4 so every image stays in the doubled lattice.
    outer_rho = datum.restrict(indices).rho_vee.coords
    inner_rho = datum.restrict(data.inner).rho_vee.coords
    marker = tuple(4 * (a - b) for a, b in zip(outer_rho, inner_rho))
    expected = _marker_orbit_size(model, marker, indices)
    if len(orbit) != expected:
        raise ModelDataError(
            f"{data.reduction.name}: orbit of (Theta_1+, Phi_1+) has {len(orbit)} elements, expected {expected}"
        )
    return orbit  # type: ignore[return-value]


def coset_value(model: ModelSpec, orbit: Sequence[OrbitState], point: SatakePoint) -> Fraction:
    """sum over the orbit of prod_S(1 - u^deg e^gamma) / prod_P(1 - e^{alpha^vee})."""
    degree = {model.key(g.coords): g.degree for g in model.theta}
    u = point.u
    total = Fraction(0)
    for thetas, coroots in orbit:
        num = Fraction(1)
        for k in thetas:
            num *= 1 - u ** degree[k] * eval_coords(k, point)
        den = Fraction(1)
        for k in coroots:
            den *= 1 - eval_coords(k, point)
        if den == 0:
            raise PoleError(f"{model.name}: coset denominator vanishes at the point")
        total += num / den
    return total


@dataclass
class ChainRow:
    point: SatakePoint
    coset: Fraction
    inner: Fraction
    outer: Optional[Fraction] = None

    @property
    def coset_ok(self) -> bool:
        return self.coset == 1

    @property
    def chain_ok(self) -> bool:
        return self.outer is None or self.outer == self.coset * self.inner

    @property
    def ok(self) -> bool:
        return self.coset_ok and self.chain_ok

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "point": self.point.to_dict(),
            "coset": format_rational(self.coset),
            "inner": format_rational(self.inner),
        }
        if self.outer is not None:
            out["outer"] = format_rational(self.outer)
        return out


@dataclass
class CosetReport:
    reduction: str
    orbit_size: int
    theta1: List[str]
    rows: List[ChainRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.rows) and all(r.ok for r in self.rows)


def coset_reduction_check(
    model: ModelSpec,
    red: Reduction,
    points: Sequence[SatakePoint],
    with_outer: bool = True,
    jobs: int = 1,
    cap: int = DEFAULT_WEYL_CAP,
) -> CosetReport:
    """Coset sum (expected 1) and, optionally, outer = coset * inner at each point."""
    data = reduction_data(model, red)
    orbit = coset_orbit(model, data)
    report = CosetReport(red.name, len(orbit), sorted(model.render(g.coords) for g in data.theta1))
    for point in points:
        coset = coset_value(model, orbit, point)
        inner = alternant_value(model, point, data.theta_inner, subset=data.inner, jobs=jobs, cap=cap)
        outer = None
        if with_outer:
            outer = alternant_value(model, point, data.theta_outer, subset=data.outer, jobs=jobs, cap=cap)
        report.rows.append(ChainRow(point, coset, inner, outer))
    return report


# -- antisymmetrization by powers of u --------------------------------------------


@dataclass
class PowerRow:
    power: int
    monomials: int
    eliminated: int
    survivors: List[str]
    coefficient: Fraction
    expected: Fraction

    @property
    def ok(self) -> bool:
        return not self.survivors and self.coefficient == self.expected

    def to_dict(self) -> Dict[str, object]:
        return {
            "power": self.power,
            "monomials": self.monomials,
            "eliminated": self.eliminated,
            "survivors": self.survivors,
            "coefficient": format_rational(self.coefficient),
            "expected": format_rational(self.expected),
        }


@dataclass
class AntisymReport:
    name: str
    mode: AntisymMode
    monomials: int
    rows: List[PowerRow] = field(default_factory=list)
    table: Optional[AntisymTable] = None

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def first_discrepancy(self) -> Optional[PowerRow]:
        return next((r for r in self.rows if not r.ok), None)

    def raise_for_discrepancy(self) -> None:
        row = self.first_discrepancy()
        if row is None:
            return
        if row.survivors:
            raise AntisymDiscrepancy(f"{self.name}: u^{row.power} keeps the monomial e^({row.survivors[0]})")
        raise AntisymDiscrepancy(
            f"{self.name}: u^{row.power} coefficient at rho^vee is {format_rational(row.coefficient)}, "
            f"expected {format_rational(row.expected)}"
        )


def _report(
    model: ModelSpec,
    name: str,
    mode: AntisymMode,
    terms: Dict[Tuple[Coords, int], Fraction],
    table: AntisymTable,
    expected: Dict[int, Fraction],
) -> AntisymReport:
    per_power: Dict[int, int] = {}
    for _, e in terms:
        per_power[e] = per_power.get(e, 0) + 1
    leading = table.leading()
    survivors = table.survivors()
    report = AntisymReport(name, mode, table.monomials, table=table)
    for e in sorted(set(per_power) | set(table.powers()) | set(expected)):
        report.rows.append(PowerRow(
            power=e,
            monomials=per_power.get(e, 0),
            eliminated=len(table.eliminated.get(e, {})),
            survivors=[model.render(lam) for lam in survivors.get(e, [])],
            coefficient=leading.get(e, Fraction(0)),
            expected=expected.get(e, Fraction(0)),
        ))
    return report


def antisym_vanish_check(
    model: ModelSpec,
    red: Reduction,
    mode: AntisymMode = AntisymMode.COSET,
    strict: bool = False,
    budget: int = SUBGROUP_MODE_TERM_BUDGET,
) -> AntisymReport:
    """Antisymmetrize the coset numerator over W_outer and check what survives.

    In coset mode only rho^vee may survive, with coefficient 1 at u^0. In
    subgroup mode the W_J Weyl denominator is multiplied in first and the
    surviving constant is |W_J|.
    """
    if mode == AntisymMode.FULL:
        raise ValueError("use full_antisym for the full Theta+ expansion")
    datum = model.datum
    data = reduction_data(model, red)
    indices = data.outer if data.outer is not None else tuple(range(datum.rank))
    start = tuple(-a for a in datum.restrict(indices).rho_vee.coords)
    terms = expand_factors(start, [(g.coords, g.degree) for g in data.theta1], model.key)
    expected = {0: Fraction(1)}
    if mode == AntisymMode.SUBGROUP:
        order = weyl_order(datum, data.inner)
        if order * len(terms) > budget:
            raise WeylCapError(f"{red.name}: subgroup mode needs {order * len(terms)} terms, budget is {budget}")
        terms = multiply_terms(terms, weyl_denominator_terms(datum, data.inner, model.key), model.key)
        expected = {0: Fraction(order)}
    table = antisymmetrize(datum, terms, model.key, data.outer)
    report = _report(model, red.name, mode, terms, table, expected)
    if strict:
        report.raise_for_discrepancy()
    return report


def _expected_powers(model: ModelSpec) -> Dict[int, Fraction]:
    order = sum(2 * f.degree for f in model.degrees_h)
    u = len(model.names) - 1
    series = expected_constant(model).series([u], order)
    return {k[u]: c for k, c in series.terms.items()}


def full_antisym(model: ModelSpec, strict: bool = False, limit: int = FULL_ANTISYM_LIMIT) -> AntisymReport:
    """Antisymmetrize e^{-rho^vee} prod_{Theta+}(1 - u^deg e^gamma) over all of W."""
    tp = model_theta_plus(model).elements
    if len(tp) > limit:
        raise ValueError(f"{model.name}: |Theta+| = {len(tp)} exceeds the full expansion limit {limit}")
    datum = model.datum
    start = tuple(-a for a in datum.rho_vee.coords)
    terms = expand_factors(start, [(g.coords, g.degree) for g in tp], model.key)
    table = antisymmetrize(datum, terms, model.key)
    report = _report(model, model.name, AntisymMode.FULL, terms, table, _expected_powers(model))
    if strict:
        report.raise_for_discrepancy()
    return report
