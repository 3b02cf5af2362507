from __future__ import annotations

"""Sums over the Weyl group.

Design:
- Everything is exact: Fraction at the interface, gmpy2 rationals inside
  the fold.
- The full sum of c_WS(w.theta) is evaluated as an alternant. One streamed
  walk over W carries the Theta index set of v.Theta+ and the value of
  e^{-v.rho^vee}; no Weyl matrices are built.
- Large groups are cut at a frontier depth of the walk. Each subtree is
  folded in a worker process; partial sums come back as gmpy2 binaries and
  are combined in submission order.
- Small groups additionally get a literal per-element sum and a symbolic
  sum by antisymmetrization, used as cross-checks.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpq
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from .config import DEFAULT_MAX_RESAMPLE, DEFAULT_SAMPLE_BOUND, DEFAULT_WEYL_CAP, DIRECT_SUM_LIMIT, SYMBOLIC_WEYL_LIMIT
from .lattice import (
    RootDatum,
    Weight,
    WeylElement,
    WeylNode,
    coweight_pairing,
    delta_half_exponent,
    dominant_reduction,
    enumerate_weyl,
    reflect_coords,
    walk_weyl,
    weyl_order,
)
from .models import IAlphaKind, ModelSpec, ThetaPlus, check_point, delta_value, expected_constant, random_point, theta_plus
from .ratfun import LaurentPoly, RatFun, SatakePoint, eval_coords, zeta_factor
from .validators import AssemblyError, ConstraintError, PoleError, WeylCapError, format_rational

__all__ = [
    "model_theta_plus",
    "act",
    "inverse_element",
    "delta_point",
    "check_generic",
    "sample_points",
    "c_ws",
    "weyl_sum_value",
    "alternant_value",
    "weyl_sum_literal",
    "random_weyl_images",
    "PointCheck",
    "ConstantReport",
    "weyl_sum_constant",
    "AntisymTable",
    "expand_factors",
    "multiply_terms",
    "weyl_denominator_terms",
    "antisymmetrize",
    "weyl_sum_symbolic",
    "beta",
    "i_alpha",
    "BRatioRow",
    "b_ratio_consistency",
    "ws_value",
    "iwahori_volume",
    "RelcharValue",
    "relchar",
]

Coords = Tuple[int, ...]
# (weight, power of u) -> coefficient
Terms = Dict[Tuple[Coords, int], Fraction]


@lru_cache(maxsize=None)
def model_theta_plus(model: ModelSpec) -> ThetaPlus:
    return theta_plus(model)


def inverse_element(w: WeylElement) -> WeylElement:
    """w^{-1}; Weyl matrices are orthogonal in model coordinates."""
    n = len(w.matrix)
    return WeylElement(tuple(tuple(w.matrix[b][a] for b in range(n)) for a in range(n)), w.sign, w.word[::-1])


def act(w: WeylElement, point: SatakePoint) -> SatakePoint:
    """The point w.theta, for which e^gamma(w.theta) = e^{w^{-1} gamma}(theta)."""
    return point.twisted(inverse_element(w).matrix)


def _neg(v: Sequence[int]) -> Coords:
    return tuple(-a for a in v)


def _add(a: Sequence[int], b: Sequence[int]) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _to_fraction(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _to_mpq(v: Fraction) -> mpq:
    return mpq(v.numerator, v.denominator)


# -- points ---------------------------------------------------------------------


def delta_point(model: ModelSpec, base: int = 3) -> SatakePoint:
    """theta = delta_B^{1/2}: e^gamma(theta) = q^{<rho, gamma>} at q = base^4."""
    u = Fraction(1, base * base)
    tau = tuple(Fraction(base) ** int(2 * r) for r in model.datum.rho)
    point = SatakePoint(tau, u)
    check_point(model, point)
    return point


def check_generic(model: ModelSpec, point: SatakePoint) -> None:
    """Raise PoleError unless every factor the sums divide by is nonzero at every w.theta.

    Theta and the roots are W-stable, so testing the point itself covers
    all of its Weyl images. The rank-one integrals are tested at theta and at
    each simple reflection of it.
    """
    u = point.u
    if u * u in (0, 1):
        raise PoleError(f"{model.name}: q = u^-2 must differ from 1 (u = {u})")
    for a in model.datum.positive_coroots:
        x = eval_coords(a.coords, point)
        if x == 1:
            raise PoleError(f"{model.name}: e^(alpha^vee) = 1 at a sampled point")
        k = u ** (2 * a.degree)
        if k * x == 1 or k == x:
            raise PoleError(f"{model.name}: root factor vanishes at a sampled point")
    for g in model.theta:
        x = eval_coords(g.coords, point)
        for e in {g.degree, 2}:
            k = u**e
            if k * x == 1 or k == x:
                raise PoleError(f"{model.name}: Theta factor vanishes at a sampled point")
    for i, sr in enumerate(model.datum.simple_roots):
        for at in (point, point.twisted(model.datum.reflection_matrix(i))):
            if i_alpha(model, sr.name, at) == 0:
                raise PoleError(f"{model.name}: I_{sr.name} vanishes at a sampled point")


def sample_points(
    model: ModelSpec,
    count: int,
    seed: int,
    bound: int = DEFAULT_SAMPLE_BOUND,
    max_resample: int = DEFAULT_MAX_RESAMPLE,
) -> List[SatakePoint]:
    """Seeded constraint-respecting points, each redrawn until pole-free."""
    rng = np.random.default_rng(seed)

    @retry(stop=stop_after_attempt(max_resample), retry=retry_if_exception_type(PoleError), reraise=True)
    def draw() -> SatakePoint:
        point = random_point(model, rng, bound)
        check_generic(model, point)
        return point

    return [draw() for _ in range(count)]


# -- c_WS and the Weyl sum --------------------------------------------------------


def _theta_product(elements: Iterable[Weight], point: SatakePoint) -> Fraction:
    out = Fraction(1)
    for g in elements:
        out *= 1 - point.u**g.degree * eval_coords(g.coords, point)
    return out


def c_ws(model: ModelSpec, w: WeylElement, point: SatakePoint) -> Fraction:
    """c_WS(w.theta) = prod_{Theta+}(1 - u^deg e^gamma) / prod_{Phi+}(1 - e^{alpha^vee}) at w.theta."""
    at = act(w, point)
    num = _theta_product(model_theta_plus(model).elements, at)
    den = Fraction(1)
    for a in model.datum.positive_coroots:
        den *= 1 - eval_coords(a.coords, at)
    if den == 0:
        raise PoleError(f"{model.name}: c_WS denominator vanishes at w.theta (word {w.word})")
    return num / den


@lru_cache(maxsize=None)
def _theta_perms(model: ModelSpec) -> Tuple[Tuple[int, ...], ...]:
    """perm[i][j] = index in Theta of s_i(theta_j)."""
    index = model.theta_index()
    perms = []
    for sr in model.datum.simple_roots:
        perms.append(tuple(index[model.key(reflect_coords(sr.root.coords, g.coords))] for g in model.theta))
    return tuple(perms)


class _AlternantFold:
    """Walk step and term of sum_v sgn(v) e^{v(lam - rho^vee)} prod_{v.Theta+}(1 - u^deg e^gamma).

    The payload is (Theta indices of v.Theta+, running exponential, v.lam or
    None). `factors[j]` is 1 - u^deg e^{theta_j}, `ratios[i]` is e^{alpha_i^vee}.
    """

    def __init__(
        self,
        datum: RootDatum,
        perms: Sequence[Sequence[int]],
        factors: Sequence[mpq],
        ratios: Sequence[mpq],
        subset: Optional[Tuple[int, ...]] = None,
    ):
        self.datum = datum
        self.subset = subset
        self.longest = (datum.restrict(subset) if subset is not None else datum).longest_length
        self.perms = [tuple(p) for p in perms]
        self.factors = list(factors)
        self.ratios = list(ratios)
        self.inverses = [1 / r for r in self.ratios]
        self.roots = [sr.root.coords for sr in datum.simple_roots]
        self.coroots = [sr.coroot.coords for sr in datum.simple_roots]

    def step(self, payload: Tuple[Tuple[int, ...], mpq, Optional[Coords]], i: int, shift: int):
        idx, x, lam = payload
        perm = self.perms[i]
        idx = tuple(perm[j] for j in idx)
        x = x * self.ratios[i] ** shift
        if lam is not None:
            k = coweight_pairing(lam, self.roots[i])
            if k:
                lam = tuple(a - k * c for a, c in zip(lam, self.coroots[i]))
                x = x * (self.inverses[i] ** k if k > 0 else self.ratios[i] ** -k)
        return idx, x, lam

    def walk(self, root: object, cap: int, start=None, max_depth: Optional[int] = None):
        return walk_weyl(self.datum, root, self.step, subset=self.subset, cap=cap, start=start, max_depth=max_depth)

    def term(self, node: WeylNode) -> mpq:
        idx, x, _ = node.payload  # type: ignore[misc]
        t = x
        for j in idx:
            t *= self.factors[j]
        return t if node.sign > 0 else -t

    # -- wire format (gmpy2 values cross process boundaries as binaries) --

    def to_wire(self) -> Tuple[object, ...]:
        return (
            self.datum,
            tuple(self.perms),
            [gmpy2.to_binary(f) for f in self.factors],
            [gmpy2.to_binary(r) for r in self.ratios],
            self.subset,
        )

    @classmethod
    def from_wire(cls, wire: Tuple[object, ...]) -> "_AlternantFold":
        datum, perms, factors, ratios, subset = wire
        return cls(
            datum,  # type: ignore[arg-type]
            perms,  # type: ignore[arg-type]
            [gmpy2.from_binary(f) for f in factors],  # type: ignore[union-attr]
            [gmpy2.from_binary(r) for r in ratios],  # type: ignore[union-attr]
            subset,  # type: ignore[arg-type]
        )


def _fold_subtrees(task: Tuple[object, List[Tuple[Coords, int, Tuple[Tuple[int, ...], bytes, Optional[Coords]]]], int]) -> Tuple[bytes, int]:
    """Worker: fold the subtrees below the given frontier nodes."""
    wire, starts, cap = task
    fold = _AlternantFold.from_wire(wire)  # type: ignore[arg-type]
    total = mpq(0)
    count = 0
    for point, depth, (idx, x, lam) in starts:
        start = (point, depth, (idx, gmpy2.from_binary(x), lam))
        for node in fold.walk(None, cap, start=start):
            total += fold.term(node)
            count += 1
    return gmpy2.to_binary(total), count


def _frontier(fold: _AlternantFold, root: object, target: int, cap: int) -> Tuple[mpq, int, List[WeylNode]]:
    """Shallowest depth with at least `target` nodes; sum of everything above it."""
    depth = 1
    while True:
        nodes = list(fold.walk(root, cap, max_depth=depth))
        starts = [n for n in nodes if n.depth == depth]
        if len(starts) >= target or depth >= fold.longest:
            break
        depth += 1
    shallow = mpq(0)
    above = 0
    for n in nodes:
        if n.depth < depth:
            shallow += fold.term(n)
            above += 1
    return shallow, above, starts


def _alternant_numerator(fold: _AlternantFold, root: object, jobs: int, cap: int) -> mpq:
    if jobs <= 1:
        total = mpq(0)
        for node in fold.walk(root, cap):
            total += fold.term(node)
        return total

    shallow, count, starts = _frontier(fold, root, 4 * jobs, cap)
    if len(starts) < jobs:
        # Too small to be worth a pool.
        for n in starts:
            for node in fold.walk(None, cap, start=(n.point, n.depth, n.payload)):
                shallow += fold.term(node)
        return shallow
    per_job = max(1, len(starts) // (4 * jobs))
    chunks = [starts[i:i + per_job] for i in range(0, len(starts), per_job)]
    wire = fold.to_wire()
    tasks = []
    for chunk in chunks:
        packed = [(n.point, n.depth, (n.payload[0], gmpy2.to_binary(n.payload[1]), n.payload[2])) for n in chunk]  # type: ignore[index]
        tasks.append((wire, packed, cap))

    results: List[Optional[mpq]] = [None] * len(tasks)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(_fold_subtrees, task): i for i, task in enumerate(tasks)}
        for future in as_completed(futures):
            blob, n = future.result()
            results[futures[future]] = gmpy2.from_binary(blob)
            count += n
    if count > cap:
        raise WeylCapError(f"Weyl enumeration exceeded cap of {cap} elements")

    # Combine in submission order.
    total = shallow
    for part in results:
        total += part  # type: ignore[operator]
    return total


def weyl_sum_value(
    model: ModelSpec,
    point: SatakePoint,
    jobs: int = 1,
    cap: int = DEFAULT_WEYL_CAP,
    lam: Optional[Sequence[int]] = None,
    mode: str = "alternant",
) -> Fraction:
    """sum_w c_WS(w.theta) * e^{lam}(w.theta), exactly (lam = 0 by default).

    `mode="direct"` sums c_ws element by element and is limited to small
    groups; the default alternant mode handles every catalog model.
    """
    datum = model.datum
    if mode == "direct":
        total = Fraction(0)
        for w in enumerate_weyl(datum, cap=min(cap, DIRECT_SUM_LIMIT)):
            term = c_ws(model, w, point)
            if lam is not None:
                term *= eval_coords(lam, act(w, point))
            total += term
        return total
    if mode != "alternant":
        raise ValueError(f"unknown summation mode '{mode}'")

    return alternant_value(model, point, model_theta_plus(model).elements, lam=lam, jobs=jobs, cap=cap)


def alternant_value(
    model: ModelSpec,
    point: SatakePoint,
    elements: Sequence[Weight],
    subset: Optional[Sequence[int]] = None,
    lam: Optional[Sequence[int]] = None,
    jobs: int = 1,
    cap: int = DEFAULT_WEYL_CAP,
) -> Fraction:
    """sum over W_J of e^{lam} prod_{elements}(1 - u^deg e^gamma) / prod_{Phi_J+}(1 - e^{alpha^vee}) at w.theta.

    `elements` must be a W_J-stable subset of Theta (with multiplicity). With
    no subset this is the full Weyl sum of the model.
    """
    datum = model.datum
    sub = datum.restrict(list(subset)) if subset is not None else datum
    u = point.u
    factors = [_to_mpq(1 - u**g.degree * eval_coords(g.coords, point)) for g in model.theta]
    ratios = [_to_mpq(eval_coords(sr.coroot.coords, point)) for sr in datum.simple_roots]
    rho = sub.rho_vee.coords
    shift = _neg(rho) if lam is None else _add(lam, _neg(rho))
    den = eval_coords(_neg(rho), point)
    for a in sub.positive_coroots:
        den *= 1 - eval_coords(a.coords, point)
    if den == 0:
        raise PoleError(f"{model.name}: Weyl denominator vanishes at the point")

    index = model.theta_index()
    start_idx = tuple(index[model.key(g.coords)] for g in elements)
    fold = _AlternantFold(datum, _theta_perms(model), factors, ratios, tuple(subset) if subset is not None else None)
    root = (start_idx, _to_mpq(eval_coords(shift, point)), None if lam is None else tuple(lam))
    num = _alternant_numerator(fold, root, jobs, cap)
    return _to_fraction(num) / den


def weyl_sum_literal(model: ModelSpec, limit: int = 48, lam: Optional[Sequence[int]] = None) -> RatFun:
    """sum_w c_WS(w.theta) e^{lam}(w.theta) as a rational function, adding one term at a time."""
    names = model.names
    tp = model_theta_plus(model).elements
    total = RatFun.const(names, 0)
    for w in enumerate_weyl(model.datum, cap=limit):
        winv = inverse_element(w)
        num = LaurentPoly.const(names, 1)
        for g in tp:
            img = model.key(winv.apply(g).coords)
            num = num * (1 - LaurentPoly.monomial(names, img + (g.degree,)))
        if lam is not None:
            num = num * LaurentPoly.monomial(names, model.key(winv.apply(Weight(tuple(lam))).coords) + (0,))
        den = LaurentPoly.const(names, 1)
        for a in model.datum.positive_coroots:
            img = model.key(winv.apply(a).coords)
            den = den * (1 - LaurentPoly.monomial(names, img + (0,)))
        total = total + RatFun(num, den)
    return total


def random_weyl_images(model: ModelSpec, point: SatakePoint, count: int, seed: int) -> List[SatakePoint]:
    """w.theta for `count` seeded random Weyl elements, each a random word in the simple reflections."""
    datum = model.datum
    mats = [datum.reflection_matrix(i) for i in range(datum.rank)]
    length = 2 * len(datum.positive_roots)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        at = point
        for i in rng.integers(0, datum.rank, size=length):
            at = at.twisted(mats[int(i)])
        out.append(at)
    return out


@dataclass
class PointCheck:
    point: SatakePoint
    value: Fraction
    expected: Fraction

    @property
    def residual(self) -> Fraction:
        return self.value - self.expected

    @property
    def ok(self) -> bool:
        return self.residual == 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "point": self.point.to_dict(),
            "value": format_rational(self.value),
            "expected": format_rational(self.expected),
            "residual": format_rational(self.residual),
        }


@dataclass
class ConstantReport:
    model: str
    expected: str
    rows: List[PointCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.rows) and all(r.ok for r in self.rows)

    def first_mismatch(self) -> Optional[PointCheck]:
        return next((r for r in self.rows if not r.ok), None)


def _u_only(rf: RatFun, point: SatakePoint) -> Fraction:
    return rf.evaluate(tuple(point.tau) + (point.u,))


def weyl_sum_constant(
    model: ModelSpec,
    points: Sequence[SatakePoint],
    jobs: int = 1,
    cap: int = DEFAULT_WEYL_CAP,
) -> ConstantReport:
    """Compare sum_w c_WS(w.theta) with 1/Delta_{H_0/Z}(1) at every point."""
    if not points:
        raise ValueError("weyl_sum_constant needs at least one point")
    expected = expected_constant(model)
    report = ConstantReport(model.name, str(expected))
    for point in points:
        check_point(model, point)
        value = weyl_sum_value(model, point, jobs=jobs, cap=cap)
        report.rows.append(PointCheck(point, value, _u_only(expected, point)))
    return report


# -- antisymmetrization -------------------------------------------------------


def expand_factors(start: Sequence[int], factors: Iterable[Tuple[Sequence[int], int]], key: Callable[[Sequence[int]], Coords]) -> Terms:
    """Expand e^start * prod (1 - u^k e^gamma) into monomials."""
    terms: Terms = {(key(start), 0): Fraction(1)}
    for gamma, k in factors:
        out = dict(terms)
        for (mu, e), c in terms.items():
            m = (key(_add(mu, gamma)), e + k)
            v = out.get(m, Fraction(0)) - c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        terms = out
    return terms


def multiply_terms(a: Mapping[Tuple[Coords, int], Fraction], b: Mapping[Tuple[Coords, int], Fraction], key: Callable[[Sequence[int]], Coords]) -> Terms:
    out: Terms = {}
    for (mu, e), c in a.items():
        for (nu, f), d in b.items():
            m = (key(_add(mu, nu)), e + f)
            v = out.get(m, Fraction(0)) + c * d
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def weyl_denominator_terms(datum: RootDatum, subset: Optional[Sequence[int]], key: Callable[[Sequence[int]], Coords]) -> Terms:
    """prod_{Phi_J+}(1 - e^{alpha^vee}) = sum_{w in W_J} sgn(w) e^{rho_J^vee - w rho_J^vee}."""
    rho = datum.restrict(subset).rho_vee.coords if subset is not None else datum.rho_vee.coords
    out: Terms = {}
    for node in walk_weyl(datum, None, lambda _p, _i, _s: None, subset=subset):
        m = (key(_add(rho, _neg(node.point))), 0)
        out[m] = out.get(m, Fraction(0)) + node.sign
    return {k: v for k, v in out.items() if v}


@dataclass
class AntisymTable:
    """Monomials of an antisymmetrized polynomial, collected at dominant regular weights.

    `regular` maps a dominant regular weight to its signed coefficient as a
    polynomial in u ({power: coefficient}). `eliminated` records, per power
    of u, every wall weight reached together with the simple root fixing it.
    """

    rho: Coords
    sign_w0: int
    regular: Dict[Coords, Dict[int, Fraction]] = field(default_factory=dict)
    eliminated: Dict[int, Dict[Coords, int]] = field(default_factory=dict)
    monomials: int = 0

    def leading(self) -> Dict[int, Fraction]:
        """sgn(w0) times the coefficient at rho^vee: the constant of the sum."""
        return {e: self.sign_w0 * c for e, c in self.regular.get(self.rho, {}).items() if c}

    def survivors(self) -> Dict[int, List[Coords]]:
        """Powers of u at which a weight other than rho^vee keeps a nonzero coefficient."""
        out: Dict[int, List[Coords]] = {}
        for lam, poly in self.regular.items():
            if lam == self.rho:
                continue
            for e, c in poly.items():
                if c:
                    out.setdefault(e, []).append(lam)
        return {e: sorted(v) for e, v in sorted(out.items())}

    def powers(self) -> List[int]:
        seen = set(self.eliminated)
        for poly in self.regular.values():
            seen.update(poly)
        return sorted(seen)


def antisymmetrize(
    datum: RootDatum,
    terms: Mapping[Tuple[Coords, int], Fraction],
    key: Callable[[Sequence[int]], Coords],
    subset: Optional[Sequence[int]] = None,
) -> AntisymTable:
    """Apply sum_{w in W_J} sgn(w) w to a polynomial, monomial by monomial.

    Each weight is moved into the dominant chamber; if it lands on a wall
    the fixing reflection kills it, otherwise its coefficient is added with
    the sign of the element used.
    """
    sub = datum.restrict(subset) if subset is not None else datum
    table = AntisymTable(rho=key(sub.rho_vee.coords), sign_w0=-1 if sub.longest_length % 2 else 1)
    for (mu, e), c in terms.items():
        table.monomials += 1
        form = dominant_reduction(datum, mu, subset)
        lam = key(form.point)
        if form.singular:
            table.eliminated.setdefault(e, {})[lam] = form.fixing  # type: ignore[assignment]
            continue
        poly = table.regular.setdefault(lam, {})
        poly[e] = poly.get(e, Fraction(0)) + form.sign * c
    for lam in list(table.regular):
        table.regular[lam] = {e: c for e, c in table.regular[lam].items() if c}
        if not table.regular[lam]:
            del table.regular[lam]
    return table


def _alternating_orbit(datum: RootDatum, lam: Coords, key: Callable[[Sequence[int]], Coords]) -> Dict[Coords, int]:
    """sum_w sgn(w) e^{w lam} as {weight: coefficient}."""
    roots = [sr.root.coords for sr in datum.simple_roots]
    out: Dict[Coords, int] = {}
    for node in walk_weyl(datum, lam, lambda p, i, _s: reflect_coords(roots[i], p)):  # type: ignore[arg-type, return-value]
        k = key(node.payload)  # type: ignore[arg-type]
        out[k] = out.get(k, 0) + node.sign
    return {k: v for k, v in out.items() if v}


def weyl_sum_symbolic(model: ModelSpec, limit: int = SYMBOLIC_WEYL_LIMIT) -> RatFun:
    """sum_w c_WS(w.theta) as an exact rational function of (tau, u).

    The alternant numerator is built from the antisymmetrized expansion of
    e^{-rho^vee} prod_{Theta+}(1 - u^deg e^gamma) and divided exactly by the
    Weyl denominator. A residual dependence on tau survives the division as
    non-constant terms.
    """
    datum = model.datum
    try:
        weyl_order(datum, cap=limit)
    except WeylCapError as e:
        raise WeylCapError(f"{model.name}: symbolic Weyl sums only for |W| <= {limit}") from e
    names = model.names
    rho = datum.rho_vee.coords
    tp = model_theta_plus(model).elements
    table = antisymmetrize(datum, expand_factors(_neg(rho), [(g.coords, g.degree) for g in tp], model.key), model.key)

    numerator: Dict[Tuple[int, ...], Fraction] = {}
    for lam, poly in table.regular.items():
        for mu, s in _alternating_orbit(datum, lam, model.key).items():
            for e, c in poly.items():
                k = mu + (e,)
                numerator[k] = numerator.get(k, Fraction(0)) + s * c
    num = LaurentPoly(names, numerator)

    den = LaurentPoly.monomial(names, model.key(_neg(rho)) + (0,))
    for a in datum.positive_coroots:
        den = den * (1 - LaurentPoly.monomial(names, model.key(a.coords) + (0,)))
    return RatFun(num.exact_div(den))


# -- beta, I_alpha and b-ratios ----------------------------------------------------


def beta(model: ModelSpec, point: SatakePoint) -> Fraction:
    """beta(theta) = prod_{Phi+}(1 - u^{2 deg} e^{alpha^vee}) / prod_{Theta+}(1 - u^deg e^gamma)."""
    u = point.u
    num = Fraction(1)
    for a in model.datum.positive_coroots:
        num *= 1 - u ** (2 * a.degree) * eval_coords(a.coords, point)
    den = _theta_product(model_theta_plus(model).elements, point)
    if den == 0:
        raise PoleError(f"{model.name}: beta has a pole at the point")
    return num / den


def i_alpha(model: ModelSpec, name: str, point: SatakePoint) -> Fraction:
    """Closed form of the rank-one integral I_alpha(theta) for the root's family."""
    sr = model.simple(name)
    kind = model.ialpha_kind(name)
    u = point.u
    q = point.q
    a = eval_coords(sr.coroot.coords, point)
    if kind == IAlphaKind.UPSI:
        return q**sr.degree * (1 - u ** (2 * sr.degree) * a)
    cols = model.colors[name]
    b1 = eval_coords(cols[0].coords, point)
    if kind == IAlphaKind.UNITARY_ONE:
        num = (q + 1) * (1 - u * u * a)
        den = 1 - u * u * b1
    else:
        b2 = eval_coords(cols[1].coords, point)
        den = (1 - u * b1) * (1 - u * b2)
        if kind == IAlphaKind.SPLIT:
            num = (q - 1) * (1 - u * u * a)
        else:
            num = q * q * (1 - 1 / q) * (1 - u**4 * a)
    if den == 0:
        raise PoleError(f"{model.name}: I_{name} has a pole at the point")
    return num / den


@dataclass
class BRatioRow:
    point: SatakePoint
    integral_ratio: Fraction
    beta_ratio: Fraction

    @property
    def ok(self) -> bool:
        return self.integral_ratio == self.beta_ratio


def b_ratio_consistency(model: ModelSpec, name: str, points: Sequence[SatakePoint]) -> List[BRatioRow]:
    """I_alpha(w_alpha theta)/I_alpha(theta) against beta(w_alpha theta)/beta(theta)."""
    i = model.datum.index(name)
    s = model.datum.reflection_matrix(i)
    rows = []
    for point in points:
        moved = point.twisted(s)
        base_i, base_beta = i_alpha(model, name, point), beta(model, point)
        if base_i == 0 or base_beta == 0:
            raise PoleError(f"{model.name}: I_{name} or beta vanishes at the point; the b-ratio is undefined")
        lhs = i_alpha(model, name, moved) / base_i
        rhs = beta(model, moved) / base_beta
        rows.append(BRatioRow(point, lhs, rhs))
    return rows


# -- Whittaker-Shintani values and the relative character -------------------------


def _haar_factor(model: ModelSpec) -> RatFun:
    """q^{l(W)} vol(I) = Delta_G(1) times the inverse torus zeta factors."""
    names = model.names
    value = RatFun.const(names, 1)
    for f in model.degrees_g:
        value = value * f.value(names)
    for d in model.torus_degrees:
        value = value / zeta_factor(names, d)
    return value


def iwahori_volume(model: ModelSpec) -> RatFun:
    """vol(I) = Delta_G(1) zeta(1)^{-rk} q^{-l(W)} (torus factors by degree for unitary groups)."""
    length = sum(a.degree for a in model.datum.positive_roots)
    u = LaurentPoly.var(model.names, "u", 2 * length)
    return _haar_factor(model) * RatFun(u)


def ws_value(
    model: ModelSpec,
    t: Sequence[int],
    point: SatakePoint,
    normalized: bool = True,
    jobs: int = 1,
    cap: int = DEFAULT_WEYL_CAP,
    mode: str = "alternant",
) -> Fraction:
    """sum_w c_WS(w.theta) (w.theta)^{-1} delta_B^{1/2}(t^{-1}) for a dominant coweight t.

    With `normalized=False` the factor q^{l(W)} vol(I) is multiplied back.
    """
    datum = model.datum
    for sr in datum.simple_roots:
        if sum(a * b for a, b in zip(t, sr.root.coords)) < 0:
            raise ConstraintError(f"{model.name}: coweight {tuple(t)} is not dominant ({sr.name})")
    lam = tuple(t)
    value = weyl_sum_value(model, point, jobs=jobs, cap=cap, lam=lam if any(lam) else None, mode=mode)
    exponent = 2 * delta_half_exponent(datum, Weight(lam))
    value *= point.u ** int(exponent)
    if not normalized:
        value *= _u_only(_haar_factor(model), point)
    return value


@dataclass(frozen=True)
class RelcharValue:
    """I(phi_theta) with both of its assemblies."""

    delta: Fraction
    l_half: Fraction
    l_adjoint: Fraction
    via_beta: Fraction
    value: Fraction

    def to_dict(self) -> Dict[str, str]:
        return {
            "delta": format_rational(self.delta),
            "L(1/2,rho_X)": format_rational(self.l_half),
            "L(1,Ad)": format_rational(self.l_adjoint),
            "via_beta": format_rational(self.via_beta),
            "value": format_rational(self.value),
        }


def relchar(model: ModelSpec, point: SatakePoint) -> RelcharValue:
    """Delta ratio * L(1/2, rho_X)/L(1, Ad), checked against Delta * beta(theta) beta(theta^{-1})."""
    check_point(model, point)
    u = point.u
    delta = _u_only(delta_value(model), point)

    l_half = Fraction(1)
    for g in model.theta:
        f = 1 - u**g.degree * eval_coords(g.coords, point)
        if f == 0:
            raise PoleError(f"{model.name}: L(1/2, rho_X) has a pole at {model.render(g.coords)}")
        l_half /= f

    torus = Fraction(1)
    for d in model.torus_degrees:
        torus *= 1 - u ** (2 * d)
    inv_adj = torus
    for a in model.datum.positive_coroots:
        k = u ** (2 * a.degree)
        x = eval_coords(a.coords, point)
        inv_adj *= (1 - k * x) * (1 - k / x)
    if inv_adj == 0:
        raise PoleError(f"{model.name}: L(1, Ad) has a pole at the point")

    via_l = delta * l_half * inv_adj
    via_beta = delta * torus * beta(model, point) * beta(model, point.inverse())
    if via_l != via_beta:
        raise AssemblyError(
            f"{model.name}: assemblies disagree ({format_rational(via_l)} vs {format_rational(via_beta)})"
        )
    return RelcharValue(delta, l_half, 1 / inv_adj, via_beta, via_l)
