from __future__ import annotations

"""Verification suites behind `relchar-check verify`.

Design:
- A suite is a function (catalog, settings, model filter) -> list of
  CheckResult. Every check runs inside `_run`, which times it and turns a
  RelcharError into a failed result, so one broken model never stops a run.
- Points are drawn once per model from the configured seed; the same seed
  gives the same report.
- Checks that would walk a Weyl group too large for their method are
  reported as skipped, never silently dropped.
"""

import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .antisym import AntisymMode, antisym_vanish_check, coset_reduction_check, full_antisym
from .catalog import Catalog
from .config import (
    BRUTE_FORCE_FULL_LIMIT,
    BRUTE_FORCE_TRANSVERSAL_LIMIT,
    DIRECT_SUM_LIMIT,
    FULL_ANTISYM_LIMIT,
    SYMBOLIC_WEYL_LIMIT,
    Settings,
)
from .displays import check_eta, displayed_models, displays_for, verify_color_identity
from .lattice import enumerate_weyl, weyl_order
from .models import ModelSpec, brute_force_theta_plus, delta_ratio, expected_constant, render_factors, theta_plus
from .padic import (
    count_residues,
    i_alpha_type_t,
    i_alpha_type_t_closed_form,
    i_alpha_upsi_check,
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
    rank_one_truncation,
    residue_stabilization,
)
from .ratfun import SatakePoint
from .validators import AssemblyError, CheckResult, CheckStatus, RelcharError, WeylCapError, format_rational
from .weylsum import (
    b_ratio_consistency,
    c_ws,
    delta_point,
    model_theta_plus,
    random_weyl_images,
    relchar,
    sample_points,
    weyl_sum_constant,
    weyl_sum_symbolic,
    weyl_sum_value,
    ws_value,
)

__all__ = ["SUITES", "SUITE_NAMES", "run_checks", "sample_for"]

# (status, detail, values)
Outcome = Tuple[CheckStatus, str, Dict[str, str]]
Suite = Callable[[Catalog, Settings, Optional[str]], List[CheckResult]]

# Residue fields used by the p-adic checks, each with a unit non-residue
PADIC_FIELDS: Tuple[Tuple[int, int], ...] = ((3, 2), (5, 2))

# Series order for comparing the first quadratic-extension integral
SERIES_ORDER = 6

# b-ratio consistency uses this many of the sampled points
B_RATIO_POINTS = 3

# Random Weyl elements applied to a point by the invariance check
WEYL_INVARIANCE_SAMPLES = 20


def _passed(detail: str = "", **values: str) -> Outcome:
    return CheckStatus.PASS, detail, dict(values)


def _failed(detail: str, **values: str) -> Outcome:
    return CheckStatus.FAIL, detail, dict(values)


def _skipped(detail: str) -> Outcome:
    return CheckStatus.SKIP, detail, {}


def _verdict(ok: bool, detail: str, failure: str, **values: str) -> Outcome:
    return _passed(detail, **values) if ok else _failed(failure, **values)


def _run(suite: str, name: str, check: Callable[[], Outcome]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        status, detail, values = check()
    except RelcharError as e:
        status, detail, values = CheckStatus.FAIL, f"{type(e).__name__}: {e}", {}
    return CheckResult(suite, name, status, detail, values, time.perf_counter() - t0)


def _order_within(model: ModelSpec, limit: int, subset: Optional[Sequence[int]] = None) -> Optional[int]:
    """|W| (or |W_J|) when it is at most `limit`, else None."""
    try:
        return weyl_order(model.datum, subset, cap=limit)
    except WeylCapError:
        return None


def sample_for(model: ModelSpec, settings: Settings, count: Optional[int] = None) -> List[SatakePoint]:
    return sample_points(
        model,
        settings.points if count is None else count,
        settings.seed,
        settings.sample_bound,
        settings.max_resample,
    )


def _points_or_fail(suite: str, model: ModelSpec, settings: Settings, out: List[CheckResult]) -> List[SatakePoint]:
    points: List[SatakePoint] = []

    def draw() -> Outcome:
        points.extend(sample_for(model, settings))
        return _passed(f"{len(points)} points, seed {settings.seed}")

    result = _run(suite, f"{model.name}/points", draw)
    if not result.ok:
        out.append(result)
    return points


# -- thetaplus ---------------------------------------------------------------------


def _theta_plus_golden(model: ModelSpec) -> Outcome:
    got = theta_plus(model)
    keys = got.keys(model)
    size = str(len(got))
    if not model.golden_theta_plus:
        return _passed("no recorded set to compare", size=size)
    golden = frozenset(model.key(w.coords) for w in model.golden_theta_plus)
    if keys == golden:
        return _passed(f"|Θ+| = {size}", size=size)
    missing = sorted(model.render(k) for k in golden - keys)
    extra = sorted(model.render(k) for k in keys - golden)
    return _failed(f"missing {missing}, extra {extra}", size=size)


def _theta_plus_brute(model: ModelSpec) -> Outcome:
    n = len(model.theta_index())
    if n > BRUTE_FORCE_TRANSVERSAL_LIMIT:
        return _skipped(f"|Θ| = {n} exceeds the brute-force limit {BRUTE_FORCE_TRANSVERSAL_LIMIT}")
    found = brute_force_theta_plus(model, BRUTE_FORCE_FULL_LIMIT, BRUTE_FORCE_TRANSVERSAL_LIMIT)
    closure = theta_plus(model)
    mode = "full search" if n <= BRUTE_FORCE_FULL_LIMIT else "sign transversals"
    return _verdict(
        found.keys(model) == closure.keys(model),
        f"unique minimal subset ({mode})",
        "brute force and closure disagree",
    )


def thetaplus_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out = []
    for m in catalog.select(model):
        out.append(_run("thetaplus", f"{m.name}/closure", lambda m=m: _theta_plus_golden(m)))
        out.append(_run("thetaplus", f"{m.name}/brute-force", lambda m=m: _theta_plus_brute(m)))
    return out


# -- weylsum -----------------------------------------------------------------------


def _constant(model: ModelSpec, points: Sequence[SatakePoint], settings: Settings) -> Outcome:
    report = weyl_sum_constant(model, points, jobs=settings.workers, cap=settings.weyl_cap)
    bad = report.first_mismatch()
    if bad is None:
        return _passed(f"{len(report.rows)} points", expected=report.expected)
    return _failed(
        f"sum is {format_rational(bad.value)}, expected {format_rational(bad.expected)}",
        residual=format_rational(bad.residual),
        **bad.point.to_dict(),
    )


def _symbolic(model: ModelSpec) -> Outcome:
    order = _order_within(model, SYMBOLIC_WEYL_LIMIT)
    if order is None:
        return _skipped(f"|W| exceeds {SYMBOLIC_WEYL_LIMIT}")
    total = weyl_sum_symbolic(model)
    expected = expected_constant(model)
    residual = (total - expected).cancel()
    return _verdict(residual.is_zero(), f"|W| = {order}, no residual θ-dependence", f"residual {residual}", expected=str(expected))


def _direct(model: ModelSpec, point: SatakePoint, settings: Settings) -> Outcome:
    order = _order_within(model, SYMBOLIC_WEYL_LIMIT)
    if order is None:
        return _skipped(f"|W| exceeds {SYMBOLIC_WEYL_LIMIT}")
    direct = weyl_sum_value(model, point, mode="direct")
    alternant = weyl_sum_value(model, point, jobs=settings.workers, cap=settings.weyl_cap)
    return _verdict(
        direct == alternant,
        "per-element sum equals the alternant",
        "per-element sum differs from the alternant",
        direct=format_rational(direct),
        alternant=format_rational(alternant),
    )


def _delta_point(model: ModelSpec) -> Outcome:
    if _order_within(model, SYMBOLIC_WEYL_LIMIT) is None:
        return _skipped(f"|W| exceeds {SYMBOLIC_WEYL_LIMIT}")
    point = delta_point(model)
    terms = [c_ws(model, w, point) for w in enumerate_weyl(model.datum, cap=SYMBOLIC_WEYL_LIMIT)]
    total = sum(terms, Fraction(0))
    expected = expected_constant(model).evaluate(point.values())
    survivors = str(sum(1 for t in terms if t != 0))
    return _verdict(
        total == expected,
        f"{survivors} nonzero term(s) at δ^(1/2)",
        f"sum {format_rational(total)} at δ^(1/2), expected {format_rational(expected)}",
        survivors=survivors,
    )


def _weyl_invariance(model: ModelSpec, point: SatakePoint, settings: Settings) -> Outcome:
    if _order_within(model, DIRECT_SUM_LIMIT) is None and not settings.slow:
        return _skipped(f"|W| exceeds {DIRECT_SUM_LIMIT}")
    jobs, cap = settings.workers, settings.weyl_cap
    base = weyl_sum_value(model, point, jobs=jobs, cap=cap)
    images = random_weyl_images(model, point, WEYL_INVARIANCE_SAMPLES, settings.seed)
    for k, image in enumerate(images):
        moved = weyl_sum_value(model, image, jobs=jobs, cap=cap)
        if moved != base:
            return _failed(f"sum changes at random image {k}", base=format_rational(base), moved=format_rational(moved))
    return _passed(f"{len(images)} random Weyl images", value=format_rational(base))


def _b_ratio(model: ModelSpec, name: str, points: Sequence[SatakePoint]) -> Outcome:
    rows = b_ratio_consistency(model, name, points)
    bad = next((r for r in rows if not r.ok), None)
    if bad is None:
        return _passed(f"{len(rows)} points")
    return _failed(
        "I_α ratio differs from the β ratio",
        integral=format_rational(bad.integral_ratio),
        beta=format_rational(bad.beta_ratio),
    )


def weylsum_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out: List[CheckResult] = []
    for m in catalog.select(model):
        points = _points_or_fail("weylsum", m, settings, out)
        if not points:
            continue
        out.append(_run("weylsum", f"{m.name}/constant", lambda m=m, p=points: _constant(m, p, settings)))
        out.append(_run("weylsum", f"{m.name}/symbolic", lambda m=m: _symbolic(m)))
        out.append(_run("weylsum", f"{m.name}/direct", lambda m=m, p=points: _direct(m, p[0], settings)))
        out.append(_run("weylsum", f"{m.name}/delta-point", lambda m=m: _delta_point(m)))
        out.append(_run("weylsum", f"{m.name}/weyl-invariance", lambda m=m, p=points: _weyl_invariance(m, p[0], settings)))
        for sr in m.datum.simple_roots:
            out.append(
                _run("weylsum", f"{m.name}/b-ratio/{sr.name}", lambda m=m, n=sr.name, p=points: _b_ratio(m, n, p[:B_RATIO_POINTS]))
            )
    return out


# -- antisym -----------------------------------------------------------------------


def _vanish(model: ModelSpec, reduction_name: str, catalog: Catalog, mode: AntisymMode) -> Outcome:
    red = catalog.reduction(reduction_name)
    try:
        report = antisym_vanish_check(model, red, mode)
    except WeylCapError as e:
        return _skipped(str(e))
    row = report.first_discrepancy()
    powers = ",".join(str(r.power) for r in report.rows)
    if row is None:
        return _passed(f"{report.monomials} monomials, only ρ^∨ survives", powers=powers)
    detail = f"u^{row.power}: survivors {row.survivors[:3]}" if row.survivors else f"u^{row.power}: coefficient {format_rational(row.coefficient)}"
    return _failed(detail, expected=format_rational(row.expected), coefficient=format_rational(row.coefficient))


def _coset(model: ModelSpec, reduction_name: str, catalog: Catalog, points: Sequence[SatakePoint], settings: Settings) -> Outcome:
    red = catalog.reduction(reduction_name)
    outer = red.outer_indices(model.datum)
    with_outer = settings.slow or _order_within(model, DIRECT_SUM_LIMIT, outer) is not None
    report = coset_reduction_check(model, red, points, with_outer=with_outer, jobs=settings.workers, cap=settings.weyl_cap)
    bad = next((r for r in report.rows if not r.ok), None)
    detail = f"{report.orbit_size} cosets, {len(report.rows)} points" + ("" if with_outer else ", outer sum not evaluated")
    if bad is None:
        return _passed(detail, theta1=str(len(report.theta1)))
    return _failed(
        "coset sum is not 1" if not bad.coset_ok else "outer sum is not coset times inner",
        **{k: v for k, v in bad.to_dict().items() if isinstance(v, str)},
    )


def _full(model: ModelSpec) -> Outcome:
    size = len(model_theta_plus(model))
    if size > FULL_ANTISYM_LIMIT:
        return _skipped(f"|Θ+| = {size} exceeds {FULL_ANTISYM_LIMIT}")
    report = full_antisym(model)
    row = report.first_discrepancy()
    if row is None:
        return _passed(f"{report.monomials} monomials over W")
    return _failed(
        f"u^{row.power}: coefficient {format_rational(row.coefficient)}, survivors {row.survivors[:3]}",
        expected=format_rational(row.expected),
    )


def antisym_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out: List[CheckResult] = []
    for m in catalog.select(model):
        out.append(_run("antisym", f"{m.name}/full", lambda m=m: _full(m)))
        reductions = catalog.reductions_for(m.name)
        if not reductions:
            continue
        points = _points_or_fail("antisym", m, settings, out)
        for red in reductions:
            out.append(_run("antisym", f"{red.name}/coset", lambda m=m, r=red.name: _vanish(m, r, catalog, AntisymMode.COSET)))
            out.append(
                _run("antisym", f"{red.name}/subgroup", lambda m=m, r=red.name: _vanish(m, r, catalog, AntisymMode.SUBGROUP))
            )
            if points:
                out.append(
                    _run("antisym", f"{red.name}/chain", lambda m=m, r=red.name, p=points: _coset(m, r, catalog, p, settings))
                )
    return out


# -- padic -------------------------------------------------------------------------


def _rank_one() -> Outcome:
    ok = rank_one_integral() == rank_one_closed_form()
    return _verdict(ok, "shell sum equals the closed form", "shell sum differs from the closed form")


def _truncation(settings: Settings) -> Outcome:
    check = rank_one_truncation(9, Fraction(1, 2), Fraction(-1, 3), depth=settings.shell_depth)
    return _verdict(
        check.ok,
        f"{check.depth} shells within the tail bound",
        "truncated sum outside the tail bound" if check.tail_identity else "tail identity fails",
        partial=f"{check.partial:.12g}",
        closed=f"{check.closed:.12g}",
        bound=f"{check.bound:.3g}",
    )


def _type_t() -> Outcome:
    ok = i_alpha_type_t() == i_alpha_type_t_closed_form()
    return _verdict(ok, "1 + rank-one integral matches the Type-T form", "Type-T form does not match")


def _quad_61(p: int, eps: int) -> Outcome:
    if quad_ext_61_symbolic() != quad_ext_61_closed_form():
        return _failed("generic-q assembly differs from the closed form")
    counted = quad_ext_integral_61(p, eps)
    closed = quad_ext_61_closed_form().specialize_square("u", Fraction(1, p))
    zeros = count_residues(p, eps, 2, cells=(0,)).zeros(0)
    if zeros != p:
        return _failed(f"cell 0 has {zeros} zeros mod {p}, expected {p}")
    ok = counted.series([0, 1], SERIES_ORDER) == closed.series([0, 1], SERIES_ORDER)
    return _verdict(ok, f"series agree to degree {SERIES_ORDER}; conic has {zeros + 1} points", "series differ", zeros=str(zeros))


def _stabilization(p: int, eps: int) -> Outcome:
    measures = residue_stabilization(p, eps)
    return _passed("levels 3 and 4 agree", **{f"cell{k}": ",".join(format_rational(m) for m in v) for k, v in measures.items()})


def _quad_62(p: int, eps: int) -> Outcome:
    if quad_ext_integral_62() != quad_ext_62_closed_form():
        return _failed("shell assembly differs from the closed form")
    values: Dict[str, str] = {}
    for k, cell in enumerate(quad_ext_62_cells(depth=2)):
        symbolic = cell.contribution.specialize("s_eta", 1).specialize_square("u", Fraction(1, p))
        counted = quad_ext_62_cell_counts(p, eps, k)
        values[f"cell{k}"] = format_rational(counted)
        if symbolic != counted:
            return _failed(f"cell {k}: counted {format_rational(counted)} differs from the shell value", **values)
    return _passed("closed form and three cells agree", **values)


def _fourier(p: int, settings: Settings) -> Outcome:
    rows = phi_fourier_check(p, tolerance=settings.tolerance)
    bad = next((r for r in rows if not r.ok), None)
    if bad is None:
        return _passed(f"v(x) = 1 .. {rows[-1].valuation}")
    return _failed(f"v(x) = {bad.valuation}", **{k: str(v) for k, v in bad.to_dict().items()})


def _upsi() -> Outcome:
    shells, closed = i_alpha_upsi_check()
    return _verdict(shells == closed, "shell sum equals q(1 - q^-1 t)", "shell sum differs")


def padic_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out = [
        _run("padic", "rank-one", _rank_one),
        _run("padic", "rank-one/truncation", lambda: _truncation(settings)),
        _run("padic", "type-t", _type_t),
        _run("padic", "upsi", _upsi),
    ]
    for p, eps in PADIC_FIELDS:
        out.append(_run("padic", f"quad-61/q={p}", lambda p=p, e=eps: _quad_61(p, e)))
        out.append(_run("padic", f"stabilization/q={p}", lambda p=p, e=eps: _stabilization(p, e)))
        out.append(_run("padic", f"quad-62/q={p}", lambda p=p, e=eps: _quad_62(p, e)))
        out.append(_run("padic", f"fourier/q={p}", lambda p=p: _fourier(p, settings)))
    return out


# -- matrix ------------------------------------------------------------------------


def _eta(name: str) -> Outcome:
    report = check_eta(name)
    return _passed(f"det {report.det}", similitude=report.similitude or "")


def _identity(model: ModelSpec, root: str) -> Outcome:
    report = verify_color_identity(model, root)
    values = {k: str(v) for k, v in report.similitudes.items()}
    if report.character is not None:
        values["character"] = report.character
    if report.beta is not None:
        values["beta"] = model.render(report.beta)
    if not report.color_ok:
        return _failed(f"colour {values.get('beta')} differs from the catalogue", **values)
    return _passed(report.kind, **values)


def matrix_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out: List[CheckResult] = []
    shown = set(displayed_models())
    for m in catalog.select(model):
        if m.name not in shown:
            out.append(_run("matrix", m.name, lambda: _skipped("no transcribed identities")))
            continue
        out.append(_run("matrix", f"{m.name}/eta", lambda n=m.name: _eta(n)))
        for ident in displays_for(m.name).identities:
            out.append(_run("matrix", f"{m.name}/{ident.root}", lambda m=m, r=ident.root: _identity(m, r)))
    return out


# -- delta -------------------------------------------------------------------------


def _delta(model: ModelSpec) -> Outcome:
    rendered = render_factors(delta_ratio(model))
    if rendered == model.table_delta:
        return _passed(rendered, factors=rendered)
    if model.delta_erratum:
        return _passed(f"recorded erratum: {model.delta_erratum}", factors=rendered, printed=model.table_delta)
    return _failed(f"degree lists give {rendered}, table has {model.table_delta}", factors=rendered)


def delta_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    return [_run("delta", m.name, lambda m=m: _delta(m)) for m in catalog.select(model)]


# -- relchar -----------------------------------------------------------------------


def _assembly(model: ModelSpec, points: Sequence[SatakePoint]) -> Outcome:
    if not points:
        raise AssemblyError(f"{model.name}: no points to assemble at")
    last = None
    for point in points:
        last = relchar(model, point)
    return _passed(f"{len(points)} points", **last.to_dict())


def _ws_invariance(model: ModelSpec, point: SatakePoint, settings: Settings) -> Outcome:
    order = _order_within(model, DIRECT_SUM_LIMIT)
    if order is None and not settings.slow:
        return _skipped(f"|W| exceeds {DIRECT_SUM_LIMIT}; the constant is covered by the weylsum suite")
    jobs, cap = settings.workers, settings.weyl_cap
    zero = tuple(0 for _ in range(model.dim))
    at_zero = ws_value(model, zero, point, jobs=jobs, cap=cap)
    expected = expected_constant(model).evaluate(point.values())
    if at_zero != expected:
        return _failed("ws_value at t = 0 is not the model constant", value=format_rational(at_zero))
    # 4 rho^vee is dominant and keeps the delta_B exponent integral.
    t = tuple(4 * c for c in model.datum.rho_vee.coords)
    base = ws_value(model, t, point, jobs=jobs, cap=cap)
    for i, sr in enumerate(model.datum.simple_roots):
        moved = ws_value(model, t, point.twisted(model.datum.reflection_matrix(i)), jobs=jobs, cap=cap)
        if moved != base:
            return _failed(f"ws_value changes under s_{sr.name}", base=format_rational(base), moved=format_rational(moved))
    return _passed(f"invariant under {model.datum.rank} simple reflections", value=format_rational(base))


def relchar_suite(catalog: Catalog, settings: Settings, model: Optional[str]) -> List[CheckResult]:
    out: List[CheckResult] = []
    for m in catalog.select(model):
        points = _points_or_fail("relchar", m, settings, out)
        if not points:
            continue
        out.append(_run("relchar", f"{m.name}/assembly", lambda m=m, p=points: _assembly(m, p)))
        out.append(_run("relchar", f"{m.name}/ws-invariance", lambda m=m, p=points: _ws_invariance(m, p[0], settings)))
    return out


SUITES: Dict[str, Suite] = {
    "thetaplus": thetaplus_suite,
    "weylsum": weylsum_suite,
    "antisym": antisym_suite,
    "padic": padic_suite,
    "matrix": matrix_suite,
    "delta": delta_suite,
    "relchar": relchar_suite,
}

SUITE_NAMES: List[str] = list(SUITES) + ["all"]


def run_checks(suite: str, catalog: Catalog, settings: Settings, model: Optional[str] = None) -> List[CheckResult]:
    """Run one suite, or every suite in order for 'all'."""
    if suite == "all":
        results: List[CheckResult] = []
        for fn in SUITES.values():
            results.extend(fn(catalog, settings, model))
        return results
    if suite not in SUITES:
        raise ValueError(f"unknown suite '{suite}' (choose from {', '.join(SUITE_NAMES)})")
    return SUITES[suite](catalog, settings, model)
