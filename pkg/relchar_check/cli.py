from __future__ import annotations

"""
CLI entrypoint.

Inspects the model catalog, runs verification suites and evaluates the
local relative character at a point. Every command prints a rich rendering
by default and the same report as JSON with --json; `verify` exits nonzero
as soon as one check failed.
"""

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional

import gmpy2
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from .catalog import Catalog, catalog_json, model_to_dict
from .config import Settings
from .models import ModelSpec, complete_point, delta_ratio, render_factors
from .ratfun import SatakePoint
from .runner import JsonlLogger, RunReport, open_catalog, run_suite
from .suites import SUITE_NAMES, sample_for
from .validators import (
    CheckStatus,
    PoleError,
    RelcharError,
    UnknownModelError,
    format_rational,
    parse_assignments,
    parse_coweight,
    parse_rational,
    summarize,
)
from .weylsum import check_generic, model_theta_plus, relchar, ws_value

__all__ = ["main", "build_parser"]

console = Console()

_STATUS_STYLE = {CheckStatus.PASS: "green", CheckStatus.FAIL: "bold red", CheckStatus.SKIP: "yellow"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="relchar-check",
        description="Exact verification of unramified local relative characters for strongly tempered spherical pairs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the report as JSON")
    sub = p.add_subparsers(dest="command", required=True)

    models = sub.add_parser("models", help="Inspect the model catalog")
    msub = models.add_subparsers(dest="action", required=True)
    msub.add_parser("list", parents=[common], help="One line per model")
    show = msub.add_parser("show", parents=[common], help="Roots, colours, Theta, Theta+ and Delta of one model")
    show.add_argument("name")
    export = msub.add_parser("export", parents=[common], help="Write the catalog in its JSON interchange format")
    export.add_argument("--output", "-o", help="File to write (default: stdout)")

    verify = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--model", help="Restrict to one model (default: all)")
    verify.add_argument("--points", type=int, help="Random points per model")
    verify.add_argument("--seed", type=int, help="Sampling seed")
    verify.add_argument("--jobs", type=int, help="Worker processes for large Weyl sums (0 = one per CPU)")

    rc = sub.add_parser("relchar", parents=[common], help="Evaluate I(phi_theta) at a point")
    rc.add_argument("model")
    q = rc.add_mutually_exclusive_group()
    q.add_argument("--q", help="Residue field size; must be the square of a rational (default 9)")
    q.add_argument("--u", help="u = q^(-1/2) directly")
    theta = rc.add_mutually_exclusive_group(required=True)
    theta.add_argument("--theta", help="tau assignments, e.g. 'tau1=2,tau2=-1/3'; the rest default to 1")
    theta.add_argument("--random", action="store_true", help="Draw a pole-free point from --seed")
    rc.add_argument("--seed", type=int, help="Sampling seed for --random")
    rc.add_argument("--t", help="Dominant coweight in real coordinates, e.g. '1,0,0,0'")
    rc.add_argument("--unnormalized", action="store_true", help="Multiply q^l(W) vol(I) back into the WS value")
    rc.add_argument("--jobs", type=int, help="Worker processes for the WS value")
    return p


def u_from_q(text: str) -> Fraction:
    q = parse_rational(text)
    if q <= 0:
        raise ValueError("q must be positive")
    num, den = gmpy2.mpz(q.numerator), gmpy2.mpz(q.denominator)
    if not (gmpy2.is_square(num) and gmpy2.is_square(den)):
        raise ValueError(f"q = {text} is not the square of a rational; pass --u instead")
    return Fraction(int(gmpy2.isqrt(den)), int(gmpy2.isqrt(num)))


# -- models -------------------------------------------------------------------


def _model_summary(model: ModelSpec) -> Dict[str, object]:
    out = model_to_dict(model)
    out["theta_plus_computed"] = [model.render(w.coords) for w in model_theta_plus(model).elements]
    out["delta"] = render_factors(delta_ratio(model))
    return out


def cmd_models(args: argparse.Namespace, catalog: Catalog) -> int:
    if args.action == "export":
        text = catalog_json(catalog)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as f:
                f.write(text + "\n")
            console.print(f"[green]Wrote[/green] {args.output} (version {catalog.version})")
        else:
            print(text)
        return 0

    if args.action == "show":
        model = catalog.get(args.name)
        summary = _model_summary(model)
        if args.json:
            console.print_json(json.dumps(summary, ensure_ascii=False))
            return 0
        console.print(Panel(f"{model.title}\nρ_X = {model.rho_x} ({model.theta_dimension} weights)", title=model.name, border_style="blue"))
        roots = Table(title="Simple roots")
        for col in ("root", "value", "type", "colours"):
            roots.add_column(col)
        for sr in model.datum.simple_roots:
            colours = ", ".join(model.render(c.coords) for c in model.colors.get(sr.name, ()))
            roots.add_row(sr.name, model.render(sr.root.coords), sr.kind.value, colours)
        console.print(roots)
        console.print(f"[bold]Θ+[/bold] ({len(summary['theta_plus_computed'])}): " + ", ".join(summary["theta_plus_computed"]))  # type: ignore[arg-type]
        console.print(f"[bold]Δ[/bold]: {summary['delta']}")
        if model.delta_erratum:
            console.print(f"[yellow]Erratum:[/yellow] {model.delta_erratum}")
        return 0

    if args.json:
        rows = [
            {"name": m.name, "title": m.title, "rho_x": m.rho_x, "rank": m.datum.rank, "theta": m.theta_dimension}
            for m in catalog.models.values()
        ]
        console.print_json(json.dumps({"version": catalog.version, "models": rows}, ensure_ascii=False))
        return 0
    table = Table(title=f"Catalog {catalog.source} ({catalog.version})")
    for col in ("model", "group", "ρ_X", "rank", "dim ρ_X", "Δ"):
        table.add_column(col)
    for m in catalog.models.values():
        table.add_row(m.name, m.title, m.rho_x, str(m.datum.rank), str(m.theta_dimension), render_factors(delta_ratio(m)))
    console.print(table)
    return 0


# -- verify -------------------------------------------------------------------


def _render_report(report: RunReport) -> None:
    suites: Dict[str, Table] = {}
    for r in report.results:
        table = suites.get(r.suite)
        if table is None:
            table = Table(title=r.suite)
            for col in ("check", "status", "detail", "s"):
                table.add_column(col)
            suites[r.suite] = table
        style = _STATUS_STYLE[r.status]
        table.add_row(r.name, f"[{style}]{r.status.value}[/{style}]", r.detail, f"{r.seconds:.2f}")
    for table in suites.values():
        console.print(table)


def cmd_verify(args: argparse.Namespace, settings: Settings, catalog: Catalog, argv: List[str]) -> int:
    title = f"verify {args.suite}" + (f" --model {args.model}" if args.model else "")
    if not args.json:
        console.print(Panel(title, title="relchar-check", border_style="blue"))
    with console.status(f"[bold green]Running {args.suite}...", spinner="dots"):
        report = run_suite(args.suite, settings, args.model, command=argv, catalog=catalog)

    if args.json:
        console.print_json(json.dumps(report.to_dict(), ensure_ascii=False))
        return report.exit_code

    _render_report(report)
    counts = summarize(report.results)
    info = Text()
    info.append(f"Duration: {report.seconds:.1f}s", style="green")
    info.append(" | ", style="dim")
    info.append(f"pass={counts['pass']}", style="green")
    info.append(", ", style="dim")
    info.append(f"fail={counts['fail']}", style="red")
    info.append(", ", style="dim")
    info.append(f"skip={counts['skip']}", style="yellow")
    info.append(" | Catalog: ", style="dim")
    info.append(report.catalog_version, style="cyan")
    info.append(" | Log: ", style="dim")
    info.append(report.log_path, style="blue underline")
    console.print(info)
    return report.exit_code


# -- relchar ------------------------------------------------------------------


def _point(args: argparse.Namespace, model: ModelSpec, settings: Settings) -> SatakePoint:
    if args.random:
        point = sample_for(model, settings, count=1)[0]
        if args.q or args.u:
            point = complete_point(model, dict(enumerate(point.tau)), _u(args))
            check_generic(model, point)
        return point
    return complete_point(model, parse_assignments(args.theta), _u(args))


def _u(args: argparse.Namespace) -> Fraction:
    if args.u:
        return parse_rational(args.u)
    return u_from_q(args.q or "9")


def cmd_relchar(args: argparse.Namespace, settings: Settings, catalog: Catalog, argv: List[str]) -> int:
    model = catalog.get(args.model)
    point = _point(args, model, settings)
    t: Optional[tuple] = parse_coweight(args.t, model.dim) if args.t else None

    t0 = time.time()
    out: Dict[str, object] = {"model": model.name, "point": point.to_dict()}
    with JsonlLogger(settings.log_dir) as logger:
        logger.write({"type": "command", "command": argv, "version": catalog.version})
        try:
            value = relchar(model, point)
            out["relchar"] = value.to_dict()
            if t is not None:
                with console.status("[bold green]Summing over W...", spinner="dots"):
                    ws = ws_value(model, t, point, normalized=not args.unnormalized, jobs=settings.workers, cap=settings.weyl_cap)
                out["ws_value"] = format_rational(ws)
        except PoleError as e:
            out["pole"] = str(e)
        logger.write({"type": "relchar", **out})
        log_path = str(logger.path)

    if args.json:
        console.print_json(json.dumps(out, ensure_ascii=False))
        return 1 if "pole" in out else 0

    console.print(Panel(", ".join(f"{k}={v}" for k, v in point.to_dict().items()), title=model.name, border_style="blue"))
    if "pole" in out:
        console.print(f"[red]Pole:[/red] {out['pole']}")
        return 1
    table = Table(title="I(φ_θ)")
    table.add_column("factor")
    table.add_column("value")
    for k, v in out["relchar"].items():  # type: ignore[union-attr]
        table.add_row(k, v)
    if "ws_value" in out:
        table.add_row("WS value" + (" (unnormalized)" if args.unnormalized else ""), str(out["ws_value"]))
    console.print(table)
    info = Text()
    info.append(f"Duration: {time.time() - t0:.1f}s", style="green")
    info.append(" | Δ: ", style="dim")
    info.append(render_factors(delta_ratio(model)), style="cyan")
    info.append(" | Log: ", style="dim")
    info.append(log_path, style="blue underline")
    console.print(info)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse CLI args, load settings from env and dispatch."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)

    settings = Settings.from_env().with_overrides(
        points=getattr(args, "points", None),
        seed=getattr(args, "seed", None),
        jobs=getattr(args, "jobs", None),
    )
    try:
        settings.validate()
    except ValueError as e:
        console.print(f"[red]Configuration error:[/red] {e}")
        return 1

    try:
        catalog = open_catalog(settings)
        if args.command == "models":
            return cmd_models(args, catalog)
        if args.command == "verify":
            return cmd_verify(args, settings, catalog, argv)
        return cmd_relchar(args, settings, catalog, argv)
    except UnknownModelError as e:
        console.print(f"[red]Unknown model:[/red] {e.name}")
        if e.suggestions:
            console.print(f"Did you mean: {', '.join(e.suggestions)}?")
        return 2
    except (RelcharError, ValueError) as e:
        console.print(f"[red]Error:[/red] {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
