from __future__ import annotations

"""Embedded model catalog and its JSON interchange format.

The embedded data is written in the same schema that `export_catalog`
produces, so an external file named by RELCHAR_CATALOG and the built-in
catalog go through one loader. Weights are linear expressions in the basis
names ("(e1-e2+e3)/2+e1'"); a "±" expands to both signs.

Theta may be given either explicitly ("theta") or as Weyl orbits of a few
generators ("theta_orbits"); exports always list it explicitly.
"""

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .lattice import RootDatum, RootType, SimpleRoot, Weight, parse_weight, reflect_coords
from .models import ModelSpec, MotiveFactor, Reduction
from .validators import ModelDataError, UnknownModelError

__all__ = [
    "CATALOG_SCHEMA",
    "Catalog",
    "default_catalog",
    "load_catalog",
    "export_catalog",
    "catalog_json",
    "catalog_version",
    "model_from_dict",
    "model_to_dict",
    "expand_pm",
    "weyl_orbit",
]

CATALOG_SCHEMA = "relchar-catalog/1"

Coords = Tuple[int, ...]


# -- helpers -------------------------------------------------------------------


def expand_pm(expr: str) -> List[str]:
    """Expand every '±' into '+' and '-' (left to right, '+' first)."""
    if "±" not in expr:
        return [expr]
    head, tail = expr.split("±", 1)
    out: List[str] = []
    for sign in "+-":
        out.extend(expand_pm(head + sign + tail))
    return out


def weyl_orbit(datum: RootDatum, start: Sequence[int]) -> List[Coords]:
    seen = {tuple(start)}
    frontier = [tuple(start)]
    while frontier:
        nxt = []
        for v in frontier:
            for sr in datum.simple_roots:
                img = reflect_coords(sr.root.coords, v)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(seen, reverse=True)


def _parse_all(exprs: Iterable[str], basis: Sequence[str], degree: int = 1) -> List[Weight]:
    out: List[Weight] = []
    for expr in exprs:
        out.extend(parse_weight(e, basis, degree) for e in expand_pm(expr))
    return out


# -- schema <-> ModelSpec -------------------------------------------------------


def model_from_dict(data: Dict[str, Any]) -> ModelSpec:
    try:
        name = data["name"]
        basis = tuple(data["basis"])
        roots = tuple(
            SimpleRoot(
                r["name"],
                parse_weight(r["root"], basis),
                RootType(r.get("type", "T")),
                int(r.get("degree", 1)),
            )
            for r in data["roots"]
        )
        datum = RootDatum(len(basis), basis, roots)

        if "theta" in data:
            theta = [parse_weight(t["weight"], basis, int(t.get("degree", 1))) for t in data["theta"]]
        else:
            theta = []
            seen = set()
            for gen in data["theta_orbits"]:
                w = parse_weight(gen["weight"], basis, int(gen.get("degree", 1)))
                for c in weyl_orbit(datum, w.coords):
                    if c not in seen:
                        seen.add(c)
                        theta.append(Weight(c, w.degree))

        colors: Dict[str, Tuple[Weight, ...]] = {}
        for root_name, exprs in data.get("colors", {}).items():
            sr = roots[datum.index(root_name)]
            colors[root_name] = tuple(parse_weight(e, basis) for e in exprs)
            if len(colors[root_name]) not in (1, 2):
                raise ModelDataError(f"{name}: root {sr.name} needs one or two colours")

        degrees_g = tuple(MotiveFactor.parse(str(t)) for t in data["degrees_g"])
        degrees_h = tuple(MotiveFactor.parse(str(t)) for t in data["degrees_h"])
        torus = data.get("torus_degrees")
        constraint = data.get("constraint")
        return ModelSpec(
            name=name,
            title=data.get("title", name),
            rho_x=data.get("rho_x", ""),
            datum=datum,
            theta=tuple(sorted(theta, reverse=True)),
            colors=colors,
            degrees_g=degrees_g,
            degrees_h=degrees_h,
            torus_degrees=tuple(torus) if torus else (1,) * len(degrees_g),
            constraint=tuple(constraint) if constraint else None,
            table_delta=data.get("table_delta", ""),
            delta_erratum=data.get("delta_erratum", ""),
            rho_dim=int(data.get("rho_dim", 0)),
            golden_theta_plus=tuple(_parse_all(data.get("theta_plus", ()), basis)),
            unitary=bool(data.get("unitary", False)),
            notes=tuple(data.get("notes", ())),
        )
    except KeyError as e:
        raise ModelDataError(f"catalog entry {data.get('name', '?')} is missing field {e}") from e
    except ValueError as e:
        raise ModelDataError(f"catalog entry {data.get('name', '?')}: {e}") from e


def model_to_dict(model: ModelSpec) -> Dict[str, Any]:
    basis = model.datum.basis
    out: Dict[str, Any] = {
        "name": model.name,
        "title": model.title,
        "rho_x": model.rho_x,
        "rho_dim": model.theta_dimension,
        "basis": list(basis),
        "roots": [
            {
                "name": sr.name,
                "root": sr.root.render(basis),
                "type": sr.kind.value,
                "degree": sr.degree,
            }
            for sr in model.datum.simple_roots
        ],
        "theta": [{"weight": w.render(basis), "degree": w.degree} for w in model.theta],
        "colors": {k: [c.render(basis) for c in v] for k, v in model.colors.items()},
        "degrees_g": [f.token for f in model.degrees_g],
        "degrees_h": [f.token for f in model.degrees_h],
        "torus_degrees": list(model.torus_degrees),
        "constraint": list(model.constraint) if model.constraint else None,
        "table_delta": model.table_delta,
        "theta_plus": [w.render(basis) for w in model.golden_theta_plus],
        "unitary": model.unitary,
    }
    if model.delta_erratum:
        out["delta_erratum"] = model.delta_erratum
    if model.notes:
        out["notes"] = list(model.notes)
    return out


def _reduction_from_dict(data: Dict[str, Any]) -> Reduction:
    outer = data.get("outer")
    return Reduction(
        name=data["name"],
        model=data["model"],
        inner=tuple(data["inner"]),
        outer=tuple(outer) if outer else None,
        golden_theta1=tuple(e for expr in data.get("theta1", ()) for e in expand_pm(expr)),
        description=data.get("description", ""),
    )


def _reduction_to_dict(red: Reduction) -> Dict[str, Any]:
    return {
        "name": red.name,
        "model": red.model,
        "inner": list(red.inner),
        "outer": list(red.outer) if red.outer else None,
        "theta1": list(red.golden_theta1),
        "description": red.description,
    }


# -- catalog --------------------------------------------------------------------


@dataclass
class Catalog:
    models: Dict[str, ModelSpec]
    reductions: Dict[str, Reduction] = field(default_factory=dict)
    source: str = "embedded"

    def names(self) -> List[str]:
        return list(self.models)

    def get(self, name: str) -> ModelSpec:
        if name in self.models:
            return self.models[name]
        folded = {k.lower(): k for k in self.models}
        if name.lower() in folded:
            return self.models[folded[name.lower()]]
        raise UnknownModelError(name, self.names())

    def select(self, name: Optional[str]) -> List[ModelSpec]:
        """All models for None or 'all', otherwise the named one."""
        if name is None or name == "all":
            return list(self.models.values())
        return [self.get(name)]

    def reductions_for(self, model: str) -> List[Reduction]:
        return [r for r in self.reductions.values() if r.model == model]

    def reduction(self, name: str) -> Reduction:
        if name not in self.reductions:
            raise UnknownModelError(name, list(self.reductions))
        return self.reductions[name]

    @property
    def version(self) -> str:
        return catalog_version(self)


def export_catalog(catalog: Catalog) -> Dict[str, Any]:
    return {
        "schema": CATALOG_SCHEMA,
        "models": [model_to_dict(m) for m in catalog.models.values()],
        "reductions": [_reduction_to_dict(r) for r in catalog.reductions.values()],
    }


def catalog_json(catalog: Catalog) -> str:
    return json.dumps(export_catalog(catalog), ensure_ascii=False, indent=2, sort_keys=True)


def catalog_version(catalog: Catalog) -> str:
    """sha256 of the canonical export, shortened to 16 hex digits."""
    canonical = json.dumps(export_catalog(catalog), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _build(document: Dict[str, Any], source: str) -> Catalog:
    schema = document.get("schema", CATALOG_SCHEMA)
    if schema != CATALOG_SCHEMA:
        raise ModelDataError(f"unsupported catalog schema '{schema}'")
    models: Dict[str, ModelSpec] = {}
    for entry in document.get("models", []):
        model = model_from_dict(entry)
        if model.name in models:
            raise ModelDataError(f"duplicate model '{model.name}'")
        model.check()
        models[model.name] = model
    reductions: Dict[str, Reduction] = {}
    for entry in document.get("reductions", []):
        red = _reduction_from_dict(entry)
        if red.model not in models:
            raise ModelDataError(f"reduction {red.name} refers to unknown model '{red.model}'")
        datum = models[red.model].datum
        red.inner_indices(datum)
        red.outer_indices(datum)
        reductions[red.name] = red
    return Catalog(models, reductions, source)


def load_catalog(path: Optional[str] = None) -> Catalog:
    """Load an external catalog file, or the embedded one when path is None."""
    if path is None:
        return default_catalog()
    try:
        text = Path(path).read_text(encoding="utf-8")
        document = json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise ModelDataError(f"cannot read catalog {path}: {e}") from e
    return _build(document, str(path))


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return _build({"schema": CATALOG_SCHEMA, "models": EMBEDDED_MODELS, "reductions": EMBEDDED_REDUCTIONS}, "embedded")


# -- embedded data --------------------------------------------------------------

_GL = lambda n: [str(d) for d in range(1, n + 1)]  # noqa: E731

_E7_PAIRS = ((2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5), (2, 6), (3, 6))
_GSO12_TRIPLES = ((1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 5), (1, 3, 6), (1, 4, 5), (2, 3, 4), (2, 3, 5))

EMBEDDED_MODELS: List[Dict[str, Any]] = [
    {
        "name": "trilinear",
        "title": "GL2 x GL2 x GL2 / GL2",
        "rho_x": "std2 ⊗ std2 ⊗ std2",
        "rho_dim": 8,
        "basis": ["e1", "e2", "e1'", "e2'", "e1''", "e2''"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e1'-e2'"},
            {"name": "a3", "root": "e1''-e2''"},
        ],
        "theta_orbits": [{"weight": "e1+e1'+e1''"}],
        "colors": {
            "a1": ["e1+e2'+e1''", "e1+e1'+e2''"],
            "a2": ["e2+e1'+e1''", "e1+e1'+e2''"],
            "a3": ["e2+e1'+e1''", "e1+e2'+e1''"],
        },
        "constraint": [1, 1, 1, 1, 1, 1],
        "degrees_g": ["1", "2", "1", "2", "1", "2"],
        "degrees_h": ["2"],
        "table_delta": "ζ(1)³ζ(2)",
        "delta_erratum": "the closing display prints ζ(1)³ζ(2); the degree lists give ζ(1)³ζ(2)²",
        "theta_plus": ["e1+e1'+e1''", "e1+e1'+e2''", "e1+e2'+e1''", "e2+e1'+e1''"],
    },
    {
        "name": "GL4xGL2",
        "title": "GL4 x GL2 / GL2 x GL2",
        "rho_x": "(∧² ⊗ std2) ⊕ std4 ⊕ std4^∨",
        "rho_dim": 20,
        "basis": ["e1", "e2", "e3", "e4", "e1'", "e2'"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3"},
            {"name": "a3", "root": "e3-e4"},
            {"name": "a'", "root": "e1'-e2'"},
        ],
        "theta_orbits": [{"weight": "e1+e2+e1'"}, {"weight": "e1"}, {"weight": "-e4"}],
        "colors": {
            "a1": ["e1+e3+e2'", "e1+e4+e1'"],
            "a2": ["e2", "-e3"],
            "a3": ["e2+e3+e1'", "e1+e3+e2'"],
            "a'": ["e2+e3+e1'", "e1+e4+e1'"],
        },
        "constraint": [1, 1, 1, 1, 1, 1],
        "degrees_g": _GL(4) + _GL(2),
        "degrees_h": ["1", "2", "2"],
        "table_delta": "ζ(1)ζ(3)ζ(4)",
        "theta_plus": ["e1+e2+e1'", "e1+e2+e2'", "e1+e3+e1'", "e1+e3+e2'", "e1+e4+e1'", "e2+e3+e1'",
                       "e1", "e2", "-e3", "-e4"],
    },
    {
        "name": "GU4xGU2",
        "title": "GU4 x GU2 / (GU2 x GU2)^0",
        "rho_x": "(∧² ⊗ std2) ⊕ std4 ⊕ std4^∨ (endoscopic restriction)",
        "rho_dim": 20,
        "unitary": True,
        "basis": ["e1", "e2", "e1'"],
        "roots": [
            {"name": "a1", "root": "e1-e2", "degree": 2},
            {"name": "a2", "root": "2e2"},
            {"name": "a'", "root": "2e1'"},
        ],
        "theta_orbits": [
            {"weight": "e1", "degree": 2},
            {"weight": "e1'", "degree": 2},
            {"weight": "(e1+e2+e1')/2"},
        ],
        "colors": {
            "a1": ["(e1-e2-e1')/2", "(e1-e2+e1')/2"],
            "a2": ["e2"],
            "a'": ["e1'"],
        },
        "degrees_g": ["1", "L1", "2", "L3", "4", "1", "L1", "2"],
        "degrees_h": ["2", "2", "L1"],
        "torus_degrees": [1, 1, 2, 2, 2],
        "table_delta": "ζ(1)²ζ(4)L(1,η)L(3,η)",
        "theta_plus": ["e1", "e2", "e1'", "(e1±e2±e1')/2"],
        "notes": ["Theta lists weights with weight-space dimension; ±e1, ±e2, ±e1' are two-dimensional"],
    },
    {
        "name": "GSp6xGSp4",
        "title": "GSp6 x GSp4 / (GSp4 x GSp2)^0",
        "rho_x": "Spin7 ⊗ Spin5",
        "rho_dim": 32,
        "basis": ["e1", "e2", "e3", "e1'", "e2'"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3"},
            {"name": "a3", "root": "2e3"},
            {"name": "a1'", "root": "e1'-e2'"},
            {"name": "a2'", "root": "2e2'"},
        ],
        "theta_orbits": [{"weight": "(e1+e2+e3)/2+(e1'+e2')/2"}],
        "colors": {
            "a1": ["(e1-e2+e3)/2+(-e1'+e2')/2", "(e1-e2-e3)/2+(e1'-e2')/2"],
            "a2": ["(-e1+e2-e3)/2+(e1'+e2')/2", "(e1+e2-e3)/2+(-e1'-e2')/2"],
            "a3": ["(e1-e2+e3)/2+(-e1'+e2')/2", "(-e1+e2+e3)/2+(e1'-e2')/2"],
            "a1'": ["(-e1+e2+e3)/2+(e1'-e2')/2", "(e1-e2-e3)/2+(e1'-e2')/2"],
            "a2'": ["(e1-e2+e3)/2+(-e1'+e2')/2", "(-e1+e2-e3)/2+(e1'+e2')/2"],
        },
        "degrees_g": ["1", "2", "4", "6", "1", "2", "4"],
        "degrees_h": ["2", "2", "4"],
        "table_delta": "ζ(1)²ζ(4)ζ(6)",
        "theta_plus": [
            "(e1+e2±e3)/2+(±e1'±e2')/2",
            "(e1-e2+e3)/2+(e1'±e2')/2",
            "(e1-e2+e3)/2+(-e1'+e2')/2",
            "±(e1-e2-e3)/2+(e1'±e2')/2",
            "(-e1+e2-e3)/2+(e1'+e2')/2",
        ],
    },
    {
        "name": "GL6",
        "title": "GL6 / GL2 ⋉ U",
        "rho_x": "∧³",
        "rho_dim": 20,
        "basis": ["e1", "e2", "e3", "e4", "e5", "e6"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3", "type": "U-psi"},
            {"name": "a3", "root": "e3-e4"},
            {"name": "a4", "root": "e4-e5", "type": "U-psi"},
            {"name": "a5", "root": "e5-e6"},
        ],
        "theta_orbits": [{"weight": "e1+e2+e3"}],
        "colors": {
            "a1": ["e1+e4+e5", "e1+e3+e6"],
            "a3": ["e2+e3+e5", "e1+e3+e6"],
            "a5": ["e2+e3+e5", "e1+e4+e5"],
        },
        "constraint": [1, 1, 1, 1, 1, 1],
        "degrees_g": _GL(6),
        "degrees_h": ["2"],
        "table_delta": "ζ(1)ζ(3)ζ(4)ζ(5)ζ(6)",
        "theta_plus": ["e1+e2+e3", "e1+e2+e4", "e1+e2+e5", "e1+e2+e6", "e1+e3+e4", "e1+e3+e5", "e1+e3+e6",
                       "e1+e4+e5", "e2+e3+e4", "e2+e3+e5"],
    },
    {
        "name": "GU6",
        "title": "GU6 / GU2 ⋉ U",
        "rho_x": "∧³ (endoscopic restriction)",
        "rho_dim": 20,
        "unitary": True,
        "basis": ["e1", "e2", "e3"],
        "roots": [
            {"name": "a1", "root": "e1-e2", "degree": 2},
            {"name": "a2", "root": "e2-e3", "type": "U-psi", "degree": 2},
            {"name": "a3", "root": "2e3"},
        ],
        "theta_orbits": [{"weight": "e1", "degree": 2}, {"weight": "(e1+e2+e3)/2"}],
        "colors": {
            "a1": ["(e1-e2-e3)/2", "(e1-e2+e3)/2"],
            "a3": ["e3"],
        },
        "degrees_g": ["1", "L1", "2", "L3", "4", "L5", "6"],
        "degrees_h": ["2"],
        "torus_degrees": [1, 2, 2, 2],
        "table_delta": "ζ(1)ζ(4)ζ(6)L(1,η)L(3,η)L(5,η)",
        "theta_plus": ["e1", "e2", "e3", "(e1±e2±e3)/2"],
        "notes": ["Theta⁺ has 7 distinct weights, 10 counted with weight-space dimension"],
    },
    {
        "name": "GSp10",
        "title": "GSp10 / GL2 ⋉ U",
        "rho_x": "Spin11",
        "rho_dim": 32,
        "basis": ["e1", "e2", "e3", "e4", "e5"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3", "type": "U-psi"},
            {"name": "a3", "root": "e3-e4"},
            {"name": "a4", "root": "e4-e5", "type": "U-psi"},
            {"name": "a5", "root": "2e5"},
        ],
        "theta_orbits": [{"weight": "(e1+e2+e3+e4+e5)/2"}],
        "colors": {
            "a1": ["(e1-e2-e3+e4+e5)/2", "(e1-e2+e3-e4-e5)/2"],
            "a3": ["(-e1+e2+e3-e4+e5)/2", "(e1-e2+e3-e4-e5)/2"],
            "a5": ["(-e1+e2+e3-e4+e5)/2", "(e1-e2-e3+e4+e5)/2"],
        },
        "degrees_g": ["1", "2", "4", "6", "8", "10"],
        "degrees_h": ["2"],
        "table_delta": "ζ(1)ζ(4)ζ(6)ζ(8)ζ(10)",
        "theta_plus": [
            "(e1+e2±e3±e4±e5)/2",
            "(e1-e2+e3±e4±e5)/2",
            "(e1-e2-e3+e4+e5)/2",
            "(-e1+e2+e3+e4±e5)/2",
            "(-e1+e2+e3-e4+e5)/2",
        ],
    },
    {
        "name": "GSp6xGL2",
        "title": "GSp6 x GL2 / GL2 ⋉ U",
        "rho_x": "Spin7 ⊗ std2",
        "rho_dim": 16,
        "basis": ["e1", "e2", "e3", "e1'", "e2'"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3", "type": "U-psi"},
            {"name": "a3", "root": "2e3"},
            {"name": "a'", "root": "e1'-e2'"},
        ],
        "theta_orbits": [{"weight": "(e1+e2+e3)/2+e1'"}],
        "colors": {
            "a1": ["(e1-e2-e3)/2+e1'", "(e1-e2+e3)/2+e2'"],
            "a3": ["(-e1+e2+e3)/2+e1'", "(e1-e2+e3)/2+e2'"],
            "a'": ["(-e1+e2+e3)/2+e1'", "(e1-e2-e3)/2+e1'"],
        },
        "constraint": [0, 0, 0, 1, 1],
        "degrees_g": ["1", "2", "4", "6", "1", "2"],
        "degrees_h": ["2"],
        "table_delta": "ζ(1)ζ(2)ζ(4)ζ(6)",
        "delta_erratum": "the printed entry is ζ(1)ζ(2)ζ(4)ζ(6); the degree lists give ζ(1)²ζ(2)ζ(4)ζ(6)",
        "theta_plus": [
            "(e1+e2±e3)/2+e1'", "(e1+e2±e3)/2+e2'",
            "(e1-e2+e3)/2+e1'", "(e1-e2+e3)/2+e2'",
            "±(e1-e2-e3)/2+e1'",
        ],
    },
    {
        "name": "GSO8xGL2",
        "title": "GSO8 x GL2 / GL2 ⋉ U",
        "rho_x": "HSpin8 ⊗ std2",
        "rho_dim": 16,
        "basis": ["e1", "e2", "e3", "e4", "e1'", "e2'"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3", "type": "U-psi"},
            {"name": "a3", "root": "e3-e4"},
            {"name": "a4", "root": "e3+e4", "type": "U-psi"},
            {"name": "a'", "root": "e1'-e2'"},
        ],
        "theta_orbits": [{"weight": "(e1+e2+e3+e4)/2+e1'"}],
        "colors": {
            "a1": ["(e1-e2-e3+e4)/2+e1'", "(e1-e2+e3-e4)/2+e2'"],
            "a3": ["(-e1+e2+e3-e4)/2+e1'", "(e1-e2+e3-e4)/2+e2'"],
            "a'": ["(-e1+e2+e3-e4)/2+e1'", "(e1-e2-e3+e4)/2+e1'"],
        },
        "constraint": [0, 0, 0, 0, 1, 1],
        "degrees_g": ["1", "2", "4", "4", "6", "1", "2"],
        "degrees_h": ["2"],
        "table_delta": "ζ(1)²ζ(2)ζ(4)²ζ(6)",
        "theta_plus": [
            "(e1+e2±(e3+e4))/2+e1'", "(e1+e2±(e3+e4))/2+e2'",
            "(e1-e2+e3-e4)/2+e1'", "(e1-e2+e3-e4)/2+e2'",
            "±(e1-e2-e3+e4)/2+e1'",
        ],
        "notes": ["the other half-spin choice is the image under e4 -> -e4"],
    },
    {
        "name": "GSO12",
        "title": "GSO12 / GL2 ⋉ U",
        "rho_x": "HSpin12",
        "rho_dim": 32,
        "basis": ["e1", "e2", "e3", "e4", "e5", "e6"],
        "roots": [
            {"name": "a1", "root": "e1-e2"},
            {"name": "a2", "root": "e2-e3", "type": "U-psi"},
            {"name": "a3", "root": "e3-e4"},
            {"name": "a4", "root": "e4-e5", "type": "U-psi"},
            {"name": "a5", "root": "e5-e6"},
            {"name": "a6", "root": "e5+e6", "type": "U-psi"},
        ],
        "theta_orbits": [{"weight": "(e1+e2+e3+e4+e5-e6)/2"}],
        "colors": {
            "a1": ["(e1-e2-e3+e4+e5-e6)/2", "(e1-e2+e3-e4-e5+e6)/2"],
            "a3": ["(-e1+e2+e3-e4+e5-e6)/2", "(e1-e2+e3-e4-e5+e6)/2"],
            "a5": ["(-e1+e2+e3-e4+e5-e6)/2", "(e1-e2-e3+e4+e5-e6)/2"],
        },
        "degrees_g": ["1", "2", "4", "6", "8", "10", "6"],
        "degrees_h": ["2"],
        "table_delta": "ζ(1)ζ(4)ζ(6)²ζ(8)ζ(10)",
        "theta_plus": [f"(e1+e2+e3+e4+e5+e6-2e{l})/2" for l in range(1, 7)]
        + [f"(-e1-e2-e3-e4-e5-e6+2e{i}+2e{j}+2e{k})/2" for i, j, k in _GSO12_TRIPLES],
        "notes": ["the other half-spin choice is the image under e6 -> -e6"],
    },
    {
        "name": "E7",
        "title": "E7 / PGL2 ⋉ U",
        "rho_x": "ω7 (56-dimensional)",
        "rho_dim": 56,
        "basis": ["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"],
        "roots": [
            {"name": "a1", "root": "(e1+e8)/2-(e2+e3+e4+e5+e6+e7)/2", "type": "U-psi"},
            {"name": "a2", "root": "e1+e2"},
            {"name": "a3", "root": "e2-e1", "type": "U-psi"},
            {"name": "a4", "root": "e3-e2", "type": "U-psi"},
            {"name": "a5", "root": "e4-e3"},
            {"name": "a6", "root": "e5-e4", "type": "U-psi"},
            {"name": "a7", "root": "e6-e5"},
        ],
        "theta_orbits": [{"weight": "e6+(e8-e7)/2"}],
        "colors": {
            "a2": ["(e1+e2-e3+e4+e5-e6)/2", "(e1+e2+e3-e4-e5+e6)/2"],
            "a5": ["(e1+e2-e3+e4+e5-e6)/2", "(-e1-e2-e3+e4-e5+e6)/2"],
            "a7": ["(e1+e2+e3-e4-e5+e6)/2", "(-e1-e2-e3+e4-e5+e6)/2"],
        },
        "constraint": [0, 0, 0, 0, 0, 0, 1, 1],
        "degrees_g": ["2", "6", "8", "10", "12", "14", "18"],
        "degrees_h": ["2"],
        "table_delta": "ζ(6)ζ(8)ζ(10)ζ(12)ζ(14)ζ(18)",
        "theta_plus": [f"(e1+e2+e3+e4+e5+e6-2e{i}-2e{j})/2" for i, j in _E7_PAIRS]
        + ["(-e1-e2-e3-e4-e5-e6+2e5+2e6)/2", "(-e1-e2-e3-e4-e5-e6+2e4+2e6)/2",
           "(e1+e2+e3+e4+e5+e6)/2"]
        + [f"(-e1+e2+e3+e4+e5+e6-2e{k})/2" for k in range(2, 7)]
        + [f"±e{m}+(e8-e7)/2" for m in range(1, 7)],
        "notes": ["Bourbaki coordinates inside E8; the torus constraint tau7*tau8 = 1 removes the e7+e8 direction"],
    },
]

EMBEDDED_REDUCTIONS: List[Dict[str, Any]] = [
    {
        "name": "GL6-over-GL4xGL2",
        "model": "GL6",
        "inner": ["a1", "a2", "a3", "a5"],
        "theta1": ["e1+e2+e3", "e1+e2+e4", "e1+e3+e4", "e2+e3+e4"],
        "description": "S6 over S4 x S2",
    },
    {
        "name": "GL4xGL2-over-trilinear",
        "model": "GL6",
        "outer": ["a1", "a2", "a3", "a5"],
        "inner": ["a1", "a3", "a5"],
        "description": "S4 x S2 over S2 x S2 x S2 inside GL6",
    },
    {
        "name": "GSp10-over-GL4xGL2",
        "model": "GSp10",
        "inner": ["a1", "a2", "a3", "a5"],
        "theta1": ["(e1+e2+e3±e4±e5)/2", "(e1+e2+e3+e4±e5-2e1)/2", "(e1+e2+e3+e4±e5-2e2)/2",
                   "(e1+e2+e3+e4±e5-2e3)/2"],
        "description": "W(C5) over S4 x S2",
    },
    {
        "name": "GSO12-over-GL6",
        "model": "GSO12",
        "inner": ["a1", "a2", "a3", "a4", "a5"],
        "theta1": [f"(e1+e2+e3+e4+e5+e6-2e{l})/2" for l in range(1, 7)],
        "description": "W(D6) over S6",
    },
    {
        "name": "GSO8-over-trilinear",
        "model": "GSO8xGL2",
        "inner": ["a1", "a3", "a'"],
        "description": "W(D4) x S2 over S2 x S2 x S2",
    },
    {
        "name": "GSp6GL2-over-trilinear",
        "model": "GSp6xGL2",
        "inner": ["a1", "a3", "a'"],
        "description": "W(C3) x S2 over S2 x S2 x S2",
    },
    {
        "name": "E7-over-D6",
        "model": "E7",
        "inner": ["a2", "a3", "a4", "a5", "a6", "a7"],
        "theta1": [f"±e{m}+(e8-e7)/2" for m in range(1, 7)],
        "description": "W(E7) over W(D6)",
    },
    {
        "name": "E7-D6-over-A5",
        "model": "E7",
        "outer": ["a2", "a3", "a4", "a5", "a6", "a7"],
        "inner": ["a2", "a4", "a5", "a6", "a7"],
        "description": "W(D6) over S6 inside E7",
    },
    {
        "name": "E7-A5-over-A3A1",
        "model": "E7",
        "outer": ["a2", "a4", "a5", "a6", "a7"],
        "inner": ["a2", "a4", "a5", "a7"],
        "description": "S6 over S4 x S2 inside E7",
    },
    {
        "name": "E7-A3A1-over-A1A1A1",
        "model": "E7",
        "outer": ["a2", "a4", "a5", "a7"],
        "inner": ["a2", "a5", "a7"],
        "description": "S4 x S2 over S2 x S2 x S2 inside E7",
    },
]
