from __future__ import annotations

"""Check results, error types and the small parsers/formatters shared by the CLI.

Every verification in this package reports through `CheckResult` so that
suites, the JSONL log and the terminal tables all read the same record.
Exact values leave the process only as "p/q" strings.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

__all__ = [
    "RelcharError",
    "DimensionError",
    "PoleError",
    "ConstraintError",
    "ModelDataError",
    "UniquenessError",
    "WeylCapError",
    "IdentityError",
    "MembershipError",
    "AssemblyError",
    "StabilizationError",
    "AntisymDiscrepancy",
    "DivergentSeriesError",
    "UnknownModelError",
    "CheckStatus",
    "CheckResult",
    "format_rational",
    "parse_rational",
    "parse_assignments",
    "parse_coweight",
    "suggest_names",
    "summarize",
    "first_failure",
]


class RelcharError(Exception):
    """Base class for every error raised by relchar_check."""


class DimensionError(RelcharError):
    """Vectors or matrices from different coordinate spaces were combined."""


class PoleError(RelcharError):
    """An evaluation point hit a pole of the expression being evaluated."""


class ConstraintError(RelcharError):
    """A point violates the torus constraint declared by its model."""


class ModelDataError(RelcharError):
    """Catalog data is internally inconsistent."""


class UniquenessError(ModelDataError):
    """The brute-force search found zero or several minimal solutions."""


class WeylCapError(RelcharError):
    """Weyl group enumeration exceeded the configured element cap."""


class IdentityError(RelcharError):
    """A transcribed matrix identity does not hold."""


class MembershipError(IdentityError):
    """A matrix is not in the group (or subgroup) it is claimed to lie in."""


class AssemblyError(RelcharError):
    """Two independent assemblies of the same quantity disagree."""


class StabilizationError(RelcharError):
    """Residue counts did not stabilize between consecutive levels."""


class AntisymDiscrepancy(RelcharError):
    """A monomial survived antisymmetrization at a power that must vanish."""


class DivergentSeriesError(RelcharError):
    """A geometric series was requested with ratio exactly 1."""


class UnknownModelError(RelcharError):
    """A model or reduction name is not in the catalog."""

    def __init__(self, name: str, known: Sequence[str]):
        self.name = name
        self.suggestions = suggest_names(name, known)
        hint = f" Did you mean: {', '.join(self.suggestions)}?" if self.suggestions else ""
        super().__init__(f"Unknown name '{name}'. Known: {', '.join(known)}.{hint}")


class CheckStatus(Enum):
    """Outcome of a single verification."""

    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


@dataclass
class CheckResult:
    suite: str
    name: str
    status: CheckStatus
    detail: str = ""
    # Exact residuals and values, already rendered as "p/q" strings.
    values: Dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != CheckStatus.FAIL

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        """Wall-clock seconds are included only with timings=True (the run log)."""
        out: Dict[str, object] = {
            "suite": self.suite,
            "name": self.name,
            "status": self.status.value,
            "detail": self.detail,
            "values": dict(self.values),
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def format_rational(value: object) -> str:
    """Render an exact rational (Fraction, int, gmpy2.mpq) as 'p/q' or 'p'."""
    frac = Fraction(int(value.numerator), int(value.denominator))  # type: ignore[attr-defined]
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse '3', '-2/5' or '0.5' into an exact Fraction."""
    raw = (text or "").strip()
    if not raw:
        raise ValueError("empty rational")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: '{text}'") from e


def parse_assignments(text: str) -> Dict[int, Fraction]:
    """Parse 'tau1=2,tau3=-1/2' (1-based indices) into {0: 2, 2: -1/2}.

    Bare comma-separated values ('2,3,1/2') assign positions in order.
    """
    out: Dict[int, Fraction] = {}
    parts = [p.strip() for p in (text or "").split(",") if p.strip()]
    for pos, part in enumerate(parts):
        if "=" not in part:
            out[pos] = parse_rational(part)
            continue
        left, right = part.split("=", 1)
        key = left.strip().lower()
        if key.startswith("tau"):
            key = key[3:]
        if not key.isdigit() or int(key) < 1:
            raise ValueError(f"bad coordinate name '{left.strip()}'")
        idx = int(key) - 1
        if idx in out:  # reject duplicates instead of silently overwriting
            raise ValueError(f"coordinate tau{idx + 1} assigned twice")
        out[idx] = parse_rational(right)
    return out


def parse_coweight(text: str, dim: int) -> Tuple[int, ...]:
    """Parse a comma-separated coweight in real coordinates into doubled integers."""
    parts = [p.strip() for p in (text or "").split(",") if p.strip()]
    if len(parts) != dim:
        raise ValueError(f"coweight needs {dim} coordinates, got {len(parts)}")
    doubled: List[int] = []
    for part in parts:
        value = parse_rational(part) * 2
        if value.denominator != 1:
            raise ValueError(f"coordinate {part} is not a half-integer")
        doubled.append(int(value))
    return tuple(doubled)


def suggest_names(name: str, known: Sequence[str], limit: int = 3) -> List[str]:
    """Case-insensitive prefix/substring suggestions for a mistyped name."""
    needle = (name or "").lower().replace("x", "").replace("_", "").replace("-", "")
    scored: List[Tuple[int, str]] = []
    for cand in known:
        hay = cand.lower().replace("x", "").replace("_", "").replace("-", "")
        if hay.startswith(needle[:3]) or needle in hay or hay in needle:
            scored.append((abs(len(hay) - len(needle)), cand))
    return [c for _, c in sorted(scored)[:limit]]


def summarize(results: Sequence[CheckResult]) -> Dict[str, int]:
    counts = {s.value: 0 for s in CheckStatus}
    for r in results:
        counts[r.status.value] += 1
    return counts


def first_failure(results: Sequence[CheckResult]) -> Optional[CheckResult]:
    for r in results:
        if r.status == CheckStatus.FAIL:
            return r
    return None
