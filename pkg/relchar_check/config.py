from __future__ import annotations

"""Configuration via environment variables.

Settings are loaded from `.env` (local) and the process environment (CI).
Worker counts, sampling bounds, seeds, caps and log paths can be changed
without touching Python code; the CLI flags override these per run.
"""

import os
from dataclasses import dataclass, replace
from typing import List, Optional

from dotenv import load_dotenv

__all__ = [
    "Settings",
    "DEFAULT_SEED",
    "DEFAULT_WEYL_CAP",
    "DEFAULT_MAX_RESAMPLE",
    "DEFAULT_SAMPLE_BOUND",
    "SYMBOLIC_WEYL_LIMIT",
    "BRUTE_FORCE_FULL_LIMIT",
    "BRUTE_FORCE_TRANSVERSAL_LIMIT",
    "SUBGROUP_MODE_TERM_BUDGET",
    "FULL_ANTISYM_LIMIT",
    "FLOAT_TOLERANCE",
    "DIRECT_SUM_LIMIT",
    "DEFAULT_SHELL_DEPTH",
]

# Seed used when neither RELCHAR_SEED nor --seed is given
DEFAULT_SEED = 20240501

# Abort Weyl enumeration past this many elements
DEFAULT_WEYL_CAP = 4_000_000

# Pole resampling attempts before failing
DEFAULT_MAX_RESAMPLE = 50

# Random point coordinates have numerator/denominator bounded by this
DEFAULT_SAMPLE_BOUND = 7

# Symbolic Weyl sums only for groups at most this large
SYMBOLIC_WEYL_LIMIT = 384

# Brute-force Theta+ search: full power set up to this many weights,
# sign transversals (one of each +-pair) up to the second limit
BRUTE_FORCE_FULL_LIMIT = 16
BRUTE_FORCE_TRANSVERSAL_LIMIT = 32

# |W_J| * 2^|Theta_1+| bound for the subgroup-denominator antisym mode
SUBGROUP_MODE_TERM_BUDGET = 2_000_000

# Full-model antisymmetrization only for |Theta+| up to this
FULL_ANTISYM_LIMIT = 16

# Complex additive-character sums
FLOAT_TOLERANCE = 1e-9

# Per-element c_WS cross-check only for groups at most this large
DIRECT_SUM_LIMIT = 46_080

# Shells summed by the truncated p-adic cross-checks
DEFAULT_SHELL_DEPTH = 12


def _env(name: str, default: str) -> str:
    v = os.getenv(name)
    return default if v is None or v == "" else v


def _env_float(name: str, default: str) -> float:
    try:
        return float(_env(name, default))
    except ValueError:
        return float(default)


def _env_int(name: str, default: str) -> int:
    try:
        return int(_env(name, default))
    except ValueError:
        return int(default)


def _env_int_optional(name: str) -> Optional[int]:
    raw = os.getenv(name, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def _env_flag(name: str) -> bool:
    return _env(name, "0").strip().lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class Settings:
    catalog_path: Optional[str]

    jobs: int
    seed: int
    points: int

    weyl_cap: int
    max_resample: int
    sample_bound: int
    shell_depth: int
    tolerance: float

    log_dir: str
    slow: bool

    @classmethod
    def from_env(cls) -> "Settings":
        """Load settings from environment variables (with sane defaults)."""
        # Do not override already-set environment variables.
        load_dotenv(override=False)

        catalog = _env("RELCHAR_CATALOG", "").strip() or None
        seed = _env_int_optional("RELCHAR_SEED")

        return cls(
            catalog_path=catalog,
            jobs=_env_int("RELCHAR_JOBS", "0"),
            seed=DEFAULT_SEED if seed is None else seed,
            points=_env_int("RELCHAR_POINTS", "5"),
            weyl_cap=_env_int("RELCHAR_WEYL_CAP", str(DEFAULT_WEYL_CAP)),
            max_resample=_env_int("RELCHAR_MAX_RESAMPLE", str(DEFAULT_MAX_RESAMPLE)),
            sample_bound=_env_int("RELCHAR_SAMPLE_BOUND", str(DEFAULT_SAMPLE_BOUND)),
            shell_depth=_env_int("RELCHAR_SHELL_DEPTH", str(DEFAULT_SHELL_DEPTH)),
            tolerance=_env_float("RELCHAR_TOLERANCE", str(FLOAT_TOLERANCE)),
            log_dir=_env("RELCHAR_LOG_DIR", "runs"),
            slow=_env_flag("RELCHAR_SLOW"),
        )

    @property
    def workers(self) -> int:
        """Resolved worker count (0 means one per CPU)."""
        if self.jobs > 0:
            return self.jobs
        return os.cpu_count() or 1

    def with_overrides(self, **changes: object) -> "Settings":
        """Return a copy with CLI overrides applied (None values are ignored)."""
        clean = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **clean) if clean else self

    def validate(self) -> None:
        """Validate settings constraints. Raises ValueError if invalid."""
        errors: List[str] = []

        if self.jobs < 0:
            errors.append("jobs must be >= 0")
        if self.points < 1:
            errors.append("points must be >= 1")
        if self.weyl_cap < 1:
            errors.append("weyl_cap must be >= 1")
        if self.max_resample < 1:
            errors.append("max_resample must be >= 1")
        if self.sample_bound < 2:
            errors.append("sample_bound must be >= 2")
        if not (1 <= self.shell_depth <= 64):
            errors.append("shell_depth must be in [1, 64]")
        if not (0 < self.tolerance < 1e-3):
            errors.append("tolerance must be in (0, 1e-3)")
        if not self.log_dir:
            errors.append("log_dir cannot be empty")
        if self.catalog_path is not None and not os.path.isfile(self.catalog_path):
            errors.append(f"catalog file not found: {self.catalog_path}")

        if errors:
            raise ValueError(f"Invalid settings: {'; '.join(errors)}")
