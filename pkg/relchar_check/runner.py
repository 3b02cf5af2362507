from __future__ import annotations

"""
Run orchestration and run records.

Design:
- A run loads the catalog once (embedded, or RELCHAR_CATALOG), runs one
  suite and collects a RunReport: the command echo, every CheckResult,
  timing and the catalog version hash.
- Auditability: every run appends a JSONL log (command, one event per
  check, summary) so a report can be reproduced from its seed.
- Exit status is derived from the report alone: 0 iff no check failed.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Dict, List, Optional

from .catalog import Catalog, load_catalog
from .config import Settings
from .suites import run_checks
from .validators import CheckResult, first_failure, summarize

__all__ = ["JsonlLogger", "RunReport", "run_suite", "open_catalog"]


class JsonlLogger:
    """Append-only JSONL run log."""

    def __init__(self, log_dir: str):
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        ts = time.strftime("%Y%m%d-%H%M%S")
        self.path = Path(log_dir) / f"run-{ts}.jsonl"
        self._file: Optional[IO[str]] = None

    def _ensure_open(self) -> IO[str]:
        if self._file is None or self._file.closed:
            self._file = self.path.open("a", encoding="utf-8")
        return self._file

    def write(self, event: Dict[str, Any]) -> None:
        event["ts"] = time.time()
        f = self._ensure_open()
        f.write(json.dumps(event, ensure_ascii=False) + "\n")
        f.flush()

    def close(self) -> None:
        if self._file is not None and not self._file.closed:
            self._file.close()

    def __enter__(self) -> "JsonlLogger":
        return self

    def __exit__(self, *args: Any) -> None:
        self.close()


@dataclass
class RunReport:
    command: List[str]
    catalog_version: str
    seed: int
    results: List[CheckResult] = field(default_factory=list)
    seconds: float = 0.0
    log_path: str = ""

    @property
    def ok(self) -> bool:
        return first_failure(self.results) is None

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> Dict[str, object]:
        return {
            "command": list(self.command),
            "catalog_version": self.catalog_version,
            "seed": self.seed,
            "summary": summarize(self.results),
            "checks": [r.to_dict() for r in self.results],
        }


def open_catalog(settings: Settings) -> Catalog:
    return load_catalog(settings.catalog_path)


def run_suite(
    suite: str,
    settings: Settings,
    model: Optional[str] = None,
    command: Optional[List[str]] = None,
    catalog: Optional[Catalog] = None,
) -> RunReport:
    """Run a verification suite and log every check as it is reported.

    Unknown model names raise UnknownModelError before anything is logged.
    """
    catalog = catalog if catalog is not None else open_catalog(settings)
    catalog.select(model)
    echo = list(command) if command is not None else ["verify", suite]
    report = RunReport(echo, catalog.version, settings.seed)

    t0 = time.time()
    with JsonlLogger(settings.log_dir) as logger:
        logger.write({"type": "command", "command": echo, "catalog": catalog.source, "version": catalog.version})
        report.results = run_checks(suite, catalog, settings, model)
        for r in report.results:
            logger.write({"type": "check", **r.to_dict(timings=True)})
        report.seconds = time.time() - t0
        logger.write({"type": "summary", "summary": summarize(report.results), "seconds": round(report.seconds, 3)})
        report.log_path = str(logger.path)
    return report
