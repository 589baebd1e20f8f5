"""Experiment reports: typed check records, JSON/CSV persistence, merging,
and a determinism hash that ignores timestamps."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

SCHEMA = "varlex-report/1"
CSV_COLUMNS = (
    "suite",
    "check",
    "location",
    "status",
    "lhs",
    "rhs",
    "ratio",
    "tolerance",
    "seed",
    "grid",
)

PASS = "pass"
FAIL = "fail"
RECORDED = "recorded"


@dataclass
class CheckRecord:
    name: str
    location: str
    status: str
    lhs: float | None = None
    rhs: float | None = None
    ratio: float | None = None
    tolerance: float | None = None
    grid: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "location": self.location,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "tolerance": self.tolerance,
            "grid": self.grid,
        }


@dataclass
class ExperimentReport:
    suite: str
    environment: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    estimates: dict = field(default_factory=dict)
    skips: dict = field(default_factory=lambda: {"skipped": 0, "total": 0})

    def check(
        self,
        name: str,
        location: str,
        ok: bool,
        lhs=None,
        rhs=None,
        ratio=None,
        tolerance=None,
        grid="",
    ) -> bool:
        self.checks.append(
            CheckRecord(
                name,
                location,
                PASS if ok else FAIL,
                _f(lhs),
                _f(rhs),
                _f(ratio),
                _f(tolerance),
                str(grid),
            )
        )
        return ok

    def record(self, name, location, lhs=None, rhs=None, ratio=None, grid=""):
        self.checks.append(
            CheckRecord(
                name, location, RECORDED, _f(lhs), _f(rhs), _f(ratio), None, str(grid)
            )
        )

    def skip(self, count: int = 1, total: int = 1):
        self.skips["skipped"] += count
        self.skips["total"] += total

    def count_trial(self, total: int = 1):
        self.skips["total"] += total

    def finalize_skips(self, location: str = "trial-skip-fraction"):
        """A suite with more than half its trials skipped fails diagnostically."""
        total = self.skips["total"]
        if total == 0:
            return
        frac = self.skips["skipped"] / total
        if frac > 0.5:
            self.check(
                "skip-fraction",
                location,
                False,
                lhs=frac,
                rhs=0.5,
                ratio=frac / 0.5,
                tolerance=0.5,
            )

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "environment": self.environment,
            "checks": [c.to_dict() for c in self.checks],
            "estimates": self.estimates,
            "skips": dict(self.skips),
            "passed": self.passed,
        }

    def json_bytes(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1).encode()

    def determinism_hash(self) -> str:
        d = self.to_dict()
        env = dict(d["environment"])
        env.pop("timestamp", None)
        d["environment"] = env
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        seed = self.environment.get("seed", "")
        for c in self.checks:
            writer.writerow(
                [
                    self.suite,
                    c.name,
                    c.location,
                    c.status,
                    _cell(c.lhs),
                    _cell(c.rhs),
                    _cell(c.ratio),
                    _cell(c.tolerance),
                    seed,
                    c.grid,
                ]
            )
        return buf.getvalue()

    def write(self, out_dir, basename: str | None = None) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        base = basename or self.suite
        jpath = out / f"{base}.json"
        cpath = out / f"{base}.csv"
        jpath.write_bytes(self.json_bytes())
        cpath.write_text(self.csv_text())
        return jpath, cpath


def _f(x):
    return None if x is None else float(x)


def _cell(x):
    return "" if x is None else repr(x)


def make_environment(seed, grid_sizes, backend, extra=None) -> dict:
    env = {
        "seed": int(seed),
        "grid_sizes": [int(n) for n in grid_sizes],
        "backend": backend,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        env.update(extra)
    return env


def merge_reports(reports) -> ExperimentReport:
    merged = ExperimentReport("merged")
    envs = []
    for r in reports:
        envs.append({"suite": r.suite, **r.environment})
        for c in r.checks:
            merged.checks.append(
                CheckRecord(
                    f"{r.suite}/{c.name}",
                    c.location,
                    c.status,
                    c.lhs,
                    c.rhs,
                    c.ratio,
                    c.tolerance,
                    c.grid,
                )
            )
        for k, v in r.estimates.items():
            merged.estimates[f"{r.suite}/{k}"] = v
        merged.skips["skipped"] += r.skips.get("skipped", 0)
        merged.skips["total"] += r.skips.get("total", 0)
    merged.environment = {"sources": envs}
    return merged


def report_from_json(d: dict) -> ExperimentReport:
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {d.get('schema')!r}")
    rep = ExperimentReport(d["suite"], environment=d.get("environment", {}))
    for c in d.get("checks", []):
        rep.checks.append(
            CheckRecord(
                c["name"],
                c["location"],
                c["status"],
                c.get("lhs"),
                c.get("rhs"),
                c.get("ratio"),
                c.get("tolerance"),
                c.get("grid", ""),
            )
        )
    rep.estimates = d.get("estimates", {})
    rep.skips = d.get("skips", {"skipped": 0, "total": 0})
    return rep
