"""Machine-readable verification reports.

A report is a flat list of checks, each carrying the theory anchor it
certifies, the measured value, its tolerance, and a status.  "flag" is
distinct from "fail": audit findings about formulas-as-printed are
first-class results, not errors.  Report bytes are deterministic for a
fixed (config, seed): keys are sorted, check order is construction
order, and floats use shortest round-trip decimals.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

__all__ = ["Check", "Report", "run_check", "emit_report"]

STATUSES = ("pass", "fail", "flag")


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    value: float
    tol: float
    status: str
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self):
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "value": _jsonable(self.value),
            "tol": _jsonable(self.tol),
            "status": self.status,
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    checks: list = field(default_factory=list)
    repro: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)   # (filename, header, rows)

    def add(self, check: Check):
        self.checks.append(check)

    def attach_artifact(self, filename: str, header, rows):
        self.artifacts.append((filename, list(header),
                               [list(map(float, r)) for r in rows]))

    @property
    def summary(self):
        return {
            "pass": sum(1 for c in self.checks if c.status == "pass"),
            "flag": sum(1 for c in self.checks if c.status == "flag"),
            "fail": sum(1 for c in self.checks if c.status == "fail"),
        }

    @property
    def failed(self):
        return [c for c in self.checks if c.status == "fail"]

    def as_dict(self):
        return {
            "summary": self.summary,
            "checks": [c.as_dict() for c in self.checks],
            "repro": {k: _jsonable(v) for k, v in sorted(self.repro.items())},
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.as_dict(), sort_keys=True, indent=2)
                + "\n").encode()

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "anchor", "value", "tol", "status", "note"])
        for c in self.checks:
            writer.writerow([c.name, c.anchor, repr(float(c.value)),
                             repr(float(c.tol)), c.status, c.note])
        return buf.getvalue()


def _jsonable(v):
    """Plain Python scalars only, so json emits shortest-round-trip floats."""
    if isinstance(v, bool):
        return v
    if isinstance(v, (int,)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else repr(v)
    if hasattr(v, "item"):           # numpy scalar
        return _jsonable(v.item())
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def run_check(report: Report, name: str, anchor: str, tol: float, fn,
              flag=False, band=None, note=""):
    """Run one measurement and append its Check; crashes are recorded as
    failures and the campaign continues.

    `fn` returns the measured value.  Default comparison is value <= tol;
    `band=(lo, hi)` switches to a window test; `flag=True` records the
    measurement as an audit finding regardless of size.
    """
    try:
        value = float(fn())
    except Exception as exc:  # recorded, not raised: the run continues
        report.add(Check(name, anchor, math.nan, tol, "fail",
                         note=f"{type(exc).__name__}: {exc}"))
        return None
    if flag:
        status = "flag"
    elif band is not None:
        status = "pass" if band[0] <= value <= band[1] else "fail"
    else:
        status = "pass" if value <= tol else "fail"
    report.add(Check(name, anchor, value, tol, status, note=note))
    return value


def emit_report(report: Report, fmt: str, out_dir) -> list:
    """Write the report in the requested format; returns written paths."""
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt == "json":
        p = out / "report.json"
        p.write_bytes(report.to_json_bytes())
        paths.append(p)
    elif fmt == "csv-summary":
        p = out / "summary.csv"
        p.write_text(report.to_csv_text())
        paths.append(p)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return paths


def emit_artifacts(report: Report, out_dir) -> list:
    """Write attached data artifacts (deterministic float formatting)."""
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for filename, header, rows in report.artifacts:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) for v in row])
        p = out / filename
        p.write_text(buf.getvalue())
        paths.append(p)
    return paths
