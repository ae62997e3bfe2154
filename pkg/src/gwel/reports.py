"""Deterministic report serialization.

JSON output uses sorted keys and floats rounded to 12 significant
digits, so byte-identical reports come out of identical inputs no
matter how the computation was scheduled.  Exact integers stay
integers; rationals are {num, den} pairs; all entropy values are in
nats and every report says so.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GwelError

TOOL_VERSION = "gwel 0.1.0"


@dataclass
class Report:
    command: str
    params: dict
    seed: int | None
    series: dict  # {"columns": [names], "rows": [[scalar or None, ...]]}
    summary: dict
    warnings: list = field(default_factory=list)


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


def _clean(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return _sig(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return str(obj)


def report_to_object(report: Report) -> dict:
    return {
        "command": report.command,
        "params": _clean(report.params),
        "seed": report.seed,
        "series": _clean(report.series),
        "summary": _clean(report.summary),
        "warnings": [str(w) for w in report.warnings],
        "tool_version": TOOL_VERSION,
        "units": "nats",
    }


def report_json_bytes(report: Report) -> bytes:
    obj = report_to_object(report)
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def report_csv_bytes(report: Report) -> bytes:
    cols = report.series.get("columns", [])
    rows = report.series.get("rows", [])
    lines = [",".join(str(c) for c in cols)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(report: Report, fmt: str = "json", out: str | None = None) -> bytes:
    """Serialize and write to `out` (or stdout); returns the bytes."""
    if fmt == "json":
        data = report_json_bytes(report)
    elif fmt == "csv":
        data = report_csv_bytes(report)
    else:
        raise GwelError(f"unknown report format {fmt!r}")
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        try:
            with open(out, "wb") as fh:
                fh.write(data)
        except OSError as e:
            raise GwelError(f"cannot write report to {out}: {e}") from None
    return data


__all__ = [
    "Report",
    "TOOL_VERSION",
    "emit_report",
    "report_csv_bytes",
    "report_json_bytes",
    "report_to_object",
]
