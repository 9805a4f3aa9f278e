"""Table rows and their CSV / JSON serialization."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional

COLUMNS = ("label", "lower", "value", "upper", "refined")
ERROR_PREFIX = "error:"


class ReportFormatError(ValueError):
    """Raised when a serialized row cannot be read back."""


@dataclass(frozen=True)
class ReportRow:
    label: str
    lower: Optional[int] = None
    value: Optional[int] = None
    upper: Optional[int] = None
    refined: Optional[int] = None
    error: Optional[str] = None

    @classmethod
    def from_report(cls, report) -> "ReportRow":
        return cls(**report.to_row())

    @classmethod
    def failed(cls, label: str, message: str) -> "ReportRow":
        return cls(label, error=" ".join(str(message).split()))

    @property
    def ok(self) -> bool:
        return self.error is None

    def numbers(self):
        return (self.lower, self.value, self.upper, self.refined)

    def to_csv(self) -> str:
        if self.error is not None:
            return f"{self.label},,{ERROR_PREFIX}{self.error},,"
        return ",".join([self.label] + [str(n) for n in self.numbers()])

    def to_dict(self) -> Dict[str, object]:
        result = asdict(self)
        if self.error is None:
            result.pop("error")
        return result


def _cell(text: str, column: str) -> Optional[int]:
    if text == "":
        return None
    try:
        return int(text)
    except ValueError as exc:
        raise ReportFormatError(f"column {column!r}: {text!r} is not an integer") from exc


def parse_csv_line(line: str) -> ReportRow:
    line = line.rstrip("\r\n")
    marker = f",,{ERROR_PREFIX}"
    if marker in line and line.endswith(",,"):
        label, message = line[:-2].split(marker, 1)
        return ReportRow(label, error=message)
    # labels may contain commas, so split from the right
    parts = line.rsplit(",", 4)
    if len(parts) != 5:
        raise ReportFormatError(f"expected 5 columns in {line!r}")
    label, lower, value, upper, refined = parts
    return ReportRow(
        label,
        _cell(lower, "lower"),
        _cell(value, "value"),
        _cell(upper, "upper"),
        _cell(refined, "refined"),
    )


def emit_csv(rows: Iterable[ReportRow]) -> str:
    lines = [",".join(COLUMNS)] + [row.to_csv() for row in rows]
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> List[ReportRow]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0].strip() != ",".join(COLUMNS):
        raise ReportFormatError(f"missing header {','.join(COLUMNS)!r}")
    return [parse_csv_line(line) for line in lines[1:]]


def emit_json(rows: Iterable[ReportRow]) -> str:
    return json.dumps([row.to_dict() for row in rows], indent=2) + "\n"


def parse_json(text: str) -> List[ReportRow]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportFormatError(str(exc)) from exc
    if not isinstance(raw, list):
        raise ReportFormatError("expected a JSON list of rows")
    rows = []
    for item in raw:
        unknown = set(item) - set(COLUMNS) - {"error"}
        if unknown:
            raise ReportFormatError(f"unknown row keys {sorted(unknown)}")
        rows.append(ReportRow(**item))
    return rows


def emit_text(rows: Iterable[ReportRow]) -> str:
    rows = list(rows)
    width = max([len(r.label) for r in rows] + [len("label")])
    header = f"{'label':<{width}}  {'lower':>8}  {'value':>8}  {'upper':>8}  {'refined':>8}"
    lines = [header]
    for row in rows:
        if row.error is not None:
            lines.append(f"{row.label:<{width}}  error: {row.error}")
        else:
            lines.append(
                f"{row.label:<{width}}  {row.lower:>8}  {row.value:>8}  {row.upper:>8}  {row.refined:>8}"
            )
    return "\n".join(lines) + "\n"
