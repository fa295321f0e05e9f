"""
The report objects the ``subrings`` command writes, one per line.

Counts, expected and actual values are written as decimal strings, so arbitrarily large
integers survive any JSON reader.
"""
import csv
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

__all__ = ("CSV_FIELDS", "ReportWriter", "RunReport")

#: Column order of the CSV output.
CSV_FIELDS = (
    "kind",
    "params",
    "prime",
    "primes",
    "count",
    "counts",
    "verdict",
    "expected",
    "actual",
    "detail",
    "elapsed_ms",
)


def _decimal(value):
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return value


class RunReport(BaseModel):
    """
    One result line.
    """

    model_config = ConfigDict(extra="forbid")

    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)
    prime: Optional[int] = None
    primes: Optional[List[int]] = None
    count: Optional[str] = None
    counts: Optional[List[str]] = None
    verdict: Optional[str] = None
    expected: Optional[str] = None
    actual: Optional[str] = None
    detail: Optional[Dict[str, Any]] = None
    elapsed_ms: int = 0

    @field_validator("count", "expected", "actual", mode="before")
    @classmethod
    def integers_as_strings(cls, value):
        if value is None:
            return value
        value = _decimal(value)
        return value if isinstance(value, str) else str(value)

    @field_validator("counts", mode="before")
    @classmethod
    def count_list_as_strings(cls, value):
        if value is None:
            return value
        return [_decimal(item) for item in value]

    def as_json(self):
        return self.model_dump_json(exclude_none=True)

    def as_row(self):
        data = self.model_dump()
        row = {}
        for name in CSV_FIELDS:
            value = data[name]
            if value is None:
                row[name] = ""
            elif name in ("params", "detail"):
                row[name] = json.dumps(value, sort_keys=True)
            elif name in ("primes", "counts"):
                row[name] = ";".join(str(item) for item in value)
            else:
                row[name] = value
        return row


class ReportWriter:
    """
    Write reports to a stream as JSON lines, or as CSV with a single header row.
    """

    def __init__(self, stream, format="json"):
        if format not in ("json", "csv"):
            raise ValueError(f"Unknown report format {format!r}")
        self.stream = stream
        self.format = format
        self._csv = None

    def write(self, report):
        if self.format == "json":
            self.stream.write(report.as_json() + "\n")
        else:
            if self._csv is None:
                self._csv = csv.DictWriter(self.stream, fieldnames=CSV_FIELDS, lineterminator="\n")
                self._csv.writeheader()
            self._csv.writerow(report.as_row())
        if hasattr(self.stream, "flush"):
            self.stream.flush()
