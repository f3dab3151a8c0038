"""Benchmark run records: the domain model, CSV ingest and validation."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields

from perfgrove.errors import DomainError, FormatError

# Canonical attribute order; only used to break information-gain ties.
ATTRIBUTES: tuple[str, ...] = ("query", "replication", "data_size", "nodes", "blk_range", "colocated")

CSV_FIELDS: tuple[str, ...] = (
    "query",
    "nodes",
    "data_size",
    "replication",
    "blk_range",
    "colocated",
    "exec_minutes",
)

_INT_FIELDS = frozenset({"query", "nodes", "replication", "blk_range", "colocated"})


@dataclass(frozen=True)
class RunRecord:
    """One benchmark execution under one execution setting.

    Construction does not validate; use :func:`validate` for that, since
    ingest must be able to represent bad rows in order to report them.
    """

    query: int
    nodes: int
    data_size: float
    replication: int
    blk_range: int
    colocated: int
    exec_minutes: float

    def assignment(self) -> dict[str, float]:
        """Attribute values keyed by attribute name (no target)."""
        return {name: getattr(self, name) for name in ATTRIBUTES}


@dataclass(frozen=True)
class AttributeSchema:
    attributes: tuple[str, ...]
    values: dict[str, tuple]

    def order_of(self, attribute: str) -> int:
        return self.attributes.index(attribute)


@dataclass
class Issue:
    index: int
    field: str
    message: str


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self) -> int:
        return len(self.errors) + len(self.warnings)


def _number(text: str):
    """Parse a numeric cell, keeping integral values as ``int``."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        value = float(text)
    if value.is_integer() and "e" not in text.lower() and "inf" not in text.lower():
        return int(value)
    return value


def _format_number(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def parse_records(text: str) -> list[RunRecord]:
    """Parse CSV text into run records, preserving row order.

    The header must name all seven record fields in any order. Lines that
    start with ``#`` are comments (generators put their seed there) and
    blank lines are ignored. Row numbers in errors count data rows from 1.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty record file")
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    for name in CSV_FIELDS:
        if name not in header:
            raise FormatError(f"missing required column {name!r}")

    records = []
    for row_no, row in enumerate(reader, start=1):
        values = {}
        for name in CSV_FIELDS:
            cell = row.get(name)
            if cell is None or cell.strip() == "":
                raise FormatError(f"row {row_no}: empty value for {name!r}", row=row_no)
            try:
                value = _number(cell)
            except ValueError:
                raise FormatError(f"row {row_no}: non-numeric {name!r} value {cell.strip()!r}", row=row_no) from None
            if name in _INT_FIELDS and not isinstance(value, int):
                raise FormatError(f"row {row_no}: {name!r} must be an integer, got {cell.strip()!r}", row=row_no)
            if name == "exec_minutes":
                value = float(value)
            values[name] = value
        records.append(RunRecord(**values))
    return records


def render_records(records: list[RunRecord], header_comment: str | None = None) -> str:
    """Render records as CSV in the canonical column order."""
    out = []
    if header_comment:
        out.extend(f"# {line}" for line in header_comment.splitlines())
    out.append(",".join(CSV_FIELDS))
    for rec in records:
        out.append(",".join(_format_number(getattr(rec, name)) for name in CSV_FIELDS))
    return "\n".join(out) + "\n"


def validate(records: list[RunRecord]) -> ValidationReport:
    report = ValidationReport()
    for i, rec in enumerate(records):
        for f in fields(RunRecord):
            value = getattr(rec, f.name)
            if f.name == "colocated":
                if value not in (0, 1):
                    report.errors.append(Issue(i, f.name, f"colocated must be 0 or 1, got {value!r}"))
            elif not value > 0:
                report.errors.append(Issue(i, f.name, f"{f.name} must be positive, got {value!r}"))
        if rec.replication > rec.nodes:
            report.warnings.append(
                Issue(i, "replication", f"replication {rec.replication} exceeds node count {rec.nodes}")
            )
    return report


def schema_of(records: list[RunRecord]) -> AttributeSchema:
    if not records:
        raise DomainError("schema_of needs at least one record")
    values = {name: tuple(sorted({getattr(r, name) for r in records})) for name in ATTRIBUTES}
    return AttributeSchema(ATTRIBUTES, values)
