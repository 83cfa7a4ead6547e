"""Corpus loading, validation, and partitioning into contiguous epochs."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Literal

from .errors import (
    DuplicateIdError,
    EmptyCorpusError,
    InvalidSpecError,
    IoError,
    ParseError,
)

MIN_TIMESTAMP = date(1800, 1, 1)


@dataclass(frozen=True)
class RawDocument:
    """One timestamped text unit of the corpus."""

    id: str
    timestamp: date
    body: str
    title: str | None = None

    @property
    def text(self) -> str:
        return f"{self.title}\n{self.body}" if self.title else self.body


@dataclass(frozen=True)
class EpochSpec:
    """How to cut the corpus timeline into epochs.

    ``fixed-length`` mode tiles the timeline with ``length_months``-month
    slices anchored at the first day of the earliest document's month;
    ``explicit-boundaries`` mode uses the given ascending date list as
    slice edges. Slices with fewer than ``min_documents`` documents are
    merged into their chronological predecessor (the first slice merges
    forward instead).
    """

    mode: Literal["fixed-length", "explicit-boundaries"] = "fixed-length"
    length_months: int = 12
    boundaries: tuple[date, ...] | None = None
    min_documents: int = 20

    def validate(self) -> None:
        if self.mode not in ("fixed-length", "explicit-boundaries"):
            raise InvalidSpecError(f"unknown epoch mode {self.mode!r}")
        if self.min_documents < 1:
            raise InvalidSpecError("min_documents must be >= 1")
        if self.mode == "fixed-length":
            if self.length_months < 1:
                raise InvalidSpecError("epoch length must be >= 1 month")
        else:
            if not self.boundaries or len(self.boundaries) < 2:
                raise InvalidSpecError("explicit mode needs >= 2 boundaries")
            if any(a >= b for a, b in zip(self.boundaries, self.boundaries[1:])):
                raise InvalidSpecError("boundaries must be strictly ascending")


@dataclass(frozen=True)
class EpochSlice:
    """A contiguous [start, end) time bucket and the documents inside it."""

    index: int
    start: date
    end: date
    document_ids: tuple[str, ...] = field(default_factory=tuple)

    @property
    def document_count(self) -> int:
        return len(self.document_ids)


def _parse_date(raw: str, line: int) -> date:
    try:
        ts = date.fromisoformat(raw.strip())
    except ValueError as exc:
        raise ParseError(line, f"bad timestamp {raw!r}: {exc}") from None
    if not (MIN_TIMESTAMP <= ts <= date.today()):
        raise ParseError(line, f"timestamp {ts.isoformat()} outside [1800-01-01, today]")
    return ts


def _validate_record(doc_id: str, body: str, line: int) -> None:
    if not doc_id:
        raise ParseError(line, "empty document id")
    if not body.strip():
        raise ParseError(line, "empty document body")


def _iter_jsonl(path: Path) -> Iterable[RawDocument]:
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(rec, dict):
                raise ParseError(line_no, "record is not a JSON object")
            missing = {"id", "timestamp", "body"} - rec.keys()
            if missing:
                raise ParseError(line_no, f"missing keys: {sorted(missing)}")
            doc_id = str(rec["id"])
            body = str(rec["body"])
            _validate_record(doc_id, body, line_no)
            title = rec.get("title")
            yield RawDocument(
                id=doc_id,
                timestamp=_parse_date(str(rec["timestamp"]), line_no),
                body=body,
                title=str(title) if title else None,
            )


def _iter_csv(path: Path) -> Iterable[RawDocument]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "empty file") from None
        if header != ["id", "timestamp", "title", "body"]:
            raise ParseError(1, f"expected header id,timestamp,title,body, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ParseError(line_no, f"expected 4 fields, got {len(row)}")
            doc_id, raw_ts, title, body = row
            _validate_record(doc_id, body, line_no)
            yield RawDocument(
                id=doc_id,
                timestamp=_parse_date(raw_ts, line_no),
                body=body,
                title=title if title else None,
            )


def load_corpus(path: str | Path, format: Literal["jsonl", "csv"] = "jsonl") -> list[RawDocument]:
    """Load and validate a corpus file, sorted by (timestamp, id).

    The whole file is rejected on the first malformed record or duplicate
    id; partial corpora are never returned.
    """
    path = Path(path)
    if not path.is_file():
        raise IoError(f"corpus file not found: {path}")
    if format == "jsonl":
        docs_iter = _iter_jsonl(path)
    elif format == "csv":
        docs_iter = _iter_csv(path)
    else:
        raise InvalidSpecError(f"unknown corpus format {format!r}")

    docs: list[RawDocument] = []
    seen: set[str] = set()
    try:
        for doc in docs_iter:
            if doc.id in seen:
                raise DuplicateIdError(doc.id)
            seen.add(doc.id)
            docs.append(doc)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    docs.sort(key=lambda d: (d.timestamp, d.id))
    return docs


def _add_months(d: date, months: int) -> date:
    total = d.year * 12 + (d.month - 1) + months
    return date(total // 12, total % 12 + 1, 1)


def _month_floor(d: date) -> date:
    return date(d.year, d.month, 1)


def _grid_boundaries(docs: list[RawDocument], spec: EpochSpec) -> list[date]:
    if spec.mode == "explicit-boundaries":
        bounds = list(spec.boundaries or ())
        if docs[0].timestamp < bounds[0] or docs[-1].timestamp >= bounds[-1]:
            raise InvalidSpecError(
                "explicit boundaries do not cover the corpus timespan "
                f"[{docs[0].timestamp}, {docs[-1].timestamp}]"
            )
        return bounds
    start = _month_floor(docs[0].timestamp)
    bounds = [start]
    while bounds[-1] <= docs[-1].timestamp:
        bounds.append(_add_months(bounds[-1], spec.length_months))
    return bounds


def partition_epochs(docs: list[RawDocument], spec: EpochSpec) -> list[EpochSlice]:
    """Tile the corpus timespan into epochs and assign every document.

    Underpopulated slices (fewer than ``spec.min_documents`` documents,
    including empty ones) are merged into the preceding slice; a sparse
    head merges forward into its successor. Indices are renumbered from 0.
    """
    if not docs:
        raise EmptyCorpusError("cannot partition an empty corpus")
    spec.validate()
    docs = sorted(docs, key=lambda d: (d.timestamp, d.id))

    bounds = _grid_boundaries(docs, spec)
    raw: list[tuple[date, date, list[str]]] = [
        (a, b, []) for a, b in zip(bounds, bounds[1:])
    ]
    cursor = 0
    for start, end, ids in raw:
        while cursor < len(docs) and docs[cursor].timestamp < end:
            if docs[cursor].timestamp < start:
                raise InvalidSpecError("documents precede the first boundary")
            ids.append(docs[cursor].id)
            cursor += 1

    merged: list[tuple[date, date, list[str]]] = []
    for start, end, ids in raw:
        if merged and len(ids) < spec.min_documents:
            pstart, _, pids = merged[-1]
            merged[-1] = (pstart, end, pids + ids)
        elif not merged and len(ids) < spec.min_documents:
            # Sparse head: hold it and absorb following slices until full.
            merged.append((start, end, ids))
        elif merged and len(merged) == 1 and len(merged[0][2]) < spec.min_documents:
            hstart, _, hids = merged[0]
            merged[0] = (hstart, end, hids + ids)
        else:
            merged.append((start, end, ids))

    return [
        EpochSlice(index=i, start=start, end=end, document_ids=tuple(ids))
        for i, (start, end, ids) in enumerate(merged)
    ]
