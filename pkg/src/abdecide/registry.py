"""Persistent registry of experiments, ordered by (timestamp, id).

Storage is JSON Lines, one record per line, append-only. Writers serialize
through a lock (single-writer contract); readers get consistent snapshots
(copied lists), so concurrent reads never observe a half-applied append.
"""

from __future__ import annotations

import csv
import threading
from pathlib import Path

import numpy as np

from .model import (
    DuplicateIdError,
    ExperimentRecord,
    MetricSchema,
    StorageError,
    UnitOutcomes,
    validate_record,
)


class Registry:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.RLock()
        self._records: list[ExperimentRecord] = []
        if self.path.exists():
            self._load()

    def _load(self):
        try:
            text = self.path.read_text()
        except OSError as exc:
            raise StorageError(f"cannot read registry {self.path}: {exc}") from exc
        records = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(ExperimentRecord.from_json_line(line))
            except (ValueError, KeyError) as exc:
                raise StorageError(
                    f"corrupt registry line {lineno} in {self.path}: {exc}"
                ) from exc
        records.sort(key=lambda r: r.sort_key())
        self._records = records

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def ids(self) -> set[str]:
        with self._lock:
            return {r.id for r in self._records}

    def get(self, record_id: str) -> ExperimentRecord | None:
        with self._lock:
            for r in self._records:
                if r.id == record_id:
                    return r
        return None

    def append(self, rec: ExperimentRecord) -> None:
        """Validate, persist, and index a record.

        Raises DuplicateIdError / ValueError on contract violations and
        StorageError on I/O failure; the in-memory index is only updated
        after the line is durably written.
        """
        with self._lock:
            result = validate_record(rec, existing_ids={r.id for r in self._records})
            if any("duplicate id" in v for v in result.violations):
                raise DuplicateIdError(f"record id {rec.id!r} already present")
            if not result.ok:
                raise ValueError("invalid record: " + "; ".join(result.violations))
            line = rec.to_json_line()
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a") as fh:
                    fh.write(line + "\n")
                    fh.flush()
            except OSError as exc:
                raise StorageError(f"cannot append to {self.path}: {exc}") from exc
            self._records.append(rec)
            self._records.sort(key=lambda r: r.sort_key())

    def snapshot(self) -> list[ExperimentRecord]:
        """All records ordered by (timestamp, id); a copy safe to iterate."""
        with self._lock:
            return list(self._records)

    def history(self, before: float, schema: MetricSchema) -> list[ExperimentRecord]:
        """Records strictly earlier than ``before`` whose schema matches exactly."""
        return [
            r
            for r in self.snapshot()
            if r.timestamp < before and r.schema.matches(schema)
        ]

    def history_for(self, rec: ExperimentRecord) -> list[ExperimentRecord]:
        """History visible to ``rec``: strictly earlier, same schema, not itself."""
        return [r for r in self.history(rec.timestamp, rec.schema) if r.id != rec.id]


def read_units_csv(path: str | Path) -> tuple[MetricSchema, list[UnitOutcomes]]:
    """Read unit-level outcomes: header ``unit_id,arm,<metric1>,...,<metricN>``."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 3 or header[0] != "unit_id" or header[1] != "arm":
            raise ValueError(
                f"{path}: header must be unit_id,arm,<metric1>,...,<metricN>"
            )
        schema = MetricSchema(names=tuple(header[2:]))
        units = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                outcomes = np.array([float(v) for v in row[2:]])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            units.append(UnitOutcomes(unit_id=row[0], arm=row[1], outcomes=outcomes))
    return schema, units


def write_units_csv(path: str | Path, schema: MetricSchema, units: list[UnitOutcomes]):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["unit_id", "arm", *schema.names])
        for u in units:
            writer.writerow([u.unit_id, u.arm, *[repr(float(v)) for v in u.outcomes]])
