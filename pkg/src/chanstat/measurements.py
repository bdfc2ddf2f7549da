"""Multipath measurement records: CSV ingest, filtering, link grouping, counts.

CSV schema (header required, comma separated)::

    location,link_id,scenario,distance_m,delay_ns,power_db,frequency_hz

Columns may appear in any order; extra columns (e.g. angles) are ignored.
``power_db`` is the path *gain* in dB (negative for a lossy channel).
"""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

COLUMNS = ("location", "link_id", "scenario", "distance_m", "delay_ns", "power_db",
           "frequency_hz")
SCENARIOS = ("LOS", "NLOS")
SURVEY_LOCATIONS = ("Sello", "Airport", "TUAS", "TUAS2")


class ParseError(ValueError):
    """Malformed or invalid input; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def normalize_scenario(value: str) -> str:
    sc = str(value).strip().upper()
    if sc not in SCENARIOS:
        raise ValueError(f"unknown scenario {value!r} (expected LOS or NLOS)")
    return sc


@dataclass(frozen=True)
class PathRecord:
    location: str
    link_id: str
    scenario: str
    distance: float   # m
    delay: float      # ns, absolute propagation delay
    power: float      # dB, path gain
    frequency: float  # Hz

    def __post_init__(self):
        object.__setattr__(self, "scenario", normalize_scenario(self.scenario))
        for name in ("distance", "delay", "power", "frequency"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        for name in ("distance", "delay", "frequency"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.location:
            raise ValueError("location must be non-empty")
        if not self.link_id:
            raise ValueError("link_id must be non-empty")


@dataclass(frozen=True)
class MeasurementSet:
    records: Tuple[PathRecord, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        seen = set()
        for i, rec in enumerate(records):
            if rec in seen:
                raise ValueError(f"duplicate record #{i + 1}: {rec}")
            seen.add(rec)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def locations(self) -> List[str]:
        return list(OrderedDict.fromkeys(r.location for r in self.records))


@dataclass(frozen=True)
class LinkGroup:
    """All paths of one Tx-Rx measurement position, sorted by delay."""

    link_id: str
    location: str
    scenario: str
    distance: float
    frequency: float
    paths: Tuple[Tuple[float, float], ...]  # (delay ns, power dB)

    def __post_init__(self):
        if not self.paths:
            raise ValueError(f"link {self.link_id!r} has no paths")

    def __len__(self) -> int:
        return len(self.paths)

    @property
    def delays(self) -> List[float]:
        return [d for d, _ in self.paths]

    @property
    def powers(self) -> List[float]:
        return [p for _, p in self.paths]


def _format_real(value: float) -> str:
    text = f"{value:.9g}"
    return text if float(text) == value else repr(value)


def parse_records(stream: TextIO, provenance: Optional[str] = None) -> MeasurementSet:
    """Read a :class:`MeasurementSet` from CSV text.

    Raises :class:`ParseError` naming the offending line for wrong column
    counts, unparseable numbers, unknown scenarios, invariant violations
    (the message names the field) and duplicate rows.
    """
    if provenance is None:
        provenance = getattr(stream, "name", "<stream>")
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("missing header row", 1) from None
    header = [h.strip().lstrip("﻿").lower() for h in header]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise ParseError(f"header lacks column(s) {', '.join(missing)}", 1)
    index = {c: header.index(c) for c in COLUMNS}

    records: List[PathRecord] = []
    seen: Dict[PathRecord, int] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", line)
        values = {}
        for col in ("distance_m", "delay_ns", "power_db", "frequency_hz"):
            cell = row[index[col]].strip()
            try:
                values[col] = float(cell)
            except ValueError:
                raise ParseError(f"{col}: cannot parse number {cell!r}", line) from None
        try:
            scenario = normalize_scenario(row[index["scenario"]])
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        try:
            rec = PathRecord(location=row[index["location"]].strip(),
                             link_id=row[index["link_id"]].strip(), scenario=scenario,
                             distance=values["distance_m"], delay=values["delay_ns"],
                             power=values["power_db"], frequency=values["frequency_hz"])
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        if rec in seen:
            raise ParseError(f"duplicate of line {seen[rec]}", line)
        seen[rec] = line
        records.append(rec)
    return MeasurementSet(tuple(records), provenance)


def read_records(path, provenance: Optional[str] = None) -> MeasurementSet:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_records(fh, provenance or str(path))


def serialize_records(mset: MeasurementSet) -> str:
    """Canonical CSV text; reals use 9 significant digits unless more are needed to round-trip."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in mset.records:
        writer.writerow([r.location, r.link_id, r.scenario, _format_real(r.distance),
                         _format_real(r.delay), _format_real(r.power),
                         _format_real(r.frequency)])
    return buf.getvalue()


def merge(sets: Iterable[MeasurementSet]) -> MeasurementSet:
    sets = list(sets)
    records = [r for s in sets for r in s.records]
    return MeasurementSet(tuple(records), "; ".join(s.provenance for s in sets))


def filter_records(mset: MeasurementSet, location: Optional[str] = None,
                   scenario: Optional[str] = None) -> MeasurementSet:
    """Records matching every given predicate, in original order."""
    if scenario is not None:
        scenario = normalize_scenario(scenario)
    if location is None and scenario is None:
        return mset
    kept = tuple(r for r in mset.records
                 if (location is None or r.location == location)
                 and (scenario is None or r.scenario == scenario))
    return MeasurementSet(kept, mset.provenance)


def group_links(mset: MeasurementSet) -> List[LinkGroup]:
    """One :class:`LinkGroup` per link_id, in order of first appearance."""
    buckets: "OrderedDict[str, List[PathRecord]]" = OrderedDict()
    for r in mset.records:
        buckets.setdefault(r.link_id, []).append(r)
    groups = []
    for link_id, recs in buckets.items():
        first = recs[0]
        for r in recs[1:]:
            for field in ("location", "scenario", "distance", "frequency"):
                if getattr(r, field) != getattr(first, field):
                    raise ValueError(f"link {link_id!r} has inconsistent {field}: "
                                     f"{getattr(first, field)!r} vs {getattr(r, field)!r}")
        paths = tuple(sorted(((r.delay, r.power) for r in recs), key=lambda p: p[0]))
        groups.append(LinkGroup(link_id, first.location, first.scenario, first.distance,
                                first.frequency, paths))
    return groups


@dataclass(frozen=True)
class CountTable:
    """Record counts per (location, scenario) with per-scenario totals."""

    rows: Tuple[Tuple[str, int, int], ...]  # (location, LOS, NLOS)

    @property
    def totals(self) -> Dict[str, int]:
        return {"LOS": sum(r[1] for r in self.rows), "NLOS": sum(r[2] for r in self.rows)}

    @property
    def total(self) -> int:
        return sum(self.totals.values())

    def count(self, location: str, scenario: str) -> int:
        col = 1 if normalize_scenario(scenario) == "LOS" else 2
        for row in self.rows:
            if row[0] == location:
                return row[col]
        return 0

    def to_dict(self) -> dict:
        return {"rows": [{"location": loc, "LOS": los, "NLOS": nlos}
                         for loc, los, nlos in self.rows],
                "totals": self.totals, "total": self.total}


def summary_counts(mset: MeasurementSet,
                   locations: Optional[Sequence[str]] = None) -> CountTable:
    """Table of record counts by location and scenario.

    Rows follow ``locations`` when given (observed locations not listed are
    appended), otherwise order of first appearance.
    """
    order = list(locations or [])
    order += [loc for loc in mset.locations if loc not in order]
    tally: Mapping[str, Dict[str, int]] = {loc: {"LOS": 0, "NLOS": 0} for loc in order}
    for r in mset.records:
        tally[r.location][r.scenario] += 1
    return CountTable(tuple((loc, tally[loc]["LOS"], tally[loc]["NLOS"]) for loc in order))


DELAY_UNITS = {"ns": 1.0, "us": 1e3, "s": 1e9}


def convert_table(stream: TextIO, columns: Mapping[str, str],
                  constants: Optional[Mapping[str, str]] = None, delay_unit: str = "ns",
                  power_is_loss: bool = False,
                  provenance: Optional[str] = None) -> MeasurementSet:
    """Read records from a CSV with a different layout.

    Parameters
    ----------
    columns
        Canonical column name -> source column name.
    constants
        Canonical column name -> value used for every row, for fields the
        source file does not carry (typically location or frequency_hz).
    delay_unit
        Unit of the source delay column: ``ns``, ``us`` or ``s``.
    power_is_loss
        Source power is a positive path loss; it is negated into a gain.

    Every canonical column must come from exactly one of ``columns`` or
    ``constants``. Rows are validated exactly as by :func:`parse_records`.
    """
    constants = dict(constants or {})
    unknown = [c for c in list(columns) + list(constants) if c not in COLUMNS]
    if unknown:
        raise ValueError(f"unknown canonical column(s) {', '.join(unknown)}")
    missing = [c for c in COLUMNS if (c in columns) == (c in constants)]
    if missing:
        raise ValueError(f"give each of {', '.join(missing)} as a column or a constant")
    if delay_unit not in DELAY_UNITS:
        raise ValueError(f"delay unit must be one of {', '.join(DELAY_UNITS)}")
    factor = DELAY_UNITS[delay_unit]

    reader = csv.reader(stream)
    try:
        header = [h.strip().lstrip("﻿") for h in next(reader)]
    except StopIteration:
        raise ParseError("missing header row", 1) from None
    absent = [src for src in columns.values() if src not in header]
    if absent:
        raise ParseError(f"header lacks column(s) {', '.join(absent)}", 1)
    index = {canon: header.index(src) for canon, src in columns.items()}

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    lines = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", reader.line_num)
        values = {c: (row[index[c]].strip() if c in index else constants[c]) for c in COLUMNS}
        try:
            if delay_unit != "ns":
                values["delay_ns"] = repr(float(values["delay_ns"]) * factor)
            if power_is_loss:
                values["power_db"] = repr(-float(values["power_db"]))
        except ValueError as exc:
            raise ParseError(str(exc), reader.line_num) from None
        writer.writerow([values[c] for c in COLUMNS])
        lines.append(reader.line_num)
    out.seek(0)
    try:
        return parse_records(out, provenance or getattr(stream, "name", "<stream>"))
    except ParseError as exc:
        # Report the source file's line, not the rewritten one.
        if exc.line is None or exc.line < 2:
            raise
        source_line = lines[exc.line - 2]
        message = str(exc).split(": ", 1)[1]
        if message.startswith("duplicate of line "):
            message = f"duplicate of line {lines[int(message.split()[-1]) - 2]}"
        raise ParseError(message, source_line) from None
