"""Turn simulated RFID read-event logs into ATSP instances.

Each distinct reader is one customer site; its position gives the site's
coordinates. The depot reader becomes city 0 and the remaining sites keep
the order in which their reader first appears in the log.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

from .core import Instance, RandomSource, ValidationError
from .instance_io import COORD_DECIMALS, costs_from_coords

HEADER = ("tag_id", "reader_id", "timestamp_ms", "x_m", "y_m")


@dataclass(frozen=True)
class ReadEvent:
    tag_id: str
    reader_id: str
    timestamp_ms: int
    x_m: float
    y_m: float

    def __post_init__(self):
        if not self.tag_id or not self.reader_id:
            raise ValidationError("tag_id and reader_id must be non-empty")
        if self.timestamp_ms < 0:
            raise ValidationError("timestamp_ms must be >= 0")


@dataclass
class SiteMap:
    """reader_id -> (x_m, y_m, last_seen_ms), in first-appearance order."""

    sites: dict
    depot_reader: str


def parse_event_log(text: str) -> list[ReadEvent]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("line 1: missing header") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise ValidationError(f"line 1: expected header {','.join(HEADER)}")
    events = []
    for row in reader:
        lineno = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(HEADER):
            raise ValidationError(f"line {lineno}: expected {len(HEADER)} columns, got {len(row)}")
        tag, rdr, ts, x, y = (field.strip() for field in row)
        if not ts.isdigit():
            raise ValidationError(f"line {lineno}: timestamp_ms must be an unsigned integer, got {ts!r}")
        try:
            xf, yf = float(x), float(y)
        except ValueError:
            raise ValidationError(f"line {lineno}: non-numeric position {x!r},{y!r}") from None
        try:
            events.append(ReadEvent(tag, rdr, int(ts), xf, yf))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return events


def read_event_log(path) -> list[ReadEvent]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read event log {os.fspath(path)}: {exc}") from exc
    return parse_event_log(text)


def build_site_map(events, depot_reader: str) -> SiteMap:
    sites = {}
    for ev in events:
        seen = sites.get(ev.reader_id)
        if seen is None:
            sites[ev.reader_id] = (ev.x_m, ev.y_m, ev.timestamp_ms)
            continue
        if (seen[0], seen[1]) != (ev.x_m, ev.y_m):
            raise ValidationError(
                f"inconsistent site position for reader {ev.reader_id!r}: "
                f"({seen[0]}, {seen[1]}) vs ({ev.x_m}, {ev.y_m})"
            )
        sites[ev.reader_id] = (seen[0], seen[1], max(seen[2], ev.timestamp_ms))
    if depot_reader not in sites:
        raise KeyError(f"depot reader {depot_reader!r} not found in event log")
    return SiteMap(sites, depot_reader)


def build_instance_from_events(events, depot_reader: str, asymmetry_alpha: float = 0.3,
                               source: RandomSource | None = None, name: str = "rfid") -> Instance:
    if not events:
        raise ValidationError("event log is empty")
    if not 0.0 <= asymmetry_alpha <= 1.0:
        raise ValidationError(f"asymmetry_alpha must lie in [0, 1], got {asymmetry_alpha}")
    site_map = build_site_map(events, depot_reader)
    readers = [depot_reader] + [r for r in site_map.sites if r != depot_reader]
    coords = [
        (round(site_map.sites[r][0], COORD_DECIMALS), round(site_map.sites[r][1], COORD_DECIMALS))
        for r in readers
    ]
    rng = source if source is not None else RandomSource(0)
    costs = costs_from_coords(coords, asymmetry_alpha, rng)
    return Instance.build(name, costs, coords)
