"""Event-log data model, CSV ingestion and trace normalization.

Every trace is normalized on construction: events are ordered by start time,
framed by synthetic ``Start``/``End`` events and numbered ``0..n-1``.
Timestamps are integer seconds since the epoch (UTC).
"""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import IO, Iterable, Mapping, Sequence

START = "Start"
END = "End"

_START_ALIASES = frozenset({"Start", "START", "start"})
_END_ALIASES = frozenset({"End", "END", "end"})

TIMESTAMP_ENV = "MTLCHECK_TIMESTAMP_FORMAT"

# format aliases accepted by IngestionConfig.timestamp_format
_NAMED_FORMATS = {
    "iso": None,
    "dmy": "%d-%m-%Y %H:%M",
}

_HEADER_ALIASES = {
    "case_column": ("case", "case_id", "caseid", "c.id", "cid", "case:concept:name", "case id"),
    "activity_column": ("activity", "activity_id", "concept:name", "activity name", "task"),
    "start_column": ("starttime", "start", "start_timestamp", "start_time", "start time"),
    "complete_column": ("completetime", "complete", "complete_timestamp", "end_timestamp",
                        "complete_time", "complete time"),
    "timestamp_column": ("timestamp", "time:timestamp", "time_stamp", "time"),
    "position_column": ("position", "pos"),
    "event_id_column": ("event", "event_id", "eventid", "event id", "eid"),
}


class LogFormatError(ValueError):
    """Raised for malformed or inconsistent event-log input."""


@dataclass(frozen=True)
class Event:
    event_id: str
    case_id: str
    activity: str
    start: int
    complete: int
    position: int = 0
    attrs: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.activity:
            raise LogFormatError(f"event {self.event_id!r}: empty activity label")
        if self.complete < self.start:
            raise LogFormatError(
                f"event {self.event_id!r}: complete time precedes start time")
        if self.position < 0:
            raise LogFormatError(f"event {self.event_id!r}: negative position")


@dataclass(frozen=True)
class Trace:
    case_id: str
    events: tuple[Event, ...]

    def __len__(self):
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def __iter__(self):
        return iter(self.events)

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    """Normalized traces keyed by case id, in first-appearance order."""

    traces: Mapping[str, Trace]

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(e.activity for t in self.traces.values() for e in t
                         if e.activity not in (START, END))

    @property
    def case_ids(self) -> tuple[str, ...]:
        return tuple(self.traces)

    @property
    def n_events(self) -> int:
        return sum(len(t) for t in self.traces.values())

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces.values())

    def __getitem__(self, case_id) -> Trace:
        return self.traces[str(case_id)]

    def __eq__(self, other):
        if not isinstance(other, EventLog):
            return NotImplemented
        return (list(self.traces.items()) == list(other.traces.items()))

    def __hash__(self):
        return hash(tuple(self.traces))

    @classmethod
    def from_traces(cls, traces: Iterable[Trace]) -> "EventLog":
        out: dict[str, Trace] = {}
        for t in traces:
            if t.case_id in out:
                raise LogFormatError(f"duplicate case id {t.case_id!r}")
            out[t.case_id] = t
        return cls(out)

    @classmethod
    def from_sequences(cls, sequences: Mapping[str, Sequence[str]] | Sequence[Sequence[str]],
                       step: int = 1) -> "EventLog":
        """Build a log from bare activity sequences on a synthetic clock.

        >>> EventLog.from_sequences({"1": ["a", "b"]})["1"].activities
        ('Start', 'a', 'b', 'End')
        """
        if not isinstance(sequences, Mapping):
            sequences = {str(i + 1): s for i, s in enumerate(sequences)}
        traces = []
        for cid, acts in sequences.items():
            cid = str(cid)
            evs = [Event(f"{cid}:{i}", cid, a, i * step, i * step) for i, a in enumerate(acts)]
            traces.append(normalize_trace(evs, case_id=cid))
        return cls.from_traces(traces)


def normalize_trace(events: Iterable[Event], case_id: str | None = None,
                    check_positions: bool = False) -> Trace:
    """Order one case's events and frame them with Start/End events.

    Events are stably sorted by start time; existing Start/End markers are kept
    (and moved to the ends), otherwise synthetic ones are injected. With
    ``check_positions`` the incoming ``position`` values of non-marker events
    must be strictly increasing in the computed order.
    """
    events = list(events)
    if not events:
        raise LogFormatError(f"empty case{'' if case_id is None else ' ' + repr(case_id)}")
    cid = events[0].case_id if case_id is None else case_id
    for e in events:
        if e.case_id != cid:
            raise LogFormatError(f"event {e.event_id!r} belongs to case {e.case_id!r}, not {cid!r}")

    def rank(e):
        if e.activity in _START_ALIASES:
            return 0
        if e.activity in _END_ALIASES:
            return 2
        return 1

    ordered = sorted(events, key=lambda e: (rank(e), e.start))

    if check_positions:
        body = [e for e in ordered if rank(e) == 1]
        for prev, cur in zip(body, body[1:]):
            if cur.position <= prev.position:
                raise LogFormatError(
                    f"case {cid!r}: position {cur.position} of event {cur.event_id!r} is not after "
                    f"position {prev.position} of event {prev.event_id!r} in timestamp order")

    if rank(ordered[0]) != 0:
        first = ordered[0]
        ordered.insert(0, Event(f"{cid}:start", cid, START, first.start, first.start))
    if rank(ordered[-1]) != 2:
        last = max(e.complete for e in ordered)
        ordered.append(Event(f"{cid}:end", cid, END, last, last))
    if sum(rank(e) == 0 for e in ordered) > 1 or sum(rank(e) == 2 for e in ordered) > 1:
        raise LogFormatError(f"case {cid!r}: more than one Start or End event")

    out = []
    for i, e in enumerate(ordered):
        activity = START if rank(e) == 0 else END if rank(e) == 2 else e.activity
        out.append(replace(e, activity=activity, position=i))
    for prev, cur in zip(out, out[1:]):
        if cur.start < prev.start:
            raise LogFormatError(
                f"case {cid!r}: event {cur.event_id!r} starts before {prev.event_id!r}")
    return Trace(cid, tuple(out))


# ---------------------------------------------------------------------------
# CSV ingestion

@dataclass(frozen=True)
class IngestionConfig:
    """Column mapping for CSV logs.

    Columns left as ``None`` are inferred from the header (case-insensitive,
    common process-mining names). ``timestamp_format`` is ``"auto"``,
    ``"iso"``, ``"dmy"`` (``DD-MM-YYYY HH:MM``) or an explicit ``strptime``
    pattern; it defaults to the ``MTLCHECK_TIMESTAMP_FORMAT`` environment
    variable when set.
    """

    delimiter: str = ","
    case_column: str | None = None
    activity_column: str | None = None
    start_column: str | None = None
    complete_column: str | None = None
    timestamp_column: str | None = None
    position_column: str | None = None
    event_id_column: str | None = None
    timestamp_format: str | None = None

    def resolve(self, header: Sequence[str]) -> "IngestionConfig":
        lowered = {h.strip().lower(): h for h in header}
        found = {}
        for name, aliases in _HEADER_ALIASES.items():
            given = getattr(self, name)
            if given is not None:
                if given not in header:
                    raise LogFormatError(f"column {given!r} not found in header {list(header)}")
                found[name] = given
                continue
            for alias in aliases:
                if alias in lowered:
                    found[name] = lowered[alias]
                    break
            else:
                found[name] = None
        fmt = self.timestamp_format or os.environ.get(TIMESTAMP_ENV) or "auto"
        cfg = replace(self, timestamp_format=fmt, **found)
        if cfg.case_column is None:
            raise LogFormatError(f"missing required case column in header {list(header)}")
        if cfg.activity_column is None:
            raise LogFormatError(f"missing required activity column in header {list(header)}")
        return cfg


def parse_timestamp(text: str, fmt: str = "auto") -> int:
    """Parse a timestamp to integer epoch seconds (naive values are UTC).

    ``auto`` also takes bare integers as epoch seconds.
    """
    text = text.strip()
    pattern = _NAMED_FORMATS.get(fmt, fmt)
    if fmt in ("auto", "epoch") and text.lstrip("-").isdigit():
        return int(text)
    if fmt == "auto":
        try:
            dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
        except ValueError:
            dt = datetime.strptime(text, _NAMED_FORMATS["dmy"])
    elif pattern is None:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    else:
        dt = datetime.strptime(text, pattern)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_timestamp(seconds: int) -> str:
    return datetime.fromtimestamp(seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%S")


def parse_csv_log(source: IO[bytes] | IO[str] | bytes | str | os.PathLike,
                  config: IngestionConfig | None = None) -> EventLog:
    """Read a delimiter-separated event log.

    ``source`` may be a path, raw bytes/str content, or an open stream.
    """
    config = config or IngestionConfig()
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text), delimiter=config.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise LogFormatError("empty input") from None
    header = [h.strip() for h in header]
    cfg = config.resolve(header)
    col = {h: i for i, h in enumerate(header)}
    mapped = {getattr(cfg, n) for n in _HEADER_ALIASES} - {None}
    extra = [h for h in header if h not in mapped]

    start_col = cfg.start_column or cfg.timestamp_column or cfg.complete_column
    complete_col = cfg.complete_column or cfg.timestamp_column or cfg.start_column
    fmt_hint = {"auto": "ISO-8601 or DD-MM-YYYY HH:MM", "iso": "ISO-8601",
                "dmy": "DD-MM-YYYY HH:MM"}.get(cfg.timestamp_format, cfg.timestamp_format)

    by_case: dict[str, list[Event]] = {}
    seen_positions: dict[tuple[str, int], int] = {}
    n_rows = 0
    for rowno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < len(header):
            raise LogFormatError(f"row {rowno}: expected {len(header)} fields, got {len(row)}")
        n_rows += 1
        cid = row[col[cfg.case_column]].strip()
        activity = row[col[cfg.activity_column]].strip()
        if not activity:
            raise LogFormatError(f"row {rowno}: empty activity")
        case_events = by_case.setdefault(cid, [])
        if start_col is not None:
            try:
                start = parse_timestamp(row[col[start_col]], cfg.timestamp_format)
                complete = parse_timestamp(row[col[complete_col]], cfg.timestamp_format)
            except ValueError:
                raise LogFormatError(
                    f"row {rowno}: malformed timestamp, expected {fmt_hint}") from None
        else:
            start = complete = len(case_events)
        position = 0
        if cfg.position_column is not None:
            raw = row[col[cfg.position_column]].strip()
            try:
                position = int(raw)
            except ValueError:
                raise LogFormatError(f"row {rowno}: position {raw!r} is not an integer") from None
            if activity not in _START_ALIASES | _END_ALIASES:
                key = (cid, position)
                if key in seen_positions:
                    raise LogFormatError(
                        f"row {rowno}: duplicate position {position} in case {cid!r} "
                        f"(first seen at row {seen_positions[key]})")
                seen_positions[key] = rowno
        eid = row[col[cfg.event_id_column]].strip() if cfg.event_id_column else f"{cid}:{len(case_events)}"
        attrs = {h: row[col[h]] for h in extra if row[col[h]] != ""}
        try:
            case_events.append(Event(eid, cid, activity, start, complete, max(position, 0), attrs))
        except LogFormatError as exc:
            raise LogFormatError(f"row {rowno}: {exc}") from None
    if n_rows == 0:
        raise LogFormatError("empty input: header without event rows")
    check = cfg.position_column is not None
    return EventLog.from_traces(
        normalize_trace(evs, case_id=cid, check_positions=check) for cid, evs in by_case.items())


def write_csv_log(log: EventLog, target: IO[str] | os.PathLike | str | None = None,
                  delimiter: str = ",") -> str:
    """Export a normalized log (markers included); returns the CSV text."""
    attr_keys = sorted({k for t in log for e in t for k in e.attrs})
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(["event_id", "case_id", "activity", "start", "complete", "position", *attr_keys])
    for t in log:
        for e in t:
            w.writerow([e.event_id, e.case_id, e.activity, format_timestamp(e.start),
                        format_timestamp(e.complete), e.position,
                        *(e.attrs.get(k, "") for k in attr_keys)])
    text = buf.getvalue()
    if target is not None:
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return text


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    if isinstance(source, str) and not os.path.exists(source):
        return source
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8-sig")
    data = source.read()
    return data.decode("utf-8-sig") if isinstance(data, bytes) else data
