"""Timing harness: every (pattern, engine) pair, repeated, checked against the oracle."""
from __future__ import annotations

import csv
import io
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .engines import EngineKind, Encoded, run_engine
from .log import EventLog
from .oracle import ViolationReport, _case_key, check_pattern
from .patterns import PatternSpec, WindowMode

MIN_REPS = 3


class EngineDisagreement(AssertionError):
    """An engine's violating set differs from the oracle's."""

    def __init__(self, spec: PatternSpec, engine: str, extra: set, missing: set):
        self.spec, self.engine, self.extra, self.missing = spec, engine, extra, missing
        super().__init__(
            f"{engine} disagrees with the oracle on {spec.label}: "
            f"reported but not violating {sorted(extra, key=_case_key)}, "
            f"violating but not reported {sorted(missing, key=_case_key)}")


@dataclass(frozen=True)
class BenchRow:
    log: str
    cases: int
    events: int
    pattern: str
    kind: str
    variant: str
    engine: str
    median_ms: float
    mean_ms: float
    violations: int
    agrees: bool


@dataclass
class BenchResult:
    rows: list[BenchRow] = field(default_factory=list)
    repetitions: int = MIN_REPS

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def all_agree(self) -> bool:
        return all(r.agrees for r in self.rows)

    def median(self, engine: str | EngineKind, kind: str | None = None) -> float:
        """Median over rows of the per-row medians, optionally for one pattern kind."""
        engine = str(EngineKind.parse(engine))
        vals = [r.median_ms for r in self.rows
                if r.engine == engine and (kind is None or r.kind == str(kind))]
        return statistics.median(vals) if vals else float("nan")

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        names = list(BenchRow.__dataclass_fields__)
        w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(asdict(r))
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text, encoding="utf-8")
        return text

    def to_markdown(self) -> str:
        head = ["log", "cases", "events", "pattern", "variant", "engine", "median ms",
                "mean ms", "violations", "agrees"]
        lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for r in self.rows:
            cells = [r.log, r.cases, r.events, r.pattern, r.variant, r.engine,
                     f"{r.median_ms:.3f}", f"{r.mean_ms:.3f}", r.violations,
                     "yes" if r.agrees else "NO"]
            lines.append("| " + " | ".join(str(c).replace("|", "\\|") for c in cells) + " |")
        return "\n".join(lines) + "\n"


def variant_tag(spec: PatternSpec) -> str:
    mode = spec.window_mode
    tag = "untimed" if mode is WindowMode.NONE else str(mode)
    return tag + ("+excluded" if spec.excluded else "")


def _check(spec: PatternSpec, engine: EngineKind, report: ViolationReport, truth: frozenset):
    if report.violating_cases != truth:
        raise EngineDisagreement(spec, str(engine), set(report.violating_cases - truth),
                                 set(truth - report.violating_cases))


def run_benchmark(log: EventLog, specs: Sequence[PatternSpec], engines: Iterable[EngineKind | str],
                  repetitions: int = 5, log_name: str = "log",
                  encoded: Encoded | None = None) -> BenchResult:
    """Time each pair ``repetitions`` times after checking it against the oracle.

    Encodings are built once up front and excluded from the timings. Raises
    :class:`EngineDisagreement` on the first violating set that differs from
    the oracle's.
    """
    if repetitions < MIN_REPS:
        raise ValueError(f"repetitions must be at least {MIN_REPS}")
    engines = [EngineKind.parse(e) for e in engines]
    result = BenchResult(repetitions=repetitions)
    if not specs:
        return result
    enc = encoded or Encoded(log)
    for e in engines:
        enc.for_engine(e)
    n_events = log.n_events
    for spec in specs:
        truth = check_pattern(spec, log).violating_cases
        for engine in engines:
            times = []
            report = None
            for _ in range(repetitions):
                report = run_engine(engine, spec, enc)
                _check(spec, engine, report, truth)
                times.append(report.elapsed * 1000)
            result.rows.append(BenchRow(
                log_name, len(log.case_ids), n_events, spec.label, str(spec.kind),
                variant_tag(spec), str(engine), statistics.median(times),
                statistics.fmean(times), len(report.violating_cases), True))
    return result
