"""Seeded synthetic logs with injected violations of a known Response pattern."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .log import Event, EventLog, normalize_trace
from .mtl import TimeWindow
from .patterns import PatternKind, PatternSpec

ACTIVATION, TARGET, EXCLUDED = "a", "b", "x"
EPOCH = 1_600_000_000  # 2020-09-13, an arbitrary fixed origin
INJECTIONS = ("missing_target", "excluded_between", "late_target")


@dataclass(frozen=True)
class SynthConfig:
    cases: int = 100
    events_per_case: tuple[int, int] = (5, 15)
    alphabet_size: int = 8
    violation_rate: float = 0.1
    seed: int = 0
    base_lag: float = 1.0  # hours per step

    def __post_init__(self):
        lo, hi = self.events_per_case
        object.__setattr__(self, "events_per_case", (int(lo), int(hi)))
        if self.cases < 1:
            raise ValueError("cases must be positive")
        if not 1 <= lo <= hi:
            raise ValueError(f"events_per_case must satisfy 1 <= min <= max, got {(lo, hi)}")
        if self.alphabet_size < 4:
            raise ValueError("alphabet_size must be at least 4 (activation, target, "
                             "excluded activity and one filler)")
        if not 0 <= self.violation_rate <= 1:
            raise ValueError("violation_rate must lie in [0, 1]")
        if self.base_lag <= 0:
            raise ValueError("base_lag must be positive")

    @property
    def window_hours(self) -> float:
        return 4 * self.base_lag

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        d = dict(d)
        if "events_per_case" in d:
            d["events_per_case"] = tuple(d["events_per_case"])
        return cls(**d)


@dataclass(frozen=True)
class SyntheticLog:
    log: EventLog
    ground_truth: frozenset[str]
    pattern: PatternSpec
    injected: dict[str, str] = field(default_factory=dict, compare=False)


def test_pattern(config: SynthConfig) -> PatternSpec:
    """Response(a -> b) within 4 base lags, with x excluded in between."""
    return PatternSpec(PatternKind.RESPONSE, ACTIVATION, TARGET, frozenset({EXCLUDED}),
                       TimeWindow.within(config.window_hours), name="synthetic-response")


def fillers(alphabet_size: int) -> list[str]:
    width = len(str(alphabet_size))
    return [f"f{i:0{width}d}" for i in range(1, alphabet_size - 2)]


class _Clock:
    def __init__(self, rng: random.Random, t0: int, step: float):
        self.rng, self.t, self.step = rng, t0, step
        self.last_start = t0

    def emit(self, gap_factor: tuple[float, float] = (0.1, 1.0)) -> tuple[int, int]:
        gap = int(self.rng.uniform(*gap_factor) * self.step)
        start = max(self.last_start, self.t + gap)
        complete = start + int(self.rng.uniform(0, 0.2) * self.step)
        self.last_start, self.t = start, complete
        return start, complete


def _body(rng: random.Random, length: int, fill: list[str]) -> list[tuple[str, tuple]]:
    """Compliant prefix: every ``a`` is answered by ``b`` soon after, with no ``x`` between."""
    out: list[tuple[str, tuple]] = []
    while len(out) < length:
        room = length - len(out)
        r = rng.random()
        if room >= 2 and r < 0.25:
            out.append((ACTIVATION, (0.1, 1.0)))
            if room >= 3 and rng.random() < 0.5:
                out.append((rng.choice(fill), (0.1, 1.0)))
            out.append((TARGET, (0.1, 1.0)))
        elif r < 0.35:
            out.append((EXCLUDED, (-0.1, 1.0)))
        elif r < 0.45:
            out.append((TARGET, (-0.1, 1.0)))
        else:
            out.append((rng.choice(fill), (-0.1, 1.0)))
    return out


def _injection(kind: str, rng: random.Random, fill: list[str]) -> list[tuple[str, tuple]]:
    if kind == "missing_target":
        return [(ACTIVATION, (0.1, 1.0))] + [(rng.choice(fill), (0.1, 1.0))
                                            for _ in range(rng.randint(0, 2))]
    if kind == "excluded_between":
        return [(ACTIVATION, (0.1, 1.0)), (EXCLUDED, (0.1, 0.5)), (TARGET, (0.1, 0.5))]
    # one gap of 5 to 8 base lags, past the 4-lag window
    return [(ACTIVATION, (0.1, 1.0)), (TARGET, (5.0, 8.0))]


def generate_log(config: SynthConfig) -> SyntheticLog:
    """Deterministic per seed.

    Exactly ``ceil(violation_rate * cases)`` cases end with an injected
    violation of :func:`test_pattern`, cycling through a missing target, an
    excluded activity in between and a target outside the window. All other
    cases satisfy the pattern.
    """
    rng = random.Random(config.seed)
    fill = fillers(config.alphabet_size)
    step = config.base_lag * 3600
    n_bad = math.ceil(config.violation_rate * config.cases - 1e-9)
    bad = sorted(rng.sample(range(config.cases), n_bad))
    kinds = {idx: INJECTIONS[k % len(INJECTIONS)] for k, idx in enumerate(bad)}
    lo, hi = config.events_per_case
    traces = {}
    injected = {}
    for idx in range(config.cases):
        cid = str(idx + 1)
        length = rng.randint(lo, hi)
        tail = _injection(kinds[idx], rng, fill) if idx in kinds else []
        plan = _body(rng, max(0, length - len(tail)), fill) + tail
        clock = _Clock(rng, EPOCH + rng.randint(0, 30 * 86400), step)
        events = []
        for pos, (label, gap) in enumerate(plan):
            start, complete = clock.emit(gap)
            events.append(Event(f"{cid}:{pos + 1}", cid, label, start, complete, pos + 1))
        traces[cid] = normalize_trace(events, case_id=cid)
        if idx in kinds:
            injected[cid] = kinds[idx]
    return SyntheticLog(EventLog(traces), frozenset(injected), test_pattern(config), injected)
