"""Reference checking by direct formula evaluation, plus brute-force trace enumeration."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import AbstractSet, Mapping

from .log import END, START, Event, EventLog, Trace
from .mtl import Formula, Globally, Implies, evaluate, is_untimed
from .patterns import GLOBAL_KINDS, PatternSpec, instantiate

ORACLE = "Oracle"


@dataclass(frozen=True)
class ViolationReport:
    pattern: PatternSpec
    violating_cases: frozenset[str]
    diagnostics: Mapping[str, int]
    engine: str
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "violating_cases", frozenset(self.violating_cases))
        if set(self.diagnostics) != set(self.violating_cases):
            raise ValueError("diagnostics keys must equal the violating cases")

    def same_result(self, other: "ViolationReport") -> bool:
        return (self.violating_cases == other.violating_cases
                and dict(self.diagnostics) == dict(other.diagnostics))

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.label,
            "spec": str(self.pattern),
            "engine": self.engine,
            "violating_cases": sorted(self.violating_cases, key=_case_key),
            "diagnostics": {c: self.diagnostics[c] for c in sorted(self.diagnostics, key=_case_key)},
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


def _case_key(c: str):
    return (0, int(c), c) if c.lstrip("-").isdigit() else (1, 0, c)


def check_pattern(spec: PatternSpec, log: EventLog) -> ViolationReport:
    """Violating cases of ``spec`` found by evaluating its formula on every trace."""
    t0 = time.perf_counter()
    formula = instantiate(spec, log.alphabet)
    diagnostics = {}
    for trace in log:
        if evaluate(formula, trace, 0):
            continue
        if spec.kind in GLOBAL_KINDS:
            diagnostics[trace.case_id] = -1
        else:
            diagnostics[trace.case_id] = first_failed_activation(formula, trace)
    return ViolationReport(spec, frozenset(diagnostics), diagnostics, ORACLE,
                           time.perf_counter() - t0)


def first_failed_activation(formula: Formula, trace: Trace) -> int:
    """Smallest position where the antecedent of ``□(a → body)`` holds but ``body`` fails."""
    if not (isinstance(formula, Globally) and isinstance(formula.operand, Implies)):
        return -1
    imp = formula.operand
    for i in range(len(trace)):
        if evaluate(imp.left, trace, i) and not evaluate(imp.right, trace, i):
            return i
    return -1


MAX_ALPHABET = 4
MAX_WORD = 8


def padded_trace(word, step: int = 1, case_id: str = "w") -> Trace:
    """``<Start, *word, End>`` on a synthetic clock with ``step``-second spacing."""
    labels = (START, *word, END)
    return Trace(case_id, tuple(Event(f"{case_id}:{i}", case_id, a, i * step, i * step, i)
                                for i, a in enumerate(labels)))


def words(alphabet: AbstractSet[str], max_len: int):
    letters = sorted(alphabet)
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


def brute_force_ltl(formula: Formula, alphabet: AbstractSet[str], max_len: int) -> set[tuple[str, ...]]:
    """All words ``w`` with ``|w| <= max_len`` whose padded trace satisfies an untimed formula."""
    if not is_untimed(formula):
        raise ValueError("brute-force enumeration requires an untimed formula")
    if len(alphabet) > MAX_ALPHABET or max_len > MAX_WORD:
        raise ValueError(f"enumeration bounded to |alphabet| <= {MAX_ALPHABET}, "
                         f"max_len <= {MAX_WORD}")
    return {w for w in words(alphabet, max_len) if evaluate(formula, padded_trace(w), 0)}


def satisfying_words(spec: PatternSpec, alphabet: AbstractSet[str], max_len: int):
    return brute_force_ltl(instantiate(spec, alphabet), alphabet, max_len)
