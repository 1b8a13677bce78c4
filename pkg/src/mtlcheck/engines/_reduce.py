"""Reduction of every pattern kind to timed obligations.

An obligation says: each ``activation`` occurrence needs a ``target``
occurrence strictly after it (strictly before it when ``backward``) whose lag
lies in ``window``, with no ``excluded`` activity strictly in between.
Choice, responded existence and co-existence combine two existence
obligations.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import AbstractSet, Callable, Mapping

from ..log import END, START
from ..mtl import TimeWindow
from ..oracle import ViolationReport
from ..patterns import (COMPOSED, GLOBAL_KINDS, PRECEDENCE_FAMILY, RESPONSE_FAMILY, PatternKind,
                        PatternSpec, effective_excluded)


@dataclass(frozen=True)
class Obligation:
    activation: str
    target: str
    excluded: frozenset[str]
    window: TimeWindow
    backward: bool = False

    @property
    def labels(self) -> frozenset[str]:
        return self.excluded | {self.activation, self.target}


@dataclass(frozen=True)
class Composite:
    kind: PatternKind
    left: Obligation
    right: Obligation


def existence(label: str, window: TimeWindow) -> Obligation:
    return Obligation(START, label, frozenset(), window)


def reduce_spec(spec: PatternSpec, alphabet: AbstractSet[str]) -> Obligation | Composite:
    k, w = spec.kind, spec.window
    if k is PatternKind.ABSENCE:
        return Obligation(START, END, spec.excluded, w)
    if k is PatternKind.EXISTENCE:
        return existence(spec.target, w)
    if k is PatternKind.LAST:
        return Obligation(spec.condition, END, effective_excluded(spec, alphabet), w)
    if k in RESPONSE_FAMILY:
        return Obligation(spec.condition, spec.target, effective_excluded(spec, alphabet), w)
    if k in PRECEDENCE_FAMILY:
        return Obligation(spec.target, spec.condition, effective_excluded(spec, alphabet), w,
                          backward=True)
    assert k in COMPOSED
    return Composite(k, existence(spec.condition, w), existence(spec.target, w))


Failures = Mapping[str, int]


def combine(kind: PatternKind, left: Failures, right: Failures) -> set[str]:
    if kind is PatternKind.CHOICE:
        return set(left) & set(right)
    if kind is PatternKind.RESPONDED_EXISTENCE:
        return set(right) - set(left)
    return set(left) ^ set(right)


def run_reduced(spec: PatternSpec, alphabet: AbstractSet[str],
                failures: Callable[[Obligation], Failures], engine: str) -> ViolationReport:
    """Evaluate ``spec`` with an engine-specific ``failures`` routine.

    ``failures(ob)`` maps each case with a failing activation to the
    smallest failing position.
    """
    t0 = time.perf_counter()
    reduced = reduce_spec(spec, alphabet)
    if isinstance(reduced, Composite):
        cases = combine(reduced.kind, failures(reduced.left), failures(reduced.right))
        diagnostics = {c: -1 for c in cases}
    else:
        found = failures(reduced)
        if spec.kind in GLOBAL_KINDS:
            diagnostics = {c: -1 for c in found}
        else:
            diagnostics = dict(found)
    return ViolationReport(spec, frozenset(diagnostics), diagnostics, engine,
                           time.perf_counter() - t0)
