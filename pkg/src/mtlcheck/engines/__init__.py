"""Execution strategies; each computes a pattern's violating cases over one encoding."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from ..encodings import (PropertyGraph, RelationalTable, to_multidim_graph, to_relational,
                         to_ua_graph)
from ..log import EventLog
from ..oracle import ViolationReport
from ..patterns import PatternSpec
from ._reduce import Composite, Obligation, reduce_spec
from .graph_traversal import run_graph_traversal
from .join_scan import run_join_scan
from .sequence_match import run_sequence_match
from .ua_indexed import TouchCounter, run_ua_indexed


class EngineKind(str, enum.Enum):
    JOIN_SCAN = "JoinScan"
    SEQUENCE_MATCH = "SequenceMatch"
    GRAPH_TRAVERSAL = "GraphTraversal"
    UA_INDEXED = "UaIndexed"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: "str | EngineKind") -> "EngineKind":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        raise ValueError(f"unknown engine {name!r}; choose from {[k.value for k in cls]}")

    @property
    def encoding(self) -> str:
        return {EngineKind.JOIN_SCAN: "relational", EngineKind.SEQUENCE_MATCH: "relational",
                EngineKind.GRAPH_TRAVERSAL: "multidim", EngineKind.UA_INDEXED: "ua"}[self]


@dataclass
class Encoded:
    """All three encodings of one log, built lazily and kept for reuse."""

    log: EventLog
    _relational: RelationalTable | None = None
    _multidim: PropertyGraph | None = None
    _ua: PropertyGraph | None = None

    @property
    def relational(self) -> RelationalTable:
        if self._relational is None:
            self._relational = to_relational(self.log)
        return self._relational

    @property
    def multidim(self) -> PropertyGraph:
        if self._multidim is None:
            self._multidim = to_multidim_graph(self.log)
        return self._multidim

    @property
    def ua(self) -> PropertyGraph:
        if self._ua is None:
            self._ua = to_ua_graph(self.log)
        return self._ua

    def for_engine(self, engine: EngineKind):
        return getattr(self, engine.encoding)


def run_engine(engine: EngineKind | str, spec: PatternSpec, encoded: Encoded | EventLog) -> ViolationReport:
    engine = EngineKind.parse(engine)
    if isinstance(encoded, EventLog):
        encoded = Encoded(encoded)
    target = encoded.for_engine(engine)
    if engine is EngineKind.JOIN_SCAN:
        return run_join_scan(spec, target)
    if engine is EngineKind.SEQUENCE_MATCH:
        return run_sequence_match(spec, target)
    if engine is EngineKind.GRAPH_TRAVERSAL:
        return run_graph_traversal(spec, target)
    return run_ua_indexed(spec, target)


__all__ = [
    "EngineKind", "Encoded", "run_engine", "run_join_scan", "run_sequence_match",
    "run_graph_traversal", "run_ua_indexed", "TouchCounter", "Obligation", "Composite",
    "reduce_spec",
]
