"""Single forward pass per case partition, in the style of row pattern matching.

Open activations are resolved as rows stream by: a matching target in the
window closes one, an excluded row or an expired upper bound fails it, and
reaching the end of the partition fails whatever is still open. Backward
obligations keep the live set of target rows not yet cut off by an excluded
row instead.
"""
from __future__ import annotations

from ..encodings import RelationalTable
from ..oracle import ViolationReport
from ..patterns import PatternSpec
from ._reduce import Obligation, run_reduced

TAG = "SequenceMatch"


def _forward(rows, ob: Obligation) -> int | None:
    window = ob.window
    hi = window.upper * 3600 if window.bounded else None
    open_acts = []  # (position, complete)
    failed = []
    for r in rows:
        if open_acts:
            still_open = []
            for pos, complete in open_acts:
                lag = max(0, r.start - complete)
                if r.activity == ob.target and window.contains(lag):
                    continue
                if r.activity in ob.excluded:
                    failed.append(pos)
                elif hi is not None and lag > hi:
                    # starts only grow along the partition
                    failed.append(pos)
                else:
                    still_open.append((pos, complete))
            open_acts = still_open
        if r.activity == ob.activation:
            open_acts.append((r.position, r.complete))
    failed.extend(pos for pos, _ in open_acts)
    return min(failed) if failed else None


def _backward(rows, ob: Obligation) -> int | None:
    window = ob.window
    live = []  # completes of target rows with no excluded row after them
    for r in rows:
        if r.activity == ob.activation:
            if not any(window.contains(max(0, r.start - c)) for c in live):
                return r.position
        if r.activity in ob.excluded:
            live = []
        if r.activity == ob.target:
            live.append(r.complete)
    return None


def _failures(table: RelationalTable, ob: Obligation) -> dict[str, int]:
    step = _backward if ob.backward else _forward
    out = {}
    for cid, rows in table.by_case.items():
        pos = step(rows, ob)
        if pos is not None:
            out[cid] = pos
    return out


def run_sequence_match(spec: PatternSpec, table: RelationalTable) -> ViolationReport:
    return run_reduced(spec, table.alphabet, lambda ob: _failures(table, ob), TAG)
