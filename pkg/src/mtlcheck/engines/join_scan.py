"""Self-join evaluation over the relational table.

Mirrors the join/EXISTS query style: every activation row is paired with
every candidate target row of the same case, and the rows in between are
probed for excluded activities.
"""
from __future__ import annotations

from ..encodings import RelationalTable
from ..oracle import ViolationReport
from ..patterns import PatternSpec
from ._reduce import Obligation, run_reduced

TAG = "JoinScan"


def _failures(table: RelationalTable, ob: Obligation) -> dict[str, int]:
    out = {}
    window = ob.window
    for cid, rows in table.by_case.items():
        for l in rows:
            if l.activity != ob.activation:
                continue
            satisfied = False
            for l1 in rows:
                if l1.activity != ob.target:
                    continue
                if ob.backward:
                    if not l1.position < l.position:
                        continue
                    lag = l.start - l1.complete
                    lo, hi = l1.position, l.position
                else:
                    if not l1.position > l.position:
                        continue
                    lag = l1.start - l.complete
                    lo, hi = l.position, l1.position
                if not window.contains(max(0, lag)):
                    continue
                blocked = any(l2.activity in ob.excluded and lo < l2.position < hi for l2 in rows)
                if not blocked:
                    satisfied = True
                    break
            if not satisfied:
                out[cid] = l.position
                break
    return out


def run_join_scan(spec: PatternSpec, table: RelationalTable) -> ViolationReport:
    return run_reduced(spec, table.alphabet, lambda ob: _failures(table, ob), TAG)
