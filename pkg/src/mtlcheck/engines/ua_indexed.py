"""Index lookups over the unique-activities graph.

Per case only the occurrence lists of the activation, target and excluded
labels are fetched from the (activity, case) edge index; activations are
then resolved by position arithmetic on edge properties. Every fetched list
element is counted in ``touches`` so the work bound can be asserted.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from heapq import merge

from ..encodings import PropertyGraph
from ..oracle import ViolationReport
from ..patterns import PatternSpec
from ._reduce import Obligation, run_reduced

TAG = "UaIndexed"


_EMPTY = ((), (), ())


@dataclass
class TouchCounter:
    """Counts occurrence-list elements fetched, each (label, case) list once."""

    touches: int = 0
    _seen: set = field(default_factory=set)

    def record(self, label: str, case: str, n: int):
        if (label, case) not in self._seen:
            self._seen.add((label, case))
            self.touches += n


def _run_end(t_pos, i: int, first: int, step: int) -> int:
    """End of the run of targets at consecutive positions ``first, first+step, ...``."""
    while 0 <= i < len(t_pos) and t_pos[i] == first:
        i, first = i + step, first + step
    return i


def _resolve(acts, targets, blockers: list | None, ob: Obligation) -> int | None:
    """First activation position without a witness, or None.

    ``blockers=None`` means every other label blocks, so only a run of
    targets directly adjacent to the activation can hold a witness.
    """
    lo_lag, hi_lag = ob.window.min_lag, ob.window.max_lag
    contains = ob.window.contains
    a_pos, a_start, a_comp = acts
    t_pos, t_start, t_comp = targets
    if not t_pos:
        return a_pos[0]
    for k, pos in enumerate(a_pos):
        if ob.backward:
            hi = bisect_left(t_pos, pos)
            if blockers is None:
                lo = _run_end(t_pos, hi - 1, pos - 1, -1) + 1
            else:
                b = bisect_left(blockers, pos) - 1
                lo = bisect_left(t_pos, blockers[b]) if b >= 0 else 0
            start = a_start[k]
            # the latest target has the smallest lag; lags grow going back
            ok = False
            for j in range(hi - 1, lo - 1, -1):
                lag = start - t_comp[j]
                lag = lag if lag > 0 else 0
                if type(lag) is int:
                    if lag < lo_lag:
                        continue
                    ok = lag <= hi_lag
                    if ok or not isinstance(hi_lag, int):
                        break
                elif contains(lag):
                    ok = True
                    break
        else:
            lo = bisect_right(t_pos, pos)
            if blockers is None:
                hi = _run_end(t_pos, lo, pos + 1, 1)
            else:
                b = bisect_right(blockers, pos)
                hi = bisect_right(t_pos, blockers[b]) if b < len(blockers) else len(t_pos)
            comp = a_comp[k]
            ok = False
            for j in range(lo, hi):
                lag = t_start[j] - comp
                lag = lag if lag > 0 else 0
                if type(lag) is int:
                    if lag < lo_lag:
                        continue
                    ok = lag <= hi_lag
                    break
                elif contains(lag):
                    ok = True
                    break
        if not ok:
            return pos
    return None


def _failures(g: PropertyGraph, ob: Obligation, counter: TouchCounter | None) -> dict[str, int]:
    cols = g.occurrence_props
    act_cols = cols.get(ob.activation, {})
    tgt_cols = cols.get(ob.target, {})
    # chain-style obligations: every other label blocks
    adjacent = bool(ob.excluded) and g.alphabet - {ob.target} <= ob.excluded
    excluded = [] if adjacent else sorted(ob.excluded)
    ex_cols = [cols.get(x, {}) for x in excluded]
    out = {}
    for case, acts in act_cols.items():
        targets = tgt_cols.get(case, _EMPTY)
        fetched = [c[case][0] for c in ex_cols if case in c]
        if len(fetched) > 1:
            blockers = list(merge(*fetched))
        else:
            blockers = fetched[0] if fetched else []
        if counter is not None:
            counter.record(ob.activation, case, len(acts[0]))
            counter.record(ob.target, case, len(targets[0]))
            for x, c in zip(excluded, ex_cols):
                counter.record(x, case, len(c.get(case, _EMPTY)[0]))
        pos = _resolve(acts, targets, None if adjacent else blockers, ob)
        if pos is not None:
            out[case] = pos
    return out


def run_ua_indexed(spec: PatternSpec, graph: PropertyGraph,
                   counter: TouchCounter | None = None) -> ViolationReport:
    """Pass a :class:`TouchCounter` to record how many occurrence entries were read."""
    return run_reduced(spec, graph.alphabet, lambda ob: _failures(graph, ob, counter), TAG)
