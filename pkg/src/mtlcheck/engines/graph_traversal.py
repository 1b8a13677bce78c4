"""Path walking over the multi-dimensional graph.

Activation events are found through the activity index; from each one the
``Directly_follows`` chain is followed towards the end of the case (towards
its start for backward obligations) until a witness or a blocker is met.
"""
from __future__ import annotations

from ..encodings import PropertyGraph
from ..oracle import ViolationReport
from ..patterns import PatternSpec
from ._reduce import Obligation, run_reduced

TAG = "GraphTraversal"
DF = "Directly_follows"


def _step(g: PropertyGraph, node: str, backward: bool) -> str | None:
    if backward:
        edges = g.in_edges(node, DF)
        return g.edges[edges[0]].source if edges else None
    edges = g.out_edges(node, DF)
    return g.edges[edges[0]].target if edges else None


def _satisfied(g: PropertyGraph, act: str, ob: Obligation) -> bool:
    window = ob.window
    hi = window.upper * 3600 if window.bounded else None
    a = g.nodes[act].props
    node = _step(g, act, ob.backward)
    while node is not None:
        p = g.nodes[node].props
        if ob.backward:
            lag = max(0, a["startTime"] - p["completeTime"])
        else:
            lag = max(0, p["startTime"] - a["completeTime"])
            if hi is not None and lag > hi:
                return False
        if p["activity"] == ob.target and window.contains(lag):
            return True
        if p["activity"] in ob.excluded:
            return False
        node = _step(g, node, ob.backward)
    return False


def _position(g: PropertyGraph, node: str) -> int:
    pos = 0
    while (node := _step(g, node, backward=True)) is not None:
        pos += 1
    return pos


def _case_of(g: PropertyGraph, node: str) -> str:
    (edge,) = g.out_edges(node, "Event_to_case")
    return g.nodes[g.edges[edge].target].props["ID"]


def _failures(g: PropertyGraph, ob: Obligation) -> dict[str, int]:
    out: dict[str, int] = {}
    for act in g.find_nodes("Event", "activity", ob.activation):
        if _satisfied(g, act, ob):
            continue
        cid = _case_of(g, act)
        pos = _position(g, act)
        if cid not in out or pos < out[cid]:
            out[cid] = pos
    return out


def run_graph_traversal(spec: PatternSpec, graph: PropertyGraph) -> ViolationReport:
    return run_reduced(spec, graph.alphabet, lambda ob: _failures(graph, ob), TAG)
