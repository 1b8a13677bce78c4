"""Storage encodings of an event log: relational rows and two property graphs."""
from __future__ import annotations

import csv
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple

from .log import Event, EventLog, Trace

MULTIDIM = "multidim"
UA = "ua"


class Row(NamedTuple):
    event_id: str
    case_id: str
    activity: str
    start: int
    complete: int
    position: int


@dataclass
class RelationalTable:
    rows: list[Row] = field(default_factory=list)
    attrs: dict[str, Mapping[str, str]] = field(default_factory=dict)
    by_case: dict[str, list[Row]] = field(default_factory=dict)
    alphabet: frozenset[str] = frozenset()

    def __len__(self):
        return len(self.rows)


def to_relational(log: EventLog) -> RelationalTable:
    table = RelationalTable()
    for trace in log:
        group = []
        for e in trace:
            row = Row(e.event_id, e.case_id, e.activity, e.start, e.complete, e.position)
            table.rows.append(row)
            group.append(row)
            if e.attrs:
                table.attrs[e.event_id] = dict(e.attrs)
        table.by_case[trace.case_id] = group
    table.alphabet = log.alphabet
    return table


def from_relational(table: RelationalTable) -> EventLog:
    traces = []
    for cid, rows in table.by_case.items():
        events = tuple(Event(r.event_id, r.case_id, r.activity, r.start, r.complete, r.position,
                             table.attrs.get(r.event_id, {})) for r in rows)
        traces.append(Trace(cid, events))
    return EventLog.from_traces(traces)


@dataclass
class Node:
    id: str
    label: str
    props: dict[str, Any]


@dataclass
class Edge:
    id: str
    label: str
    source: str
    target: str
    props: dict[str, Any]


class PropertyGraph:
    """Labeled property graph with label and adjacency indexes."""

    def __init__(self, kind: str = ""):
        self.kind = kind
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, Edge] = {}
        self.nodes_by_label: dict[str, list[str]] = defaultdict(list)
        self.edges_by_label: dict[str, list[str]] = defaultdict(list)
        self._out: dict[str, dict[str, list[str]]] = defaultdict(lambda: defaultdict(list))
        self._in: dict[str, dict[str, list[str]]] = defaultdict(lambda: defaultdict(list))
        # (node label, property, value) -> node ids; filled by index_property
        self.property_index: dict[tuple[str, str], dict[Any, list[str]]] = {}
        # UA occurrence index: activity -> case -> edge ids in position order
        self.occurrences: dict[str, dict[str, list[str]]] = {}
        # label -> case -> (positions, startTimes, completeTimes) of the occurrence edges
        self.occurrence_props: dict[str, dict[str, tuple[list, list, list]]] = {}
        self.alphabet: frozenset[str] = frozenset()

    def add_node(self, node_id: str, label: str, **props) -> Node:
        if node_id in self.nodes:
            raise ValueError(f"duplicate node id {node_id!r}")
        node = Node(node_id, label, props)
        self.nodes[node_id] = node
        self.nodes_by_label[label].append(node_id)
        return node

    def add_edge(self, edge_id: str, label: str, source: str, target: str, **props) -> Edge:
        if edge_id in self.edges:
            raise ValueError(f"duplicate edge id {edge_id!r}")
        if source not in self.nodes or target not in self.nodes:
            raise ValueError(f"edge {edge_id!r} has a missing endpoint")
        edge = Edge(edge_id, label, source, target, props)
        self.edges[edge_id] = edge
        self.edges_by_label[label].append(edge_id)
        self._out[source][label].append(edge_id)
        self._in[target][label].append(edge_id)
        return edge

    def out_edges(self, node_id: str, label: str) -> list[str]:
        return self._out.get(node_id, {}).get(label, [])

    def in_edges(self, node_id: str, label: str) -> list[str]:
        return self._in.get(node_id, {}).get(label, [])

    def index_property(self, label: str, prop: str):
        index: dict[Any, list[str]] = defaultdict(list)
        for nid in self.nodes_by_label.get(label, ()):
            index[self.nodes[nid].props.get(prop)].append(nid)
        self.property_index[(label, prop)] = dict(index)

    def find_nodes(self, label: str, prop: str, value) -> list[str]:
        if (label, prop) not in self.property_index:
            self.index_property(label, prop)
        return self.property_index[(label, prop)].get(value, [])

    def n_nodes(self, label: str | None = None) -> int:
        return len(self.nodes) if label is None else len(self.nodes_by_label.get(label, ()))

    def n_edges(self, label: str | None = None) -> int:
        return len(self.edges) if label is None else len(self.edges_by_label.get(label, ()))

    def __len__(self):
        return len(self.nodes)


def _attr_props(e: Event) -> dict:
    return {f"attr:{k}": v for k, v in e.attrs.items()}


def _attrs_of(props) -> dict:
    return {k[5:]: v for k, v in props.items() if k.startswith("attr:")}


def to_multidim_graph(log: EventLog) -> PropertyGraph:
    """``Case`` and ``Event`` nodes; ``Event_to_case`` and ``Directly_follows`` edges."""
    g = PropertyGraph(MULTIDIM)
    for trace in log:
        case_node = f"case:{trace.case_id}"
        g.add_node(case_node, "Case", ID=trace.case_id)
        prev = None
        for e in trace:
            nid = f"event:{e.event_id}"
            g.add_node(nid, "Event", activity=e.activity, startTime=e.start,
                       completeTime=e.complete, eventId=e.event_id, **_attr_props(e))
            g.add_edge(f"e2c:{e.event_id}", "Event_to_case", nid, case_node)
            if prev is not None:
                g.add_edge(f"df:{e.event_id}", "Directly_follows", prev, nid)
            prev = nid
    g.index_property("Event", "activity")
    g.alphabet = log.alphabet
    return g


def from_multidim_graph(g: PropertyGraph) -> EventLog:
    traces = []
    for cnode in g.nodes_by_label.get("Case", ()):
        cid = g.nodes[cnode].props["ID"]
        members = [g.edges[eid].source for eid in g.in_edges(cnode, "Event_to_case")]
        heads = [n for n in members if not g.in_edges(n, "Directly_follows")]
        if len(heads) != 1:
            raise ValueError(f"case {cid!r}: expected one path head, found {len(heads)}")
        events, node = [], heads[0]
        while node is not None:
            p = g.nodes[node].props
            events.append(Event(p["eventId"], cid, p["activity"], p["startTime"],
                                p["completeTime"], len(events), _attrs_of(p)))
            nxt = g.out_edges(node, "Directly_follows")
            node = g.edges[nxt[0]].target if nxt else None
        if len(events) != len(members):
            raise ValueError(f"case {cid!r}: directly-follows path does not cover all events")
        traces.append(Trace(cid, tuple(events)))
    return EventLog.from_traces(traces)


def to_ua_graph(log: EventLog) -> PropertyGraph:
    """One node per activity label, one ``Case`` node per case, one edge per occurrence."""
    g = PropertyGraph(UA)
    occ: dict[str, dict[str, list[str]]] = {}
    for trace in log:
        case_node = f"case:{trace.case_id}"
        g.add_node(case_node, "Case", ID=trace.case_id)
        for e in trace:
            act_node = f"activity:{e.activity}"
            if act_node not in g.nodes:
                g.add_node(act_node, "Event", event=e.activity)
            eid = f"e2c:{e.event_id}"
            g.add_edge(eid, "Event_to_Case", act_node, case_node, position=e.position,
                       startTime=e.start, completeTime=e.complete, eventId=e.event_id,
                       **_attr_props(e))
            occ.setdefault(e.activity, {}).setdefault(trace.case_id, []).append(eid)
    g.occurrences = occ
    for label, by_case in occ.items():
        cols = g.occurrence_props[label] = {}
        for cid, ids in by_case.items():
            props = [g.edges[i].props for i in ids]
            cols[cid] = ([p["position"] for p in props], [p["startTime"] for p in props],
                         [p["completeTime"] for p in props])
    g.alphabet = log.alphabet
    return g


def from_ua_graph(g: PropertyGraph) -> EventLog:
    traces = []
    for cnode in g.nodes_by_label.get("Case", ()):
        cid = g.nodes[cnode].props["ID"]
        edges = sorted((g.edges[eid] for eid in g.in_edges(cnode, "Event_to_Case")),
                       key=lambda ed: ed.props["position"])
        events = tuple(Event(ed.props["eventId"], cid, g.nodes[ed.source].props["event"],
                             ed.props["startTime"], ed.props["completeTime"],
                             ed.props["position"], _attrs_of(ed.props)) for ed in edges)
        traces.append(Trace(cid, events))
    return EventLog.from_traces(traces)


def export_graph(g: PropertyGraph, directory: str | os.PathLike, delimiter: str = ",") -> tuple[str, str]:
    """Write ``nodes.csv`` and ``edges.csv`` bulk-load files; returns their paths."""
    os.makedirs(directory, exist_ok=True)
    nodes_path = os.path.join(directory, "nodes.csv")
    edges_path = os.path.join(directory, "edges.csv")
    node_keys = sorted({k for n in g.nodes.values() for k in n.props})
    edge_keys = sorted({k for ed in g.edges.values() for k in ed.props})
    with open(nodes_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(["id", "label", *node_keys])
        for n in g.nodes.values():
            w.writerow([n.id, n.label, *(_cell(n.props.get(k)) for k in node_keys)])
    with open(edges_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(["id", "label", "source", "target", *edge_keys])
        for ed in g.edges.values():
            w.writerow([ed.id, ed.label, ed.source, ed.target,
                        *(_cell(ed.props.get(k)) for k in edge_keys)])
    return nodes_path, edges_path


def export_relational(table: RelationalTable, directory: str | os.PathLike,
                      delimiter: str = ",") -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, "log.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(["EID", "CID", "activity", "start", "complete", "position"])
        w.writerows(table.rows)
    return path


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)
