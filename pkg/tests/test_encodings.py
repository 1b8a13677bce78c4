from hypothesis import given, settings

from mtlcheck import EventLog, parse_csv_log
from mtlcheck.encodings import (export_graph, export_relational, from_multidim_graph,
                                from_relational, from_ua_graph, to_multidim_graph, to_relational,
                                to_ua_graph)

from .strategies import event_logs

EMPTY = EventLog({})


class TestRelational:
    def test_hiring_rows(self, hiring_log):
        assert len(to_relational(hiring_log)) == 30

    def test_sizes(self):
        log = EventLog.from_sequences({"1": ["a", "b", "c"], "2": ["a", "b", "c"]})
        assert len(to_relational(log)) == 10
        assert len(to_relational(EMPTY)) == 0

    def test_export(self, hiring_log, tmp_path):
        path = export_relational(to_relational(hiring_log), tmp_path)
        assert parse_csv_log(path) == hiring_log


class TestMultiDim:
    def test_hiring_counts(self, hiring_log):
        g = to_multidim_graph(hiring_log)
        assert g.n_nodes("Event") == 30
        assert g.n_nodes("Case") == 4
        assert g.n_edges("Directly_follows") == 30 - 4
        assert g.n_edges("Event_to_case") == 30

    def test_single_trace(self):
        g = to_multidim_graph(EventLog.from_sequences({"1": ["a"]}))
        assert (g.n_nodes("Event"), g.n_nodes("Case")) == (3, 1)
        assert (g.n_edges("Event_to_case"), g.n_edges("Directly_follows")) == (3, 2)

    def test_node_properties(self, hiring_log):
        g = to_multidim_graph(hiring_log)
        (nid,) = g.find_nodes("Event", "eventId", "2")
        props = g.nodes[nid].props
        assert props["activity"] == "Rec.C.R."
        assert props["completeTime"] > props["startTime"]

    def test_empty(self):
        assert len(to_multidim_graph(EMPTY)) == 0


class TestUa:
    def test_hiring_counts(self, hiring_log):
        g = to_ua_graph(hiring_log)
        assert g.n_nodes("Event") == 9
        assert g.n_nodes("Case") == 4
        assert g.n_edges("Event_to_Case") == 30

    def test_node_count_independent_of_cases(self):
        g = to_ua_graph(EventLog.from_sequences([["a"]] * 1000))
        assert g.n_nodes("Event") == 3
        assert g.n_nodes("Case") == 1000

    def test_occurrence_index(self, hiring_log):
        g = to_ua_graph(hiring_log)
        assert g.occurrence_props["T.A."]["3"][0] == [4, 5]

    def test_empty(self):
        assert len(to_ua_graph(EMPTY)) == 0

    def test_export(self, hiring_log, tmp_path):
        nodes, edges = export_graph(to_ua_graph(hiring_log), tmp_path)
        assert sum(1 for _ in open(nodes)) == 1 + 9 + 4
        assert sum(1 for _ in open(edges)) == 1 + 30


def test_hiring_decoders(hiring_log):
    assert from_relational(to_relational(hiring_log)) == hiring_log
    assert from_multidim_graph(to_multidim_graph(hiring_log)) == hiring_log
    assert from_ua_graph(to_ua_graph(hiring_log)) == hiring_log


@given(event_logs(labels=("a", "b", "c,d", "x")))
@settings(max_examples=80, deadline=None)
def test_lossless_and_structural_invariants(log):
    assert from_relational(to_relational(log)) == log
    md = to_multidim_graph(log)
    assert from_multidim_graph(md) == log
    assert md.n_nodes("Event") == log.n_events
    for nid in md.nodes_by_label.get("Event", ()):
        assert len(md.out_edges(nid, "Directly_follows")) <= 1
        assert len(md.in_edges(nid, "Directly_follows")) <= 1
    ua = to_ua_graph(log)
    assert from_ua_graph(ua) == log
    assert ua.n_nodes("Event") == len(log.alphabet) + 2
    for cnode in ua.nodes_by_label["Case"]:
        cid = ua.nodes[cnode].props["ID"]
        positions = sorted(ua.edges[e].props["position"]
                           for e in ua.in_edges(cnode, "Event_to_Case"))
        assert positions == list(range(len(log[cid])))
