import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtlcheck import (END, START, Event, EventLog, IngestionConfig, LogFormatError,
                      normalize_trace, parse_csv_log, write_csv_log)
from mtlcheck.log import TIMESTAMP_ENV

from .conftest import DATA

HIRING_LABELS = {"Rec.C.R.", "V.C.Q.", "C.I.", "T.A.", "O.C.", "Rej.C.Q.", "S.F."}


def assert_normalized(trace):
    assert [e.position for e in trace] == list(range(len(trace)))
    starts = [e.start for e in trace]
    assert starts == sorted(starts)
    assert trace.events[0].activity == START
    assert trace.events[-1].activity == END
    assert all(e.case_id == trace.case_id for e in trace)


class TestParseCsv:
    def test_hiring_log_shape(self, hiring_log):
        assert len(hiring_log.case_ids) == 4
        assert hiring_log.n_events == 30
        assert hiring_log.alphabet == HIRING_LABELS
        for t in hiring_log:
            assert_normalized(t)

    def test_hiring_case_one_end_gets_its_own_position(self, hiring_log):
        t = hiring_log["1"]
        assert t.activities == ("Start", "Rec.C.R.", "V.C.Q.", "C.I.", "T.A.", "O.C.", "End")
        assert t.events[-1].position == 6

    def test_table_timestamp_format(self, hiring_log):
        ev = hiring_log["1"].events[1]
        # 10-03-2021 20:26 UTC
        assert ev.start == 1615407960
        assert ev.complete - ev.start == (2 * 24 + 19) * 3600 + 28 * 60

    def test_single_row_without_timestamps(self):
        log = parse_csv_log("case,activity\n9,a\n")
        t = log["9"]
        assert t.activities == (START, "a", END)
        assert [e.position for e in t] == [0, 1, 2]

    def test_three_column_log_sets_start_equal_complete(self):
        text = ("case,activity,timestamp\n"
                "1,a,2020-01-01T10:00:00\n1,b,2020-01-01T11:00:00\n"
                "2,a,2020-01-02T10:00:00\n2,c,2020-01-02T12:30:00\n")
        log = parse_csv_log(text)
        assert len(log.case_ids) == 2
        for t in log:
            assert len(t) == 4
            assert all(e.start == e.complete for e in t)
        assert log["2"].events[2].start - log["2"].events[1].complete == 9000

    def test_synthetic_clock_is_one_second(self):
        t = parse_csv_log("case,activity\n1,a\n1,b\n1,c\n")["1"]
        body = [e.start for e in t.events[1:-1]]
        assert [b - a for a, b in zip(body, body[1:])] == [1, 1]

    def test_extra_columns_become_attributes(self):
        log = parse_csv_log("case,activity,resource\n1,a,alice\n")
        assert log["1"].events[1].attrs == {"resource": "alice"}

    def test_bad_timestamp_reports_row_and_format(self):
        with pytest.raises(LogFormatError, match=r"row 2.*DD-MM-YYYY HH:MM"):
            parse_csv_log("case,activity,timestamp\n1,a,2020/01/01\n",
                          IngestionConfig(timestamp_format="dmy"))

    def test_missing_case_column(self):
        with pytest.raises(LogFormatError, match="case column"):
            parse_csv_log("activity\na\n")

    def test_empty_input(self):
        with pytest.raises(LogFormatError, match="empty"):
            parse_csv_log("")

    def test_duplicate_position(self):
        with pytest.raises(LogFormatError, match="position"):
            parse_csv_log("case,activity,position\n1,a,1\n1,b,1\n")

    def test_timestamp_format_from_environment(self, monkeypatch):
        monkeypatch.setenv(TIMESTAMP_ENV, "%Y.%m.%d %H:%M")
        t = parse_csv_log("case,activity,timestamp\n1,a,2021.03.10 20:26\n")["1"]
        assert t.events[1].start == 1615407960

    def test_semicolon_delimiter(self):
        log = parse_csv_log("case;activity\n1;a\n", IngestionConfig(delimiter=";"))
        assert log["1"].activities == (START, "a", END)

    def test_stream_and_bytes_sources(self):
        text = (DATA / "hiring_log.csv").read_text()
        assert parse_csv_log(io.StringIO(text)) == parse_csv_log(text.encode())

    def test_deterministic(self):
        raw = (DATA / "hiring_log.csv").read_bytes()
        assert parse_csv_log(raw) == parse_csv_log(raw)

    def test_labels_are_case_sensitive(self):
        assert parse_csv_log("case,activity\n1,a\n1,A\n").alphabet == {"a", "A"}


class TestNormalizeTrace:
    def test_empty_case(self):
        with pytest.raises(LogFormatError, match="empty case"):
            normalize_trace([], case_id="1")

    def test_ties_keep_input_order(self):
        evs = [Event("e1", "1", "x", 5, 5), Event("e2", "1", "y", 5, 5), Event("e3", "1", "z", 5, 5)]
        assert normalize_trace(evs).activities == (START, "x", "y", "z", END)

    def test_existing_markers_move_to_the_ends(self):
        evs = [Event("e1", "1", "a", 5, 6), Event("e0", "1", "End", 9, 9),
               Event("e2", "1", "Start", 1, 1)]
        t = normalize_trace(evs)
        assert t.activities == (START, "a", END)
        assert t.events[0].event_id == "e2"

    def test_mixed_cases_rejected(self):
        with pytest.raises(LogFormatError):
            normalize_trace([Event("e1", "1", "a", 0, 0), Event("e2", "2", "b", 0, 0)])

    def test_event_invariants(self):
        with pytest.raises(ValueError):
            Event("e", "1", "a", 10, 5)
        with pytest.raises(ValueError):
            Event("e", "1", "", 0, 0)


labels = st.sampled_from(["a", "b", "c", "d,e", 'q"t'])
raw_events = st.lists(st.tuples(labels, st.integers(0, 10_000), st.integers(0, 500)),
                      min_size=1, max_size=8)


@given(st.dictionaries(st.sampled_from(["1", "2", "10", "x"]), raw_events, min_size=1))
@settings(max_examples=60, deadline=None)
def test_normalization_and_csv_round_trip(cases):
    traces = []
    for cid, rows in cases.items():
        evs = [Event(f"{cid}-{i}", cid, a, 1_600_000_000 + s, 1_600_000_000 + s + d)
               for i, (a, s, d) in enumerate(rows)]
        t = normalize_trace(evs, case_id=cid)
        assert_normalized(t)
        assert len(t) == len(rows) + 2
        traces.append(t)
    log = EventLog.from_traces(traces)
    assert parse_csv_log(write_csv_log(log)) == log


def test_hiring_round_trip(hiring_log):
    assert parse_csv_log(write_csv_log(hiring_log)) == hiring_log


def test_epoch_format():
    from mtlcheck.log import parse_timestamp
    assert parse_timestamp("1615407960", "epoch") == 1615407960
    assert parse_timestamp("1615407960") == 1615407960
    with pytest.raises(ValueError):
        parse_timestamp("yesterday", "epoch")
