"""Timed compliance checking of event logs with MTL_f pattern templates."""
from .log import (END, START, Event, EventLog, IngestionConfig, LogFormatError, Trace,
                  normalize_trace, parse_csv_log, write_csv_log)
from .mtl import TimeWindow, evaluate
from .oracle import ViolationReport, brute_force_ltl, check_pattern
from .patterns import PatternError, PatternKind, PatternSpec, WindowMode, instantiate
from .specfile import SpecSyntaxError, format_spec, load_spec_file, parse_spec_text

__version__ = "0.1.0"

__all__ = [
    "END", "START", "Event", "EventLog", "IngestionConfig", "LogFormatError", "Trace",
    "normalize_trace", "parse_csv_log", "write_csv_log", "TimeWindow", "evaluate",
    "ViolationReport", "brute_force_ltl", "check_pattern", "PatternError", "PatternKind",
    "PatternSpec", "WindowMode", "instantiate", "SpecSyntaxError", "format_spec",
    "load_spec_file", "parse_spec_text",
]
