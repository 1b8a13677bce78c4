"""Line-oriented pattern files.

One pattern per line, optionally named::

    # hiring requirements
    Req.2: Precedence(condition=Rec.C.R., target=V.C.Q., window=within 0..48 h)
    Req.5: Response(condition="V.C.Q.", target="C.I.", excluded=[T.A.])
    Absence(excluded=[x])

Labels are bare text or double-quoted strings with backslash escapes.
Windows are ``within U h``, ``within L..U h``, ``after L h``, ``after L..inf h``
or ``none``.
"""
from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from typing import Iterable

from .mtl import UNBOUNDED, TimeWindow
from .patterns import PatternError, PatternKind, PatternSpec, WindowMode

_NAME_RE = re.compile(r"\s*([A-Za-z0-9_.\-]+)\s*:\s*(?=[A-Za-z_]+\s*\()")
_KIND_RE = re.compile(r"\s*([A-Za-z_]+)\s*\(")
_SPECIAL = set(',()[]="\\\n\r\t#')
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


class SpecSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Cursor:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.i = 0
        self.lineno = lineno

    def error(self, msg, at=None):
        return SpecSyntaxError(msg, self.lineno, (self.i if at is None else at) + 1)

    def ws(self):
        while self.i < len(self.text) and self.text[self.i] in " \t":
            self.i += 1

    def peek(self):
        self.ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of line"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.i += 1

    def label(self) -> str:
        self.ws()
        start = self.i
        if self.peek() == '"':
            self.i += 1
            out = []
            while True:
                if self.i >= len(self.text):
                    raise self.error("unterminated quoted label", start)
                ch = self.text[self.i]
                if ch == "\\":
                    nxt = self.text[self.i + 1:self.i + 2]
                    if nxt not in _ESCAPES:
                        raise self.error(f"unknown escape \\{nxt}")
                    out.append(_ESCAPES[nxt])
                    self.i += 2
                    continue
                self.i += 1
                if ch == '"':
                    break
                out.append(ch)
            value = "".join(out)
        else:
            while self.i < len(self.text) and self.text[self.i] not in ",)]=":
                self.i += 1
            value = self.text[start:self.i].strip()
        if not value:
            raise self.error("empty activity label", start)
        return value


def _number(text: str, cur: _Cursor, at: int):
    text = text.strip()
    if text.lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise cur.error(f"bad number {text!r}", at) from None
    return int(value) if value.denominator == 1 else value


def _window(cur: _Cursor) -> tuple[TimeWindow, WindowMode]:
    cur.ws()
    start = cur.i
    end = cur.i
    while end < len(cur.text) and cur.text[end] not in ",)":
        end += 1
    raw = cur.text[start:end].strip()
    cur.i = end
    words = raw.split()
    if not words:
        raise cur.error("empty window", start)
    mode = words[0].lower()
    if mode == "none" and len(words) == 1:
        return UNBOUNDED, WindowMode.NONE
    if mode not in ("within", "after"):
        raise cur.error(f"window must start with 'within', 'after' or 'none', got {words[0]!r}", start)
    rest = " ".join(words[1:])
    if rest.endswith("h"):
        rest = rest[:-1].strip()
    if not rest:
        raise cur.error("window bound missing", start)
    if ".." in rest:
        lo_text, hi_text = rest.split("..", 1)
        lo, hi = _number(lo_text, cur, start), _number(hi_text, cur, start)
    elif mode == "within":
        lo, hi = 0, _number(rest, cur, start)
    else:
        lo, hi = _number(rest, cur, start), math.inf
    try:
        return TimeWindow(lo, hi), WindowMode(mode)
    except ValueError as exc:
        raise cur.error(str(exc), start) from None


def parse_spec_line(line: str, lineno: int = 1) -> PatternSpec | None:
    """Parse one line; blank and comment lines give ``None``."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    cur = _Cursor(line.rstrip("\n"), lineno)
    name = None
    m = _NAME_RE.match(cur.text)
    if m:
        name = m.group(1)
        cur.i = m.end()
    m = _KIND_RE.match(cur.text, cur.i)
    if not m:
        raise cur.error("expected a pattern kind followed by '('")
    try:
        kind = PatternKind.parse(m.group(1))
    except ValueError as exc:
        raise cur.error(str(exc), m.start(1)) from None
    cur.i = m.end()
    args: dict = {}
    while cur.peek() != ")":
        if not cur.peek():
            raise cur.error("missing ')'")
        key_start = cur.i
        m = re.compile(r"\s*([A-Za-z_]+)\s*=").match(cur.text, cur.i)
        if not m:
            raise cur.error("expected key=value")
        key = m.group(1).lower()
        cur.i = m.end()
        if key in args:
            raise cur.error(f"duplicate argument {key!r}", key_start)
        if key in ("condition", "target"):
            args[key] = cur.label()
        elif key == "excluded":
            cur.expect("[")
            labels = []
            while cur.peek() != "]":
                labels.append(cur.label())
                if cur.peek() == ",":
                    cur.i += 1
                elif cur.peek() != "]":
                    raise cur.error("expected ',' or ']'")
            cur.i += 1
            args[key] = frozenset(labels)
        elif key == "window":
            args["window"], args["window_mode"] = _window(cur)
        else:
            raise cur.error(f"unknown argument {key!r}", key_start)
        if cur.peek() == ",":
            cur.i += 1
        elif cur.peek() != ")":
            raise cur.error("expected ',' or ')'")
    cur.i += 1
    tail = cur.text[cur.i:].strip()
    if tail and not tail.startswith("#"):
        raise cur.error(f"unexpected text after pattern: {tail!r}")
    try:
        return PatternSpec(kind, name=name, **args)
    except PatternError as exc:
        raise SpecSyntaxError(str(exc), lineno, 1) from None


def parse_spec_text(text: str) -> list[PatternSpec]:
    specs = []
    # split on newlines only: str.splitlines also breaks on \x1c-\x1e, \x85, \u2028
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line[:-1] if line.endswith("\r") else line
        spec = parse_spec_line(line, lineno)
        if spec is not None:
            specs.append(spec)
    return specs


def load_spec_file(path: str | os.PathLike) -> list[PatternSpec]:
    with open(path, encoding="utf-8") as fh:
        return parse_spec_text(fh.read())


def quote_label(label: str) -> str:
    if label.strip() == label and not (_SPECIAL & set(label)):
        return label
    body = (label.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
            .replace("\t", "\\t").replace("\r", "\\r"))
    return f'"{body}"'


def _num(x) -> str:
    if math.isinf(x):
        return "inf"
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return str(x)


def format_window(window: TimeWindow, mode: WindowMode) -> str:
    if mode is WindowMode.NONE:
        return "none"
    return f"{mode.value} {_num(window.lower)}..{_num(window.upper)} h"


def format_spec(spec: PatternSpec, with_name: bool = False) -> str:
    args = []
    if spec.condition is not None:
        args.append(f"condition={quote_label(spec.condition)}")
    if spec.target is not None:
        args.append(f"target={quote_label(spec.target)}")
    if spec.excluded:
        args.append("excluded=[" + ", ".join(quote_label(g) for g in sorted(spec.excluded)) + "]")
    if spec.window_mode is not WindowMode.NONE:
        args.append(f"window={format_window(spec.window, spec.window_mode)}")
    text = f"{spec.kind.value}({', '.join(args)})"
    if with_name and spec.name:
        text = f"{spec.name}: {text}"
    return text


def dump_specs(specs: Iterable[PatternSpec]) -> str:
    return "".join(format_spec(s, with_name=True) + "\n" for s in specs)
