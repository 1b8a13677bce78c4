"""Anti-pattern query text for external engines.

Four dialect families are emitted: a self-join SQL flavor, a row pattern
recognition flavor, and two Cypher flavors (multi-dimensional and
unique-activities graphs). Only the response family has hand-written
templates; every other kind is derived from its reduction to a timed
obligation and says so in the header comment.

The emitted text keeps the non-strict violation comparators of the original
templates (``>=`` for within, ``<=`` for after) while the in-process engines
use closed windows. The header of each query states both.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import AbstractSet, Iterable

from .log import END, START
from .mtl import TimeWindow
from .patterns import (COMPOSED, PRECEDENCE_FAMILY, RESPONSE_FAMILY, PatternKind, PatternSpec,
                       WindowMode)
from .specfile import format_spec


class Dialect(str, enum.Enum):
    SQL_MINER = "SqlMiner"
    MATCH_RECOGNIZE = "MatchRecognize"
    CYPHER_MULTIDIM = "CypherMultiDim"
    CYPHER_UA = "CypherUA"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: "str | Dialect") -> "Dialect":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for d in cls:
            if d.value.lower() == key:
                return d
        raise ValueError(f"unknown dialect {name!r}; choose from {[d.value for d in cls]}")


@dataclass(frozen=True)
class QueryText:
    dialect: Dialect
    text: str
    placeholders_resolved: bool = True

    def __post_init__(self):
        if self.placeholders_resolved and not self.text:
            raise ValueError("resolved query text must be non-empty")

    def __str__(self):
        return self.text


class QueryGenError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quoting

def quote_sql(label: str) -> str:
    return "'" + label.replace("'", "''") + "'"


def unquote_sql(literal: str) -> str:
    if len(literal) < 2 or literal[0] != "'" or literal[-1] != "'":
        raise ValueError(f"not a SQL string literal: {literal!r}")
    return literal[1:-1].replace("''", "'")


_CYPHER_ESC = {"\\": "\\\\", "'": "\\'", "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_CYPHER_UNESC = {v[1]: k for k, v in _CYPHER_ESC.items()}


def quote_cypher(label: str) -> str:
    return "'" + "".join(_CYPHER_ESC.get(ch, ch) for ch in label) + "'"


def unquote_cypher(literal: str) -> str:
    if len(literal) < 2 or literal[0] != "'" or literal[-1] != "'":
        raise ValueError(f"not a Cypher string literal: {literal!r}")
    return re.sub(r"\\(.)", lambda m: _CYPHER_UNESC[m.group(1)], literal[1:-1], flags=re.S)


# ---------------------------------------------------------------------------
# template parameters

@dataclass(frozen=True)
class _Excl:
    """Excluded labels, either listed or as the complement of ``but``."""

    labels: tuple[str, ...] = ()
    but: tuple[str, ...] | None = None

    def __bool__(self):
        return bool(self.labels) or self.but is not None


@dataclass(frozen=True)
class _Ob:
    activation: str
    target: str
    excluded: _Excl
    window: TimeWindow
    mode: WindowMode
    backward: bool = False


def _excl(spec: PatternSpec, alphabet: AbstractSet[str] | None) -> _Excl:
    k = spec.kind
    if k is PatternKind.ALTERNATE_RESPONSE:
        return _Excl(tuple(sorted(spec.excluded | {spec.condition})))
    if k is PatternKind.ALTERNATE_PRECEDENCE:
        return _Excl(tuple(sorted(spec.excluded | {spec.target})))
    keep = {PatternKind.CHAIN_RESPONSE: spec.target, PatternKind.CHAIN_PRECEDENCE: spec.condition,
            PatternKind.LAST: spec.condition}.get(k)
    if keep is not None:
        if alphabet is None:
            return _Excl(but=(keep, START, END))
        return _Excl(tuple(sorted(set(alphabet) - {keep, START, END})))
    return _Excl(tuple(sorted(spec.excluded)))


def _obligation(spec: PatternSpec, alphabet) -> _Ob:
    k, w, m = spec.kind, spec.window, spec.window_mode
    ex = _excl(spec, alphabet)
    if k is PatternKind.ABSENCE:
        return _Ob(START, END, ex, w, m)
    if k is PatternKind.EXISTENCE:
        return _Ob(START, spec.target, ex, w, m)
    if k is PatternKind.LAST:
        return _Ob(spec.condition, END, ex, w, m)
    if k in RESPONSE_FAMILY:
        return _Ob(spec.condition, spec.target, ex, w, m)
    if k in PRECEDENCE_FAMILY:
        return _Ob(spec.target, spec.condition, ex, w, m, backward=True)
    raise QueryGenError(f"{k} has no single obligation")


def _hours(x) -> str:
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float) and x.is_integer():
        x = int(x)
    return f"{x:g}" if isinstance(x, float) else str(x)


def _time_violation(lag: str, ob: _Ob, render) -> str | None:
    """Disjunction flagging a lag outside the window, or None when untimed."""
    w = ob.window
    if ob.mode is WindowMode.NONE:
        return None
    parts = []
    if w.bounded:
        parts.append(f"{lag} >= {render(w.upper)}")
    if w.lower > 0:
        parts.append(f"{lag} <= {render(w.lower)}")
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else "(" + " or ".join(parts) + ")"


def _header(spec: PatternSpec, dialect: Dialect, comment: str) -> str:
    k = spec.kind
    template = "direct" if k in RESPONSE_FAMILY else "derived"
    if k in PRECEDENCE_FAMILY:
        template = "derived (mirrored response template)"
    elif k in COMPOSED:
        template = "derived (composition of existence queries)"
    elif k is PatternKind.ABSENCE and spec.window_mode is WindowMode.NONE:
        template = "derived (direct absence form)"
    lines = [f"pattern: {format_spec(spec, with_name=True)}",
             f"dialect: {dialect}; template: {template}"]
    if spec.window_mode is WindowMode.NONE:
        lines.append("window: none (untimed)")
    else:
        cmp = "strict (>, <)" if dialect is Dialect.MATCH_RECOGNIZE else "non-strict (>=, <=)"
        lines.append(f"window: {spec.window_mode} {spec.window} h; the checker treats bounds as "
                     f"inclusive, the violation comparators below are {cmp}")
    return "".join(f"{comment} {ln}\n" for ln in lines)


# ---------------------------------------------------------------------------
# SQL Miner

def _sql_interval(h) -> str:
    return f"INTERVAL '{_hours(h)}' HOUR"


def _sql_in(ex: _Excl, col: str) -> str:
    if ex.but is not None:
        return f"{col} NOT IN ({', '.join(quote_sql(x) for x in ex.but)})"
    return f"{col} IN ({', '.join(quote_sql(x) for x in ex.labels)})"


def _sql_obligation(ob: _Ob) -> str:
    a, t = quote_sql(ob.activation), quote_sql(ob.target)
    after, before = (">", "<") if not ob.backward else ("<", ">")
    lag = "l.start - l1.complete" if ob.backward else "l1.start - l.complete"
    timed = _time_violation(lag, ob, _sql_interval)
    gamma = None
    if ob.excluded:
        gamma = ("EXISTS (select CID FROM log as l2\n"
                 "      WHERE l2.CID = l.CID\n"
                 f"      AND l2.position {after} l.position\n"
                 f"      AND l2.position {before} l1.position\n"
                 f"      AND {_sql_in(ob.excluded, 'l2.activity')}\n"
                 "      )")
    parts = []
    if timed or gamma:
        head = ("Select CID\n"
                "From log as l, log as l1\n"
                f"Where l.CID = l1.CID and l.activity = {a} and l1.activity = {t}\n")
        if timed and gamma:
            body = f"and l1.position {after} l.position and ({timed}\nor {gamma}\n    )"
        else:
            body = f"and l1.position {after} l.position and {timed or gamma}"
        parts.append(head + body)
    if ob.target != END:
        parts.append("Select CID\n"
                     "From log as l\n"
                     f"Where l.activity = {a}\n"
                     f"and l.CID not in (Select l1.CID From log l1 Where l1.activity = {t})")
    return "\nUnion\n".join(parts)


def _sql_absence(gamma: str) -> str:
    return ("Select distinct CID\n"
            "From log as l\n"
            f"Where l.activity = {quote_sql(gamma)}")


def _compose(kind: PatternKind, left: str, right: str, minus: str, wrap) -> str:
    if kind is PatternKind.CHOICE:
        return f"{wrap(left)}\nINTERSECT\n{wrap(right)}"
    if kind is PatternKind.RESPONDED_EXISTENCE:
        # violated when the condition exists but the target does not
        return f"{wrap(right)}\n{minus}\n{wrap(left)}"
    return (f"({wrap(right)}\n{minus}\n{wrap(left)})\nUNION\n"
            f"({wrap(left)}\n{minus}\n{wrap(right)})")


def _existence_spec(spec: PatternSpec, label: str) -> PatternSpec:
    return PatternSpec(PatternKind.EXISTENCE, target=label, window=spec.window,
                       window_mode=spec.window_mode)


def _body(spec: PatternSpec, alphabet, obligation_fn, absence_fn, minus: str, wrap) -> str:
    k = spec.kind
    if k in COMPOSED:
        left = obligation_fn(_obligation(_existence_spec(spec, spec.condition), alphabet))
        right = obligation_fn(_obligation(_existence_spec(spec, spec.target), alphabet))
        return _compose(k, left, right, minus, wrap)
    if k is PatternKind.ABSENCE and spec.window_mode is WindowMode.NONE:
        (gamma,) = spec.excluded
        return absence_fn(gamma)
    return obligation_fn(_obligation(spec, alphabet))


def gen_sql_miner(spec: PatternSpec, alphabet: AbstractSet[str] | None = None) -> QueryText:
    body = _body(spec, alphabet, _sql_obligation, _sql_absence, "EXCEPT",
                 lambda q: f"Select CID From (\n{q}\n) as q")
    return QueryText(Dialect.SQL_MINER, _header(spec, Dialect.SQL_MINER, "--") + body + "\n")


# ---------------------------------------------------------------------------
# MATCH_RECOGNIZE

_MR_HEAD = ("select distinct CID\n"
            "from log MATCH_RECOGNIZE(\n"
            "     PARTITION BY CID\n"
            "     ORDER BY Time_stamp\n"
            "     ONE ROW PER MATCH\n"
            "     AFTER MATCH SKIP TO NEXT ROW\n")


def _mr_interval(h) -> str:
    return f"interval '{_hours(h)}' hour"


def _mr_not(var: str, labels: Iterable[str]) -> list[str]:
    return [f"{var}.Activity_ID <> {quote_sql(x)}" for x in labels]


def _mr_excl(var: str, ex: _Excl, positive: bool) -> list[str]:
    if ex.but is not None:
        op = "NOT IN" if positive else "IN"
        return [f"{var}.Activity_ID {op} ({', '.join(quote_sql(x) for x in ex.but)})"]
    if positive:
        return [f"{var}.Activity_ID IN ({', '.join(quote_sql(x) for x in ex.labels)})"]
    return _mr_not(var, ex.labels)


def _mr_branch(pattern: str, defines: list[str]) -> str:
    return (_MR_HEAD + f"     PATTERN ({pattern})\n     DEFINE\n"
            + ",\n".join(f"              {d}" for d in defines) + "\n     )")


def _mr_violation(ob: _Ob, first: str, second: str) -> str | None:
    lag = f"({second}.Time_stamp - {first}.time_stamp)"
    w = ob.window
    if ob.mode is WindowMode.NONE:
        return None
    parts = []
    if w.bounded:
        parts.append(f"{lag} > {_mr_interval(w.upper)}")
    if w.lower > 0:
        parts.append(f"{lag} < {_mr_interval(w.lower)}")
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else "(" + " OR ".join(parts) + ")"


def _mr_obligation(ob: _Ob) -> str:
    a, t = quote_sql(ob.activation), quote_sql(ob.target)
    # A is the activation row; B the target row after it (before it when mirrored)
    pair = "B S* A" if ob.backward else "A S* B"
    first, second = ("B", "A") if ob.backward else ("A", "B")
    skip = list(dict.fromkeys((ob.activation, ob.target)))
    branches = []
    timed = _mr_violation(ob, first, second)
    if timed:
        s = _mr_not("S", skip) + (_mr_excl("S", ob.excluded, False) if ob.excluded else [])
        branches.append(_mr_branch(pair, [
            f"A AS Activity_ID = {a}",
            "S AS " + " AND ".join(s),
            f"B AS ((B.Activity_ID = {t}\n              AND  {timed}))"]))
    elif ob.excluded:
        gpat = "G S* A" if ob.backward else "A S* G"
        branches.append(_mr_branch(gpat, [
            f"A AS Activity_ID = {a}",
            "S AS " + " AND ".join(_mr_not("S", skip)),
            "G AS " + " AND ".join(_mr_excl("G", ob.excluded, True))]))
    if ob.target != END:
        if ob.backward:
            branches.append(_mr_branch("St S* A", [
                f"St AS St.Activity_ID = {quote_sql(START)}",
                "S AS " + " AND ".join(_mr_not("S", skip)),
                f"A AS Activity_ID = {a}"]))
        else:
            branches.append(_mr_branch("A S* E", [
                f"A AS Activity_ID = {a}",
                "S AS " + " AND ".join(_mr_not("S", skip)),
                f"E AS E.Activity_ID = {quote_sql(END)}"]))
    return "\nunion\n".join(branches)


def _mr_absence(gamma: str) -> str:
    return _mr_branch("G", [f"G AS G.Activity_ID = {quote_sql(gamma)}"])


def gen_match_recognize(spec: PatternSpec, alphabet: AbstractSet[str] | None = None) -> QueryText:
    body = _body(spec, alphabet, _mr_obligation, _mr_absence, "MINUS",
                 lambda q: f"select CID from (\n{q}\n)")
    return QueryText(Dialect.MATCH_RECOGNIZE,
                     _header(spec, Dialect.MATCH_RECOGNIZE, "--") + body + ";\n")


# ---------------------------------------------------------------------------
# Cypher, multi-dimensional encoding

def _cy_seconds(h) -> str:
    return f"{_hours(h)} * 3600"


def _cy_list(labels) -> str:
    return "[" + ", ".join(quote_cypher(x) for x in labels) + "]"


def _md_gamma(ex: _Excl, left: str, right: str) -> list[str]:
    if ex.but is not None:
        return [f"({left})-[:Directly_follows*]->(g:Event WHERE NOT g.activity IN "
                f"{_cy_list(ex.but)})-[:Directly_follows*]->({right})"]
    return [f"({left})-[:Directly_follows*]->(:Event{{activity:{quote_cypher(x)}}})"
            f"-[:Directly_follows*]->({right})" for x in ex.labels]


def _md_obligation(ob: _Ob, c: str = "c") -> str:
    a, t = quote_cypher(ob.activation), quote_cypher(ob.target)
    lines = [f"Match ({c}:Case) <-[:Event_to_case]- (start:Event{{activity:{a}}})"]
    if ob.backward:
        lines.append(f"Optional Match (e1:Event{{activity:{t}}})-[:Directly_follows*]->(start)")
        lines.append(f"Match path = (start)<-[:Directly_follows*]-"
                     f"(first:Event{{activity:{quote_cypher(START)}}})")
        lag = "start.startTime - n.completeTime"
        gamma = _md_gamma(ob.excluded, "e1", "start") if ob.excluded else []
    else:
        lines.append(f"Optional Match (e1:Event{{activity:{t}}})<-[:Directly_follows*]-(start)")
        lines.append(f"Match path = (end:Event{{activity:{quote_cypher(END)}}})"
                     f"<-[:Directly_follows*]-(start)")
        lag = "n.startTime - start.completeTime"
        gamma = _md_gamma(ob.excluded, "start", "e1") if ob.excluded else []
    timed = _time_violation(lag, ob, _cy_seconds)
    clauses = []
    if timed:
        clauses.append(f"exists (n in nodes(path) where n.activity={t}\n\tand {timed})")
    clauses.extend(gamma)
    if ob.target != END:
        clauses.append(f"none (n in nodes(path) where n.activity={t})")
    if not clauses:
        clauses.append("false")
    lines.append("\twhere " + "\n\tor ".join(clauses))
    lines.append(f"return {c}.ID")
    return "\n".join(lines)


def _md_absence(gamma: str) -> str:
    return ("Match (c:Case)\n"
            f"\twhere exists((c)<-[:Event_to_case]-(:Event{{activity:{quote_cypher(gamma)}}}))\n"
            "return c.ID")


def _cy_compose(kind: PatternKind, left: str, right: str) -> str:
    def sub(q):
        return "{\n" + "\n".join("\t" + ln for ln in q.splitlines()) + "\n}"

    def viol(q):
        # the case appears among the existence violators
        return f"c.ID IN COLLECT {sub(q)}"

    if kind is PatternKind.CHOICE:
        cond = f"{viol(left)}\nand {viol(right)}"
    elif kind is PatternKind.RESPONDED_EXISTENCE:
        cond = f"{viol(right)}\nand NOT {viol(left)}"
    else:
        cond = f"({viol(right)}) <> ({viol(left)})"
    return f"Match (c:Case)\nwhere {cond}\nreturn c.ID"


def gen_cypher_multidim(spec: PatternSpec, alphabet: AbstractSet[str] | None = None) -> QueryText:
    body = _cy_body(spec, alphabet, _md_obligation, _md_absence)
    return QueryText(Dialect.CYPHER_MULTIDIM,
                     _header(spec, Dialect.CYPHER_MULTIDIM, "//") + body + "\n")


def _cy_body(spec, alphabet, obligation_fn, absence_fn) -> str:
    k = spec.kind
    if k in COMPOSED:
        left = obligation_fn(_obligation(_existence_spec(spec, spec.condition), alphabet), "x")
        right = obligation_fn(_obligation(_existence_spec(spec, spec.target), alphabet), "x")
        return _cy_compose(k, left, right)
    if k is PatternKind.ABSENCE and spec.window_mode is WindowMode.NONE:
        (gamma,) = spec.excluded
        return absence_fn(gamma)
    return obligation_fn(_obligation(spec, alphabet))


# ---------------------------------------------------------------------------
# Cypher, unique-activities encoding

def _ua_obligation(ob: _Ob, c: str = "c") -> str:
    a, t = quote_cypher(ob.activation), quote_cypher(ob.target)
    after, before = (">", "<") if not ob.backward else ("<", ">")
    lag = ("(r1.startTime - r2.completeTime)" if ob.backward
           else "(r2.startTime - r1.completeTime)")
    timed = _time_violation(lag, ob, _cy_seconds)
    ex = ob.excluded
    match = (f"Match (a:Event{{event:{a}}})-[r1:Event_to_Case]->({c}:Case)"
             f"<-[r2:Event_to_Case]- (b:Event{{event:{t}}})")
    gamma = None
    if ex:
        if ex.but is not None:
            match += f",(e:Event)-[r3:Event_to_Case]->({c}:Case)"
            gamma = (f"NOT e.event IN {_cy_list(ex.but)} and "
                     f"r3.position {after} r1.position and r3.position {before} r2.position")
        elif len(ex.labels) == 1:
            match += f",(e:Event{{event:{quote_cypher(ex.labels[0])}}})-[r3:Event_to_Case]->({c}:Case)"
            gamma = f"r3.position {after} r1.position and r3.position {before} r2.position"
        else:
            match += f",(e:Event)-[r3:Event_to_Case]->({c}:Case)"
            gamma = (f"e.event IN {_cy_list(ex.labels)} and "
                     f"r3.position {after} r1.position and r3.position {before} r2.position")
    missing = (f"not exists(({c})<-[:Event_to_Case]-(:Event{{event:{t}}}))"
               if ob.target != END else None)
    if timed or gamma:
        inner = f"({timed} or {gamma})" if timed and gamma else (timed or gamma)
        cond = f"r2.position {after} r1.position and {inner}"
        if missing:
            cond += f" or {missing}"
    else:
        match = f"Match (a:Event{{event:{a}}})-[r1:Event_to_Case]->({c}:Case)"
        cond = missing or "false"
    return f"{match}\nwhere {cond}\nreturn {c}.ID"


def _ua_absence(gamma: str) -> str:
    return ("Match (c:Case)\n"
            f"where exists((c)<-[:Event_to_Case]-(:Event{{event:{quote_cypher(gamma)}}}))\n"
            "return c.ID")


def gen_cypher_ua(spec: PatternSpec, alphabet: AbstractSet[str] | None = None) -> QueryText:
    body = _cy_body(spec, alphabet, _ua_obligation, _ua_absence)
    return QueryText(Dialect.CYPHER_UA, _header(spec, Dialect.CYPHER_UA, "//") + body + "\n")


# ---------------------------------------------------------------------------

GENERATORS = {
    Dialect.SQL_MINER: gen_sql_miner,
    Dialect.MATCH_RECOGNIZE: gen_match_recognize,
    Dialect.CYPHER_MULTIDIM: gen_cypher_multidim,
    Dialect.CYPHER_UA: gen_cypher_ua,
}


def generate(spec: PatternSpec, dialect: Dialect | str,
             alphabet: AbstractSet[str] | None = None) -> QueryText:
    return GENERATORS[Dialect.parse(dialect)](spec, alphabet)


def query_filename(spec: PatternSpec, dialect: Dialect | str) -> str:
    stem = spec.name or f"{spec.kind}"
    stem = re.sub(r"[^A-Za-z0-9._-]+", "_", stem).strip("_") or "pattern"
    return f"{stem}.{Dialect.parse(dialect)}.txt"


def write_queries(specs: Iterable[PatternSpec], dialect: Dialect | str, out_dir,
                  alphabet: AbstractSet[str] | None = None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for spec in specs:
        path = out / query_filename(spec, dialect)
        path.write_text(generate(spec, dialect, alphabet).text, encoding="utf-8")
        written.append(path)
    return written
