"""MTL over finite traces: time windows, formula AST and pointwise evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .log import END, START, Event, Trace

INF = math.inf


def lag_seconds(earlier: Event, later: Event) -> int:
    """Elapsed time from ``earlier`` finishing to ``later`` starting.

    Overlapping executions count as zero lag; an event has zero lag to itself.
    """
    if earlier is later:
        return 0
    return max(0, later.start - earlier.complete)


@dataclass(frozen=True)
class TimeWindow:
    """Interval of hours; closed on both ends unless toggled."""

    lower: Real = 0
    upper: Real = INF
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError(f"window lower bound must be >= 0, got {self.lower}")
        if self.upper < self.lower:
            raise ValueError(f"empty window [{self.lower}, {self.upper}]")
        if math.isinf(self.lower):
            raise ValueError("window lower bound must be finite")
        # integer-second bounds for the common case of whole-second lags
        lo = Fraction(self.lower) * 3600
        min_lag = math.ceil(lo) if self.lower_closed else math.floor(lo) + 1
        if self.bounded:
            hi = Fraction(self.upper) * 3600
            max_lag = math.floor(hi) if self.upper_closed else math.ceil(hi) - 1
        else:
            max_lag = INF
        object.__setattr__(self, "min_lag", min_lag)
        object.__setattr__(self, "max_lag", max_lag)

    @classmethod
    def within(cls, hours, lower=0) -> "TimeWindow":
        return cls(lower, hours)

    @classmethod
    def after(cls, hours) -> "TimeWindow":
        return cls(hours, INF)

    @property
    def bounded(self) -> bool:
        return not math.isinf(self.upper)

    @property
    def trivial(self) -> bool:
        return self.lower == 0 and self.lower_closed and not self.bounded

    def contains(self, lag: int | float) -> bool:
        """Whether a lag given in seconds falls inside the window."""
        if type(lag) is int:
            return self.min_lag <= lag <= self.max_lag
        lo = Fraction(self.lower) * 3600
        if lag < lo or (lag == lo and not self.lower_closed):
            return False
        if not self.bounded:
            return True
        hi = Fraction(self.upper) * 3600
        return lag < hi or (lag == hi and self.upper_closed)

    def __str__(self):
        lb = "[" if self.lower_closed else "("
        ub = "]" if self.upper_closed and self.bounded else ")"
        upper = "inf" if not self.bounded else _fmt(self.upper)
        return f"{lb}{_fmt(self.lower)},{upper}{ub}"


UNBOUNDED = TimeWindow()


def _fmt(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return str(x)
    return f"{x:g}" if isinstance(x, float) else str(x)


# ---------------------------------------------------------------------------
# AST

class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class StartAtom(Formula):
    def __str__(self):
        return "S"


@dataclass(frozen=True)
class EndAtom(Formula):
    def __str__(self):
        return "E"


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self):
        return "True"


@dataclass(frozen=True)
class FalseF(Formula):
    def __str__(self):
        return "False"


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def __str__(self):
        return f"¬{_paren(self.operand)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} ∧ {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} ∨ {self.right})"


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} → {self.right})"


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} ↔ {self.right})"


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"◯{_w(self.window)}{_paren(self.operand)}"


@dataclass(frozen=True)
class Prev(Formula):
    operand: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"◯⁻¹{_w(self.window)}{_paren(self.operand)}"


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"({self.left} U{_w(self.window)} {self.right})"


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"({self.left} U⁻¹{_w(self.window)} {self.right})"


@dataclass(frozen=True)
class Globally(Formula):
    operand: Formula

    def __str__(self):
        return f"□{_paren(self.operand)}"


@dataclass(frozen=True)
class GloballyPast(Formula):
    operand: Formula

    def __str__(self):
        return f"□⁻¹{_paren(self.operand)}"


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"◇{_w(self.window)}{_paren(self.operand)}"


@dataclass(frozen=True)
class EventuallyPast(Formula):
    operand: Formula
    window: TimeWindow = UNBOUNDED

    def __str__(self):
        return f"◇⁻¹{_w(self.window)}{_paren(self.operand)}"


TRUE = TrueF()
FALSE = FalseF()


def _w(window: TimeWindow) -> str:
    return "" if window.trivial else f"_{window}"


def _paren(f: Formula) -> str:
    s = str(f)
    if isinstance(f, (Atom, StartAtom, EndAtom, TrueF, FalseF)) or s.startswith("("):
        return s
    return f"({s})"


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def windows(f: Formula):
    """Yield every time window carried by ``f``."""
    for name in getattr(f, "__dataclass_fields__", {}):
        v = getattr(f, name)
        if isinstance(v, TimeWindow):
            yield v
        elif isinstance(v, Formula):
            yield from windows(v)


def is_untimed(f: Formula) -> bool:
    return all(w.trivial for w in windows(f))


# ---------------------------------------------------------------------------
# evaluation

def evaluate(f: Formula, trace: Trace, at: int = 0) -> bool:
    """Pointwise truth of ``f`` on ``trace`` at position ``at``.

    ``Next``/``Prev`` hand their own position to a directly nested
    ``Until``/``Since`` as the anchor for its window, so a template such as
    ``a -> Next(True U_I b)`` times ``b`` against the ``a`` event. Unnested
    temporal operators anchor at their evaluation position.
    """
    n = len(trace)
    if not 0 <= at < n:
        raise IndexError(f"position {at} outside trace of length {n}")
    return _ev(f, trace.events, at, None)


def _ev(f, ev, i, anchor) -> bool:
    t = type(f)
    if t is Atom:
        return ev[i].activity == f.label
    if t is StartAtom:
        return ev[i].activity == START
    if t is EndAtom:
        return ev[i].activity == END
    if t is TrueF:
        return True
    if t is FalseF:
        return False
    if t is Not:
        return not _ev(f.operand, ev, i, None)
    if t is And:
        return _ev(f.left, ev, i, None) and _ev(f.right, ev, i, None)
    if t is Or:
        return _ev(f.left, ev, i, None) or _ev(f.right, ev, i, None)
    if t is Implies:
        return (not _ev(f.left, ev, i, None)) or _ev(f.right, ev, i, None)
    if t is Iff:
        return _ev(f.left, ev, i, None) == _ev(f.right, ev, i, None)
    if t is Next:
        j = i + 1
        if j >= len(ev) or not f.window.contains(lag_seconds(ev[i], ev[j])):
            return False
        return _ev(f.operand, ev, j, i)
    if t is Prev:
        j = i - 1
        if j < 0 or not f.window.contains(lag_seconds(ev[j], ev[i])):
            return False
        return _ev(f.operand, ev, j, i)
    if t is Until:
        a = i if anchor is None else anchor
        for j in range(i, len(ev)):
            if _ev(f.right, ev, j, None) and f.window.contains(lag_seconds(ev[a], ev[j])):
                return True
            if not _ev(f.left, ev, j, None):
                return False
        return False
    if t is Since:
        a = i if anchor is None else anchor
        for j in range(i, -1, -1):
            if _ev(f.right, ev, j, None) and f.window.contains(lag_seconds(ev[j], ev[a])):
                return True
            if not _ev(f.left, ev, j, None):
                return False
        return False
    if t is Globally:
        return all(_ev(f.operand, ev, j, None) for j in range(i, len(ev)))
    if t is GloballyPast:
        return all(_ev(f.operand, ev, j, None) for j in range(i, -1, -1))
    if t is Eventually:
        return any(_ev(f.operand, ev, j, None) and f.window.contains(lag_seconds(ev[i], ev[j]))
                   for j in range(i, len(ev)))
    if t is EventuallyPast:
        return any(_ev(f.operand, ev, j, None) and f.window.contains(lag_seconds(ev[j], ev[i]))
                   for j in range(i, -1, -1))
    raise TypeError(f"not a formula: {f!r}")
