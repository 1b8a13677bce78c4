"""Compliance pattern specs and their MTL_f templates."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable

from .mtl import (TRUE, UNBOUNDED, Atom, EndAtom, Formula, Globally, Iff, Implies, Next, Not, Or,
                  Prev, Since, StartAtom, TimeWindow, Until, conj)


class PatternKind(str, enum.Enum):
    ABSENCE = "Absence"
    EXISTENCE = "Existence"
    LAST = "Last"
    RESPONSE = "Response"
    ALTERNATE_RESPONSE = "AlternateResponse"
    CHAIN_RESPONSE = "ChainResponse"
    PRECEDENCE = "Precedence"
    ALTERNATE_PRECEDENCE = "AlternatePrecedence"
    CHAIN_PRECEDENCE = "ChainPrecedence"
    CHOICE = "Choice"
    RESPONDED_EXISTENCE = "RespondedExistence"
    CO_EXISTENCE = "CoExistence"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "PatternKind":
        key = name.replace("_", "").replace("-", "").replace(" ", "").lower()
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        aliases = {"altresponse": cls.ALTERNATE_RESPONSE, "altresp": cls.ALTERNATE_RESPONSE,
                   "chainresp": cls.CHAIN_RESPONSE, "altprecedence": cls.ALTERNATE_PRECEDENCE,
                   "chainprec": cls.CHAIN_PRECEDENCE, "respexist": cls.RESPONDED_EXISTENCE,
                   "respondedexist": cls.RESPONDED_EXISTENCE, "coexist": cls.CO_EXISTENCE}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown pattern kind {name!r}")


class WindowMode(str, enum.Enum):
    WITHIN = "within"
    AFTER = "after"
    NONE = "none"

    def __str__(self):
        return self.value


RESPONSE_FAMILY = frozenset({PatternKind.RESPONSE, PatternKind.ALTERNATE_RESPONSE,
                             PatternKind.CHAIN_RESPONSE})
PRECEDENCE_FAMILY = frozenset({PatternKind.PRECEDENCE, PatternKind.ALTERNATE_PRECEDENCE,
                               PatternKind.CHAIN_PRECEDENCE})
COMPOSED = frozenset({PatternKind.CHOICE, PatternKind.RESPONDED_EXISTENCE,
                      PatternKind.CO_EXISTENCE})
# kinds whose violations are global to the trace (no single failing activation)
GLOBAL_KINDS = COMPOSED | {PatternKind.ABSENCE, PatternKind.EXISTENCE}


class PatternError(ValueError):
    """A pattern spec that does not fit its kind's parameters."""


@dataclass(frozen=True)
class PatternSpec:
    """``Kind(condition, target, excluded, window)``.

    ``condition`` is the activation of future-looking kinds and the required
    predecessor of the precedence family; ``target`` is the consequent of the
    response family and the activation of the precedence family.
    """

    kind: PatternKind
    condition: str | None = None
    target: str | None = None
    excluded: frozenset[str] = frozenset()
    window: TimeWindow = UNBOUNDED
    window_mode: WindowMode | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        mode = self.window_mode
        if mode is None:
            mode = (WindowMode.NONE if self.window.trivial
                    else WindowMode.WITHIN if self.window.bounded else WindowMode.AFTER)
        mode = WindowMode(mode)
        object.__setattr__(self, "window_mode", mode)
        if mode is WindowMode.NONE and not self.window.trivial:
            raise PatternError(f"window {self.window} given with window mode 'none'")
        if mode is WindowMode.WITHIN and not self.window.bounded:
            raise PatternError("'within' needs a finite upper bound")
        if mode is WindowMode.AFTER and self.window.bounded:
            raise PatternError("'after' windows are open-ended")
        self._check_arity()

    def _check_arity(self):
        k = self.kind
        has_c, has_t, n_ex = self.condition is not None, self.target is not None, len(self.excluded)
        for label in (self.condition, self.target, *self.excluded):
            if label is not None and not label:
                raise PatternError(f"{k}: empty activity label")
        if k is PatternKind.ABSENCE:
            ok = not has_c and not has_t and n_ex == 1
            need = "exactly one excluded activity and no condition/target"
        elif k is PatternKind.EXISTENCE:
            ok = not has_c and has_t and n_ex == 0
            need = "a target only"
        elif k is PatternKind.LAST:
            ok = has_c and not has_t and n_ex == 0
            need = "a condition only"
        elif k in (PatternKind.CHAIN_RESPONSE, PatternKind.CHAIN_PRECEDENCE) or k in COMPOSED:
            ok = has_c and has_t and n_ex == 0
            need = "condition and target, no excluded activities"
        else:
            ok = has_c and has_t
            need = "condition and target"
        if not ok:
            raise PatternError(f"{k} requires {need}; got condition={self.condition!r}, "
                               f"target={self.target!r}, excluded={sorted(self.excluded)}")

    @property
    def label(self) -> str:
        return self.name or str(self)

    def __str__(self):
        from .specfile import format_spec
        return format_spec(self)


def _guard(excluded: Iterable[str]) -> Formula:
    parts = [Not(Atom(g)) for g in sorted(excluded)]
    return conj([TRUE, *parts]) if parts else TRUE


def response_formula(cond: str, target: str, excluded, window: TimeWindow) -> Formula:
    return Globally(Implies(Atom(cond), Next(Until(_guard(excluded), Atom(target), window))))


def precedence_formula(target: str, cond: str, excluded, window: TimeWindow) -> Formula:
    return Globally(Implies(Atom(target), Prev(Since(_guard(excluded), Atom(cond), window))))


def existence_formula(label: str, window: TimeWindow) -> Formula:
    return Globally(Implies(StartAtom(), Next(Until(TRUE, Atom(label), window))))


def effective_excluded(spec: PatternSpec, alphabet: AbstractSet[str] = frozenset()) -> frozenset[str]:
    """The excluded set a kind reduces to (chain/last kinds need the alphabet)."""
    k = spec.kind
    if k is PatternKind.ALTERNATE_RESPONSE:
        return spec.excluded | {spec.condition}
    if k is PatternKind.ALTERNATE_PRECEDENCE:
        return spec.excluded | {spec.target}
    if k is PatternKind.CHAIN_RESPONSE:
        return frozenset(alphabet) - {spec.target}
    if k is PatternKind.CHAIN_PRECEDENCE:
        return frozenset(alphabet) - {spec.condition}
    if k is PatternKind.LAST:
        return frozenset(alphabet) - {spec.condition}
    return spec.excluded


def instantiate(spec: PatternSpec, alphabet: AbstractSet[str] = frozenset()) -> Formula:
    """The MTL_f formula of a pattern spec."""
    k, w = spec.kind, spec.window
    if k is PatternKind.ABSENCE:
        (gamma,) = spec.excluded
        return Globally(Implies(StartAtom(), Next(Until(Not(Atom(gamma)), EndAtom(), w))))
    if k is PatternKind.EXISTENCE:
        return existence_formula(spec.target, w)
    if k is PatternKind.LAST:
        others = [Not(Atom(g)) for g in sorted(effective_excluded(spec, alphabet))]
        return Globally(Implies(Atom(spec.condition), Next(Until(conj(others), EndAtom(), w))))
    if k in RESPONSE_FAMILY:
        return response_formula(spec.condition, spec.target, effective_excluded(spec, alphabet), w)
    if k in PRECEDENCE_FAMILY:
        return precedence_formula(spec.target, spec.condition, effective_excluded(spec, alphabet), w)
    left = existence_formula(spec.condition, w)
    right = existence_formula(spec.target, w)
    if k is PatternKind.CHOICE:
        return Or(left, right)
    if k is PatternKind.RESPONDED_EXISTENCE:
        return Implies(left, right)
    return Iff(left, right)
