"""Classic untimed LTL_f formalizations of the compliance patterns.

These are the textbook formulas the MTL_f templates reduce to when the window
is ``[0, inf)``. They are written over padded traces ``<Start, w, End>`` where
the markers satisfy no activity atom. Two readings are fixed here:

* alternate precedence looks backwards (``Since``), matching its precedence
  intent;
* ``Last``'s "next is not another activity" ranges over real activities, so
  ``End`` following the last occurrence is allowed.
"""
from __future__ import annotations

from typing import AbstractSet

from .mtl import (Atom, Eventually, Formula, Globally, Iff, Implies, Next, Not, Or, Prev, Since,
                  Until, TRUE)
from .patterns import PatternKind, PatternSpec


def ltl_formula(spec: PatternSpec, alphabet: AbstractSet[str]) -> Formula:
    k = spec.kind
    phi = Atom(spec.condition) if spec.condition is not None else None
    psi = Atom(spec.target) if spec.target is not None else None
    if k is PatternKind.ABSENCE:
        (gamma,) = spec.excluded
        return Not(Eventually(Atom(gamma)))
    if k is PatternKind.EXISTENCE:
        return Eventually(psi)
    if k is PatternKind.LAST:
        others = [Atom(a) for a in sorted(alphabet) if a != spec.condition]
        other = _disj(others)
        return Globally(Implies(phi, Not(Next(other))))
    if k is PatternKind.RESPONSE:
        return Globally(Implies(phi, Eventually(psi)))
    if k is PatternKind.ALTERNATE_RESPONSE:
        return Globally(Implies(phi, Next(Until(Not(phi), psi))))
    if k is PatternKind.CHAIN_RESPONSE:
        return Globally(Implies(phi, Next(psi)))
    if k is PatternKind.PRECEDENCE:
        return Or(Until(Not(psi), phi), Globally(Not(psi)))
    if k is PatternKind.ALTERNATE_PRECEDENCE:
        return Globally(Implies(psi, Prev(Since(Not(psi), phi))))
    if k is PatternKind.CHAIN_PRECEDENCE:
        return Globally(Implies(Next(psi), phi))
    if k is PatternKind.CHOICE:
        return Or(Eventually(phi), Eventually(psi))
    if k is PatternKind.RESPONDED_EXISTENCE:
        return Implies(Eventually(phi), Eventually(psi))
    return Iff(Eventually(phi), Eventually(psi))


def _disj(parts):
    if not parts:
        return Not(TRUE)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out
