"""Spec corpora covering every pattern kind, window mode and excluded-set variant."""
from __future__ import annotations

from .mtl import UNBOUNDED, TimeWindow
from .patterns import PRECEDENCE_FAMILY, RESPONSE_FAMILY, PatternKind, PatternSpec

# kinds that accept a user-given excluded set besides their own reduction
_TAKES_EXCLUDED = {PatternKind.RESPONSE, PatternKind.ALTERNATE_RESPONSE, PatternKind.PRECEDENCE,
                   PatternKind.ALTERNATE_PRECEDENCE}


def default_windows(base_lag: float = 1.0) -> dict[str, TimeWindow]:
    return {"none": UNBOUNDED, "within": TimeWindow.within(4 * base_lag),
            "after": TimeWindow.after(base_lag)}


def spec_corpus(cond: str = "a", target: str = "b", excluded: str = "x",
                windows: dict[str, TimeWindow] | None = None,
                kinds=tuple(PatternKind)) -> list[PatternSpec]:
    """All kinds x window modes x {no excluded, excluded} where the kind permits."""
    windows = default_windows() if windows is None else windows
    out = []
    for kind in kinds:
        for wname, w in windows.items():
            if kind is PatternKind.ABSENCE:
                variants = [dict(excluded={excluded})]
            elif kind is PatternKind.EXISTENCE:
                variants = [dict(target=target)]
            elif kind is PatternKind.LAST:
                variants = [dict(condition=cond)]
            elif kind in _TAKES_EXCLUDED:
                variants = [dict(condition=cond, target=target),
                            dict(condition=cond, target=target, excluded={excluded})]
            else:
                variants = [dict(condition=cond, target=target)]
            for v in variants:
                tag = f"{kind}-{wname}" + ("-excl" if v.get("excluded") and kind is not
                                           PatternKind.ABSENCE else "")
                out.append(PatternSpec(kind, window=w, name=tag, **v))
    return out


def response_suite(cond="a", target="b", excluded="x", windows=None) -> list[PatternSpec]:
    return spec_corpus(cond, target, excluded, windows, kinds=(PatternKind.RESPONSE,))


def precedence_suite(cond="a", target="b", excluded="x", windows=None) -> list[PatternSpec]:
    return spec_corpus(cond, target, excluded, windows, kinds=(PatternKind.PRECEDENCE,))


__all__ = ["spec_corpus", "response_suite", "precedence_suite", "default_windows",
           "RESPONSE_FAMILY", "PRECEDENCE_FAMILY"]
