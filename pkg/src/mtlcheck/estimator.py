"""Estimator-style facade: a set of patterns checked against logs."""
from __future__ import annotations

import os
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engines import EngineKind, Encoded, run_engine
from .log import EventLog, parse_csv_log
from .oracle import ViolationReport, _case_key, check_pattern
from .patterns import PatternSpec
from .specfile import parse_spec_text


def check_log(X) -> EventLog:
    """Coerce ``X`` to an :class:`EventLog`.

    Accepts an EventLog, a CSV path, or activity sequences (a list, or a
    mapping of case id to list) which get a one-second synthetic clock.
    """
    if isinstance(X, EventLog):
        return X
    if isinstance(X, (str, os.PathLike)):
        return parse_csv_log(os.fspath(X))
    if isinstance(X, dict) or (isinstance(X, Sequence) and all(
            isinstance(t, Sequence) and not isinstance(t, str) for t in X)):
        if not len(X):
            raise ValueError("empty log")
        return EventLog.from_sequences(X)
    raise TypeError(f"cannot read an event log from {type(X).__name__}")


def check_specs(specs) -> list[PatternSpec]:
    if isinstance(specs, PatternSpec):
        return [specs]
    if isinstance(specs, str):
        return parse_spec_text(specs)
    out = list(specs)
    for s in out:
        if not isinstance(s, PatternSpec):
            raise TypeError(f"expected PatternSpec, got {type(s).__name__}")
    if not out:
        raise ValueError("no patterns given")
    return out


class ComplianceChecker(BaseEstimator):
    """Checks each case of a log against a list of patterns.

    ``fit`` only validates the patterns and remembers the training log's
    alphabet; nothing is learned. ``transform`` returns a cases x patterns
    0/1 violation matrix, ``predict`` flags cases that violate any pattern.
    """

    def __init__(self, specs=None, engine: str = "UaIndexed"):
        self.specs = specs
        self.engine = engine

    def fit(self, X, y=None):
        self.specs_ = check_specs(self.specs)
        self.engine_ = None if self.engine in (None, "oracle", "Oracle") else EngineKind.parse(self.engine)
        log = check_log(X)
        self.alphabet_ = log.alphabet
        self.n_features_in_ = len(self.specs_)
        return self

    def report(self, X) -> list[ViolationReport]:
        check_is_fitted(self, "specs_")
        log = check_log(X)
        if self.engine_ is None:
            return [check_pattern(s, log) for s in self.specs_]
        enc = Encoded(log)
        return [run_engine(self.engine_, s, enc) for s in self.specs_]

    def transform(self, X) -> np.ndarray:
        log = check_log(X)
        reports = self.report(log)
        cases = sorted(log.case_ids, key=_case_key)
        self.case_ids_ = cases
        out = np.zeros((len(cases), len(reports)), dtype=np.int8)
        for j, rep in enumerate(reports):
            for i, c in enumerate(cases):
                out[i, j] = c in rep.violating_cases
        return out

    def predict(self, X) -> np.ndarray:
        return self.transform(X).any(axis=1).astype(np.int8)

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)
