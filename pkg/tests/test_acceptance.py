"""Acceptance criteria, one test each. Every test records a PASS/FAIL line
that is echoed in the terminal summary."""
import itertools
import math
import random
import time

import pytest

from mtlcheck import PatternKind, brute_force_ltl, check_pattern
from mtlcheck.bench import run_benchmark
from mtlcheck.corpus import precedence_suite, response_suite, spec_corpus
from mtlcheck.encodings import to_ua_graph
from mtlcheck.engines._reduce import Obligation, reduce_spec
from mtlcheck.engines import Encoded, EngineKind, TouchCounter, run_engine, run_ua_indexed
from mtlcheck.oracle import satisfying_words
from mtlcheck.querygen import generate, query_filename
from mtlcheck.reference import ltl_formula
from mtlcheck.synth import SynthConfig, generate_log

from .conftest import GOLDEN
from .golden_cases import golden_cases
from .test_mtl import minimal_spec

HIRING_EXPECTED = {"Req.2": {"2", "3", "4"}, "Req.3": {"2", "4"}, "Req.5": {"2", "4"},
                   "Req.4": {"1", "3", "4"}}
CORPUS = spec_corpus("a", "b", "x")


def sweep_config(seed: int) -> SynthConfig:
    """Seeded variety of log shapes for the cross-engine sweep; every tenth log has 1k cases."""
    r = random.Random(seed)
    return SynthConfig(cases=r.choice([5, 20, 100, 1000]) if seed % 10 else 1000,
                       events_per_case=(1, r.randint(2, 14)), alphabet_size=r.randint(4, 6),
                       violation_rate=r.random(), seed=seed, base_lag=r.choice([0.5, 1, 2]))


def reduced_labels(spec, alphabet) -> set:
    """{condition, target} plus the reduced excluded set plus the markers."""
    red = reduce_spec(spec, alphabet)
    obs = [red] if isinstance(red, Obligation) else [red.left, red.right]
    labels = {"Start", "End"}
    for ob in obs:
        labels |= {ob.activation, ob.target, *ob.excluded}
    return labels - {None}


def test_ground_truth_regression(criterion, hiring_log, hiring_specs):
    t0 = time.perf_counter()
    for name, expected in HIRING_EXPECTED.items():
        spec = hiring_specs[name]
        assert check_pattern(spec, hiring_log).violating_cases == expected, name
        enc = Encoded(hiring_log)
        for engine in EngineKind:
            assert run_engine(engine, spec, enc).violating_cases == expected, (name, engine)
    elapsed = time.perf_counter() - t0
    criterion["runtime_s"] = f"{elapsed:.3f}"
    assert elapsed < 1.0


def test_untimed_reduction_suite(criterion):
    alphabet = {"a", "b", "c"}
    universe = sum(1 for n in range(7) for _ in itertools.product(sorted(alphabet), repeat=n))
    assert universe == 1093
    t0 = time.perf_counter()
    for kind in PatternKind:
        spec = minimal_spec(kind)
        assert satisfying_words(spec, alphabet, 6) == brute_force_ltl(
            ltl_formula(spec, alphabet), alphabet, 6), kind
    elapsed = time.perf_counter() - t0
    criterion["kinds"] = len(PatternKind)
    criterion["words_per_kind"] = universe
    assert elapsed < 30


@pytest.mark.slow
def test_cross_engine_equivalence(criterion):
    t0 = time.perf_counter()
    mismatches = []
    events = 0
    for seed in range(100):
        log = generate_log(sweep_config(seed)).log
        events += log.n_events
        enc = Encoded(log)
        for spec in CORPUS:
            truth = check_pattern(spec, log).violating_cases
            for engine in EngineKind:
                got = run_engine(engine, spec, enc).violating_cases
                if got != truth:
                    mismatches.append((seed, spec.label, str(engine)))
    elapsed = time.perf_counter() - t0
    criterion.update(logs=100, specs=len(CORPUS), events=events, mismatches=len(mismatches))
    assert not mismatches, mismatches[:5]
    assert elapsed < 300


@pytest.mark.parametrize("rate", [0, 0.1, 0.5, 1.0])
def test_injected_violation_recovery(criterion, rate):
    synth = generate_log(SynthConfig(cases=200, violation_rate=rate, seed=7))
    assert len(synth.ground_truth) == math.ceil(rate * 200)
    enc = Encoded(synth.log)
    for engine in EngineKind:
        assert run_engine(engine, synth.pattern, enc).violating_cases == synth.ground_truth, engine


@pytest.mark.slow
def test_relative_performance(criterion):
    t0 = time.perf_counter()
    log = generate_log(SynthConfig(cases=10_000, events_per_case=(5, 15), alphabet_size=24,
                                   violation_rate=0.1, seed=2024)).log
    labels = log.alphabet
    assert log.n_events >= 100_000 and len(labels) >= 20
    enc = Encoded(log)
    engines = [EngineKind.UA_INDEXED, EngineKind.JOIN_SCAN]
    outcome = {}
    for suite_name, suite in (("response", response_suite()), ("precedence", precedence_suite())):
        res = run_benchmark(log, suite, engines, repetitions=5, log_name="perf", encoded=enc)
        ua, js = res.median(EngineKind.UA_INDEXED), res.median(EngineKind.JOIN_SCAN)
        outcome[suite_name] = (ua, js)
        criterion[suite_name] = f"UaIndexed {ua:.1f} ms vs JoinScan {js:.1f} ms"
    criterion["events"] = log.n_events
    for suite_name, (ua, js) in outcome.items():
        assert ua <= js, suite_name
    assert time.perf_counter() - t0 < 600


def test_query_text_goldens(criterion):
    diffs = [query_filename(s, d) for s, d in golden_cases()
             if str(generate(s, d)) != (GOLDEN / query_filename(s, d)).read_text(encoding="utf-8")]
    criterion["files"] = len(golden_cases())
    assert not diffs, diffs


@pytest.mark.slow
def test_ua_work_bound(criterion):
    checked = 0
    for seed in range(100):
        log = generate_log(sweep_config(seed)).log
        g = to_ua_graph(log)
        counts = {}
        for trace in log:
            for e in trace:
                counts[e.activity] = counts.get(e.activity, 0) + 1
        for spec in CORPUS:
            counter = TouchCounter()
            run_ua_indexed(spec, g, counter)
            labels = reduced_labels(spec, log.alphabet)
            bound = sum(counts.get(l, 0) for l in labels)
            assert counter.touches <= bound, (seed, spec.label, counter.touches, bound)
            checked += 1
    criterion["runs"] = checked
