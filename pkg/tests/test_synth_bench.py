import dataclasses
import math

import pytest

from mtlcheck import PatternSpec, check_pattern
from mtlcheck.bench import BenchResult, EngineDisagreement, run_benchmark, variant_tag
from mtlcheck.engines import EngineKind, run_engine
from mtlcheck.mtl import TimeWindow
from mtlcheck.synth import SynthConfig, fillers, generate_log, test_pattern as synth_pattern


@pytest.mark.parametrize("rate", [0.0, 0.1, 0.3, 0.5, 1.0])
def test_injected_count_and_recovery(rate):
    cfg = SynthConfig(cases=10, violation_rate=rate, seed=3)
    synth = generate_log(cfg)
    assert len(synth.ground_truth) == math.ceil(rate * 10)
    assert set(synth.injected) == set(synth.ground_truth)
    for engine in EngineKind:
        assert run_engine(engine, synth.pattern, synth.log).violating_cases == synth.ground_truth
    assert check_pattern(synth.pattern, synth.log).violating_cases == synth.ground_truth


def test_every_injection_kind_is_used():
    synth = generate_log(SynthConfig(cases=30, violation_rate=0.5, seed=1))
    assert set(synth.injected.values()) == {"missing_target", "excluded_between", "late_target"}


def test_deterministic_at_scale():
    cfg = SynthConfig(cases=1000, violation_rate=0.1, seed=11)
    a, b = generate_log(cfg), generate_log(cfg)
    assert a.ground_truth == b.ground_truth
    assert [[(e.activity, e.start, e.complete) for e in t] for t in a.log] == \
        [[(e.activity, e.start, e.complete) for e in t] for t in b.log]
    c = generate_log(SynthConfig(cases=1000, violation_rate=0.1, seed=12))
    assert c.ground_truth != a.ground_truth


def test_shape():
    cfg = SynthConfig(cases=50, events_per_case=(5, 9), alphabet_size=6, seed=2)
    log = generate_log(cfg).log
    assert len(log.case_ids) == 50
    assert log.alphabet <= {"a", "b", "x", *fillers(6)} and len(fillers(6)) == 3
    assert synth_pattern(cfg).window == TimeWindow.within(4 * cfg.base_lag)


@pytest.mark.parametrize("bad", [dict(alphabet_size=3), dict(cases=0), dict(violation_rate=1.5),
                                 dict(events_per_case=(9, 5)), dict(base_lag=0)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SynthConfig(**bad)


def test_config_from_dict():
    cfg = SynthConfig.from_dict({"cases": 7, "events_per_case": [3, 4], "seed": 5})
    assert cfg.cases == 7 and cfg.events_per_case == (3, 4)


class TestBenchmark:
    def test_hiring(self, hiring_log, hiring_specs):
        specs = list(hiring_specs.values())
        res = run_benchmark(hiring_log, specs, list(EngineKind), repetitions=5, log_name="hiring")
        assert len(res) == len(specs) * len(EngineKind)
        assert res.all_agree and res.repetitions == 5
        assert all(r.median_ms >= 0 and r.log == "hiring" for r in res)
        assert res.median("UaIndexed") >= 0

    def test_empty_specs(self, hiring_log):
        assert len(run_benchmark(hiring_log, [], list(EngineKind))) == 0

    def test_too_few_reps(self, hiring_log, hiring_specs):
        with pytest.raises(ValueError):
            run_benchmark(hiring_log, list(hiring_specs.values()), ["JoinScan"], repetitions=2)

    def test_disagreement_raises(self, hiring_log, hiring_specs, monkeypatch):
        import mtlcheck.bench as bench

        real = bench.run_engine

        def broken(engine, spec, enc):
            rep = real(engine, spec, enc)
            if engine is EngineKind.SEQUENCE_MATCH:
                rep = dataclasses.replace(rep, violating_cases=rep.violating_cases | {"99"},
                                          diagnostics={**rep.diagnostics, "99": 1})
            return rep

        monkeypatch.setattr(bench, "run_engine", broken)
        with pytest.raises(EngineDisagreement) as info:
            run_benchmark(hiring_log, [hiring_specs["Req.1"]], list(EngineKind))
        assert info.value.extra == {"99"} and info.value.missing == set()

    def test_outputs(self, hiring_log, hiring_specs, tmp_path):
        res = run_benchmark(hiring_log, [hiring_specs["Req.2"]], ["JoinScan", "UaIndexed"])
        text = res.to_csv(tmp_path / "b.csv")
        assert text.splitlines()[0].startswith("log,cases,events,pattern")
        assert len(text.splitlines()) == 3
        md = res.to_markdown()
        assert md.count("\n") == 4 and "within" in md


def test_variant_tag():
    assert variant_tag(PatternSpec("Response", "a", "b")) == "untimed"
    assert variant_tag(PatternSpec("Response", "a", "b", {"x"}, TimeWindow.after(2))) == "after+excluded"


def test_empty_result_median_is_nan():
    assert math.isnan(BenchResult().median("JoinScan"))
