"""Command-line front end.

Exit status: 0 when every requested check ran (and, for ``bench``, every
engine agreed with the oracle); 1 on an engine disagreement; 2 on bad input
or usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .bench import EngineDisagreement, run_benchmark
from .encodings import (export_graph, export_relational, to_multidim_graph, to_relational,
                        to_ua_graph)
from .engines import EngineKind, Encoded, run_engine
from .log import TIMESTAMP_ENV, IngestionConfig, LogFormatError, parse_csv_log, write_csv_log
from .oracle import _case_key, check_pattern
from .patterns import PatternError
from .querygen import Dialect, write_queries
from .specfile import SpecSyntaxError, load_spec_file
from .synth import SynthConfig, generate_log

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT = 0, 1, 2


def _read_log(args):
    cfg = IngestionConfig(delimiter=args.delimiter, timestamp_format=args.timestamp_format)
    return parse_csv_log(Path(args.log), cfg)


def _write_text(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def _reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pattern", "engine", "case_id", "first_failed_position"])
    for rep in reports:
        for c in sorted(rep.violating_cases, key=_case_key):
            w.writerow([rep.pattern.label, rep.engine, c, rep.diagnostics[c]])
    return buf.getvalue()


def _reports_markdown(reports) -> str:
    lines = ["| pattern | engine | violating cases | count |", "|---|---|---|---|"]
    for rep in reports:
        cases = ", ".join(sorted(rep.violating_cases, key=_case_key)) or "none"
        lines.append(f"| {rep.pattern.label} | {rep.engine} | {cases} | "
                     f"{len(rep.violating_cases)} |")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    elog = _read_log(args)
    specs = load_spec_file(args.specs)
    if args.engine.lower() == "oracle":
        reports = [check_pattern(s, elog) for s in specs]
    else:
        enc = Encoded(elog)
        reports = [run_engine(args.engine, s, enc) for s in specs]
    for rep in reports:
        cases = ", ".join(sorted(rep.violating_cases, key=_case_key)) or "none"
        print(f"{rep.pattern.label}: {len(rep.violating_cases)} violating case(s): {cases}")
    if args.out:
        suffix = Path(args.out).suffix.lower()
        if suffix == ".json":
            text = json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
        elif suffix == ".md":
            text = _reports_markdown(reports)
        else:
            text = _reports_csv(reports)
        _write_text(args.out, text)
    return EXIT_OK


def cmd_encode(args) -> int:
    elog = _read_log(args)
    if args.model == "relational":
        paths = [export_relational(to_relational(elog), args.out)]
    elif args.model == "multidim":
        paths = list(export_graph(to_multidim_graph(elog), args.out))
    else:
        paths = list(export_graph(to_ua_graph(elog), args.out))
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_gen_query(args) -> int:
    specs = load_spec_file(args.specs)
    alphabet = None
    if args.log:
        alphabet = _read_log(args).alphabet
    dialects = list(Dialect) if args.dialect == "all" else [Dialect.parse(args.dialect)]
    for d in dialects:
        for p in write_queries(specs, d, args.out, alphabet):
            print(p)
    return EXIT_OK


def cmd_gen_log(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = SynthConfig.from_dict(json.load(fh))
    synth = generate_log(config)
    write_csv_log(synth.log, args.out)
    truth = Path(args.truth) if args.truth else Path(args.out).with_suffix(".truth.json")
    truth.write_text(json.dumps({
        "pattern": str(synth.pattern),
        "violating_cases": sorted(synth.ground_truth, key=_case_key),
        "injected": {c: synth.injected[c] for c in sorted(synth.injected, key=_case_key)},
    }, indent=2) + "\n", encoding="utf-8")
    print(f"{synth.log.n_events} events in {len(synth.log.case_ids)} cases -> {args.out}")
    print(f"ground truth ({len(synth.ground_truth)} cases) -> {truth}")
    return EXIT_OK


def cmd_bench(args) -> int:
    elog = _read_log(args)
    specs = load_spec_file(args.specs)
    engines = list(EngineKind) if args.engines == "all" else [
        EngineKind.parse(e) for e in args.engines.split(",")]
    try:
        result = run_benchmark(elog, specs, engines, args.reps, log_name=Path(args.log).stem)
    except EngineDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    if args.out:
        result.to_csv(args.out)
        Path(args.out).with_suffix(".md").write_text(result.to_markdown(), encoding="utf-8")
    sys.stdout.write(result.to_markdown())
    return EXIT_OK if result.all_agree else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mtlcheck",
                                description="Timed compliance checking of event logs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def log_opts(sp):
        sp.add_argument("--delimiter", default=",")
        sp.add_argument("--timestamp-format", default=None,
                        help=f"auto, iso, dmy or a strptime pattern (default: ${TIMESTAMP_ENV} "
                             "or auto)")

    sp = sub.add_parser("check", help="report violating cases per pattern")
    sp.add_argument("log")
    sp.add_argument("specs")
    sp.add_argument("--engine", default="UaIndexed",
                    help="Oracle, JoinScan, SequenceMatch, GraphTraversal or UaIndexed")
    sp.add_argument("--out", help="report file (.csv, .json or .md)")
    log_opts(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("encode", help="export an encoding as bulk-load files")
    sp.add_argument("log")
    sp.add_argument("--model", choices=["relational", "multidim", "ua"], required=True)
    sp.add_argument("--out", required=True)
    log_opts(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("gen-query", help="write anti-pattern query text")
    sp.add_argument("specs")
    sp.add_argument("--dialect", default="all",
                    help="SqlMiner, MatchRecognize, CypherMultiDim, CypherUA or all")
    sp.add_argument("--out", required=True)
    sp.add_argument("--log", help="log whose alphabet expands chain/last exclusions")
    log_opts(sp)
    sp.set_defaults(func=cmd_gen_query)

    sp = sub.add_parser("gen-log", help="generate a synthetic log from a JSON config")
    sp.add_argument("config")
    sp.add_argument("--out", required=True)
    sp.add_argument("--truth", help="ground-truth file (default: <out>.truth.json)")
    sp.set_defaults(func=cmd_gen_log)

    sp = sub.add_parser("bench", help="time every engine on every pattern")
    sp.add_argument("log")
    sp.add_argument("specs")
    sp.add_argument("--reps", type=int, default=5)
    sp.add_argument("--engines", default="all", help="comma-separated engine list or all")
    sp.add_argument("--out", help="results CSV; a markdown table is written beside it")
    log_opts(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (LogFormatError, SpecSyntaxError, PatternError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
