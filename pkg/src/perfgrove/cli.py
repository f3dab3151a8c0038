"""Command-line entry point.

Exit status is 0 on success, 1 for bad input or usage, 2 for anything
unexpected. Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from perfgrove import tree_io
from perfgrove.binning import KneePolicy, bin_times
from perfgrove.errors import PerfgroveError
from perfgrove.id3 import TrainParams, iter_leaves
from perfgrove.inference import AcceptPolicy, batch_evaluate, predict
from perfgrove.model import Model, load_model, train
from perfgrove.records import _number, parse_records, validate
from perfgrove.sensitivity import ImpactProbe, depth_impact_report
from perfgrove.synth import SynthConfig, generate

SEED_ENV = "PERFGROVE_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _knee_policy(args) -> KneePolicy:
    if args.k is not None:
        return KneePolicy.top_k(args.k)
    return KneePolicy.threshold(args.theta)


def _parse_assignment(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value pairs, got {part!r}")
        try:
            out[key.strip()] = _number(value)
        except ValueError:
            raise UsageError(f"--set value for {key.strip()!r} is not numeric: {value!r}") from None
    return out


def _load_records(path: str):
    records = parse_records(_read(path))
    report = validate(records)
    for issue in report.warnings:
        print(f"warning: record {issue.index}: {issue.message}", file=sys.stderr)
    if report.errors:
        for issue in report.errors:
            print(f"error: record {issue.index}: {issue.message}", file=sys.stderr)
        raise PerfgroveError(f"{len(report.errors)} invalid record field(s) in {path}")
    return records


def cmd_train(args) -> int:
    records = _load_records(args.input)
    model = train(records, _knee_policy(args), TrainParams(min_samples_leaf=args.min_samples_leaf))
    _write(args.out, model.to_json() + "\n")
    leaves = sum(1 for _ in iter_leaves(model.tree))
    print(f"trained on {len(records)} records: {len(model.binset)} bins, {leaves} leaves", file=sys.stderr)
    return 0


def format_prediction(pred) -> str:
    entries = sorted(pred.prob_dist.items(), key=lambda kv: (kv[0] != pred.top_bin, -kv[1]))
    body = ", ".join(f"{lab} p={p!r}" for lab, p in entries)
    return f"{body} {pred.confidence}"


def cmd_predict(args) -> int:
    model = load_model(_read(args.model))
    pred = predict(model.tree, _parse_assignment(args.set))
    print(format_prediction(pred))
    return 0


def cmd_detect(args) -> int:
    model = load_model(_read(args.model))
    records = _load_records(args.input)
    summary = batch_evaluate(model.tree, records, AcceptPolicy.parse(args.policy), model.binset)
    for rep in summary.reports:
        print(json.dumps(rep.to_dict()))
    print(f"coverage={summary.coverage:.3f} covered={summary.covered} total={summary.total}")
    return 0


def cmd_analyze(args) -> int:
    model = load_model(_read(args.model))
    raw = json.loads(_read(args.probes))
    if not isinstance(raw, list):
        raise PerfgroveError("probes file must hold a JSON array")
    probes = [ImpactProbe.from_dict(p) for p in raw]
    report = depth_impact_report(model.tree, probes, model.binset)
    sys.stdout.write(report.to_json() + "\n" if args.json else report.render())
    return 0


def cmd_bins(args) -> int:
    records = _load_records(args.input)
    binset = bin_times([r.exec_minutes for r in records], _knee_policy(args))
    sys.stdout.write(binset.render())
    return 0


def cmd_gen(args) -> int:
    seed = args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    config = SynthConfig(
        seed=seed,
        queries=args.queries,
        noise_frac=args.noise_frac,
        outlier_rate=args.outlier_rate,
        repeats=args.repeats,
    )
    corpus = generate(config)
    csv_path, truth_path = corpus.write(args.out)
    print(f"wrote {len(corpus.records)} records to {csv_path} and ground truth to {truth_path}", file=sys.stderr)
    return 0


def cmd_export(args) -> int:
    model = load_model(_read(args.model))
    if args.format == "appendix":
        text = tree_io.render_appendix(model.tree) + "\n"
    else:
        text = Model(model.tree, model.binset, model.schema).to_json() + "\n"
    _write(args.out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="perfgrove", description="Execution-time range models for configurable batch workloads.")
    sub = p.add_subparsers(dest="command", metavar="{train,predict,detect,analyze,bins,gen,export}", parser_class=_Parser)
    sub.required = True

    def knee_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--theta", type=float, default=0.05, help="relative-gap threshold (default 0.05)")
        g.add_argument("--k", type=int, default=None, help="desired bin count (top-k mode)")

    sp = sub.add_parser("train", help="bin execution times and grow the tree")
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--min-samples-leaf", type=int, default=1)
    knee_flags(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("predict", help="predict the time range for one setting")
    sp.add_argument("--model", required=True)
    sp.add_argument("--set", required=True, help="comma list of attribute=value")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("detect", help="flag runs outside their predicted range")
    sp.add_argument("--model", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--policy", default="top", help="top, any, or p_min=<x>")
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("analyze", help="depth-impact report for attribute probes")
    sp.add_argument("--model", required=True)
    sp.add_argument("--probes", required=True)
    sp.add_argument("--json", action="store_true", help="emit a JSON array instead of a table")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("bins", help="print the bin set for a corpus")
    sp.add_argument("--input", required=True)
    knee_flags(sp)
    sp.set_defaults(func=cmd_bins)

    sp = sub.add_parser("gen", help="write a synthetic corpus with ground truth")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--queries", type=int, default=6)
    sp.add_argument("--noise-frac", type=float, default=0.25)
    sp.add_argument("--outlier-rate", type=float, default=0.0)
    sp.add_argument("--repeats", type=int, default=1)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("export", help="re-serialize a model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--format", choices=("appendix", "json"), required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (PerfgroveError, OSError, json.JSONDecodeError) as exc:
        print(f"perfgrove: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"perfgrove: internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
