"""Command-line interface: evaluate, correlate, report.

Exit codes: 0 success, 2 schema error, 3 adapter unavailable, 4 partial
failures occurred (missing videos, degraded scores, or skipped
categories).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .core import Category, EngineConfig, load_prompt_suite
from .errors import (
    AdapterUnavailableError,
    DegenerateInputError,
    EmptyCategoryError,
    InsufficientOverlapError,
    SchemaError,
)
from .gateway import FixtureStore, HttpSidecar
from .runner import (
    aggregate_human,
    correlate,
    evaluate_suite,
    leaderboard_means,
    load_human_ratings,
    load_score_records,
    write_report,
)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_ADAPTER = 3
EXIT_PARTIAL = 4


def make_adapter(spec: str):
    """Build a gateway adapter from ``fixtures:DIR`` or an http(s) URL."""
    if spec.startswith("fixtures:"):
        return FixtureStore(spec[len("fixtures:"):])
    if spec.startswith(("http://", "https://")):
        adapter = HttpSidecar(spec)
        adapter.health()  # fail fast when the sidecar is down
        return adapter
    raise AdapterUnavailableError(f"unknown adapter spec {spec!r}")


def _cmd_evaluate(args: argparse.Namespace) -> int:
    try:
        suite = load_prompt_suite(args.suite)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.categories:
        wanted = {Category.from_token(token.strip()) for token in args.categories.split(",")}
        suite = [record for record in suite if record.category in wanted]
    cfg = EngineConfig.from_file(args.config) if args.config else EngineConfig()
    try:
        adapter = make_adapter(args.adapter)
    except AdapterUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ADAPTER

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = evaluate_suite(args.model_id, suite, args.videos, adapter, cfg,
                                workers=args.workers, out_dir=out_dir)
    except EmptyCategoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    write_report(result.records, {args.model_id: result.means}, None, out_dir,
                 formats=("csv", "json"))
    with open(out_dir / "coverage.json", "w", encoding="utf-8") as fh:
        json.dump(result.coverage, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    for category, mean in result.means.items():
        print(f"{category.token}: {mean:.4f}")
    degraded = [r.prompt_id for r in result.records if r.note]
    if degraded or result.coverage["missing"]:
        print(f"partial failures: {len(degraded)} degraded, "
              f"{len(result.coverage['missing'])} missing", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_correlate(args: argparse.Namespace) -> int:
    try:
        records = load_score_records(args.records)
        human, flagged = aggregate_human(load_human_ratings(args.human))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if flagged:
        print(f"warning: {len(flagged)} keys without exactly 3 annotators", file=sys.stderr)
    categories = sorted({r.category for r in records}, key=list(Category).index)
    results = []
    skipped = []
    for category in categories:
        try:
            results.append(correlate(records, human, category))
        except (InsufficientOverlapError, DegenerateInputError) as exc:
            skipped.append(category.token)
            print(f"warning: {exc}", file=sys.stderr)
    write_report(records, None, results, args.out, formats=("csv", "json"))
    for result in results:
        print(f"{result.category.token}: tau={result.tau:.4f} rho={result.rho:.4f} n={result.n}")
    return EXIT_PARTIAL if skipped else EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    try:
        records = load_score_records(args.records)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
    paths = write_report(records, leaderboard_means(records), None, args.out, formats)
    for path in paths:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="videval",
        description="Score generated videos against compositional prompt metadata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="score one model's videos over a prompt suite")
    p_eval.add_argument("--suite", required=True, help="prompt suite directory or file")
    p_eval.add_argument("--videos", required=True, help="directory with one video dir per prompt_id")
    p_eval.add_argument("--model-id", required=True)
    p_eval.add_argument("--adapter", required=True, help="fixtures:DIR or http(s)://host:port")
    p_eval.add_argument("--out", required=True)
    p_eval.add_argument("--categories", default=None, help="comma-separated category tokens")
    p_eval.add_argument("--config", default=None, help="JSON EngineConfig overrides")
    p_eval.add_argument("--workers", type=int, default=None)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_corr = sub.add_parser("correlate", help="rank-correlate metric scores with human ratings")
    p_corr.add_argument("--records", required=True)
    p_corr.add_argument("--human", required=True, help="CSV: model_id,prompt_id,annotator_id,rating")
    p_corr.add_argument("--out", required=True)
    p_corr.set_defaults(func=_cmd_correlate)

    p_rep = sub.add_parser("report", help="rebuild leaderboard tables from a records file")
    p_rep.add_argument("--records", required=True)
    p_rep.add_argument("--out", required=True)
    p_rep.add_argument("--format", default="csv", help="comma list of csv,json")
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AdapterUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ADAPTER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    raise SystemExit(main())
