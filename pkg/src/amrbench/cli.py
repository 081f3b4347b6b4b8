"""Command-line interface.

Exit codes: 0 success, 1 structural failure in the checked input, 2 usage
or data-integrity error.  All commands read settings from an optional
JSON config file; flags override it, and AMR_BENCH_SEED supplies the seed
when neither does.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, load_config
from .corpus import (
    CorpusIntegrityError,
    check_catalog,
    format_finetune,
    load_corpus,
    read_predictions,
    stratified_sample,
    write_blocks,
)
from .evaluator import (
    aggregate_by_depth,
    emit_report,
    evaluate,
    load_report,
    summarize,
    write_comparison,
)
from .extraction import TemplateFamily
from .penman import AmrGraph, parse, serialize, validate
from .smatch import score_pair
from .penman import StructuralReport


def _print_report_lines(path: Path, report: StructuralReport) -> None:
    for err in report.errors:
        print(f"{path}:{err.offset}: {err.kind.value}: {err.message}")


def _iter_targets(paths: list[str]) -> tuple[list[Path], bool]:
    """Expand directories to their files; returns (files, had_directory)."""
    files: list[Path] = []
    had_dir = False
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            had_dir = True
            files.extend(sorted(p for p in path.iterdir() if p.is_file()))
        else:
            files.append(path)
    return files, had_dir


def cmd_parse(args: argparse.Namespace) -> int:
    files, summary = _iter_targets(args.paths)
    summary = summary or len(files) > 1
    failures = 0
    for path in files:
        text = path.read_text(encoding="utf-8")
        result = parse(text)
        if isinstance(result, AmrGraph):
            if summary:
                print(f"{path.name}: ok")
            else:
                print(serialize(result))
        else:
            failures += 1
            if summary:
                print(f"{path.name}: {len(result.errors)} error(s)")
            else:
                _print_report_lines(path, result)
    return 1 if failures else 0


def cmd_validate(args: argparse.Namespace) -> int:
    files, _ = _iter_targets(args.paths)
    failures = 0
    for path in files:
        report = validate(path.read_text(encoding="utf-8"))
        if report.valid:
            print(f"{path}: ok")
        else:
            failures += 1
            _print_report_lines(path, report)
    return 1 if failures else 0


def cmd_score(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    gold_text = Path(args.gold).read_text(encoding="utf-8")
    pred_text = Path(args.pred).read_text(encoding="utf-8")
    result = score_pair(gold_text, pred_text, cfg)
    if isinstance(result, StructuralReport):
        print(f"prediction is structurally invalid ({len(result.errors)} error(s)):")
        _print_report_lines(Path(args.pred), result)
        return 2
    print(f"Precision {result.precision:.4f}")
    print(f"Recall {result.recall:.4f}")
    print(f"F1 {result.f1:.4f}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    entries = load_corpus(args.gold, lenient=args.lenient)
    if not entries:
        raise CorpusIntegrityError(f"no entries found in {args.gold}")
    if args.check_catalog:
        for line in check_catalog(entries):
            print(f"warning: {line}", file=sys.stderr)
    predictions = read_predictions(args.predictions)
    records = evaluate(entries, predictions, cfg)
    aggregates = aggregate_by_depth(records, cfg.invalid_mode)
    rows = summarize(aggregates, cfg.ci_mode, records, cfg.invalid_mode, cfg.ci_level)
    report_path = emit_report(records, aggregates, rows, args.out, cfg)
    for row in rows:
        print(f"{row.metric} {row.mean:.4f} ± {row.ci_half_width:.4f}")
    print(f"report: {report_path}")
    return 0


def cmd_prepare(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    family = TemplateFamily.from_string(cfg.family)
    entries = load_corpus(args.corpus, lenient=args.lenient)
    if args.check_catalog:
        for line in check_catalog(entries):
            print(f"warning: {line}", file=sys.stderr)
    lines = format_finetune(
        entries,
        family,
        cfg.system_prompt,
        inference=args.inference,
        overrides=cfg.delimiter_overrides or None,
    )
    payload = "\n".join(lines) + ("\n" if lines else "")
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        Path(args.out).write_text(payload, encoding="utf-8")
        kind = "prompt" if args.inference else "fine-tune"
        print(f"wrote {len(lines)} {kind} records to {args.out}")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    entries = load_corpus(args.corpus, lenient=args.lenient)
    if args.check_catalog:
        for line in check_catalog(entries):
            print(f"warning: {line}", file=sys.stderr)
    result = stratified_sample(entries, cfg.per_depth, cfg.depth_range, cfg.seed)
    for depth_level, missing in sorted(result.shortfalls.items()):
        found = cfg.per_depth - missing
        print(
            f"warning: depth {depth_level}: requested {cfg.per_depth}, found {found}",
            file=sys.stderr,
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            if args.blocks:
                write_blocks(result.entries, fh)
            else:
                fh.write("".join(e.id + "\n" for e in result.entries))
        print(f"wrote {len(result.entries)} entries to {args.out}")
    else:
        for entry in result.entries:
            print(entry.id)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    reports = [load_report(p) for p in args.reports]
    write_comparison(reports, args.out)
    print(f"wrote comparison of {len(reports)} run(s) to {args.out}")
    return 0


def _parse_depth_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            value = int(lo)
            return (value, value)
        return (int(lo), int(hi))
    except ValueError:
        raise ValueError(f"bad depth range {text!r}, expected LO:HI") from None


def _config_from(args: argparse.Namespace) -> RunConfig:
    overrides = {}
    for name in (
        "seed",
        "restarts",
        "exact_threshold",
        "family",
        "workers",
        "label",
        "invalid_mode",
        "ci_mode",
        "per_depth",
        "system_prompt",
    ):
        if getattr(args, name, None) is not None:
            overrides[name] = getattr(args, name)
    if getattr(args, "depth_range", None) is not None:
        overrides["depth_range"] = _parse_depth_range(args.depth_range)
    if getattr(args, "no_strip_think", False):
        overrides["strip_think"] = False
    return load_config(getattr(args, "config", None), overrides)


def _add_config_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON run-config file")


def _add_scoring_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, help="alignment seed")
    sub.add_argument("--restarts", type=int, help="hill-climbing restarts")
    sub.add_argument(
        "--exact-threshold",
        type=int,
        help="use the exact oracle when both graphs have at most this many variables",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amrbench",
        description="Parse, validate, score, and evaluate AMR graphs in Penman notation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("parse", help="parse files and pretty-print or report errors")
    p.add_argument("paths", nargs="+", help="Penman files or directories of them")
    p.set_defaults(func=cmd_parse)

    p = subs.add_parser("validate", help="structural check, all errors listed")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("score", help="SMATCH precision/recall/F1 for one pair")
    p.add_argument("gold")
    p.add_argument("pred")
    _add_config_flag(p)
    _add_scoring_flags(p)
    p.set_defaults(func=cmd_score)

    p = subs.add_parser("eval", help="score a prediction file against a gold corpus")
    p.add_argument("gold", help="gold corpus file or directory")
    p.add_argument("predictions", help="line-delimited {id, raw} records")
    p.add_argument("--out", required=True, help="report directory")
    _add_config_flag(p)
    _add_scoring_flags(p)
    p.add_argument("--family", help="chat template family of the raw generations")
    p.add_argument("--workers", type=int, help="worker processes (0 = logical cores)")
    p.add_argument("--label", help="run label used in reports and charts")
    p.add_argument("--invalid-mode", choices=["exclude", "zero"])
    p.add_argument("--ci-mode", choices=["per-depth", "per-sentence"])
    p.add_argument("--lenient", action="store_true", help="skip bad gold entries")
    p.add_argument("--check-catalog", action="store_true")
    p.add_argument("--no-strip-think", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("prepare", help="format fine-tune records or inference prompts")
    p.add_argument("corpus")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    _add_config_flag(p)
    p.add_argument("--family")
    p.add_argument("--system-prompt")
    p.add_argument("--inference", action="store_true", help="open assistant turn")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--check-catalog", action="store_true")
    p.set_defaults(func=cmd_prepare)

    p = subs.add_parser("sample", help="stratified per-depth sample of a corpus")
    p.add_argument("corpus")
    _add_config_flag(p)
    p.add_argument("--per-depth", type=int)
    p.add_argument("--depth-range", help="inclusive LO:HI")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--blocks", action="store_true", help="write corpus blocks, not ids")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--check-catalog", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("report", help="merge saved reports into CSVs and charts")
    p.add_argument("reports", nargs="+", help="report.json files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorpusIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
