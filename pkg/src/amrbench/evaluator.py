"""Per-entry scoring, per-depth aggregation, confidence intervals, reports.

Structurally invalid predictions are counted per depth (``error_count``)
and by default excluded from the semantic means; ``invalid_mode="zero"``
scores them as 0 instead.  Confidence intervals are mean +- z * s / sqrt(n)
with the sample standard deviation, z fixed at 1.96 for the default 95%
level, computed across per-depth means (or across sentences when
configured).  Reports are written so that a rerun with the same inputs is
byte-identical; the only timestamp lives in a separate metadata file.
"""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import charts
from .config import RunConfig, config_dict
from .corpus import CorpusEntry, CorpusIntegrityError
from .extraction import TemplateFamily, extract_amr
from .penman import StructuralReport
from .smatch import MappingResult, score_pair

Z_SCORES = {0.90: 1.645, 0.95: 1.96, 0.99: 2.576}

REPORT_SCHEMA_VERSION = 1

# (file stem, by-depth key) for each charted metric
_METRICS = (
    ("f1", "mean_f1"),
    ("precision", "mean_precision"),
    ("recall", "mean_recall"),
    ("error_count", "error_count"),
)


@dataclass(frozen=True)
class EvalRecord:
    """Score (or structural failure) of one prediction.

    ``score`` is present exactly when ``structural.valid``.
    """

    entry_id: str
    depth: int
    subset: str
    structural: StructuralReport
    score: MappingResult | None
    raw_length: int


@dataclass(frozen=True)
class DepthAggregate:
    """Means at one depth; None means no valid prediction contributed."""

    depth: int
    n: int
    error_count: int
    mean_f1: float | None
    mean_precision: float | None
    mean_recall: float | None


@dataclass(frozen=True)
class SummaryRow:
    metric: str
    mean: float
    ci_half_width: float


def _score_one(task: tuple[CorpusEntry, str, RunConfig]) -> EvalRecord:
    entry, raw, cfg = task
    family = TemplateFamily.from_string(cfg.family)
    extracted = extract_amr(
        raw, family, cfg.delimiter_overrides or None, cfg.strip_think
    )
    result = score_pair(entry.amr_text, extracted, cfg, entry_id=entry.id)
    if isinstance(result, StructuralReport):
        return EvalRecord(entry.id, entry.depth, entry.subset, result, None, len(raw))
    return EvalRecord(
        entry.id, entry.depth, entry.subset, StructuralReport(()), result, len(raw)
    )


def evaluate(
    gold_entries: Sequence[CorpusEntry],
    predictions: Mapping[str, str],
    config: RunConfig | None = None,
) -> list[EvalRecord]:
    """Extract, validate, and score one prediction per gold entry.

    Records come back in gold order.  Every gold entry must have a
    prediction; scoring seeds derive from the config seed and entry id,
    so the result does not depend on worker scheduling.
    """
    cfg = config if config is not None else RunConfig()
    missing = [e.id for e in gold_entries if e.id not in predictions]
    if missing:
        raise CorpusIntegrityError(
            "missing predictions for: " + ", ".join(missing)
        )
    tasks = [(entry, predictions[entry.id], cfg) for entry in gold_entries]
    workers = min(cfg.effective_workers(), len(tasks)) or 1
    if workers > 1:
        chunk = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_score_one, tasks, chunksize=chunk))
    return [_score_one(task) for task in tasks]


def aggregate_by_depth(
    records: Iterable[EvalRecord], invalid_mode: str = "exclude"
) -> list[DepthAggregate]:
    """Group records by gold depth, ascending, counting invalid ones."""
    groups: dict[int, list[EvalRecord]] = {}
    for record in records:
        groups.setdefault(record.depth, []).append(record)
    out = []
    for depth in sorted(groups):
        recs = groups[depth]
        errors = sum(1 for r in recs if r.score is None)
        if invalid_mode == "zero":
            f1s = [r.score.f1 if r.score else 0.0 for r in recs]
            ps = [r.score.precision if r.score else 0.0 for r in recs]
            rs = [r.score.recall if r.score else 0.0 for r in recs]
        else:
            scored = [r.score for r in recs if r.score is not None]
            f1s = [s.f1 for s in scored]
            ps = [s.precision for s in scored]
            rs = [s.recall for s in scored]
        out.append(
            DepthAggregate(
                depth=depth,
                n=len(recs),
                error_count=errors,
                mean_f1=statistics.fmean(f1s) if f1s else None,
                mean_precision=statistics.fmean(ps) if ps else None,
                mean_recall=statistics.fmean(rs) if rs else None,
            )
        )
    return out


def confidence_interval(
    values: Sequence[float], level: float = 0.95
) -> tuple[float, float]:
    """(mean, half-width): mean +- z * s / sqrt(n), sample stddev."""
    if len(values) < 2:
        raise ValueError("confidence interval needs at least two values")
    z = Z_SCORES.get(level)
    if z is None:
        raise ValueError(f"no z-score on file for level {level}")
    mean = statistics.fmean(values)
    half = z * statistics.stdev(values) / math.sqrt(len(values))
    return mean, half


def summarize(
    aggregates: Sequence[DepthAggregate],
    mode: str = "per-depth",
    records: Sequence[EvalRecord] | None = None,
    invalid_mode: str = "exclude",
    level: float = 0.95,
) -> list[SummaryRow]:
    """F1, Precision, Recall, and MeanErrorCount rows with intervals.

    Per-depth mode treats each depth's mean as one observation, the
    headline shape of a depth-stratified run; per-sentence mode pools
    individual records instead (MeanErrorCount stays per-depth either
    way).  Needs at least two depth levels.
    """
    if len(aggregates) < 2:
        raise ValueError("summary needs at least two depth levels")
    if mode == "per-depth":
        f1s = [a.mean_f1 for a in aggregates if a.mean_f1 is not None]
        ps = [a.mean_precision for a in aggregates if a.mean_precision is not None]
        rs = [a.mean_recall for a in aggregates if a.mean_recall is not None]
    elif mode == "per-sentence":
        if records is None:
            raise ValueError("per-sentence summary needs the records")
        if invalid_mode == "zero":
            f1s = [r.score.f1 if r.score else 0.0 for r in records]
            ps = [r.score.precision if r.score else 0.0 for r in records]
            rs = [r.score.recall if r.score else 0.0 for r in records]
        else:
            scored = [r.score for r in records if r.score is not None]
            f1s = [s.f1 for s in scored]
            ps = [s.precision for s in scored]
            rs = [s.recall for s in scored]
    else:
        raise ValueError(f"unknown summary mode {mode!r}")
    errs = [float(a.error_count) for a in aggregates]
    rows = []
    for metric, values in (("F1", f1s), ("Precision", ps), ("Recall", rs)):
        if len(values) < 2:
            raise ValueError(f"summary needs at least two observations for {metric}")
        mean, half = confidence_interval(values, level)
        rows.append(SummaryRow(metric, mean, half))
    mean, half = confidence_interval(errs, level)
    rows.append(SummaryRow("MeanErrorCount", mean, half))
    return rows


def _record_dict(record: EvalRecord) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": record.entry_id,
        "depth": record.depth,
        "subset": record.subset,
        "valid": record.score is not None,
        "raw_length": record.raw_length,
        "errors": [
            {"kind": e.kind.value, "offset": e.offset, "message": e.message}
            for e in record.structural.errors
        ],
    }
    if record.score is not None:
        score = record.score
        out.update(
            matched=score.matched,
            precision=score.precision,
            recall=score.recall,
            f1=score.f1,
            restarts_used=score.restarts_used,
            mapping=score.mapping,
        )
    return out


def _aggregate_dict(agg: DepthAggregate) -> dict[str, Any]:
    return {
        "depth": agg.depth,
        "n": agg.n,
        "error_count": agg.error_count,
        "mean_f1": agg.mean_f1,
        "mean_precision": agg.mean_precision,
        "mean_recall": agg.mean_recall,
    }


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _metric_series(
    by_depth: Sequence[Mapping[str, Any]], key: str
) -> list[tuple[float, float]]:
    return [
        (float(row["depth"]), float(row[key]))
        for row in by_depth
        if row.get(key) is not None
    ]


def _write_metric_files(
    out_dir: Path, labelled: Sequence[tuple[str, Sequence[Mapping[str, Any]]]]
) -> None:
    """CSV (keyed by depth, one column per run) and SVG per metric."""
    metrics_dir = out_dir / "metrics"
    charts_dir = out_dir / "charts"
    metrics_dir.mkdir(parents=True, exist_ok=True)
    charts_dir.mkdir(parents=True, exist_ok=True)
    for stem, key in _METRICS:
        depths = sorted(
            {row["depth"] for _, by_depth in labelled for row in by_depth}
        )
        lines = ["depth," + ",".join(label for label, _ in labelled)]
        for depth in depths:
            cells = [str(depth)]
            for _, by_depth in labelled:
                value = next(
                    (row.get(key) for row in by_depth if row["depth"] == depth), None
                )
                cells.append("" if value is None else str(value))
            lines.append(",".join(cells))
        _write(metrics_dir / f"{stem}.csv", "\n".join(lines) + "\n")
        series = [
            (label, _metric_series(by_depth, key)) for label, by_depth in labelled
        ]
        _write(
            charts_dir / f"{stem}.svg",
            charts.line_chart(f"{stem} by depth", "depth", stem, series),
        )


def emit_report(
    records: Sequence[EvalRecord],
    aggregates: Sequence[DepthAggregate],
    summary: Sequence[SummaryRow],
    out_dir: str | Path,
    config: RunConfig | None = None,
) -> Path:
    """Write report.json, per-metric CSVs, and charts under ``out_dir``.

    Everything except run_meta.json (which carries the timestamp) is a
    pure function of the inputs.
    """
    if not records:
        raise ValueError("nothing to report: no records")
    cfg = config if config is not None else RunConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    by_depth = [_aggregate_dict(a) for a in aggregates]
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "label": cfg.label,
        "seed": cfg.seed,
        "config": config_dict(cfg),
        "records": [_record_dict(r) for r in records],
        "by_depth": by_depth,
        "summary": [
            {"metric": row.metric, "mean": row.mean, "ci_half_width": row.ci_half_width}
            for row in summary
        ],
    }
    report_path = out / "report.json"
    _write(report_path, json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    _write_metric_files(out, [(cfg.label, by_depth)])
    _write(
        out / "run_meta.json",
        json.dumps(
            {
                "label": cfg.label,
                "created": datetime.now(timezone.utc).isoformat(),
            },
            indent=2,
        )
        + "\n",
    )
    return report_path


def load_report(path: str | Path) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    if report.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema in {path}")
    return report


def write_comparison(reports: Sequence[Mapping[str, Any]], out_dir: str | Path) -> None:
    """Merged per-metric CSVs and charts for one or more saved reports.

    Plots consume only report files, so any two runs can be overlaid
    later without rescoring.  Duplicate labels get a numeric suffix.
    """
    if not reports:
        raise ValueError("nothing to compare: no reports")
    labelled = []
    seen: dict[str, int] = {}
    for report in reports:
        label = str(report.get("label", "run"))
        seen[label] = seen.get(label, 0) + 1
        if seen[label] > 1:
            label = f"{label} ({seen[label]})"
        labelled.append((label, report["by_depth"]))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_metric_files(out, labelled)
