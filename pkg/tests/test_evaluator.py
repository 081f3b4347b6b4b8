"""Evaluation pipeline: scoring runs, depth aggregation, intervals, reports."""

import json
import math
import random
import statistics
from pathlib import Path

import pytest

import graphgen
from amrbench.analysis import extract_triples
from amrbench.config import RunConfig
from amrbench.corpus import CorpusEntry, CorpusIntegrityError
from amrbench.evaluator import (
    DepthAggregate,
    EvalRecord,
    aggregate_by_depth,
    confidence_interval,
    emit_report,
    evaluate,
    load_report,
    summarize,
    write_comparison,
)
from amrbench.penman import (
    StructuralError,
    StructuralErrorKind,
    StructuralReport,
    parse,
    serialize,
)
from amrbench.smatch import MappingResult, brute_force_score


def identity_predictions(entries):
    return {e.id: e.amr_text for e in entries}


def make_record(depth: int, f1: float | None, entry_id: str = "e") -> EvalRecord:
    if f1 is None:
        report = StructuralReport(
            (StructuralError(StructuralErrorKind.UNPARSEABLE, 0, "broken"),)
        )
        return EvalRecord(entry_id, depth, "Other", report, None, 3)
    score = MappingResult({}, 1, f1, f1, f1, 0)
    return EvalRecord(entry_id, depth, "Other", StructuralReport(()), score, 3)


# --------------------------------------------------------------- evaluation


def test_identity_run_scores_one(fixture_entries):
    subset = fixture_entries[:8]
    records = evaluate(subset, identity_predictions(subset), RunConfig(workers=1))
    assert [r.entry_id for r in records] == [e.id for e in subset]
    for record in records:
        assert record.structural.valid
        assert record.score is not None
        assert record.score.f1 == 1.0
        assert record.depth == next(e.depth for e in subset if e.id == record.entry_id)


def test_parallel_run_matches_serial(fixture_entries):
    subset = fixture_entries[:10]
    preds = identity_predictions(subset)
    serial = evaluate(subset, preds, RunConfig(workers=1))
    parallel = evaluate(subset, preds, RunConfig(workers=2))
    assert serial == parallel


def test_missing_predictions_are_an_integrity_error(fixture_entries):
    subset = fixture_entries[:4]
    preds = identity_predictions(subset[:2])
    with pytest.raises(CorpusIntegrityError) as exc:
        evaluate(subset, preds, RunConfig(workers=1))
    for entry in subset[2:]:
        assert entry.id in str(exc.value)


def test_invalid_prediction_becomes_structural_record(fixture_entries):
    subset = fixture_entries[:3]
    preds = identity_predictions(subset)
    broken_id = subset[1].id
    preds[broken_id] = "(a / alpha :arg0 b"
    records = evaluate(subset, preds, RunConfig(workers=1))
    broken = next(r for r in records if r.entry_id == broken_id)
    assert broken.score is None
    kinds = {e.kind for e in broken.structural.errors}
    assert StructuralErrorKind.UNBALANCED_PARENS in kinds
    assert StructuralErrorKind.UNDEFINED_VARIABLE in kinds


def test_raw_generations_pass_through_extraction(fixture_entries):
    entry = fixture_entries[0]
    raw = (
        "<|start_header_id|>assistant<|end_header_id|>\n\n"
        f"{entry.amr_text}<|eot_id|>"
    )
    records = evaluate([entry], {entry.id: raw}, RunConfig(workers=1, family="llama32"))
    assert records[0].score is not None
    assert records[0].score.f1 == 1.0
    assert records[0].raw_length == len(raw)


def test_pipeline_scores_match_direct_oracle(fixture_entries, fixture_graphs):
    # Perturbed predictions scored through the full pipeline must equal the
    # exact oracle computed directly on the graphs.
    rng = random.Random(5)
    subset = [e for e in fixture_entries if len(fixture_graphs[e.id].instances) <= 6]
    subset = subset[:15]
    preds = {}
    expected = {}
    for entry in subset:
        mutated = graphgen.perturb(rng, fixture_graphs[entry.id], n_changes=2)
        mutated = graphgen.rename_variables(rng, mutated)
        preds[entry.id] = serialize(mutated)
        expected[entry.id] = brute_force_score(
            extract_triples(fixture_graphs[entry.id]), extract_triples(mutated)
        ).f1
    records = evaluate(subset, preds, RunConfig(workers=1))
    for record in records:
        assert record.score is not None
        assert record.score.f1 == pytest.approx(expected[record.entry_id], abs=1e-12)


# -------------------------------------------------------------- aggregation


def test_aggregate_by_depth_means_and_errors():
    records = [
        make_record(1, 1.0),
        make_record(1, 0.5),
        make_record(2, None),
        make_record(2, 0.8),
        make_record(4, None),
    ]
    aggs = aggregate_by_depth(records)
    assert [a.depth for a in aggs] == [1, 2, 4]
    assert aggs[0] == DepthAggregate(1, 2, 0, 0.75, 0.75, 0.75)
    assert aggs[1].n == 2 and aggs[1].error_count == 1
    assert aggs[1].mean_f1 == pytest.approx(0.8)
    assert aggs[2].error_count == 1
    assert aggs[2].mean_f1 is None


def test_aggregate_zero_mode_scores_invalid_as_zero():
    records = [make_record(1, 1.0), make_record(1, None)]
    (agg,) = aggregate_by_depth(records, invalid_mode="zero")
    assert agg.mean_f1 == pytest.approx(0.5)
    assert agg.error_count == 1


# ----------------------------------------------------- confidence intervals


def test_confidence_interval_closed_form():
    values = [0.7, 0.9]
    mean, half = confidence_interval(values)
    assert mean == pytest.approx(0.8, abs=1e-12)
    expected = 1.96 * statistics.stdev(values) / math.sqrt(2)
    assert half == pytest.approx(expected, abs=1e-12)
    assert half == pytest.approx(0.196, abs=1e-3)


@pytest.mark.parametrize("level,z", [(0.90, 1.645), (0.95, 1.96), (0.99, 2.576)])
def test_confidence_interval_levels(level, z):
    values = [0.2, 0.5, 0.8, 0.3]
    mean, half = confidence_interval(values, level)
    assert mean == pytest.approx(statistics.fmean(values))
    assert half == pytest.approx(z * statistics.stdev(values) / 2.0)


def test_confidence_interval_rejects_bad_input():
    with pytest.raises(ValueError):
        confidence_interval([0.5])
    with pytest.raises(ValueError):
        confidence_interval([0.5, 0.6], level=0.42)


# ------------------------------------------------------------------ summary


def _aggregates(f1s, error_counts):
    return [
        DepthAggregate(d + 1, 10, err, f1, f1, f1)
        for d, (f1, err) in enumerate(zip(f1s, error_counts))
    ]


def test_summarize_per_depth_rows():
    aggs = _aggregates([0.9, 0.7, 0.5], [0, 1, 2])
    rows = summarize(aggs)
    by_metric = {r.metric: r for r in rows}
    assert set(by_metric) == {"F1", "Precision", "Recall", "MeanErrorCount"}
    assert by_metric["F1"].mean == pytest.approx(0.7)
    assert by_metric["MeanErrorCount"].mean == pytest.approx(1.0)


def test_summarize_mean_error_count_value():
    counts = [0, 0, 1, 0, 0, 0, 1, 0, 0, 1]
    aggs = _aggregates([0.5] * 10, counts)
    rows = summarize(aggs)
    row = next(r for r in rows if r.metric == "MeanErrorCount")
    assert row.mean == pytest.approx(0.3, abs=1e-12)


def test_summarize_per_sentence_pools_records():
    records = [make_record(1, 1.0), make_record(1, 0.0), make_record(2, 0.5)]
    aggs = aggregate_by_depth(records)
    rows = summarize(aggs, mode="per-sentence", records=records)
    f1 = next(r for r in rows if r.metric == "F1")
    assert f1.mean == pytest.approx(0.5)


def test_summarize_per_sentence_zero_mode_counts_invalid():
    records = [make_record(1, 1.0), make_record(1, None), make_record(2, 0.5)]
    aggs = aggregate_by_depth(records, invalid_mode="zero")
    rows = summarize(aggs, mode="per-sentence", records=records, invalid_mode="zero")
    f1 = next(r for r in rows if r.metric == "F1")
    assert f1.mean == pytest.approx(0.5)


def test_summarize_needs_two_depth_levels():
    with pytest.raises(ValueError):
        summarize(_aggregates([0.5], [0]))


def test_summarize_rejects_unknown_mode():
    with pytest.raises(ValueError):
        summarize(_aggregates([0.5, 0.6], [0, 0]), mode="per-planet")


# ------------------------------------------------------------------ reports


def run_small_eval(entries, out_dir: Path, label: str = "run"):
    cfg = RunConfig(workers=1, label=label)
    records = evaluate(entries, identity_predictions(entries), cfg)
    aggs = aggregate_by_depth(records)
    rows = summarize(aggs)
    path = emit_report(records, aggs, rows, out_dir, cfg)
    return path


def test_emit_report_files_and_schema(fixture_entries, tmp_path):
    subset = fixture_entries[:12]
    report_path = run_small_eval(subset, tmp_path / "out")
    report = load_report(report_path)
    assert report["schema_version"] == 1
    assert report["label"] == "run"
    assert len(report["records"]) == 12
    assert {row["metric"] for row in report["summary"]} == {
        "F1",
        "Precision",
        "Recall",
        "MeanErrorCount",
    }
    out = tmp_path / "out"
    for stem in ("f1", "precision", "recall", "error_count"):
        assert (out / "metrics" / f"{stem}.csv").is_file()
        assert (out / "charts" / f"{stem}.svg").is_file()
    assert (out / "run_meta.json").is_file()
    header = (out / "metrics" / "f1.csv").read_text().splitlines()[0]
    assert header == "depth,run"


def test_report_records_carry_structural_errors(fixture_entries, tmp_path):
    subset = fixture_entries[:6]
    preds = identity_predictions(subset)
    preds[subset[0].id] = "(broken"
    cfg = RunConfig(workers=1)
    records = evaluate(subset, preds, cfg)
    aggs = aggregate_by_depth(records)
    rows = summarize(aggs)
    report = load_report(emit_report(records, aggs, rows, tmp_path, cfg))
    first = report["records"][0]
    assert first["valid"] is False
    assert first["errors"]
    assert all("kind" in e and "offset" in e for e in first["errors"])


def test_rerun_is_byte_identical_except_run_meta(fixture_entries, tmp_path):
    subset = fixture_entries[:10]
    run_small_eval(subset, tmp_path / "a")
    run_small_eval(subset, tmp_path / "b")
    files_a = sorted(
        p.relative_to(tmp_path / "a")
        for p in (tmp_path / "a").rglob("*")
        if p.is_file() and p.name != "run_meta.json"
    )
    files_b = sorted(
        p.relative_to(tmp_path / "b")
        for p in (tmp_path / "b").rglob("*")
        if p.is_file() and p.name != "run_meta.json"
    )
    assert files_a == files_b and files_a
    for rel in files_a:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel


def test_load_report_rejects_other_schemas(tmp_path):
    path = tmp_path / "report.json"
    path.write_text(json.dumps({"schema_version": 99}), encoding="utf-8")
    with pytest.raises(ValueError):
        load_report(path)


def test_write_comparison_merges_runs(fixture_entries, tmp_path):
    a = load_report(run_small_eval(fixture_entries[:8], tmp_path / "a", label="base"))
    b = load_report(run_small_eval(fixture_entries[8:16], tmp_path / "b", label="tuned"))
    write_comparison([a, b], tmp_path / "cmp")
    header = (tmp_path / "cmp" / "metrics" / "f1.csv").read_text().splitlines()[0]
    assert header == "depth,base,tuned"
    assert (tmp_path / "cmp" / "charts" / "f1.svg").is_file()


def test_write_comparison_uniquifies_labels(fixture_entries, tmp_path):
    a = load_report(run_small_eval(fixture_entries[:6], tmp_path / "a", label="run"))
    b = load_report(run_small_eval(fixture_entries[:6], tmp_path / "b", label="run"))
    write_comparison([a, b], tmp_path / "cmp")
    header = (tmp_path / "cmp" / "metrics" / "f1.csv").read_text().splitlines()[0]
    assert header == "depth,run,run (2)"


def test_emit_report_rejects_empty_run(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], [], [], tmp_path)
