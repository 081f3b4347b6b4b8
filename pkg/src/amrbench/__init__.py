"""AMR toolkit: Penman parsing, SMATCH scoring, depth-stratified evaluation."""

from .analysis import (
    Triple,
    TripleKind,
    TripleSet,
    depth,
    extract_triples,
    normalize_inverse,
    reentrancies,
)
from .config import RunConfig, load_config
from .corpus import (
    CorpusEntry,
    CorpusIntegrityError,
    Split,
    StratifiedSample,
    SubsetCatalog,
    check_catalog,
    format_finetune,
    load_blocks,
    load_corpus,
    read_predictions,
    stratified_sample,
)
from .evaluator import (
    DepthAggregate,
    EvalRecord,
    SummaryRow,
    aggregate_by_depth,
    confidence_interval,
    emit_report,
    evaluate,
    summarize,
)
from .extraction import TemplateFamily, delimiters, extract_amr, render_chat
from .penman import (
    AmrGraph,
    Const,
    GraphError,
    Ref,
    StructuralError,
    StructuralErrorKind,
    StructuralReport,
    parse,
    serialize,
    tokenize,
    validate,
)
from .smatch import (
    MappingResult,
    brute_force_score,
    hill_climb,
    match_count,
    score_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AmrGraph",
    "Const",
    "CorpusEntry",
    "CorpusIntegrityError",
    "DepthAggregate",
    "EvalRecord",
    "GraphError",
    "MappingResult",
    "Ref",
    "RunConfig",
    "Split",
    "StratifiedSample",
    "StructuralError",
    "StructuralErrorKind",
    "StructuralReport",
    "SubsetCatalog",
    "SummaryRow",
    "TemplateFamily",
    "Triple",
    "TripleKind",
    "TripleSet",
    "aggregate_by_depth",
    "brute_force_score",
    "check_catalog",
    "confidence_interval",
    "delimiters",
    "depth",
    "emit_report",
    "evaluate",
    "extract_amr",
    "extract_triples",
    "format_finetune",
    "hill_climb",
    "load_blocks",
    "load_config",
    "load_corpus",
    "match_count",
    "normalize_inverse",
    "parse",
    "read_predictions",
    "reentrancies",
    "render_chat",
    "score_pair",
    "serialize",
    "stratified_sample",
    "summarize",
    "tokenize",
    "validate",
]
