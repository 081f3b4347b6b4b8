"""Corpus ingestion, subset bookkeeping, sampling, and fine-tune formatting.

Corpus files hold blank-line-separated blocks:

    # ::id ex_001.1 ::snt The boy wants to go.
    (w / want-01
        :arg0 (b / boy)
        :arg1 (g / go-01
            :arg0 b))

Gold data is trusted: any defect aborts the load with the offending entry
id.  ``lenient=True`` downgrades per-entry problems to skip-with-log for
machine-generated (silver) data.
"""

from __future__ import annotations

import enum
import io
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from . import analysis, penman
from .extraction import TemplateFamily, render_chat

log = logging.getLogger(__name__)


class CorpusIntegrityError(ValueError):
    """A defect in data that the pipeline must be able to trust."""


class Split(enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


SUBSET_BOLT = "Bolt"
SUBSET_CONSENSUS = "Consensus"
SUBSET_DFA = "DFA"
SUBSET_LORELEI = "Lorelei"
SUBSET_PROXY = "ProxyReports"
SUBSET_XINHUA = "XinhuaMT"
SUBSET_OTHER = "Other"

CANONICAL_SUBSETS = (
    SUBSET_BOLT,
    SUBSET_CONSENSUS,
    SUBSET_DFA,
    SUBSET_LORELEI,
    SUBSET_PROXY,
    SUBSET_XINHUA,
)

# Substring of a file name or entry id -> subset tag, checked in order.
DEFAULT_SUBSET_MAP: dict[str, str] = {
    "bolt": SUBSET_BOLT,
    "consensus": SUBSET_CONSENSUS,
    "dfa": SUBSET_DFA,
    "lorelei": SUBSET_LORELEI,
    "proxy": SUBSET_PROXY,
    "xinhua": SUBSET_XINHUA,
}

# Published per-dataset (train, dev, test) sizes of the AMR 3.0 release.
RELEASE_DISTRIBUTION: dict[str, tuple[int, int, int]] = {
    "BOLT DF MT": (1061, 133, 133),
    "Broadcast conversation": (214, 0, 0),
    "Weblog and WSJ": (0, 100, 100),
    "BOLT DF English": (7379, 210, 229),
    "DEFT DF English": (32915, 0, 0),
    "Aesop fables": (49, 0, 0),
    "Guidelines AMRs": (970, 0, 0),
    "LORELEI": (4441, 354, 527),
    "2009 Open MT": (204, 0, 0),
    "Proxy reports": (6603, 826, 823),
    "Weblog": (866, 0, 0),
    "Wikipedia": (192, 0, 0),
    "Xinhua MT": (741, 99, 86),
}

_DATASET_SUBSET = {
    "BOLT DF MT": SUBSET_BOLT,
    "Weblog and WSJ": SUBSET_CONSENSUS,
    "BOLT DF English": SUBSET_DFA,
    "LORELEI": SUBSET_LORELEI,
    "Proxy reports": SUBSET_PROXY,
    "Xinhua MT": SUBSET_XINHUA,
}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    sentence: str
    amr_text: str
    subset: str = SUBSET_OTHER
    split: Split = Split.TEST
    depth: int = 0


@dataclass(frozen=True)
class SubsetCatalog:
    """Expected (train, dev, test) counts per subset tag."""

    rows: dict[str, tuple[int, int, int]]

    def totals(self) -> tuple[int, int, int]:
        train = sum(r[0] for r in self.rows.values())
        dev = sum(r[1] for r in self.rows.values())
        test = sum(r[2] for r in self.rows.values())
        return (train, dev, test)

    def diff(self, counts: Mapping[tuple[str, Split], int]) -> list[tuple[str, Split, int, int]]:
        """Per-cell (subset, split, expected, actual) mismatches."""
        out = []
        splits = (Split.TRAIN, Split.DEV, Split.TEST)
        names = list(self.rows) + sorted(
            {s for s, _ in counts} - set(self.rows)
        )
        for name in names:
            expected = self.rows.get(name, (0, 0, 0))
            for idx, split in enumerate(splits):
                actual = counts.get((name, split), 0)
                if actual != expected[idx]:
                    out.append((name, split, expected[idx], actual))
        return out


def default_catalog() -> SubsetCatalog:
    rows = {name: (0, 0, 0) for name in (*CANONICAL_SUBSETS, SUBSET_OTHER)}
    for dataset, (train, dev, test) in RELEASE_DISTRIBUTION.items():
        tag = _DATASET_SUBSET.get(dataset, SUBSET_OTHER)
        t0, t1, t2 = rows[tag]
        rows[tag] = (t0 + train, t1 + dev, t2 + test)
    return SubsetCatalog(rows)


def check_catalog(
    entries: Iterable[CorpusEntry], catalog: SubsetCatalog | None = None
) -> list[str]:
    """Compare loaded counts to the expected catalog.

    Mismatches come back as warning lines (and are logged); a divergent
    corpus is reported, never rejected.
    """
    catalog = catalog or default_catalog()
    counts: dict[tuple[str, Split], int] = {}
    for e in entries:
        key = (e.subset, e.split)
        counts[key] = counts.get(key, 0) + 1
    lines = [
        f"subset {name} {split.value}: expected {expected}, found {actual}"
        for name, split, expected, actual in catalog.diff(counts)
    ]
    for line in lines:
        log.warning("catalog mismatch: %s", line)
    return lines


def infer_subset(name: str, table: Mapping[str, str] | None = None) -> str:
    lowered = name.lower()
    for needle, tag in (table or DEFAULT_SUBSET_MAP).items():
        if needle in lowered:
            return tag
    return SUBSET_OTHER


def infer_split(name: str, default: Split = Split.TEST) -> Split:
    lowered = name.lower()
    for split in (Split.TRAIN, Split.DEV, Split.TEST):
        if split.value in lowered:
            return split
    if "development" in lowered:
        return Split.DEV
    return default


def _blocks(text: str) -> Iterable[str]:
    chunk: list[str] = []
    for line in text.splitlines():
        if line.strip():
            chunk.append(line)
        elif chunk:
            yield "\n".join(chunk)
            chunk = []
    if chunk:
        yield "\n".join(chunk)


def load_blocks(
    source: str | Path | IO,
    subset: str | None = None,
    split: Split = Split.TEST,
    lenient: bool = False,
    subset_map: Mapping[str, str] | None = None,
) -> list[CorpusEntry]:
    """Load blank-line-separated corpus blocks from a path or open stream.

    Every entry needs a unique id (missing ids are synthesized as
    ``auto-N``) and a ::snt sentence, and its graph must parse; in strict
    mode any violation raises CorpusIntegrityError naming the entry, in
    lenient mode the entry is skipped with a log line.  Depth is computed
    once here and cached on the entry.
    """
    name = ""
    if isinstance(source, (str, Path)):
        name = Path(source).name
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        name = getattr(source, "name", "") or ""

    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for ordinal, block in enumerate(_blocks(text)):
        meta, graph_start = penman.split_header(block)
        graph_text = block[graph_start:]
        if not graph_text.strip() and "id" not in meta:
            continue  # file preamble of bare comment lines
        entry_id = meta.get("id") or f"auto-{ordinal}"

        def problem(message: str) -> None:
            if lenient:
                log.warning("skipping entry '%s' (%s): %s", entry_id, name, message)
            else:
                raise CorpusIntegrityError(f"entry '{entry_id}' ({name}): {message}")

        if entry_id in seen:
            problem("duplicate id")
            continue
        sentence = meta.get("snt")
        if not sentence:
            problem("missing ::snt sentence")
            continue
        parsed = penman.parse(block)
        if isinstance(parsed, penman.StructuralReport):
            first = parsed.errors[0]
            problem(
                f"graph failed to parse: {first.kind.value} at {first.offset}: {first.message}"
            )
            continue
        seen.add(entry_id)
        entries.append(
            CorpusEntry(
                id=entry_id,
                sentence=sentence,
                amr_text=graph_text,
                subset=subset if subset is not None else infer_subset(entry_id, subset_map),
                split=split,
                depth=analysis.depth(parsed),
            )
        )
    return entries


def load_corpus(
    path: str | Path,
    subset: str | None = None,
    split: Split | None = None,
    lenient: bool = False,
    subset_map: Mapping[str, str] | None = None,
) -> list[CorpusEntry]:
    """Load a corpus file, or every file in a directory (sorted by name).

    For directories the subset and split of each file are inferred from
    its file name unless given explicitly.
    """
    path = Path(path)
    if path.is_dir():
        entries: list[CorpusEntry] = []
        seen: set[str] = set()
        for child in sorted(p for p in path.iterdir() if p.is_file()):
            file_subset = subset if subset is not None else infer_subset(child.name, subset_map)
            file_split = split if split is not None else infer_split(child.name)
            for entry in load_blocks(
                child, subset=file_subset, split=file_split, lenient=lenient
            ):
                if entry.id in seen:
                    if lenient:
                        log.warning("skipping entry '%s': duplicate id across files", entry.id)
                        continue
                    raise CorpusIntegrityError(
                        f"entry '{entry.id}' ({child.name}): duplicate id across files"
                    )
                seen.add(entry.id)
                entries.append(entry)
        return entries
    return load_blocks(
        path,
        subset=subset,
        split=split if split is not None else infer_split(path.name),
        lenient=lenient,
        subset_map=subset_map,
    )


def write_blocks(entries: Iterable[CorpusEntry], stream: IO[str]) -> None:
    """Write entries back out in block format, one blank line between.

    ``amr_text`` holds graph text only, so the id and sentence header is
    regenerated; any further metadata of the source block is not kept.
    """
    for entry in entries:
        stream.write(f"# ::id {entry.id} ::snt {entry.sentence}\n")
        stream.write(entry.amr_text)
        stream.write("\n\n")


@dataclass(frozen=True)
class StratifiedSample:
    """Sampled entries in depth order, plus what each depth fell short by."""

    entries: tuple[CorpusEntry, ...]
    shortfalls: dict[int, int]
    per_depth: int


def stratified_sample(
    entries: Sequence[CorpusEntry],
    per_depth: int,
    depth_range: tuple[int, int],
    seed: int,
) -> StratifiedSample:
    """Uniform sample without replacement of min(per_depth, available)
    entries at each depth in the inclusive range.

    Deterministic for a given seed.  Depths with fewer entries than
    requested contribute everything they have and are recorded in
    ``shortfalls``; the sample is never padded.
    """
    if per_depth < 1:
        raise ValueError("per_depth must be >= 1")
    lo, hi = depth_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad depth range {depth_range}")
    pools: dict[int, list[CorpusEntry]] = {}
    for entry in entries:
        pools.setdefault(entry.depth, []).append(entry)
    rng = random.Random(seed)
    chosen: list[CorpusEntry] = []
    shortfalls: dict[int, int] = {}
    for depth_level in range(lo, hi + 1):
        pool = pools.get(depth_level, [])
        if len(pool) < per_depth:
            shortfalls[depth_level] = per_depth - len(pool)
        if len(pool) <= per_depth:
            chosen.extend(pool)
        else:
            picks = sorted(rng.sample(range(len(pool)), per_depth))
            chosen.extend(pool[i] for i in picks)
    return StratifiedSample(tuple(chosen), shortfalls, per_depth)


def format_finetune(
    entries: Iterable[CorpusEntry],
    family: TemplateFamily,
    system_prompt: str,
    inference: bool = False,
    overrides: Mapping[str, tuple[str, str]] | None = None,
) -> list[str]:
    """One JSON record per entry, message fields in system, user, assistant
    order, plus the rendered transcript under "text".

    With ``inference=True`` the assistant turn is left open and the
    rendered prompt is stored under "prompt" instead, ready for a
    generation endpoint.
    """
    lines = []
    for entry in entries:
        if inference:
            record = {
                "id": entry.id,
                "system": system_prompt,
                "user": entry.sentence,
                "prompt": render_chat(
                    family, system_prompt, entry.sentence, None, overrides
                ),
            }
        else:
            record = {
                "id": entry.id,
                "system": system_prompt,
                "user": entry.sentence,
                "assistant": entry.amr_text,
                "text": render_chat(
                    family, system_prompt, entry.sentence, entry.amr_text, overrides
                ),
            }
        lines.append(json.dumps(record, ensure_ascii=False))
    return lines


def read_predictions(source: str | Path | IO) -> dict[str, str]:
    """Read line-delimited {"id": ..., "raw": ...} prediction records.

    The shape every generation backend writes; order is irrelevant,
    duplicate ids are an integrity error.  Records flagged
    ``"failed": true`` carry no usable generation and score as empty.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    predictions: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusIntegrityError(f"predictions line {lineno}: bad JSON: {exc}") from None
        if not isinstance(record, dict) or "id" not in record:
            raise CorpusIntegrityError(f"predictions line {lineno}: need an 'id' field")
        entry_id = str(record["id"])
        if entry_id in predictions:
            raise CorpusIntegrityError(f"predictions line {lineno}: duplicate id '{entry_id}'")
        if record.get("failed"):
            predictions[entry_id] = ""
        else:
            if "raw" not in record:
                raise CorpusIntegrityError(f"predictions line {lineno}: need a 'raw' field")
            predictions[entry_id] = str(record["raw"])
    return predictions
