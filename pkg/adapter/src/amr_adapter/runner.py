"""Batch generation driver.

Reads prompt records, fans them out to an endpoint with bounded
concurrency, and appends raw-generation records to the output file in
input order through a single writer.  A progress marker on disk makes
interrupted runs resumable; a manifest records exactly what produced
the output.

Output contract: one record per prompt, same ids in the same order.  A
prompt that keeps failing is written as ``{"id", "failed": true,
"error"}`` and the run continues; the scoring side treats such records
as empty generations.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .endpoints import AdapterError, Endpoint, EndpointError, PromptRecord
from .params import GenerationParams

MANIFEST_SCHEMA_VERSION = 1


def read_prompts(path: str | Path) -> list[PromptRecord]:
    """Parse line-delimited prompt records.

    Each line is a JSON object with at least ``id`` and ``prompt``
    (the shape ``amrbench prepare --inference`` writes); extra fields
    are tolerated.  Blank lines are skipped.
    """
    records: list[PromptRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AdapterError(f"{path}:{lineno}: bad JSON: {exc}") from None
            if not isinstance(data, dict) or "id" not in data or "prompt" not in data:
                raise AdapterError(
                    f"{path}:{lineno}: record needs 'id' and 'prompt' fields"
                )
            rid = str(data["id"])
            if rid in seen:
                raise AdapterError(f"{path}:{lineno}: duplicate id {rid!r}")
            seen.add(rid)
            records.append(
                PromptRecord(
                    id=rid,
                    prompt=str(data["prompt"]),
                    system=str(data.get("system", "")),
                    user=str(data.get("user", "")),
                )
            )
    return records


@dataclass(frozen=True)
class RunResult:
    total: int
    completed: int  # records appended by this invocation
    resumed: int  # records kept from an interrupted earlier run
    failed_ids: tuple[str, ...]  # every id flagged failed in the output


def _progress_path(out: Path) -> Path:
    return out.with_name(out.name + ".progress")


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _count_lines(path: Path) -> int:
    if not path.exists():
        return 0
    with open(path, encoding="utf-8") as fh:
        return sum(1 for line in fh if line.strip())


def run_batch(
    prompts_path: str | Path,
    endpoint: Endpoint,
    params: GenerationParams,
    out_path: str | Path,
    *,
    concurrency: int = 4,
    retries: int = 2,
    backoff: float = 0.25,
    resume: bool = True,
    sleep: Callable[[float], None] = time.sleep,
) -> RunResult:
    """Generate one output record per prompt, in prompt order.

    ``retries`` extra attempts per prompt with doubling ``backoff``;
    exhausted prompts are flagged failed, any other exception aborts
    the run and leaves the progress marker behind.  With ``resume``
    a marker from an interrupted run skips the finished prefix;
    without one the output file is rewritten from scratch.
    """
    if concurrency < 1:
        raise AdapterError(f"concurrency must be >= 1, got {concurrency}")
    if retries < 0:
        raise AdapterError(f"retries must be >= 0, got {retries}")
    prompts = read_prompts(prompts_path)
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    marker = _progress_path(out)
    # stale manifests describe a finished run; this one is not finished yet
    _manifest_path(out).unlink(missing_ok=True)

    done = 0
    if resume and marker.exists():
        text = marker.read_text(encoding="utf-8").strip()
        done = int(text) if text else 0
        have = _count_lines(out)
        if have != done or done > len(prompts):
            raise AdapterError(
                f"progress marker claims {done} record(s) but {out} holds {have} "
                f"of {len(prompts)}; remove {marker} and {out} to start over"
            )
    else:
        out.write_text("", encoding="utf-8")

    pending = prompts[done:]

    def attempt(record: PromptRecord) -> dict[str, object]:
        delay = backoff
        last: EndpointError | None = None
        for round_no in range(retries + 1):
            try:
                return {"id": record.id, "raw": endpoint.generate(record, params)}
            except EndpointError as exc:
                last = exc
                if round_no < retries:
                    sleep(delay)
                    delay *= 2
        return {"id": record.id, "failed": True, "error": str(last)}

    appended = 0
    with open(out, "a", encoding="utf-8") as fh:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            futures = [pool.submit(attempt, rec) for rec in pending]
            for future in futures:  # input order; the only writer
                row = future.result()
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
                fh.flush()
                appended += 1
                marker.write_text(f"{done + appended}\n", encoding="utf-8")
    marker.unlink(missing_ok=True)

    out_ids: list[str] = []
    failed: list[str] = []
    with open(out, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            out_ids.append(row["id"])
            if row.get("failed"):
                failed.append(row["id"])
    if out_ids != [p.id for p in prompts]:
        raise AdapterError(f"{out}: output ids do not mirror the prompt ids")

    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "prompts": str(prompts_path),
        "output": str(out),
        "endpoint": endpoint.describe(),
        "params": params.as_dict(),
        "concurrency": concurrency,
        "retries": retries,
        "total": len(prompts),
        "failed": failed,
    }
    _manifest_path(out).write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return RunResult(len(prompts), appended, done, tuple(failed))
