"""Command-line front end.

    amr-adapter run --prompts prompts.jsonl --out raw.jsonl --config run.json

Exit codes: 0 success (failed records are flagged in the output, not
fatal), 2 configuration or data-integrity error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import AdapterConfig, build_endpoint, load_adapter_config
from .endpoints import AdapterError
from .params import GenerationParams
from .runner import run_batch

_PARAM_FLAGS = ("temperature", "top_p", "repetition_penalty", "max_length")


def cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        cfg = load_adapter_config(args.config)
    else:
        cfg = AdapterConfig(endpoint=None, params=GenerationParams())
    endpoint = cfg.endpoint
    if args.url:
        endpoint = build_endpoint({"kind": "http", "url": args.url})
    elif args.model:
        endpoint = build_endpoint({"kind": "local", "model": args.model})
    if endpoint is None:
        raise AdapterError("no endpoint configured: pass --config, --url, or --model")
    overrides = {
        name: getattr(args, name)
        for name in _PARAM_FLAGS
        if getattr(args, name) is not None
    }
    try:
        params = dataclasses.replace(cfg.params, **overrides)
    except ValueError as exc:
        raise AdapterError(str(exc)) from None
    result = run_batch(
        args.prompts,
        endpoint,
        params,
        args.out,
        concurrency=args.concurrency if args.concurrency is not None else cfg.concurrency,
        retries=args.retries if args.retries is not None else cfg.retries,
        backoff=args.backoff if args.backoff is not None else cfg.backoff,
        resume=not args.fresh,
    )
    print(f"wrote {result.completed + result.resumed} record(s) to {args.out}")
    if result.resumed:
        print(f"resumed past {result.resumed} already-finished record(s)")
    if result.failed_ids:
        print(
            f"warning: {len(result.failed_ids)} record(s) flagged failed",
            file=sys.stderr,
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amr-adapter",
        description="Batch-generate raw model output for prepared prompt records.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("run", help="complete every prompt in a file")
    p.add_argument("--prompts", required=True, help="line-delimited prompt records")
    p.add_argument("--out", required=True, help="raw-generation output file")
    p.add_argument("--config", help="JSON adapter config")
    p.add_argument("--url", help="shortcut: http completion endpoint")
    p.add_argument("--model", help="shortcut: local model runner")
    p.add_argument("--concurrency", type=int)
    p.add_argument("--retries", type=int)
    p.add_argument("--backoff", type=float)
    p.add_argument("--temperature", type=float)
    p.add_argument("--top-p", dest="top_p", type=float)
    p.add_argument("--repetition-penalty", dest="repetition_penalty", type=float)
    p.add_argument("--max-length", dest="max_length", type=int)
    p.add_argument(
        "--fresh", action="store_true", help="ignore any progress marker and restart"
    )
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
