"""Command line interface: ``ellsurf COMMAND SPEC [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from .cache import CacheIntegrityError, TraceCache
from .pipeline import COMMANDS, PipelineError, emit, recompute_trace, run_pipeline
from .specfile import SpecError, load_spec


def _primes(text: str):
    return [int(x) for x in text.split(",") if x]


def _box(text: str):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellsurf", description="Rank bounds for elliptic curves over Q(t).")
    ap.add_argument("command", choices=COMMANDS + ("cache",))
    ap.add_argument("target", nargs="?", help="spec file or fixture name; for 'cache': audit, clear or stats")
    ap.add_argument("--prime", type=_primes, help="prime(s) of reduction, comma separated")
    ap.add_argument("--depth", type=int, help="number of extension degrees m to count")
    ap.add_argument("--extension", type=int, help="work over F_{p^r} with this r")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--strategy", choices=("char-sum", "bsgs", "auto"))
    ap.add_argument("--cache-dir", help="directory of the persistent trace cache")
    ap.add_argument("--emit", choices=("text", "csv", "json"), default="text")
    ap.add_argument("--box", type=_box, help="p,q range lo:hi for the pythagorean command")
    ap.add_argument("--output", help="write the report here instead of stdout")
    return ap


def _cache_command(args) -> dict:
    if not args.cache_dir:
        raise PipelineError("cache", "--cache-dir is required")
    cache = TraceCache(args.cache_dir)
    action = args.target or "stats"
    if action == "stats":
        return {"tool": "ellsurf", "result": cache.stats()}
    if action == "clear":
        cache.clear()
        return {"tool": "ellsurf", "result": {"cleared": True}}
    if action == "audit":
        res = cache.audit(recompute_trace)
        res["status"] = "pass" if not res["failed"] else "quarantined"
        return {"tool": "ellsurf", "result": res}
    raise PipelineError("cache", f"unknown cache action {action!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "cache":
            report = _cache_command(args)
        else:
            spec = None
            if args.command != "pythagorean":
                if not args.target:
                    raise PipelineError("cli", "a spec file or fixture name is required")
                spec = load_spec(args.target)
            cache = TraceCache(args.cache_dir) if args.cache_dir else None
            report = run_pipeline(spec, args.command, primes=args.prime, depth=args.depth,
                                  extension_degree=args.extension, threads=args.threads, strategy=args.strategy,
                                  cache=cache, box=args.box)
    except PipelineError as exc:
        print(json.dumps(exc.diagnostic(), sort_keys=True), file=sys.stderr)
        return 2
    except (SpecError, CacheIntegrityError) as exc:
        stage = "spec" if isinstance(exc, SpecError) else "cache"
        print(json.dumps({"status": "error", "stage": stage, "error": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    text = emit(report, args.emit)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
