"""Command-line entry point.

Exit codes: 0 success, 1 data failures present (failed cases, invalid
instances, rejected schemas), 2 usage or input errors, 3 internal errors.
Machine-readable output goes to files under ``--out``; human tables go to
standard output unless ``--quiet`` is given.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import traceback
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, jsonvalue
from .errors import EmptyIntersection, JsonCDError, RejectAt, UnknownFormat

log = logging.getLogger("jsoncd")

OK, DATA_FAILURE, USAGE, INTERNAL = 0, 1, 2, 3

COMMANDS = (
    "ingest",
    "stats",
    "compile",
    "validate",
    "mask",
    "generate",
    "walk",
    "conformance",
    "bench-coverage",
    "bench-efficiency",
    "report",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line diagnostic, code 2
        raise UsageError(message)


# ---- helpers -------------------------------------------------------------


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} requires {' and '.join(missing)}")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _schema(args: argparse.Namespace):
    from .schema.document import parse_schema
    from .schema.ir import normalize

    _need(args, "schema")
    return normalize(parse_schema(_read(args.schema), Path(args.schema).stem))


def _instance(args: argparse.Namespace) -> bytes:
    _need(args, "instance")
    return _read(args.instance)


def _vocab(args: argparse.Namespace):
    from .engine.vocab import load_vocabulary

    spec = args.vocab or "byte"
    if Path(spec).is_file():
        return load_vocabulary(spec)
    if spec in ("byte", "bpe1k"):
        return load_vocabulary(name=spec)
    raise UsageError(f"vocabulary {spec!r} is neither a file nor a bundled name (byte, bpe1k)")


def _manifest(args: argparse.Namespace):
    from .compiler.manifest import load_manifest

    if args.manifest is None:
        return None
    _read(args.manifest)
    return load_manifest(args.manifest)


def _config(args: argparse.Namespace):
    from .bench.config import RunConfig, load_config

    cfg = RunConfig()
    if args.config is not None:
        _read(args.config)
        try:
            cfg = load_config(args.config)
        except (ValueError, TypeError) as e:
            raise UsageError(f"bad config {args.config}: {e}") from None
    return cfg.replace(
        compile_timeout=args.timeout_compile,
        generation_timeout=args.timeout_generate,
        max_tokens=args.max_tokens,
        seed=args.seed,
        fast_forward=True if args.fast_forward else None,
        vocab=args.vocab,
        manifest=args.manifest,
        jobs=args.jobs or (cfg.jobs if args.config is not None else os.cpu_count() or 1),
    )


def _compile_opts(args: argparse.Namespace):
    from .compiler.compile import CompileOptions

    timeout = args.timeout_compile if args.timeout_compile is not None else 40.0
    return CompileOptions(compile_timeout=timeout, manifest=_manifest(args))


def _compiled(args: argparse.Namespace, ir):
    from .compiler.compile import Compiled, Rejected, compile_schema

    outcome = compile_schema(ir, _compile_opts(args))
    if isinstance(outcome, Compiled):
        return outcome
    if isinstance(outcome, Rejected):
        print(f"rejected: {', '.join(outcome.keywords)}", file=sys.stderr)
    else:
        print(f"compile timeout after {outcome.seconds:.2f}s", file=sys.stderr)
    return None


def _out_dir(args: argparse.Namespace) -> Optional[Path]:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(out: Optional[Path], name: str, data: bytes | str) -> None:
    if out is None:
        return
    path = out / name
    if isinstance(data, str):
        path.write_text(data, "utf-8")
    else:
        path.write_bytes(data)


def _dump_json(value) -> str:
    return json.dumps(value, indent=2, ensure_ascii=False) + "\n"


def _say(args: argparse.Namespace, text: str) -> None:
    if not args.quiet:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _records(args: argparse.Namespace):
    from .schema.ingest import IngestOptions, ingest_dataset

    corpus = args.corpus
    if corpus is None:
        cfg_corpus = _config(args).corpus if args.config else ()
        corpus = cfg_corpus[0] if cfg_corpus else None
    if corpus is None:
        from importlib import resources

        corpus = str(resources.files("jsoncd.data").joinpath("corpus"))
    if not Path(corpus).exists():
        raise UsageError(f"corpus {corpus} does not exist")
    return ingest_dataset(corpus, IngestOptions())


# ---- commands -------------------------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> int:
    records, report = _records(args)
    out = _out_dir(args)
    rows = [
        {
            "source_id": r.source_id,
            "dataset": r.dataset,
            "tier": str(r.tier),
            "field_count": r.field_count,
            "size_bytes": r.size_bytes,
            "max_fan_out": r.max_fan_out,
            "depth": r.depth,
        }
        for r in records
    ]
    _write(out, "ingest.json", _dump_json({"report": report.to_json(), "records": rows}))
    _say(args, report.to_text())
    return OK


def cmd_stats(args: argparse.Namespace) -> int:
    from .schema.ingest import schema_stats

    records, _ = _records(args)
    table = schema_stats(records, by=args.by)
    _write(_out_dir(args), "stats.json", _dump_json(table.to_json()))
    _say(args, table.to_text())
    return OK


def cmd_compile(args: argparse.Namespace) -> int:
    compiled = _compiled(args, _schema(args))
    if compiled is None:
        return DATA_FAILURE
    dump = compiled.automaton.dump()
    _write(_out_dir(args), "automaton.txt", dump)
    _say(args, f"compiled in {compiled.seconds:.4f}s")
    if args.dump:
        sys.stdout.write(dump)
    return OK


def cmd_validate(args: argparse.Namespace) -> int:
    from .schema.validator import validate_instance

    ir = _schema(args)
    value = jsonvalue.loads(_instance(args))
    outcome = validate_instance(ir, value)
    if outcome.valid:
        print("valid")
        return OK
    print("invalid")
    for path, keyword, message in outcome.violations:
        print(f"  {path or '/'}: {keyword}: {message}")
    return DATA_FAILURE


def cmd_mask(args: argparse.Namespace) -> int:
    from .engine.mask import advance_token, compute_mask
    from .engine.trie import build_trie

    compiled = _compiled(args, _schema(args))
    if compiled is None:
        return DATA_FAILURE
    a = compiled.automaton
    trie = build_trie(_vocab(args))
    state = a.start(generation=True)
    prefix = (args.prefix or "").encode("utf-8")
    try:
        state = advance_token(a, state, prefix) if prefix else state
    except RejectAt as e:
        print(f"prefix rejected at byte {e.offset}", file=sys.stderr)
        return DATA_FAILURE
    mask = compute_mask(a, state, trie)
    ids = mask.ids()
    lines = [f"{tid}\t{trie.vocab.render(tid)}" for tid in ids]
    _write(_out_dir(args), "mask.json", _dump_json({"prefix": args.prefix or "", "allowed": ids}))
    print(f"{len(ids)} allowed")
    if lines:
        print("\n".join(lines))
    return OK


def _source(args: argparse.Namespace, trie, seed: int):
    from .engine.sources import AdversarialSource, UniformSource

    if args.source == "uniform":
        return UniformSource(trie.vocab.size, seed)
    return AdversarialSource(trie.vocab, seed)


def cmd_generate(args: argparse.Namespace) -> int:
    from .engine.decode import EOS, DecodeOptions, constrained_decode
    from .engine.trie import build_trie
    from .schema.validator import validate_instance

    ir = _schema(args)
    compiled = _compiled(args, ir)
    if compiled is None:
        return DATA_FAILURE
    trie = build_trie(_vocab(args))
    opts = DecodeOptions(
        max_tokens=args.max_tokens or 256,
        generation_timeout=args.timeout_generate or 40.0,
        fast_forward=args.fast_forward,
    )
    result = constrained_decode(compiled.automaton, _source(args, trie, args.seed or 0), trie, opts, gct=compiled.seconds)
    valid = None
    if result.terminated_by == EOS:
        valid = validate_instance(ir, jsonvalue.loads(result.data)).valid
    record = {
        "output": result.data.decode("utf-8", "replace"),
        "terminated_by": result.terminated_by,
        "valid": valid,
        "output_tokens": result.output_tokens,
        "ff_tokens": result.ff_token_count,
        "sampled_steps": result.sampled_steps,
        "gct": result.timing.gct,
        "ttft": result.timing.ttft,
        "tgt": result.timing.tgt,
    }
    _write(_out_dir(args), "generate.json", _dump_json(record))
    print(result.data.decode("utf-8", "replace"))
    _say(args, f"terminated_by={result.terminated_by} valid={valid} tokens={result.output_tokens} ff={result.ff_token_count}")
    return OK if valid else DATA_FAILURE


def cmd_walk(args: argparse.Namespace) -> int:
    from .engine.trie import build_trie
    from .engine.walk import Accepted, walk_instance

    compiled = _compiled(args, _schema(args))
    if compiled is None:
        return DATA_FAILURE
    trie = build_trie(_vocab(args))
    res = walk_instance(compiled.automaton, trie, _instance(args))
    if isinstance(res, Accepted):
        print(f"accepted ({len(res.tokens)} tokens)")
        return OK
    print(f"{type(res).__name__.lower()} at byte {res.pos}")
    return DATA_FAILURE


def cmd_conformance(args: argparse.Namespace) -> int:
    from .compiler.compile import CompileOptions
    from .conformance.aggregate import suite_report, suite_text
    from .conformance.runner import PASS, run_suite
    from .conformance.suite import load_suite

    if args.suite is not None and not Path(args.suite).is_dir():
        raise UsageError(f"suite directory {args.suite} does not exist")
    cases = load_suite(args.suite)
    opts = CompileOptions(
        compile_timeout=args.timeout_compile if args.timeout_compile is not None else 40.0, manifest=_manifest(args)
    )
    vocab = _vocab(args) if args.vocab else None
    outcomes = run_suite(cases, opts, vocab, jobs=args.jobs or os.cpu_count() or 1)
    report = suite_report(outcomes)
    _write(_out_dir(args), "conformance.json", _dump_json(report))
    _say(args, suite_text(report))
    return OK if all(o.status == PASS for o in outcomes) else DATA_FAILURE


def _render(report, fmt: str) -> bytes:
    from .bench.report import emit_report

    return emit_report(report, fmt)


def cmd_bench_coverage(args: argparse.Namespace) -> int:
    from .bench.coverage import run_coverage
    from .engine.trie import build_trie

    cfg = _config(args)
    records, _ = _records(args)
    trie = build_trie(_vocab(args))
    runs, report = run_coverage(records, cfg, trie)
    out = _out_dir(args)
    _write(out, "coverage.json", _dump_json({"config": cfg.to_json(), **report.to_json(), "runs": [r.to_json() for r in runs]}))
    _write(out, "coverage.csv", _render(report, "csv"))
    _say(args, _render(report, args.format or "table").decode("utf-8"))
    return DATA_FAILURE if any(r.failure is not None for r in runs) else OK


def cmd_bench_efficiency(args: argparse.Namespace) -> int:
    from .bench.efficiency import run_efficiency
    from .engine.trie import build_trie

    cfg = _config(args)
    records, _ = _records(args)
    trie = build_trie(_vocab(args))
    try:
        report = run_efficiency(records, cfg, trie)
    except EmptyIntersection as e:
        print(f"no common schemas: {e}", file=sys.stderr)
        return DATA_FAILURE
    out = _out_dir(args)
    _write(out, "efficiency.json", _dump_json({"config": cfg.to_json(), **report.to_json()}))
    _write(out, "efficiency.csv", _render(report, "csv"))
    _say(args, _render(report, args.format or "table").decode("utf-8"))
    return OK


def cmd_report(args: argparse.Namespace) -> int:
    from .bench.coverage import CoverageReport

    _need(args, "input")
    try:
        data = json.loads(_read(args.input))
        report = CoverageReport.from_json(data)
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise UsageError(f"{args.input} is not a coverage report: {e}") from None
    fmt = args.format or "table"
    rendered = _render(report, fmt)
    ext = {"json": "json", "csv": "csv", "table": "txt"}[fmt]
    _write(_out_dir(args), f"report.{ext}", rendered)
    if not args.quiet:
        sys.stdout.write(rendered.decode("utf-8"))
    return OK


HANDLERS = {
    "ingest": cmd_ingest,
    "stats": cmd_stats,
    "compile": cmd_compile,
    "validate": cmd_validate,
    "mask": cmd_mask,
    "generate": cmd_generate,
    "walk": cmd_walk,
    "conformance": cmd_conformance,
    "bench-coverage": cmd_bench_coverage,
    "bench-efficiency": cmd_bench_efficiency,
    "report": cmd_report,
}

HELP = {
    "ingest": "clean, deduplicate and tier a schema corpus",
    "stats": "per-group median/max corpus statistics",
    "compile": "compile a schema and report the outcome",
    "validate": "validate an instance against a schema",
    "mask": "print the allowed tokens after a prefix",
    "generate": "run one constrained decode with a scripted source",
    "walk": "walk an instance through the constraint token by token",
    "conformance": "run the vendored conformance suite",
    "bench-coverage": "declared/empirical coverage and compliance over a corpus",
    "bench-efficiency": "per-variant median timings on the covered intersection",
    "report": "re-render a coverage.json report",
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--schema")
    common.add_argument("--instance")
    common.add_argument("--corpus")
    common.add_argument("--suite")
    common.add_argument("--vocab", help="vocabulary file or bundled name (byte, bpe1k)")
    common.add_argument("--manifest")
    common.add_argument("--config")
    common.add_argument("--out", help="directory for machine-readable output")
    common.add_argument("--input", help="report file to re-render (report command)")
    common.add_argument("--jobs", type=int, help="worker processes (default: available CPUs)")
    common.add_argument("--seed", type=int)
    common.add_argument("--timeout-compile", type=float)
    common.add_argument("--timeout-generate", type=float)
    common.add_argument("--max-tokens", type=int)
    common.add_argument("--fast-forward", action="store_true")
    common.add_argument("--format", choices=["json", "csv", "table"])
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--prefix", help="bytes already generated (mask command)")
    common.add_argument("--source", choices=["adversarial", "uniform"], default="adversarial")
    common.add_argument("--by", choices=["dataset", "tier", "all"], default="dataset")
    common.add_argument("--dump", action="store_true", help="print the compiled automaton (compile command)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="jsoncd", description="JSON Schema constrained decoding engine and evaluation harness")
    p.add_argument("--version", action="version", version=f"jsoncd {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name], description=HELP[name])
    return p


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"jsoncd: error: {e}", file=sys.stderr)
        return USAGE
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    if args.command is None:
        print("jsoncd: error: a command is required (see --help)", file=sys.stderr)
        return USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return HANDLERS[args.command](args)
    except UsageError as e:
        print(f"jsoncd: error: {e}", file=sys.stderr)
        return USAGE
    except (JsonCDError, UnknownFormat) as e:
        # malformed inputs: schema or instance text, vocabulary files, ...
        print(f"jsoncd: error: {type(e).__name__}: {e}", file=sys.stderr)
        return USAGE
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return INTERNAL


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
