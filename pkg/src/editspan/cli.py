"""Command-line pipeline: extract, apply, score, build-dataset, roundtrip.

Data goes to standard output (or ``--output``); diagnostics go to standard
error. Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from editspan.alignment import CostWeights, extract_spans, read_kv_config
from editspan.codec import apply_edits, parse, serialize
from editspan.dataset import (
    MixSpec,
    TASK_INSTRUCTIONS,
    build_task_records,
    mix_and_sample,
    read_open_ended_jsonl,
    write_jsonl,
)
from editspan.errors import ConfigError, DataError
from editspan.metrics import PairStats, pair_stats, reduce_stats
from editspan.text import detokenize, make_provider, parse_pair_line, tokenize

T = TypeVar("T")
R = TypeVar("R")

# per-process state for worker pools; set once before mapping
_PROVIDER = None
_WEIGHTS: Optional[CostWeights] = None


def _setup_worker(provider, weights) -> None:
    global _PROVIDER, _WEIGHTS
    _PROVIDER, _WEIGHTS = provider, weights


def _map_lines(
    fn: Callable[[T], R], items: Iterable[T], jobs: int, provider, weights
) -> Iterator[R]:
    """Map a pure function over items, preserving order, optionally in parallel."""
    if jobs > 1:
        with multiprocessing.Pool(
            jobs, initializer=_setup_worker, initargs=(provider, weights)
        ) as pool:
            yield from pool.imap(fn, items, chunksize=64)
    else:
        _setup_worker(provider, weights)
        yield from map(fn, items)


def _extract_one(numbered: tuple[int, str]) -> str:
    lineno, line = numbered
    src_text, tgt_text = parse_pair_line(line, lineno)
    script = extract_spans(tokenize(src_text), tokenize(tgt_text), _PROVIDER, _WEIGHTS)
    return serialize(script)


def _apply_one(numbered: tuple[int, str, str]) -> tuple[str, int]:
    _, source, span_text = numbered
    src = tokenize(source)
    report = parse(span_text, len(src))
    return detokenize(apply_edits(report.script, src)), report.ignored


def _score_one(row: tuple[str, str, str]) -> PairStats:
    source, span_text, target = row
    return pair_stats(tokenize(source), span_text, tokenize(target), _PROVIDER, _WEIGHTS)


def _roundtrip_one(numbered: tuple[int, str]) -> Optional[str]:
    lineno, line = numbered
    src_text, tgt_text = parse_pair_line(line, lineno)
    src, tgt = tokenize(src_text), tokenize(tgt_text)
    script = extract_spans(src, tgt, _PROVIDER, _WEIGHTS)
    report = parse(serialize(script), len(src))
    if report.ignored:
        return f"line {lineno}: serialized spans did not parse back cleanly"
    produced = apply_edits(report.script, src)
    if produced.surfaces != tgt.surfaces:
        return (
            f"line {lineno}: roundtrip mismatch: {detokenize(produced)!r} "
            f"!= {detokenize(tgt)!r}"
        )
    return None


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return [line.rstrip("\r\n") for line in handle]


def _iter_lines(path: str) -> Iterator[str]:
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            yield line.rstrip("\r\n")


def _open_output(path: Optional[str]):
    if path is None:
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _load_provider(args: argparse.Namespace):
    return make_provider(args.provider, args.annotations)


def _load_weights(args: argparse.Namespace) -> CostWeights:
    if args.weights:
        return CostWeights.from_file(args.weights)
    return CostWeights()


def cmd_extract(args: argparse.Namespace) -> int:
    provider, weights = _load_provider(args), _load_weights(args)
    out = _open_output(args.output)
    try:
        numbered = enumerate(_iter_lines(args.pairs), 1)
        for span_line in _map_lines(_extract_one, numbered, args.jobs, provider, weights):
            print(span_line, file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _zip_strict(name_a: str, lines_a: list[str], name_b: str, lines_b: list[str]):
    if len(lines_a) != len(lines_b):
        raise DataError(
            f"line counts differ: {name_a} has {len(lines_a)}, {name_b} has {len(lines_b)}"
        )
    return zip(lines_a, lines_b)


def cmd_apply(args: argparse.Namespace) -> int:
    provider, weights = _load_provider(args), _load_weights(args)
    sources = _read_lines(args.sources)
    spans = _read_lines(args.spans)
    rows = [
        (lineno, source, span_text)
        for lineno, (source, span_text) in enumerate(
            _zip_strict("sources", sources, "spans", spans), 1
        )
    ]
    ignored_total = 0
    out = _open_output(args.output)
    try:
        for text, ignored in _map_lines(_apply_one, rows, args.jobs, provider, weights):
            ignored_total += ignored
            print(text, file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    if ignored_total:
        print(
            f"ignored {ignored_total} malformed fragment(s) across {len(rows)} line(s)",
            file=sys.stderr,
        )
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    provider, weights = _load_provider(args), _load_weights(args)
    sources = _read_lines(args.sources)
    spans = _read_lines(args.spans)
    targets = _read_lines(args.targets)
    if not len(sources) == len(spans) == len(targets):
        raise DataError(
            f"line counts differ: sources has {len(sources)}, spans has "
            f"{len(spans)}, targets has {len(targets)}"
        )
    rows = list(zip(sources, spans, targets))
    report = reduce_stats(_map_lines(_score_one, rows, args.jobs, provider, weights))
    if args.report == "text":
        for key, value in report.items():
            print(f"{key}: {value}")
    else:
        print(json.dumps(report, indent=2))
    return 0


def cmd_roundtrip(args: argparse.Namespace) -> int:
    provider, weights = _load_provider(args), _load_weights(args)
    failures = 0
    total = 0
    numbered = enumerate(_iter_lines(args.pairs), 1)
    for problem in _map_lines(_roundtrip_one, numbered, args.jobs, provider, weights):
        total += 1
        if problem is not None:
            failures += 1
            print(problem)
    print(f"roundtrip: {total - failures}/{total} pair(s) ok")
    return 2 if failures else 0


def cmd_build_dataset(args: argparse.Namespace) -> int:
    provider, weights = _load_provider(args), _load_weights(args)
    overrides = {}
    if args.instructions:
        overrides = read_kv_config(args.instructions)
        unknown = set(overrides) - set(TASK_INSTRUCTIONS)
        if unknown:
            raise ConfigError(f"unknown task(s) in instructions file: {sorted(unknown)}")
    spec = MixSpec(args.per_task, args.open_count, args.seed)
    corpus_paths = {
        "gec": args.gec,
        "paraphrase": args.paraphrase,
        "style": args.style,
        "simplify": args.simplify,
    }
    task_sets = {}
    for task, path in corpus_paths.items():
        records, skipped = build_task_records(
            _iter_lines(path), task, provider, weights, overrides.get(task)
        )
        for note in skipped:
            print(f"{path}: skipped {note}", file=sys.stderr)
        task_sets[task] = records
    open_ended = read_open_ended_jsonl(args.open_ended)
    mixed = mix_and_sample(task_sets, open_ended, spec)
    write_jsonl(mixed, args.output)
    counts: dict[str, int] = {}
    for record in mixed:
        counts[record.task] = counts.get(record.task, 0) + 1
    for task in (*TASK_INSTRUCTIONS, "open_ended"):
        print(f"{task} {counts.get(task, 0)}")
    print(f"total {len(mixed)}")
    return 0


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit 1 instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="editspan",
        description="Extract, apply, and score edit spans; build instruction datasets.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--weights", metavar="FILE", help="cost weights as key = value lines")
    common.add_argument(
        "--provider", choices=("naive", "sidecar"), default="naive",
        help="annotation provider (default: naive)",
    )
    common.add_argument(
        "--annotations", metavar="FILE",
        help="sidecar annotations: surface<TAB>lemma<TAB>pos, blank line between sentences",
    )
    common.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default: 1)")
    common.add_argument(
        "--report", choices=("json", "text"), default="json",
        help="score report format (default: json)",
    )

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser(
        "extract", parents=[common],
        help="extract serialized spans from a source<TAB>target corpus",
    )
    p.add_argument("pairs", help="parallel corpus, one source<TAB>target pair per line")
    p.add_argument("-o", "--output", help="write span lines here instead of stdout")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser(
        "apply", parents=[common],
        help="apply serialized spans to source sentences",
    )
    p.add_argument("sources", help="source sentences, one per line")
    p.add_argument("spans", help="serialized span lines aligned with the sources")
    p.add_argument("-o", "--output", help="write rewritten text here instead of stdout")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser(
        "score", parents=[common],
        help="score hypothesis spans against gold targets",
    )
    p.add_argument("sources", help="source sentences, one per line")
    p.add_argument("spans", help="hypothesis span lines aligned with the sources")
    p.add_argument("targets", help="gold target sentences, one per line")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser(
        "build-dataset", parents=[common],
        help="build the mixed instruction dataset as JSON Lines",
    )
    p.add_argument("--gec", required=True, metavar="TSV", help="grammar correction pairs")
    p.add_argument("--paraphrase", required=True, metavar="TSV", help="paraphrase pairs")
    p.add_argument("--style", required=True, metavar="TSV", help="formality transfer pairs")
    p.add_argument("--simplify", required=True, metavar="TSV", help="simplification pairs")
    p.add_argument(
        "--open-ended", required=True, metavar="JSONL",
        help="pre-existing open-ended instruction records",
    )
    p.add_argument("--output", "-o", required=True, metavar="JSONL", help="output dataset path")
    p.add_argument(
        "--per-task", type=int, default=MixSpec.per_task_count, metavar="N",
        help=f"records sampled per rewriting task (default: {MixSpec.per_task_count})",
    )
    p.add_argument(
        "--open-count", type=int, default=MixSpec.open_ended_count, metavar="N",
        help=f"open-ended records sampled (default: {MixSpec.open_ended_count})",
    )
    p.add_argument(
        "--instructions", metavar="FILE",
        help="override instruction strings: task = instruction lines",
    )
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser(
        "roundtrip", parents=[common],
        help="verify extract -> serialize -> parse -> apply on a corpus",
    )
    p.add_argument("pairs", help="parallel corpus, one source<TAB>target pair per line")
    p.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; surface the code instead
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"editspan: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"editspan: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"editspan: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
