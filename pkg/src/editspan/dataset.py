"""Instruction-dataset construction from parallel corpora and an open-ended set.

Each rewriting task contributes records whose output is the serialized edit
script for its sentence pair; open-ended records pass through untouched. The
mixed dataset is sampled without replacement under a fixed seed, so a given
seed always produces byte-identical output.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from editspan.alignment import CostWeights, extract_spans
from editspan.codec import apply_edits, parse, serialize
from editspan.errors import ConfigError, DataError
from editspan.text import detokenize, parse_pair_line, tokenize

TASK_INSTRUCTIONS: dict[str, str] = {
    "gec": "Rewrite the input text into grammatically correct text.",
    "paraphrase": "Rewrite the input text into paraphrased text.",
    "style": "Rewrite the input text into formal text.",
    "simplify": "Rewrite the input text into simpler text.",
}

OPEN_ENDED_TASK = "open_ended"
TASK_LABELS = tuple(TASK_INSTRUCTIONS) + (OPEN_ENDED_TASK,)


@dataclass(frozen=True)
class DatasetRecord:
    """One instruction-tuning record; field order is the JSON key order."""

    instruction: str
    input: str
    output: str
    task: str

    def __post_init__(self) -> None:
        if self.task not in TASK_LABELS:
            raise ValueError(f"unknown task label: {self.task!r}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "instruction": self.instruction,
                "input": self.input,
                "output": self.output,
                "task": self.task,
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class MixSpec:
    """Sampling counts and seed for the final mix."""

    per_task_count: int = 3000
    open_ended_count: int = 13000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.per_task_count < 0 or self.open_ended_count < 0:
            raise ValueError("sample counts must be non-negative")


def build_task_records(
    lines: Iterable[str],
    task: str,
    provider=None,
    weights: Optional[CostWeights] = None,
    instruction: Optional[str] = None,
) -> tuple[list[DatasetRecord], list[str]]:
    """Turn ``source<TAB>target`` lines into records for one rewriting task.

    Returns the records plus diagnostics for skipped malformed lines. The
    record input is the detokenized source, so re-tokenizing it always yields
    the token count the output spans were built against.
    """
    if task not in TASK_INSTRUCTIONS:
        raise ConfigError(f"unknown rewriting task: {task!r}")
    text = instruction if instruction is not None else TASK_INSTRUCTIONS[task]
    records: list[DatasetRecord] = []
    skipped: list[str] = []
    for lineno, line in enumerate(lines, 1):
        try:
            src_text, tgt_text = parse_pair_line(line, lineno)
        except DataError as exc:
            skipped.append(str(exc))
            continue
        src, tgt = tokenize(src_text), tokenize(tgt_text)
        script = extract_spans(src, tgt, provider, weights)
        records.append(DatasetRecord(text, detokenize(src), serialize(script), task))
    return records, skipped


def mix_and_sample(
    task_sets: Mapping[str, Sequence[DatasetRecord]],
    open_ended: Sequence[DatasetRecord],
    spec: Optional[MixSpec] = None,
) -> list[DatasetRecord]:
    """Sample from each task set and the open-ended set, then shuffle.

    Sampling is without replacement and fully determined by ``spec.seed``.

    Raises:
        DataError: a set has fewer records than its requested count.
    """
    spec = spec or MixSpec()
    rng = random.Random(spec.seed)
    chosen: list[DatasetRecord] = []
    for name in sorted(task_sets):
        records = task_sets[name]
        if len(records) < spec.per_task_count:
            raise DataError(
                f"task {name!r} has {len(records)} records, need {spec.per_task_count}"
            )
        chosen.extend(rng.sample(list(records), spec.per_task_count))
    if len(open_ended) < spec.open_ended_count:
        raise DataError(
            f"open-ended set has {len(open_ended)} records, need {spec.open_ended_count}"
        )
    chosen.extend(rng.sample(list(open_ended), spec.open_ended_count))
    rng.shuffle(chosen)
    return chosen


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating built records."""

    total: int
    checked: int
    failures: tuple[tuple[int, str], ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_dataset(
    records: Sequence[DatasetRecord],
    targets: Optional[Sequence[Optional[str]]] = None,
) -> ValidationReport:
    """Check every rewriting-task record's output against its input.

    The output must parse with zero ignored fragments against the tokenized
    input. When ``targets`` supplies the original target text for a record,
    applying the parsed script must reproduce it. Open-ended records are not
    checked.
    """
    if targets is not None and len(targets) != len(records):
        raise ValueError("targets must align one-to-one with records")
    checked = 0
    failures: list[tuple[int, str]] = []
    for idx, record in enumerate(records):
        if record.task not in TASK_INSTRUCTIONS:
            continue
        checked += 1
        src = tokenize(record.input)
        report = parse(record.output, len(src))
        if report.ignored:
            failures.append((idx, f"{report.ignored} fragment(s) failed to parse"))
            continue
        if targets is not None and targets[idx] is not None:
            produced = detokenize(apply_edits(report.script, src))
            expected = detokenize(tokenize(targets[idx]))
            if produced != expected:
                failures.append((idx, "applying the output does not reproduce the target"))
    return ValidationReport(len(records), checked, tuple(failures))


def write_jsonl(records: Iterable[DatasetRecord], path: Union[str, Path]) -> int:
    """Write records as JSON Lines; returns the number written."""
    count = 0
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(record.to_json())
            handle.write("\n")
            count += 1
    return count


def _iter_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise DataError(f"{path}: line {lineno}: expected a JSON object")
            yield lineno, obj


def read_open_ended_jsonl(path: Union[str, Path]) -> list[DatasetRecord]:
    """Ingest pre-existing instruction records, labelling them open-ended."""
    path = Path(path)
    records = []
    for lineno, obj in _iter_jsonl(path):
        missing = [key for key in ("instruction", "output") if key not in obj]
        if missing:
            raise DataError(f"{path}: line {lineno}: missing {', '.join(missing)}")
        records.append(
            DatasetRecord(
                instruction=str(obj["instruction"]),
                input=str(obj.get("input", "")),
                output=str(obj["output"]),
                task=OPEN_ENDED_TASK,
            )
        )
    return records


def read_dataset_jsonl(path: Union[str, Path]) -> list[DatasetRecord]:
    """Read back a dataset written by ``write_jsonl``."""
    path = Path(path)
    records = []
    for lineno, obj in _iter_jsonl(path):
        missing = [k for k in ("instruction", "input", "output", "task") if k not in obj]
        if missing:
            raise DataError(f"{path}: line {lineno}: missing {', '.join(missing)}")
        try:
            records.append(
                DatasetRecord(
                    instruction=str(obj["instruction"]),
                    input=str(obj["input"]),
                    output=str(obj["output"]),
                    task=str(obj["task"]),
                )
            )
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from None
    return records
