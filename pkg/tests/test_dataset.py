"""Record construction, deterministic mixing, validation, and JSONL round trips."""

from __future__ import annotations

import json
from collections import Counter

import pytest

from editspan.dataset import (
    DatasetRecord,
    MixSpec,
    OPEN_ENDED_TASK,
    TASK_INSTRUCTIONS,
    build_task_records,
    mix_and_sample,
    read_dataset_jsonl,
    read_open_ended_jsonl,
    validate_dataset,
    write_jsonl,
)
from editspan.errors import ConfigError, DataError


def test_instruction_strings_are_fixed():
    assert TASK_INSTRUCTIONS == {
        "gec": "Rewrite the input text into grammatically correct text.",
        "paraphrase": "Rewrite the input text into paraphrased text.",
        "style": "Rewrite the input text into formal text.",
        "simplify": "Rewrite the input text into simpler text.",
    }


def test_build_task_records_basics():
    lines = [
        "she go to school\tshe goes to school",
        "all fine here\tall fine here",
    ]
    records, skipped = build_task_records(lines, "gec")
    assert skipped == []
    assert [r.task for r in records] == ["gec", "gec"]
    assert all(r.instruction == TASK_INSTRUCTIONS["gec"] for r in records)
    assert records[0].input == "she go to school"
    assert records[0].output == "1 2 goes"
    assert records[1].output == "None"


def test_build_task_records_skips_malformed_lines():
    lines = ["good\tpair", "no tab at all", "too\tmany\ttabs"]
    records, skipped = build_task_records(lines, "paraphrase")
    assert len(records) == 1
    assert len(skipped) == 2
    assert "line 2" in skipped[0] and "line 3" in skipped[1]


def test_build_task_records_normalizes_input_whitespace():
    records, _ = build_task_records(["a  b\ta c"], "simplify")
    assert records[0].input == "a b"


def test_build_task_records_unknown_task():
    with pytest.raises(ConfigError):
        build_task_records([], "translation")


def test_build_task_records_instruction_override():
    records, _ = build_task_records(["a\tb"], "style", instruction="Make it formal.")
    assert records[0].instruction == "Make it formal."
    assert records[0].task == "style"


def test_dataset_record_rejects_unknown_task():
    with pytest.raises(ValueError):
        DatasetRecord("i", "x", "None", "translation")


def test_mix_spec_defaults():
    spec = MixSpec()
    assert spec.per_task_count == 3000
    assert spec.open_ended_count == 13000
    with pytest.raises(ValueError):
        MixSpec(per_task_count=-1)


def _toy_sets():
    task_sets = {
        task: [
            DatasetRecord(TASK_INSTRUCTIONS[task], f"{task} input {i}", "None", task)
            for i in range(6)
        ]
        for task in TASK_INSTRUCTIONS
    }
    open_ended = [
        DatasetRecord(f"question {i}", "", f"answer {i}", OPEN_ENDED_TASK)
        for i in range(9)
    ]
    return task_sets, open_ended


def test_mix_and_sample_counts_and_membership():
    task_sets, open_ended = _toy_sets()
    spec = MixSpec(per_task_count=4, open_ended_count=7, seed=3)
    mixed = mix_and_sample(task_sets, open_ended, spec)
    assert len(mixed) == 4 * 4 + 7
    counts = Counter(r.task for r in mixed)
    assert counts == {"gec": 4, "paraphrase": 4, "style": 4, "simplify": 4,
                      OPEN_ENDED_TASK: 7}
    everything = {r for rs in task_sets.values() for r in rs} | set(open_ended)
    assert set(mixed) <= everything
    # without replacement: no record appears twice
    assert len(set(mixed)) == len(mixed)


def test_mix_and_sample_is_seed_deterministic():
    task_sets, open_ended = _toy_sets()
    spec = MixSpec(per_task_count=3, open_ended_count=5, seed=11)
    assert mix_and_sample(task_sets, open_ended, spec) == mix_and_sample(
        task_sets, open_ended, spec
    )
    other = mix_and_sample(task_sets, open_ended, MixSpec(3, 5, seed=12))
    assert other != mix_and_sample(task_sets, open_ended, spec)


def test_mix_and_sample_insufficient_records_names_the_set():
    task_sets, open_ended = _toy_sets()
    task_sets["style"] = task_sets["style"][:2]
    with pytest.raises(DataError, match="'style'"):
        mix_and_sample(task_sets, open_ended, MixSpec(per_task_count=3, open_ended_count=1))
    with pytest.raises(DataError, match="open-ended"):
        mix_and_sample(task_sets, open_ended, MixSpec(per_task_count=1, open_ended_count=10))


def test_validate_dataset_accepts_built_records():
    pairs = [
        ("she go to school", "she goes to school"),
        ("keep this line", "keep this line"),
        ("drop the last word now", "drop the last word"),
    ]
    lines = [f"{s}\t{t}" for s, t in pairs]
    records, _ = build_task_records(lines, "gec")
    report = validate_dataset(records, [t for _, t in pairs])
    assert report.ok
    assert report.total == report.checked == 3


def test_validate_dataset_flags_unparseable_output():
    record = DatasetRecord(TASK_INSTRUCTIONS["gec"], "a b c", "0 99 x", "gec")
    report = validate_dataset([record])
    assert not report.ok
    assert report.failures[0][0] == 0
    assert "parse" in report.failures[0][1]


def test_validate_dataset_flags_wrong_target():
    record = DatasetRecord(TASK_INSTRUCTIONS["gec"], "a b c", "0 1 x", "gec")
    report = validate_dataset([record], ["a b c"])
    assert not report.ok
    assert "reproduce" in report.failures[0][1]


def test_validate_dataset_skips_open_ended():
    record = DatasetRecord("explain this", "", "free text, not spans", OPEN_ENDED_TASK)
    report = validate_dataset([record])
    assert report.ok
    assert report.checked == 0
    assert report.total == 1


def test_validate_dataset_targets_must_align():
    record = DatasetRecord(TASK_INSTRUCTIONS["gec"], "a", "None", "gec")
    with pytest.raises(ValueError):
        validate_dataset([record], ["a", "b"])


def test_write_jsonl_key_order_and_readback(tmp_path):
    path = tmp_path / "data.jsonl"
    records = [
        DatasetRecord(TASK_INSTRUCTIONS["gec"], "naïve input", "None", "gec"),
        DatasetRecord("q", "", "a", OPEN_ENDED_TASK),
    ]
    assert write_jsonl(records, path) == 2
    lines = path.read_text(encoding="utf-8").splitlines()
    assert list(json.loads(lines[0])) == ["instruction", "input", "output", "task"]
    assert "naïve" in lines[0]  # not ascii-escaped
    assert read_dataset_jsonl(path) == records


def test_read_open_ended_jsonl(tmp_path):
    path = tmp_path / "open.jsonl"
    path.write_text(
        '{"instruction": "summarize", "input": "long text", "output": "short"}\n'
        '{"instruction": "list three colors", "output": "red green blue"}\n',
        encoding="utf-8",
    )
    records = read_open_ended_jsonl(path)
    assert [r.task for r in records] == [OPEN_ENDED_TASK] * 2
    assert records[0].input == "long text"
    assert records[1].input == ""


def test_read_open_ended_jsonl_missing_keys(tmp_path):
    path = tmp_path / "open.jsonl"
    path.write_text('{"instruction": "no output"}\n', encoding="utf-8")
    with pytest.raises(DataError, match="line 1"):
        read_open_ended_jsonl(path)


def test_read_dataset_jsonl_rejects_bad_json(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(DataError):
        read_dataset_jsonl(path)
