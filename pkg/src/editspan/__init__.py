"""Edit-span tooling for sentence rewriting corpora.

Extracts compact edit scripts from sentence pairs, serializes and parses
them tolerantly, applies them deterministically, scores them, and assembles
mixed instruction datasets.
"""

from editspan.alignment import (
    AlignOp,
    Alignment,
    CostWeights,
    OpKind,
    align,
    char_levenshtein,
    extract_spans,
    merge_ops,
    read_kv_config,
    sub_cost,
)
from editspan.codec import (
    EditScript,
    EditSpan,
    NONE_SENTINEL,
    ParseReport,
    apply_edits,
    canonicalize,
    parse,
    serialize,
    split_fragments,
)
from editspan.dataset import (
    DatasetRecord,
    MixSpec,
    OPEN_ENDED_TASK,
    TASK_INSTRUCTIONS,
    ValidationReport,
    build_task_records,
    mix_and_sample,
    read_dataset_jsonl,
    read_open_ended_jsonl,
    validate_dataset,
    write_jsonl,
)
from editspan.errors import ConfigError, DataError, EditSpanError
from editspan.metrics import (
    CompressionStat,
    EditScore,
    PairStats,
    agreement,
    compression,
    edit_f05,
    pair_stats,
    reduce_stats,
    score_corpus,
)
from editspan.text import (
    AnnotatedToken,
    AnnotationProvider,
    CHAR_CLASSES,
    NaiveProvider,
    POS_TAGS,
    Sentence,
    SidecarProvider,
    Token,
    annotate,
    char_class,
    detokenize,
    make_provider,
    normalize_pos,
    parse_pair_line,
    read_parallel_tsv,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "AlignOp",
    "Alignment",
    "AnnotatedToken",
    "AnnotationProvider",
    "CHAR_CLASSES",
    "CompressionStat",
    "ConfigError",
    "CostWeights",
    "DataError",
    "DatasetRecord",
    "EditScore",
    "EditScript",
    "EditSpan",
    "EditSpanError",
    "MixSpec",
    "NONE_SENTINEL",
    "NaiveProvider",
    "OPEN_ENDED_TASK",
    "OpKind",
    "POS_TAGS",
    "PairStats",
    "ParseReport",
    "Sentence",
    "SidecarProvider",
    "TASK_INSTRUCTIONS",
    "Token",
    "ValidationReport",
    "agreement",
    "align",
    "annotate",
    "apply_edits",
    "build_task_records",
    "canonicalize",
    "char_class",
    "char_levenshtein",
    "compression",
    "detokenize",
    "edit_f05",
    "extract_spans",
    "make_provider",
    "merge_ops",
    "mix_and_sample",
    "normalize_pos",
    "pair_stats",
    "parse",
    "parse_pair_line",
    "read_dataset_jsonl",
    "read_kv_config",
    "read_open_ended_jsonl",
    "read_parallel_tsv",
    "reduce_stats",
    "score_corpus",
    "serialize",
    "split_fragments",
    "sub_cost",
    "tokenize",
    "validate_dataset",
    "write_jsonl",
]
