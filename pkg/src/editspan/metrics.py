"""Compression, span-format agreement, and edit-level F0.5 scoring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from editspan.alignment import CostWeights, extract_spans
from editspan.codec import EditScript, canonicalize, parse
from editspan.errors import DataError
from editspan.text import Sentence, detokenize


@dataclass(frozen=True)
class CompressionStat:
    """How compact a serialized script is relative to its target sentence.

    Token counts are whitespace tokens of the serialized string, so the empty
    script (``None``) counts as one. A character-count variant is included
    alongside the primary token ratio.
    """

    span_tokens: int
    target_tokens: int
    ratio: float
    span_chars: int
    target_chars: int
    char_ratio: float


def compression(span_text: str, target: Sentence) -> CompressionStat:
    """Measure serialized span text against the plain target sentence."""
    span_tokens = len(span_text.split())
    target_tokens = len(target)
    target_text = detokenize(target)
    return CompressionStat(
        span_tokens=span_tokens,
        target_tokens=target_tokens,
        ratio=span_tokens / max(target_tokens, 1),
        span_chars=len(span_text),
        target_chars=len(target_text),
        char_ratio=len(span_text) / max(len(target_text), 1),
    )


@dataclass(frozen=True)
class EditScore:
    """Span-level precision, recall, and F0.5 from exact (start, end, replacement) matches."""

    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f05: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EditScore":
        precision = tp / (tp + fp) if tp + fp else 1.0
        recall = tp / (tp + fn) if tp + fn else 1.0
        denom = 0.25 * precision + recall
        f05 = 1.25 * precision * recall / denom if denom else 0.0
        return cls(tp, fp, fn, precision, recall, f05)


def edit_f05(hyp: EditScript, gold: EditScript) -> EditScore:
    """Score hypothesis spans against gold spans by exact tuple equality."""
    if hyp.source_len != gold.source_len:
        raise DataError(
            f"scripts disagree on source length: {hyp.source_len} vs {gold.source_len}"
        )
    hyp_set, gold_set = set(hyp.spans), set(gold.spans)
    return EditScore.from_counts(
        tp=len(hyp_set & gold_set),
        fp=len(hyp_set - gold_set),
        fn=len(gold_set - hyp_set),
    )


def agreement(
    hyp: EditScript,
    src: Sentence,
    provider=None,
    weights: Optional[CostWeights] = None,
) -> bool:
    """True iff ``hyp`` is exactly what extraction would produce for its own effect."""
    return hyp.spans == canonicalize(hyp, src, provider, weights).spans


@dataclass(frozen=True)
class PairStats:
    """Per-pair scoring facts; corpus stats reduce over these."""

    agree: bool
    ratio: float
    tp: int
    fp: int
    fn: int
    ignored: int


def pair_stats(
    src: Sentence,
    hyp_text: str,
    gold: Sentence,
    provider=None,
    weights: Optional[CostWeights] = None,
) -> PairStats:
    """Score one (source, hypothesis span text, gold target) triple."""
    report = parse(hyp_text, len(src))
    gold_script = extract_spans(src, gold, provider, weights)
    score = edit_f05(report.script, gold_script)
    return PairStats(
        agree=agreement(report.script, src, provider, weights),
        ratio=compression(hyp_text, gold).ratio,
        tp=score.tp,
        fp=score.fp,
        fn=score.fn,
        ignored=report.ignored,
    )


def reduce_stats(stats: Iterable[PairStats]) -> dict:
    """Aggregate per-pair stats into the corpus score report.

    Precision, recall, and F0.5 are micro-averaged over global edit counts.
    """
    pairs = 0
    agree = 0
    ignored = 0
    ratio_sum = 0.0
    tp = fp = fn = 0
    for stat in stats:
        pairs += 1
        agree += stat.agree
        ignored += stat.ignored
        ratio_sum += stat.ratio
        tp += stat.tp
        fp += stat.fp
        fn += stat.fn
    score = EditScore.from_counts(tp, fp, fn)
    return {
        "pairs": pairs,
        "agreement_rate": agree / pairs if pairs else 0.0,
        "mean_ratio": ratio_sum / pairs if pairs else 0.0,
        "precision": score.precision,
        "recall": score.recall,
        "f05": score.f05,
        "ignored_fragments": ignored,
    }


def score_corpus(
    rows: Iterable[tuple[Sentence, str, Sentence]],
    provider=None,
    weights: Optional[CostWeights] = None,
) -> dict:
    """Score a corpus of (source, hypothesis span text, gold target) rows."""
    return reduce_stats(
        pair_stats(src, hyp_text, gold, provider, weights) for src, hyp_text, gold in rows
    )
