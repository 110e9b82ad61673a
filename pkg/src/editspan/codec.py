"""Serialization, tolerant parsing, and application of edit scripts.

Wire format: the literal string ``None`` encodes the empty script; otherwise
each span renders as ``<start> <end> <replacement tokens...>`` and spans are
joined with ``", "``. A deletion renders as just the two positions
(``12 13``). Positions are gaps between tokens: gap 0 sits before the first
token and gap N after the last of an N-token sentence.

Parsing is total: malformed fragments are dropped and reported through a
``ParseReport``, never raised.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from editspan.errors import DataError
from editspan.text import Sentence

NONE_SENTINEL = "None"

_INT = re.compile(r"-?\d+")
# a comma starts a new fragment only when two integers follow it
_BOUNDARY = re.compile(r"\s*-?\d+\s+-?\d+")
_COMMA = re.compile(",")


@dataclass(frozen=True)
class EditSpan:
    """One edit: replace source tokens in ``[start, end)`` with ``replacement``.

    ``start == end`` with a non-empty replacement is an insertion at that gap;
    ``start < end`` with an empty replacement is a deletion. A span that
    changes nothing (``start == end`` and no replacement) is not representable.
    """

    start: int
    end: int
    replacement: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "replacement", tuple(self.replacement))
        if self.start < 0:
            raise ValueError(f"span start must be non-negative: {self.start}")
        if self.end < self.start:
            raise ValueError(f"span end {self.end} precedes start {self.start}")
        if self.start == self.end and not self.replacement:
            raise ValueError("a span must insert, delete, or replace something")
        for token in self.replacement:
            if not token or any(c.isspace() for c in token):
                raise ValueError(
                    f"replacement tokens must be non-empty with no whitespace: {token!r}"
                )


@dataclass(frozen=True)
class EditScript:
    """A sorted, non-overlapping set of spans for a source of ``source_len`` tokens."""

    spans: tuple[EditSpan, ...] = ()
    source_len: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(self.spans))
        if self.source_len < 0:
            raise ValueError(f"source length must be non-negative: {self.source_len}")
        for span in self.spans:
            if span.end > self.source_len:
                raise ValueError(
                    f"span {span.start} {span.end} exceeds source length {self.source_len}"
                )
        for a, b in zip(self.spans, self.spans[1:]):
            if (a.start, a.end) > (b.start, b.end):
                raise ValueError("spans must be sorted ascending by (start, end)")
            # at most one span may begin at any gap, and ranges may not overlap
            if a.start == b.start or a.end > b.start:
                raise ValueError(
                    f"spans {a.start} {a.end} and {b.start} {b.end} overlap"
                )


@dataclass(frozen=True)
class ParseReport:
    """Parse outcome: the surviving script plus accounting for dropped fragments."""

    script: EditScript
    ignored: int = 0
    notes: tuple[str, ...] = ()


def serialize(script: EditScript) -> str:
    """Render a script in wire format; the empty script becomes ``None``."""
    if not script.spans:
        return NONE_SENTINEL
    return ", ".join(
        " ".join((str(s.start), str(s.end), *s.replacement)) for s in script.spans
    )


def split_fragments(text: str) -> list[str]:
    """Split serialized span text on fragment boundaries.

    A comma opens a new fragment only when, after optional whitespace, two
    integers follow; any other comma stays inside the current fragment's
    replacement. Whitespace-only input has no fragments.
    """
    if not text.strip():
        return []
    fragments = []
    start = 0
    for match in _COMMA.finditer(text):
        pos = match.start()
        if _BOUNDARY.match(text, pos + 1):
            fragments.append(text[start:pos])
            start = pos + 1
    fragments.append(text[start:])
    return fragments


def _conflicts(a: EditSpan, b: EditSpan) -> bool:
    if a.start == b.start:
        return True
    lo, hi = (a, b) if a.start < b.start else (b, a)
    return lo.end > hi.start


def parse(text: str, source_len: int) -> ParseReport:
    """Parse serialized span text against a source of ``source_len`` tokens.

    Total over arbitrary input. The trimmed string ``None`` is the empty
    script. Fragments are discarded, with a note each, when they lack two
    leading integers, their positions fall outside ``[0, source_len]`` or are
    reversed, they change nothing, or they overlap an earlier surviving span
    (first in scan order wins). Surviving spans are sorted by (start, end).
    """
    if source_len < 0:
        raise ValueError(f"source length must be non-negative: {source_len}")
    if text.strip() == NONE_SENTINEL:
        return ParseReport(EditScript((), source_len))
    notes: list[str] = []
    accepted: list[EditSpan] = []
    for idx, fragment in enumerate(split_fragments(text)):
        tokens = fragment.split()
        shown = " ".join(tokens[:6])
        if len(tokens) < 2 or not _INT.fullmatch(tokens[0]) or not _INT.fullmatch(tokens[1]):
            notes.append(f"discarded fragment {idx}: no leading start/end positions: {shown!r}")
            continue
        start, end = int(tokens[0]), int(tokens[1])
        if start < 0 or end < start or end > source_len:
            notes.append(
                f"discarded fragment {idx}: positions invalid for source length "
                f"{source_len}: {shown!r}"
            )
            continue
        replacement = tuple(tokens[2:])
        if start == end and not replacement:
            notes.append(f"discarded fragment {idx}: span changes nothing: {shown!r}")
            continue
        candidate = EditSpan(start, end, replacement)
        if any(_conflicts(prior, candidate) for prior in accepted):
            notes.append(f"discarded fragment {idx}: overlaps an earlier span: {shown!r}")
            continue
        accepted.append(candidate)
    accepted.sort(key=lambda s: (s.start, s.end))
    return ParseReport(EditScript(tuple(accepted), source_len), len(notes), tuple(notes))


def apply_edits(script: EditScript, src: Sentence) -> Sentence:
    """Apply a script to its source sentence by splicing spans right-to-left.

    Raises:
        DataError: the script was built for a different source length.
    """
    if script.source_len != len(src):
        raise DataError(
            f"script expects a {script.source_len}-token source, got {len(src)} tokens"
        )
    surfaces = list(src.surfaces)
    # spans are sorted ascending and disjoint, so right-to-left splicing
    # leaves every remaining span's positions untouched
    for span in reversed(script.spans):
        surfaces[span.start:span.end] = span.replacement
    return Sentence.from_surfaces(surfaces)


def canonicalize(
    script: EditScript,
    src: Sentence,
    provider=None,
    weights=None,
) -> EditScript:
    """Re-extract the script's effect as the alignment would have produced it.

    Applies ``script`` to ``src`` and extracts spans from the resulting pair.
    Idempotent: canonical scripts map to themselves.
    """
    from editspan.alignment import extract_spans

    return extract_spans(src, apply_edits(script, src), provider, weights)
