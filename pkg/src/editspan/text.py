"""Whitespace tokenization, detokenization, and pluggable token annotation.

Text is treated as pre-tokenized: tokens are whitespace-delimited, and token
or gap indices are only comparable between strings tokenized identically.
Linguistic annotation (lemma, coarse POS, character class) comes from a
provider so the signal can be a cheap heuristic or an external tagger's
output shipped in a sidecar file.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence, Union

from editspan.errors import ConfigError, DataError

POS_TAGS = frozenset({
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET",
    "ADP", "CONJ", "NUM", "PUNCT", "OTHER",
})

# collapse tags from richer tagsets (e.g. UPOS in sidecar files) onto ours
_POS_ALIASES = {"PROPN": "NOUN", "AUX": "VERB", "CCONJ": "CONJ", "SCONJ": "CONJ"}

CHAR_CLASSES = ("alphabetic", "numeric", "punctuation", "mixed")


def char_class(surface: str) -> str:
    """Classify a surface as alphabetic, numeric, punctuation, or mixed."""
    if all(c.isalpha() for c in surface):
        return "alphabetic"
    if all(c.isdigit() for c in surface):
        return "numeric"
    if all(unicodedata.category(c).startswith("P") for c in surface):
        return "punctuation"
    return "mixed"


def normalize_pos(tag: str) -> str:
    """Map an arbitrary POS tag onto the coarse closed tagset."""
    t = tag.strip().upper()
    t = _POS_ALIASES.get(t, t)
    return t if t in POS_TAGS else "OTHER"


@dataclass(frozen=True)
class Token:
    """One whitespace-delimited token and its 0-based position."""

    surface: str
    index: int

    def __post_init__(self) -> None:
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(
                f"token surface must be non-empty with no whitespace: {self.surface!r}"
            )
        if self.index < 0:
            raise ValueError(f"token index must be non-negative: {self.index}")


@dataclass(frozen=True)
class AnnotatedToken:
    """A token plus the linguistic signal used for alignment costs.

    Attributes:
        token: the underlying surface token.
        lemma: non-empty lowercase lemma.
        pos: coarse POS tag from ``POS_TAGS``.
        char_class: one of ``CHAR_CLASSES``, derived from the surface.
    """

    token: Token
    lemma: str
    pos: str
    char_class: str

    def __post_init__(self) -> None:
        if not self.lemma:
            raise ValueError("lemma must be non-empty")
        if self.pos not in POS_TAGS:
            raise ValueError(f"unknown POS tag: {self.pos!r}")
        if self.char_class not in CHAR_CLASSES:
            raise ValueError(f"unknown character class: {self.char_class!r}")


@dataclass(frozen=True)
class Sentence:
    """An immutable tokenized sentence.

    ``raw`` keeps the original untokenized string when one existed; it is
    excluded from equality so sentences compare by token content alone.
    """

    tokens: tuple[Token, ...] = ()
    raw: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        for i, tok in enumerate(self.tokens):
            if tok.index != i:
                raise ValueError(f"token {tok.surface!r} has index {tok.index}, expected {i}")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str], raw: str = "") -> "Sentence":
        return cls(tuple(Token(s, i) for i, s in enumerate(surfaces)), raw)


def tokenize(text: str) -> Sentence:
    """Split on runs of whitespace; empty input yields an empty sentence."""
    return Sentence.from_surfaces(text.split(), raw=text)


def detokenize(sentence: Sentence) -> str:
    """Join surfaces with single spaces. Inverse of tokenize up to whitespace."""
    return " ".join(sentence.surfaces)


class AnnotationProvider(Protocol):
    """Strategy interface for attaching lemma/POS/char-class to tokens."""

    name: str

    def annotate(self, tokens: Sequence[Token]) -> tuple[AnnotatedToken, ...]:
        ...


@dataclass(frozen=True)
class NaiveProvider:
    """Heuristic annotation with no external resources.

    Lemma is the lowercased surface; POS is PUNCT for punctuation tokens,
    NUM for numeric ones, and OTHER for everything else.
    """

    name: str = "naive"

    def annotate(self, tokens: Sequence[Token]) -> tuple[AnnotatedToken, ...]:
        out = []
        for tok in tokens:
            cc = char_class(tok.surface)
            if cc == "punctuation":
                pos = "PUNCT"
            elif cc == "numeric":
                pos = "NUM"
            else:
                pos = "OTHER"
            out.append(AnnotatedToken(tok, tok.surface.lower(), pos, cc))
        return tuple(out)


@dataclass(frozen=True)
class SidecarProvider:
    """Annotation read from a companion file produced by an external tagger.

    The file holds one token per line as ``surface<TAB>lemma<TAB>pos`` with a
    blank line between sentences. Sentences are looked up by their exact
    surface sequence; duplicate sentences share one annotation block.
    """

    annotations: Mapping[tuple[str, ...], tuple[tuple[str, str], ...]]
    name: str = "sidecar"

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SidecarProvider":
        path = Path(path)
        blocks: list[list[tuple[str, str, str]]] = []
        current: list[tuple[str, str, str]] = []
        with path.open(encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.rstrip("\r\n")
                if not line.strip():
                    if current:
                        blocks.append(current)
                        current = []
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise DataError(
                        f"{path}: line {lineno}: expected surface<TAB>lemma<TAB>pos"
                    )
                surface, lemma, pos = parts
                if not lemma.strip():
                    raise DataError(f"{path}: line {lineno}: empty lemma")
                current.append((surface, lemma.strip().lower(), normalize_pos(pos)))
        if current:
            blocks.append(current)
        mapping = {
            tuple(row[0] for row in block): tuple((row[1], row[2]) for row in block)
            for block in blocks
        }
        return cls(mapping)

    def annotate(self, tokens: Sequence[Token]) -> tuple[AnnotatedToken, ...]:
        if not tokens:
            return ()
        key = tuple(t.surface for t in tokens)
        rows = self.annotations.get(key)
        if rows is None:
            raise DataError(f"no sidecar annotations for sentence: {' '.join(key)!r}")
        return tuple(
            AnnotatedToken(tok, lemma, pos, char_class(tok.surface))
            for tok, (lemma, pos) in zip(tokens, rows)
        )


def make_provider(
    name: str, annotations_path: Union[str, Path, None] = None
) -> AnnotationProvider:
    """Build a registered provider by name.

    Raises:
        ConfigError: unknown name, or ``sidecar`` without an annotations file.
    """
    if name == "naive":
        return NaiveProvider()
    if name == "sidecar":
        if annotations_path is None:
            raise ConfigError("the sidecar provider requires an annotations file")
        return SidecarProvider.from_file(annotations_path)
    raise ConfigError(f"unknown annotation provider: {name!r}")


def annotate(
    sentence: Sentence, provider: Union[AnnotationProvider, str, None] = None
) -> tuple[AnnotatedToken, ...]:
    """Annotate every token of ``sentence`` with the given provider.

    The provider may be an instance or a registered name. Output length and
    token identity are checked so a misbehaving provider fails loudly.
    """
    if provider is None:
        provider = NaiveProvider()
    elif isinstance(provider, str):
        provider = make_provider(provider)
    annotated = provider.annotate(sentence.tokens)
    if len(annotated) != len(sentence.tokens) or any(
        a.token != t for a, t in zip(annotated, sentence.tokens)
    ):
        raise ValueError(
            f"provider {provider.name!r} did not annotate tokens one-to-one"
        )
    return annotated


def parse_pair_line(line: str, lineno: int = 0) -> tuple[str, str]:
    """Split one ``source<TAB>target`` line, rejecting anything else."""
    parts = line.rstrip("\r\n").split("\t")
    if len(parts) != 2:
        raise DataError(f"line {lineno}: expected source<TAB>target, got {len(parts)} fields")
    return parts[0], parts[1]


def read_parallel_tsv(path: Union[str, Path]) -> list[tuple[str, str]]:
    """Read a parallel corpus of ``source<TAB>target`` lines (strict)."""
    pairs = []
    with Path(path).open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            pairs.append(parse_pair_line(line, lineno))
    return pairs
