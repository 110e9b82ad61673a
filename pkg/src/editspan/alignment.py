"""Minimum-cost token alignment and edit-span extraction.

A Damerau-Levenshtein dynamic program over annotated tokens, with the
adjacent-transposition extension and a substitution cost discounted by
lemma agreement, POS agreement, and character-level similarity. Runs of
consecutive non-match operations merge into single multi-token edits, which
convert directly to edit spans over source gap positions.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from editspan.codec import EditScript, EditSpan
from editspan.errors import ConfigError
from editspan.text import AnnotatedToken, Sentence, annotate


@dataclass(frozen=True)
class CostWeights:
    """Alignment cost model.

    The base substitution cost is ``insert_cost + delete_cost``; lemma, POS,
    and character-similarity agreement each subtract their weight from it,
    and the result is clamped to ``[sub_floor, base_sub]``. Substituting one
    token is therefore never dearer than deleting and inserting, and never
    free unless the surfaces are identical.
    """

    w_lemma: float = 0.5
    w_pos: float = 0.4
    w_char: float = 0.6
    insert_cost: float = 1.0
    delete_cost: float = 1.0
    transpose_cost: float = 1.1
    sub_floor: float = 0.1

    def __post_init__(self) -> None:
        for name in ("w_lemma", "w_pos", "w_char"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("insert_cost", "delete_cost", "transpose_cost"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.sub_floor <= self.base_sub:
            raise ValueError("sub_floor must lie in (0, insert_cost + delete_cost]")

    @property
    def base_sub(self) -> float:
        return self.insert_cost + self.delete_cost

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Union[str, float]]) -> "CostWeights":
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in mapping.items():
            if key not in known:
                raise ConfigError(f"unknown cost weight: {key!r}")
            try:
                values[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"cost weight {key!r} is not a number: {value!r}") from None
        try:
            return cls(**values)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CostWeights":
        return cls.from_mapping(read_kv_config(path))


def read_kv_config(path: Union[str, Path]) -> dict[str, str]:
    """Read a flat UTF-8 config of ``key = value`` lines; ``#`` comments allowed."""
    out: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}: line {lineno}: expected key = value")
            out[key.strip()] = value.strip()
    return out


DEFAULT_WEIGHTS = CostWeights()


class OpKind(Enum):
    MATCH = "match"
    SUB = "sub"
    INS = "ins"
    DEL = "del"
    TRANS = "trans"


@dataclass(frozen=True)
class AlignOp:
    """One alignment operation covering half-open token ranges on both sides."""

    kind: OpKind
    src_start: int
    src_end: int
    tgt_start: int
    tgt_end: int


@dataclass(frozen=True)
class Alignment:
    """An operation sequence tiling both sentences, plus its total cost."""

    ops: tuple[AlignOp, ...]
    total_cost: float


@lru_cache(maxsize=1 << 16)
def _char_distance_cached(a: str, b: str) -> int:
    # two-row Levenshtein over characters
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def char_levenshtein(a: str, b: str) -> int:
    """Unweighted character-level edit distance."""
    if a == b:
        return 0
    if a > b:  # the distance is symmetric; normalize for cache reuse
        a, b = b, a
    return _char_distance_cached(a, b)


def _surface_similarity(a: str, b: str) -> float:
    return 1.0 - char_levenshtein(a, b) / max(len(a), len(b))


def _discounted_sub(sa: str, sb: str, lemma_eq: bool, pos_eq: bool, w: CostWeights) -> float:
    cost = w.base_sub
    if lemma_eq:
        cost -= w.w_lemma
    if pos_eq:
        cost -= w.w_pos
    if w.w_char:
        cost -= w.w_char * _surface_similarity(sa, sb)
    if cost < w.sub_floor:
        return w.sub_floor
    if cost > w.base_sub:
        return w.base_sub
    return cost


def sub_cost(
    a: AnnotatedToken, b: AnnotatedToken, weights: Optional[CostWeights] = None
) -> float:
    """Substitution cost between two annotated tokens.

    Zero for identical surfaces; otherwise the discounted, clamped base cost.
    """
    w = weights or DEFAULT_WEIGHTS
    if a.token.surface == b.token.surface:
        return 0.0
    return _discounted_sub(a.token.surface, b.token.surface, a.lemma == b.lemma, a.pos == b.pos, w)


# backpointer codes, listed in tie-break preference order
_B_NONE, _B_MATCH, _B_SUB, _B_TRANS, _B_DEL, _B_INS = range(6)


def align(
    src: Sequence[AnnotatedToken],
    tgt: Sequence[AnnotatedToken],
    weights: Optional[CostWeights] = None,
) -> Alignment:
    """Minimum-cost alignment of two annotated token sequences.

    O(len(src) * len(tgt)) dynamic program. Transposition applies only to
    adjacent pairs whose surfaces match crosswise. Cost ties are broken by
    preferring MATCH, then SUB, TRANS, DEL, INS, which makes the result a
    deterministic function of the inputs and weights.
    """
    w = weights or DEFAULT_WEIGHTS
    n, m = len(src), len(tgt)
    s_surf = [a.token.surface for a in src]
    s_lem = [a.lemma for a in src]
    s_pos = [a.pos for a in src]
    t_surf = [a.token.surface for a in tgt]
    t_lem = [a.lemma for a in tgt]
    t_pos = [a.pos for a in tgt]
    ins_c, del_c, trans_c = w.insert_cost, w.delete_cost, w.transpose_cost

    cost = [[0.0] * (m + 1) for _ in range(n + 1)]
    back = [[_B_NONE] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = cost[i - 1][0] + del_c
        back[i][0] = _B_DEL
    for j in range(1, m + 1):
        cost[0][j] = cost[0][j - 1] + ins_c
        back[0][j] = _B_INS
    for i in range(1, n + 1):
        row, prev, brow = cost[i], cost[i - 1], back[i]
        sa, la, pa = s_surf[i - 1], s_lem[i - 1], s_pos[i - 1]
        for j in range(1, m + 1):
            tb = t_surf[j - 1]
            if sa == tb:
                best, bop = prev[j - 1], _B_MATCH
            else:
                best = prev[j - 1] + _discounted_sub(
                    sa, tb, la == t_lem[j - 1], pa == t_pos[j - 1], w
                )
                bop = _B_SUB
            if i > 1 and j > 1 and sa == t_surf[j - 2] and s_surf[i - 2] == tb:
                c = cost[i - 2][j - 2] + trans_c
                if c < best:
                    best, bop = c, _B_TRANS
            c = prev[j] + del_c
            if c < best:
                best, bop = c, _B_DEL
            c = row[j - 1] + ins_c
            if c < best:
                best, bop = c, _B_INS
            row[j] = best
            brow[j] = bop

    trail: list[int] = []
    i, j = n, m
    while i or j:
        bop = back[i][j]
        trail.append(bop)
        if bop == _B_MATCH or bop == _B_SUB:
            i -= 1
            j -= 1
        elif bop == _B_DEL:
            i -= 1
        elif bop == _B_INS:
            j -= 1
        else:
            i -= 2
            j -= 2
    trail.reverse()

    ops: list[AlignOp] = []
    si = ti = 0
    for bop in trail:
        if bop == _B_MATCH:
            ops.append(AlignOp(OpKind.MATCH, si, si + 1, ti, ti + 1))
            si += 1
            ti += 1
        elif bop == _B_SUB:
            ops.append(AlignOp(OpKind.SUB, si, si + 1, ti, ti + 1))
            si += 1
            ti += 1
        elif bop == _B_DEL:
            ops.append(AlignOp(OpKind.DEL, si, si + 1, ti, ti))
            si += 1
        elif bop == _B_INS:
            ops.append(AlignOp(OpKind.INS, si, si, ti, ti + 1))
            ti += 1
        else:
            ops.append(AlignOp(OpKind.TRANS, si, si + 2, ti, ti + 2))
            si += 2
            ti += 2
    return Alignment(tuple(ops), cost[n][m])


def merge_ops(alignment: Alignment) -> tuple[AlignOp, ...]:
    """Coalesce each maximal run of consecutive non-MATCH ops into one op.

    The merged op covers the union of the run's ranges; MATCH ops pass
    through untouched, so the result still tiles both sequences.
    """
    merged: list[AlignOp] = []
    run: list[AlignOp] = []

    def flush() -> None:
        if not run:
            return
        src_start, src_end = run[0].src_start, run[-1].src_end
        tgt_start, tgt_end = run[0].tgt_start, run[-1].tgt_end
        if src_start == src_end:
            kind = OpKind.INS
        elif tgt_start == tgt_end:
            kind = OpKind.DEL
        else:
            kind = OpKind.SUB
        merged.append(AlignOp(kind, src_start, src_end, tgt_start, tgt_end))
        run.clear()

    for op in alignment.ops:
        if op.kind is OpKind.MATCH:
            flush()
            merged.append(op)
        else:
            run.append(op)
    flush()
    return tuple(merged)


def extract_spans(
    src: Sentence,
    tgt: Sentence,
    provider=None,
    weights: Optional[CostWeights] = None,
) -> EditScript:
    """Extract the edit script turning ``src`` into ``tgt``.

    Aligns the annotated sentences, merges edit runs, and converts each
    merged non-MATCH op to a span over source gap positions. Applying the
    result to ``src`` reproduces ``tgt`` exactly.
    """
    src_annot = annotate(src, provider)
    tgt_annot = annotate(tgt, provider)
    alignment = align(src_annot, tgt_annot, weights)
    tgt_surfaces = tgt.surfaces
    spans = [
        EditSpan(op.src_start, op.src_end, tgt_surfaces[op.tgt_start:op.tgt_end])
        for op in merge_ops(alignment)
        if op.kind is not OpKind.MATCH
    ]
    return EditScript(tuple(spans), len(src))
