"""Text-relation analytics: greedy lexical span pairing for highlighting,
embedding-based sentence links, and the pairwise summary agreement matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .embeddings import VectorStore, cosine, pool_mean
from .textcore import Sentence, Token, make_document
from . import measures


class UnknownMeasure(ValueError):
    pass


@dataclass(frozen=True)
class OverlapOptions:
    min_n: int = 2
    preserve_duplicates: bool = False
    ignore_stopwords: bool = False

    def __post_init__(self):
        if self.min_n < 1:
            raise ValueError("min_n must be >= 1")


@dataclass(frozen=True)
class SpanPair:
    """One matched run: a token span in A paired with span(s) in B.
    Pairs whose token sequences are equal share a group id (dense from 0)."""

    group: int
    left: tuple[int, int]
    rights: tuple[tuple[int, int], ...]
    length: int


def _norm(token: Token | str) -> str:
    return token.lower() if isinstance(token, str) else token.normalized


def _is_stop(token: Token | str, stopset) -> bool:
    if isinstance(token, str):
        return token.lower() in stopset
    return token.is_stopword


def _longest_common_run(
    a: list[str], b: list[str],
    a_free: list[bool], b_free: list[bool],
    min_n: int, skip_run: Callable[[int, int], bool],
) -> tuple[int, int, int] | None:
    """Longest run (a_start, b_start, length) over free positions; ties go to
    the leftmost start in A, then in B. Runs vetoed by skip_run are ignored."""
    best = None
    la, lb = len(a), len(b)
    prev = [0] * (lb + 1)
    for i in range(la):
        cur = [0] * (lb + 1)
        if a_free[i]:
            for j in range(lb):
                if b_free[j] and a[i] == b[j]:
                    cur[j + 1] = prev[j] + 1
        for j in range(lb):
            length = cur[j + 1]
            # maximal runs only: not extendable to the right
            extendable = (
                i + 1 < la and j + 1 < lb
                and a_free[i + 1] and b_free[j + 1]
                and a[i + 1] == b[j + 1]
            )
            if length >= min_n and not extendable:
                a_start = i - length + 1
                b_start = j - length + 1
                if skip_run(a_start, length):
                    continue
                key = (-length, a_start, b_start)
                if best is None or key < best[0]:
                    best = (key, (a_start, b_start, length))
        prev = cur
    return best[1] if best else None


def lexical_spans(
    a: Sequence[Token | str], b: Sequence[Token | str], opts: OverlapOptions = OverlapOptions()
) -> list[SpanPair]:
    """Greedy longest-first pairing of common normalized token runs."""
    from .textcore import STOPWORDS

    ka = [_norm(t) for t in a]
    kb = [_norm(t) for t in b]
    stop_a = [_is_stop(t, STOPWORDS) for t in a]
    a_free = [True] * len(ka)
    b_free = [True] * len(kb)

    def skip_run(a_start: int, length: int) -> bool:
        if not opts.ignore_stopwords:
            return False
        return all(stop_a[a_start + i] for i in range(length))

    pairs: list[SpanPair] = []
    groups: dict[tuple[str, ...], int] = {}
    while True:
        run = _longest_common_run(ka, kb, a_free, b_free, opts.min_n, skip_run)
        if run is None:
            break
        a_start, b_start, length = run
        seq = tuple(ka[a_start : a_start + length])
        if opts.preserve_duplicates:
            rights = []
            for j in range(len(kb) - length + 1):
                if tuple(kb[j : j + length]) == seq:
                    rights.append((j, j + length))
        else:
            rights = [(b_start, b_start + length)]
            for j in range(b_start, b_start + length):
                b_free[j] = False
        for i in range(a_start, a_start + length):
            a_free[i] = False
        group = groups.setdefault(seq, len(groups))
        pairs.append(
            SpanPair(group=group, left=(a_start, a_start + length),
                     rights=tuple(rights), length=length)
        )
    pairs.sort(key=lambda p: p.left)
    return pairs


def span_pair_payload(
    pair: SpanPair, a: Sequence[Token], b: Sequence[Token]
) -> dict:
    """Serialization with both token indices and character offsets so a
    renderer can highlight without re-tokenizing."""

    def char_span(tokens: Sequence[Token], start: int, end: int) -> tuple[int, int]:
        return (tokens[start].char_span[0], tokens[end - 1].char_span[1])

    return {
        "group": pair.group,
        "length": pair.length,
        "left": {"tokens": list(pair.left), "chars": list(char_span(a, *pair.left))},
        "rights": [
            {"tokens": [s, e], "chars": list(char_span(b, s, e))} for s, e in pair.rights
        ],
    }


def semantic_links(
    summary: Sequence[Sentence],
    source: Sequence[Sentence],
    store: VectorStore,
    threshold: float = 0.6,
) -> list[tuple[int, int, float]]:
    """Per summary sentence, the argmax-similarity source sentence when the
    pooled-embedding cosine clears the threshold."""
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must be in [0, 1]")
    links = []
    source_vecs = [pool_mean(s.tokens, store) for s in source]
    for si, sent in enumerate(summary):
        pooled = pool_mean(sent.tokens, store)
        if pooled.support == 0:
            continue
        best = None
        for di, dv in enumerate(source_vecs):
            if dv.support == 0:
                continue
            sim = cosine(pooled.vector, dv.vector)
            if best is None or sim > best[1]:
                best = (di, sim)
        if best is not None and best[1] >= threshold:
            links.append((si, best[0], best[1]))
    return links


@dataclass(frozen=True)
class AgreementMatrix:
    model_ids: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]
    measure: str


_AGREEMENT_MEASURES = {
    "rouge_1": ("1", "rouge_1_f1"),
    "rouge_2": ("2", "rouge_2_f1"),
    "rouge_l": ("l", "rouge_l_f1"),
}


def agreement_matrix(
    summaries: Sequence[tuple[str, str]], measure: str = "rouge_1"
) -> AgreementMatrix:
    """Pairwise content agreement: entry [i][j] scores summary i as the
    candidate against summary j as the reference; diagonal forced to 1."""
    if measure not in _AGREEMENT_MEASURES:
        raise UnknownMeasure(f"unsupported agreement measure: {measure}")
    variant, key = _AGREEMENT_MEASURES[measure]
    token_lists = []
    for _, text in summaries:
        tokens: list[Token] = []
        if text.strip():
            for sent in make_document(text).sentences:
                tokens.extend(sent.tokens)
        token_lists.append(tokens)
    m = len(summaries)
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                row.append(1.0)
            elif not token_lists[i] or not token_lists[j]:
                row.append(0.0)
            else:
                row.append(measures.rouge(token_lists[i], token_lists[j], variant).values[key])
        rows.append(tuple(row))
    return AgreementMatrix(
        model_ids=tuple(mid for mid, _ in summaries), matrix=tuple(rows), measure=measure
    )
