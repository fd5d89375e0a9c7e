"""Evaluation measures: ROUGE-1/2/L, BLEU, METEOR, CIDEr, greedy matching,
and pooled-embedding cosine similarity.

All lexical measures operate on lowercased token keys; callers may pass
Token objects or plain strings. Stemming is applied only where a measure's
own definition calls for it (METEOR stage 2, optional ROUGE stemming).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import embeddings as emb
from .textcore import Token, ngrams, token_keys
from .stemming import porter_stem


class EmptyText(ValueError):
    pass


class EmptyBatch(ValueError):
    pass


class NoEmbeddableTokens(ValueError):
    pass


class LexiconFormatError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureScore:
    measure: str
    values: dict[str, float] = field(default_factory=dict)


TokenSeq = Sequence[Token | str]


def _keys(tokens: TokenSeq, use_stems: bool = False) -> list[str]:
    return token_keys(tokens, use_stems=use_stems)


def _stems(tokens: TokenSeq) -> list[str]:
    stems = []
    for t in tokens:
        stems.append(porter_stem(t.lower()) if isinstance(t, str) else t.stem)
    return stems


# --------------------------------------------------------------------------
# ROUGE

def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Token-level longest common subsequence (quadratic DP)."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def _prf(match: float, cand_total: int, ref_total: int) -> dict[str, float]:
    p = match / cand_total if cand_total else 0.0
    r = match / ref_total if ref_total else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return {"precision": p, "recall": r, "f1": f1}


def rouge(
    candidate: TokenSeq,
    reference: TokenSeq,
    variant: str | int,
    use_stems: bool = False,
) -> MeasureScore:
    """ROUGE-N (clipped n-gram overlap) or ROUGE-L (LCS)."""
    if not candidate or not reference:
        raise EmptyText("rouge requires non-empty candidate and reference")
    variant = str(variant).lower()
    cand = _keys(candidate, use_stems)
    ref = _keys(reference, use_stems)
    if variant == "l":
        match = lcs_length(cand, ref)
        prf = _prf(match, len(cand), len(ref))
        name = "rouge_l"
    elif variant in ("1", "2"):
        n = int(variant)
        cg = ngrams(cand, n).counts
        rg = ngrams(ref, n).counts
        match = sum((cg & rg).values())
        prf = _prf(match, max(0, len(cand) - n + 1), max(0, len(ref) - n + 1))
        name = f"rouge_{n}"
    else:
        raise ValueError(f"unknown rouge variant: {variant}")
    return MeasureScore(measure=name, values={f"{name}_{k}": v for k, v in prf.items()})


def rouge_all(
    candidate: TokenSeq, references: Sequence[TokenSeq], use_stems: bool = False
) -> MeasureScore:
    """ROUGE-1/2/L against one or more references; max F1 reference wins per variant."""
    if not references:
        raise EmptyText("rouge requires at least one reference")
    values: dict[str, float] = {}
    for variant in ("1", "2", "l"):
        best = None
        for ref in references:
            score = rouge(candidate, ref, variant, use_stems)
            key = f"rouge_{variant}_f1"
            if best is None or score.values[key] > best.values[key]:
                best = score
        values.update(best.values)
    return MeasureScore(measure="rouge", values=values)


# --------------------------------------------------------------------------
# BLEU

def bleu_clipped_counts(
    candidate: Sequence[str], references: Sequence[Sequence[str]], n: int
) -> tuple[int, int]:
    """(clipped matches, candidate n-gram total) with per-n max clipping."""
    cg = ngrams(candidate, n).counts
    if not cg:
        return 0, 0
    max_ref: Counter = Counter()
    for ref in references:
        for gram, count in ngrams(ref, n).counts.items():
            if count > max_ref[gram]:
                max_ref[gram] = count
    matched = sum(min(count, max_ref.get(gram, 0)) for gram, count in cg.items())
    return matched, sum(cg.values())


def bleu(
    candidate: TokenSeq,
    references: Sequence[TokenSeq],
    max_order: int = 4,
    smooth: bool = False,
) -> MeasureScore:
    """BLEU with brevity penalty; no smoothing unless requested (add-one, n >= 2)."""
    if not candidate or not references or not any(references):
        raise EmptyText("bleu requires non-empty candidate and reference(s)")
    cand = _keys(candidate)
    refs = [_keys(r) for r in references if r]
    c = len(cand)
    order = min(max_order, c)
    log_sum = 0.0
    zero = False
    for n in range(1, order + 1):
        matched, total = bleu_clipped_counts(cand, refs, n)
        if smooth and n >= 2:
            matched += 1
            total += 1
        if matched == 0:
            zero = True
            break
        log_sum += math.log(matched / total)
    if zero:
        score = 0.0
    else:
        geo = math.exp(log_sum / order)
        r = min(refs, key=lambda ref: (abs(len(ref) - c), len(ref)))
        bp = min(1.0, math.exp(1 - len(r) / c)) if c > 0 else 0.0
        score = bp * geo
    return MeasureScore(measure="bleu", values={"bleu": score})


# --------------------------------------------------------------------------
# METEOR

def load_synonym_lexicon(path) -> list[frozenset[str]]:
    """One synset per line, comma-separated terms."""
    synsets = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            terms = frozenset(t.strip().lower() for t in line.split(",") if t.strip())
            if len(terms) < 2:
                raise LexiconFormatError(f"line {lineno}: synset needs >= 2 terms")
            synsets.append(terms)
    return synsets


def _synonym_ids(lexicon: list[frozenset[str]]) -> dict[str, set[int]]:
    index: dict[str, set[int]] = {}
    for i, synset in enumerate(lexicon):
        for term in synset:
            index.setdefault(term, set()).add(i)
    return index


def _align_stage(
    cand: list[str],
    ref: list[str],
    cand_free: list[bool],
    ref_free: list[bool],
    matches: dict[int, int],
    equal,
) -> None:
    for i, ck in enumerate(cand):
        if not cand_free[i]:
            continue
        for j, rk in enumerate(ref):
            if ref_free[j] and equal(ck, rk):
                matches[i] = j
                cand_free[i] = False
                ref_free[j] = False
                break


def _chunk_count(matches: dict[int, int]) -> int:
    pairs = sorted(matches.items())
    chunks = 0
    prev = None
    for ci, ri in pairs:
        if prev is None or ci != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (ci, ri)
    return chunks


def meteor(
    candidate: TokenSeq,
    reference: TokenSeq,
    lexicon: list[frozenset[str]] | None = None,
) -> MeasureScore:
    """Staged greedy unigram alignment (exact, stem, optional synonym) with
    a recall-weighted harmonic mean and a fragmentation penalty."""
    if not candidate or not reference:
        raise EmptyText("meteor requires non-empty candidate and reference")
    cand = _keys(candidate)
    ref = _keys(reference)
    cand_stems = _stems(candidate)
    ref_stems = _stems(reference)
    cand_free = [True] * len(cand)
    ref_free = [True] * len(ref)
    matches: dict[int, int] = {}
    _align_stage(cand, ref, cand_free, ref_free, matches, lambda a, b: a == b)
    stem_of_c = dict(enumerate(cand_stems))
    stem_of_r = dict(enumerate(ref_stems))
    _align_stage(
        list(range(len(cand))),
        list(range(len(ref))),
        cand_free,
        ref_free,
        matches,
        lambda i, j: stem_of_c[i] == stem_of_r[j],
    )
    if lexicon:
        syn = _synonym_ids(lexicon)
        _align_stage(
            cand,
            ref,
            cand_free,
            ref_free,
            matches,
            lambda a, b: bool(syn.get(a, set()) & syn.get(b, set())),
        )
    m = len(matches)
    if m == 0:
        return MeasureScore(measure="meteor", values={"meteor": 0.0})
    p = m / len(cand)
    r = m / len(ref)
    fmean = 10 * p * r / (r + 9 * p)
    chunks = _chunk_count(matches)
    penalty = 0.5 * (chunks / m) ** 3
    return MeasureScore(measure="meteor", values={"meteor": fmean * (1 - penalty)})


def meteor_multi(
    candidate: TokenSeq,
    references: Sequence[TokenSeq],
    lexicon: list[frozenset[str]] | None = None,
) -> MeasureScore:
    if not references:
        raise EmptyText("meteor requires at least one reference")
    best = max(meteor(candidate, ref, lexicon).values["meteor"] for ref in references)
    return MeasureScore(measure="meteor", values={"meteor": best})


# --------------------------------------------------------------------------
# CIDEr

_CIDER_MAX_N = 4


@dataclass(frozen=True)
class CiderCorpusModel:
    corpus_size: int
    doc_freq: tuple[Counter, ...]  # one Counter per n = 1.._CIDER_MAX_N

    def idf(self, n: int, gram: tuple[str, ...]) -> float:
        df = self.doc_freq[n - 1].get(gram, 0)
        return math.log(self.corpus_size / max(1, df))


def build_cider_model(reference_sets: Sequence[Sequence[Sequence[str]]]) -> CiderCorpusModel:
    """Document frequencies over examples: an n-gram counts once per example
    whose references contain it anywhere."""
    dfs = tuple(Counter() for _ in range(_CIDER_MAX_N))
    for refs in reference_sets:
        for n in range(1, _CIDER_MAX_N + 1):
            seen = set()
            for ref in refs:
                seen.update(ngrams(ref, n).counts.keys())
            for gram in seen:
                dfs[n - 1][gram] += 1
    return CiderCorpusModel(corpus_size=len(reference_sets), doc_freq=dfs)


def _cider_vector(counts: Counter, model: CiderCorpusModel, n: int) -> dict[tuple, float]:
    total = sum(counts.values())
    if total == 0:
        return {}
    return {g: (c / total) * model.idf(n, g) for g, c in counts.items()}


def _sparse_cosine(a: dict, b: dict) -> float:
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    dot = sum(v * b.get(k, 0.0) for k, v in a.items())
    return dot / (na * nb)


def cider(examples: Sequence[tuple[TokenSeq, Sequence[TokenSeq]]]) -> list[MeasureScore]:
    """Consensus n-gram similarity over a batch; the batch's references are
    the idf corpus. Candidate counts are clipped to the reference's before
    the per-level cosine; empty levels on both sides are skipped."""
    if not examples:
        raise EmptyBatch("cider requires at least one example")
    keyed = [
        (_keys(cand), [_keys(r) for r in refs]) for cand, refs in examples
    ]
    model = build_cider_model([refs for _, refs in keyed])
    scores = []
    for cand, refs in keyed:
        sims = []
        for n in range(1, _CIDER_MAX_N + 1):
            cg = ngrams(cand, n).counts
            level_sims = []
            any_grams = bool(cg)
            for ref in refs:
                rg = ngrams(ref, n).counts
                if not cg and not rg:
                    continue
                any_grams = True
                clipped = Counter({g: min(c, rg.get(g, 0)) for g, c in cg.items()})
                sim = _sparse_cosine(
                    _cider_vector(+clipped, model, n), _cider_vector(rg, model, n)
                )
                level_sims.append(sim)
            if level_sims:
                sims.append(sum(level_sims) / len(level_sims))
            elif any_grams:
                sims.append(0.0)
        score = 10.0 * (sum(sims) / len(sims)) if sims else 0.0
        scores.append(MeasureScore(measure="cider", values={"cider": score}))
    return scores


# --------------------------------------------------------------------------
# Embedding-based measures

def greedy_matching(
    candidate: TokenSeq,
    reference: TokenSeq,
    store: emb.VectorStore,
    include_stopwords: bool = False,
) -> MeasureScore:
    """Symmetric average of directed greedy token alignments by cosine."""
    cand = emb.embeddable_terms(candidate, store, include_stopwords)
    ref = emb.embeddable_terms(reference, store, include_stopwords)
    if not cand or not ref:
        raise NoEmbeddableTokens("both sides need at least one in-vocabulary token")

    def directed(src: list[str], dst: list[str]) -> float:
        total = 0.0
        for s in src:
            sv = store.get(s)
            total += max(emb.cosine(sv, store.get(d)) for d in dst)
        return total / len(src)

    score = (directed(cand, ref) + directed(ref, cand)) / 2
    return MeasureScore(measure="greedy_matching", values={"greedy_matching": score})


def cosine_sim(
    candidate: TokenSeq, reference: TokenSeq, store: emb.VectorStore
) -> MeasureScore:
    """Cosine of mean-pooled embeddings; 0 when either side pools to zero."""
    a = emb.pool_mean(candidate, store)
    b = emb.pool_mean(reference, store)
    score = emb.cosine(a.vector, b.vector)
    return MeasureScore(measure="cosine_sim", values={"cosine_sim": score})
