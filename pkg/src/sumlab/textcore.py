"""Deterministic text preprocessing: sentence splitting, tokenization with
character offsets, stopword tagging, n-grams, and TF-IDF weighting.

Everything here is a pure function over immutable inputs; all higher layers
(summarizers, measures, overlap analytics) build on these structures.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .stemming import porter_stem


class EmptyInput(ValueError):
    pass


class InvalidOrder(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


def load_wordlist(path) -> frozenset[str]:
    """Read a UTF-8 word list: one entry per line, '#' comments ignored."""
    entries = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                entries.add(line.lower())
    return frozenset(entries)


def _load_packaged(name: str) -> frozenset[str]:
    text = resources.files("sumlab.data").joinpath(name).read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            entries.add(line.lower())
    return frozenset(entries)


STOPWORDS: frozenset[str] = _load_packaged("stopwords.txt")
ABBREVIATIONS: frozenset[str] = _load_packaged("abbreviations.txt")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    stem: str
    char_span: tuple[int, int]
    is_stopword: bool
    is_numeric: bool
    is_capitalized: bool


@dataclass(frozen=True)
class Sentence:
    index: int
    tokens: tuple[Token, ...]
    char_span: tuple[int, int]


@dataclass(frozen=True)
class Document:
    raw: str
    sentences: tuple[Sentence, ...]
    title: Sentence | None = None
    title_raw: str | None = None

    def sentence_text(self, index: int) -> str:
        start, end = self.sentences[index].char_span
        return self.raw[start:end]


_TOKEN_RE = re.compile(r"\d+(?:\.\d+)*|\w+|[^\w\s]", re.UNICODE)
_NUMERIC_RE = re.compile(r"^\d+(?:[.,]\d+)*$")


def tokenize(
    text: str,
    sentence_initial: bool = False,
    offset: int = 0,
    stopwords: frozenset[str] = STOPWORDS,
) -> tuple[Token, ...]:
    """Split into word/number/punctuation tokens with offsets into the source.

    `offset` shifts spans so they index into the enclosing raw string.  When
    `sentence_initial` is set the first token is never flagged capitalized.
    """
    tokens = []
    for i, m in enumerate(_TOKEN_RE.finditer(text)):
        surface = m.group()
        normalized = surface.lower()
        capitalized = surface[:1].isupper() and not (sentence_initial and i == 0)
        tokens.append(
            Token(
                surface=surface,
                normalized=normalized,
                stem=porter_stem(normalized),
                char_span=(offset + m.start(), offset + m.end()),
                is_stopword=normalized in stopwords,
                is_numeric=bool(_NUMERIC_RE.match(surface)),
                is_capitalized=capitalized,
            )
        )
    return tuple(tokens)


_TERMINAL = ".!?"
_CLOSERS = "\"')]}”’»"


def _is_abbreviation(text: str, dot: int, abbreviations: frozenset[str]) -> bool:
    j = dot - 1
    while j >= 0 and (text[j].isalpha() or text[j] == "."):
        j -= 1
    word = text[j + 1 : dot].lower().rstrip(".")
    return bool(word) and word in abbreviations


def _boundaries(text: str, abbreviations: frozenset[str]) -> list[int]:
    """End indices (exclusive) of sentences within text."""
    ends = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in _TERMINAL:
            # consume runs like "?!" or "..." and trailing closers
            j = i
            while j + 1 < n and text[j + 1] in _TERMINAL:
                j += 1
            k = j
            while k + 1 < n and text[k + 1] in _CLOSERS:
                k += 1
            if c == "." and j == i and _is_abbreviation(text, i, abbreviations):
                i += 1
                continue
            # decimal number like 3.14
            if c == "." and i > 0 and text[i - 1].isdigit() and i + 1 < n and text[i + 1].isdigit():
                i += 1
                continue
            # boundary only when followed by whitespace then uppercase/digit,
            # or at end of text
            rest = k + 1
            while rest < n and text[rest].isspace():
                rest += 1
            if rest >= n:
                ends.append(k + 1)
                i = rest
                continue
            if rest > k + 1 and (text[rest].isupper() or text[rest].isdigit()):
                ends.append(k + 1)
            i = k + 1
            continue
        i += 1
    if not ends or ends[-1] < n:
        # trailing text without terminal punctuation forms a final sentence
        last = n
        while last > 0 and text[last - 1].isspace():
            last -= 1
        if not ends or last > ends[-1]:
            ends.append(last)
    return ends


def split_sentences(
    raw: str,
    abbreviations: frozenset[str] = ABBREVIATIONS,
    stopwords: frozenset[str] = STOPWORDS,
) -> tuple[Sentence, ...]:
    """Rule-based sentence segmentation with offset-preserving tokenization."""
    if not raw.strip():
        raise EmptyInput("input is empty or whitespace-only")
    ends = _boundaries(raw, abbreviations)
    sentences = []
    start = 0
    for end in ends:
        while start < end and raw[start].isspace():
            start += 1
        segment = raw[start:end]
        if segment.strip():
            tokens = tokenize(segment, sentence_initial=True, offset=start, stopwords=stopwords)
            if tokens:
                sentences.append(
                    Sentence(index=len(sentences), tokens=tokens, char_span=(start, end))
                )
        start = end
    if not sentences:
        raise EmptyInput("input contains no tokenizable sentences")
    return tuple(sentences)


def make_document(
    raw: str,
    title: str | None = None,
    abbreviations: frozenset[str] = ABBREVIATIONS,
    stopwords: frozenset[str] = STOPWORDS,
) -> Document:
    sentences = split_sentences(raw, abbreviations, stopwords)
    title_sentence = None
    if title and title.strip():
        title_tokens = tokenize(title, sentence_initial=True, stopwords=stopwords)
        if title_tokens:
            title_sentence = Sentence(index=-1, tokens=title_tokens, char_span=(0, len(title)))
    return Document(raw=raw, sentences=sentences, title=title_sentence, title_raw=title)


@dataclass(frozen=True)
class NGramCounts:
    n: int
    counts: Counter = field(default_factory=Counter)

    def total(self) -> int:
        return sum(self.counts.values())


def token_keys(tokens: Sequence[Token | str], use_stems: bool = False) -> list[str]:
    """Normalized (or stemmed) key per token; plain strings pass through."""
    keys = []
    for t in tokens:
        if isinstance(t, str):
            keys.append(porter_stem(t.lower()) if use_stems else t.lower())
        else:
            keys.append(t.stem if use_stems else t.normalized)
    return keys


def ngrams(tokens: Sequence[Token | str], n: int, use_stems: bool = False) -> NGramCounts:
    if n < 1:
        raise InvalidOrder(f"n-gram order must be >= 1, got {n}")
    keys = token_keys(tokens, use_stems)
    counts = Counter(tuple(keys[i : i + n]) for i in range(len(keys) - n + 1))
    return NGramCounts(n=n, counts=counts)


def content_stems(tokens: Iterable[Token]) -> list[str]:
    """Stems of non-stopword word tokens (punctuation dropped)."""
    return [t.stem for t in tokens if not t.is_stopword and any(c.isalnum() for c in t.surface)]


@dataclass(frozen=True)
class TfIdfModel:
    doc_count: int
    doc_freq: dict[str, int]

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term, 0)
        return math.log((1 + self.doc_count) / (1 + df)) + 1.0


def build_tfidf_from_term_sets(term_sets: Sequence[Iterable[str]]) -> TfIdfModel:
    if not term_sets:
        raise EmptyCorpus("cannot build TF-IDF from an empty corpus")
    df: Counter[str] = Counter()
    for terms in term_sets:
        for term in set(terms):
            df[term] += 1
    return TfIdfModel(doc_count=len(term_sets), doc_freq=dict(df))


def build_tfidf(corpus: Sequence[Document]) -> TfIdfModel:
    """Corpus-level model; terms are stemmed non-stopword tokens per document."""
    if not corpus:
        raise EmptyCorpus("cannot build TF-IDF from an empty corpus")
    term_sets = []
    for doc in corpus:
        terms = []
        for sent in doc.sentences:
            terms.extend(content_stems(sent.tokens))
        term_sets.append(terms)
    return build_tfidf_from_term_sets(term_sets)
