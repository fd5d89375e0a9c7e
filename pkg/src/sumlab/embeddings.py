"""Static word-vector store with mean pooling and cosine similarity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .textcore import Token


class FormatError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class EmptyFile(ValueError):
    pass


@dataclass(frozen=True)
class VectorStore:
    """Immutable word -> vector map; out-of-vocabulary tokens are skipped."""

    dimension: int
    vocab: dict[str, np.ndarray]

    def get(self, term: str) -> np.ndarray | None:
        return self.vocab.get(term)

    def __contains__(self, term: str) -> bool:
        return term in self.vocab


@dataclass(frozen=True)
class PooledEmbedding:
    vector: np.ndarray
    support: int


def load_vectors(path) -> VectorStore:
    """Load text-format vectors: one token plus d reals per line.

    A first line of exactly two integers ("count dimension" header) is skipped.
    Duplicate tokens keep their first occurrence.
    """
    vocab: dict[str, np.ndarray] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split()
            if lineno == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            if len(parts) < 2:
                raise FormatError(f"line {lineno}: expected a token and vector components")
            token, comps = parts[0], parts[1:]
            try:
                vec = np.array([float(x) for x in comps], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"line {lineno}: non-numeric vector component") from exc
            if dimension is None:
                dimension = len(vec)
            elif len(vec) != dimension:
                raise DimensionMismatch(
                    f"line {lineno}: dimension {len(vec)} != established {dimension}"
                )
            vocab.setdefault(token, vec)
    if dimension is None or not vocab:
        raise EmptyFile(f"no vectors found in {path}")
    return VectorStore(dimension=dimension, vocab=vocab)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector is all zeros."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def _term_of(token: Token | str) -> tuple[str, bool]:
    if isinstance(token, str):
        return token.lower(), False
    return token.normalized, token.is_stopword


def pool_mean(tokens: Iterable[Token | str], store: VectorStore) -> PooledEmbedding:
    """Mean of vectors for in-vocabulary, non-stopword tokens."""
    vectors = []
    for token in tokens:
        term, is_stop = _term_of(token)
        if is_stop:
            continue
        vec = store.get(term)
        if vec is not None:
            vectors.append(vec)
    if not vectors:
        return PooledEmbedding(vector=np.zeros(store.dimension), support=0)
    return PooledEmbedding(vector=np.mean(vectors, axis=0), support=len(vectors))


def embeddable_terms(
    tokens: Sequence[Token | str], store: VectorStore, include_stopwords: bool = False
) -> list[str]:
    """In-vocabulary token terms, for alignment-style measures."""
    terms = []
    for token in tokens:
        term, is_stop = _term_of(token)
        if is_stop and not include_stopwords:
            continue
        if term in store:
            terms.append(term)
    return terms
