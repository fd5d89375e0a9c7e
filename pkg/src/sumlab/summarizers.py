"""Native extractive summarizers: feature-product scoring, PageRank-based
sentence ranking with personalized-teleport variants, guided (focus-biased)
ranking, and k-means cluster selection. All share one budget selector."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embeddings import VectorStore, cosine, pool_mean
from .textcore import Document, Sentence, content_stems, tokenize, build_tfidf_from_term_sets


class EmptyDocument(ValueError):
    pass


class FocusMissing(ValueError):
    pass


class BadTeleport(ValueError):
    pass


class NoEmbeddableSentences(ValueError):
    pass


ALL_FEATURES = (
    "tfidf",
    "content_units",
    "position",
    "connectivity",
    "nonstop_ratio",
    "rel_length",
    "title_overlap",
)


@dataclass(frozen=True)
class FeatureConfig:
    enabled: frozenset[str] = frozenset(ALL_FEATURES)
    epsilon: float = 0.001

    def __post_init__(self):
        if not self.enabled:
            raise ValueError("at least one feature must be enabled")
        unknown = set(self.enabled) - set(ALL_FEATURES)
        if unknown:
            raise ValueError(f"unknown features: {sorted(unknown)}")
        if not 0 < self.epsilon <= 0.1:
            raise ValueError("epsilon must be in (0, 0.1]")


@dataclass(frozen=True)
class SentenceScore:
    index: int
    features: dict[str, float]
    final: float


@dataclass(frozen=True)
class RankConfig:
    variant: str = "plain"  # plain | position | topic | biased
    damping: float = 0.85
    max_iter: int = 100
    tol: float = 1e-6
    focus: str | None = None

    def __post_init__(self):
        if self.variant not in ("plain", "position", "topic", "biased"):
            raise ValueError(f"unknown variant: {self.variant}")
        if not 0 < self.damping < 1:
            raise ValueError("damping must be in (0, 1)")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tol must be > 0 and max_iter >= 1")


@dataclass(frozen=True)
class Budget:
    mode: str  # ratio | sentences | words
    value: float

    def __post_init__(self):
        if self.mode == "ratio":
            if not 0 < self.value <= 1:
                raise ValueError("ratio must be in (0, 1]")
        elif self.mode in ("sentences", "words"):
            if self.value < 1 or self.value != int(self.value):
                raise ValueError(f"{self.mode} budget must be a positive integer")
        else:
            raise ValueError(f"unknown budget mode: {self.mode}")


@dataclass(frozen=True)
class SummaryResult:
    model_id: str
    selected: tuple[int, ...]
    text: str
    scores: tuple[SentenceScore, ...] | None = None


def _word_count(sentence: Sentence) -> int:
    return sum(1 for t in sentence.tokens if any(c.isalnum() for c in t.surface))


def budgeted_sentence_count(budget: Budget, n: int) -> int:
    if budget.mode == "ratio":
        return min(n, max(1, math.ceil(budget.value * n)))
    if budget.mode == "sentences":
        return min(n, int(budget.value))
    raise ValueError("words budgets have no fixed sentence count")


def select_by_budget(ranked: list[int], doc: Document, budget: Budget) -> tuple[int, ...]:
    """Prefix of the ranking under the budget, restored to document order.
    Words mode takes the longest ranked prefix within the word cap, never
    fewer than one sentence."""
    if budget.mode in ("ratio", "sentences"):
        k = budgeted_sentence_count(budget, len(doc.sentences))
        chosen = ranked[:k]
    else:
        cap = int(budget.value)
        chosen = [ranked[0]]
        total = _word_count(doc.sentences[ranked[0]])
        for idx in ranked[1:]:
            words = _word_count(doc.sentences[idx])
            if total + words > cap:
                break
            chosen.append(idx)
            total += words
    return tuple(sorted(chosen))


def _assemble(doc: Document, selected: tuple[int, ...], model_id: str,
              scores: tuple[SentenceScore, ...] | None = None) -> SummaryResult:
    text = " ".join(doc.sentence_text(i).strip() for i in selected)
    return SummaryResult(model_id=model_id, selected=selected, text=text, scores=scores)


def _rank(finals: list[float]) -> list[int]:
    # descending score, ties broken by smaller sentence index
    return sorted(range(len(finals)), key=lambda i: (-finals[i], i))


# --------------------------------------------------------------------------
# Feature-product summarizer

def featuresum_features(doc: Document, cfg: FeatureConfig = FeatureConfig()) -> list[SentenceScore]:
    if not doc.sentences:
        raise EmptyDocument("document has no sentences")
    sentences = doc.sentences
    n = len(sentences)
    stem_sets = [set(content_stems(s.tokens)) for s in sentences]
    title_stems = set(content_stems(doc.title.tokens)) if doc.title else set()

    enabled = set(cfg.enabled)
    if "title_overlap" in enabled and not title_stems:
        enabled.discard("title_overlap")
        if not enabled:
            raise ValueError("title_overlap is the only enabled feature and no title exists")

    values: dict[str, list[float]] = {}

    if "tfidf" in enabled:
        term_lists = [content_stems(s.tokens) for s in sentences]
        model = build_tfidf_from_term_sets(term_lists)
        means = []
        for terms in term_lists:
            if not terms:
                means.append(0.0)
                continue
            counts: dict[str, int] = {}
            for t in terms:
                counts[t] = counts.get(t, 0) + 1
            means.append(sum(counts[t] * model.idf(t) for t in terms) / len(terms))
        peak = max(means) if means else 0.0
        values["tfidf"] = [m / peak if peak > 0 else 0.0 for m in means]

    if "content_units" in enabled:
        values["content_units"] = [
            sum(1 for t in s.tokens if t.is_numeric or t.is_capitalized) / len(s.tokens)
            for s in sentences
        ]

    if "position" in enabled:
        values["position"] = [(n - i) / n for i in range(n)]

    if "connectivity" in enabled:
        conn = []
        for i, own in enumerate(stem_sets):
            if n == 1 or not own:
                conn.append(0.0)
                continue
            shared = [len(own & other) / len(own) for j, other in enumerate(stem_sets) if j != i]
            conn.append(min(1.0, sum(shared) / len(shared)))
        values["connectivity"] = conn

    if "nonstop_ratio" in enabled:
        values["nonstop_ratio"] = [
            sum(1 for t in s.tokens if not t.is_stopword) / len(s.tokens) for s in sentences
        ]

    if "rel_length" in enabled:
        longest = max(len(s.tokens) for s in sentences)
        values["rel_length"] = [len(s.tokens) / longest for s in sentences]

    if "title_overlap" in enabled:
        values["title_overlap"] = [
            len(own & title_stems) / len(title_stems) for own in stem_sets
        ]

    scores = []
    for i in range(n):
        feats = {name: values[name][i] for name in values}
        final = 1.0
        for v in feats.values():
            final *= max(v, cfg.epsilon)
        scores.append(SentenceScore(index=i, features=feats, final=final))
    return scores


def featuresum_summarize(
    doc: Document, cfg: FeatureConfig = FeatureConfig(), budget: Budget = Budget("ratio", 0.2)
) -> SummaryResult:
    scores = featuresum_features(doc, cfg)
    ranked = _rank([s.final for s in scores])
    selected = select_by_budget(ranked, doc, budget)
    return _assemble(doc, selected, "featuresum", scores=tuple(scores))


# --------------------------------------------------------------------------
# PageRank and the ranking summarizers

@dataclass(frozen=True)
class PageRankResult:
    scores: np.ndarray
    iterations: int
    converged: bool


def pagerank(weights: np.ndarray, teleport: np.ndarray, cfg: RankConfig = RankConfig()) -> PageRankResult:
    """Power iteration for p = (1-d) * teleport + d * W_norm^T p with
    row-normalized weights; zero-degree rows fall back to the teleport."""
    w = np.asarray(weights, dtype=np.float64)
    t = np.asarray(teleport, dtype=np.float64)
    n = w.shape[0]
    if t.shape != (n,) or np.any(t < 0) or abs(t.sum() - 1.0) > 1e-9:
        raise BadTeleport("teleport must be a length-N nonnegative vector summing to 1")
    row_sums = w.sum(axis=1)
    dangling = row_sums == 0
    norm = np.zeros_like(w)
    nz = ~dangling
    norm[nz] = w[nz] / row_sums[nz, None]
    d = cfg.damping
    p = t.copy()
    for it in range(1, cfg.max_iter + 1):
        spread = norm.T @ p + t * p[dangling].sum()
        p_new = (1 - d) * t + d * spread
        p_new = p_new / p_new.sum()
        if np.abs(p_new - p).sum() < cfg.tol:
            return PageRankResult(scores=p_new, iterations=it, converged=True)
        p = p_new
    return PageRankResult(scores=p, iterations=cfg.max_iter, converged=False)


def _textrank_weights(doc: Document) -> np.ndarray:
    sentences = doc.sentences
    n = len(sentences)
    stem_sets = [set(content_stems(s.tokens)) for s in sentences]
    lengths = [len(s.tokens) for s in sentences]
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if lengths[i] < 2 or lengths[j] < 2:
                continue
            shared = len(stem_sets[i] & stem_sets[j])
            if shared:
                w[i, j] = w[j, i] = shared / (math.log(lengths[i]) + math.log(lengths[j]))
    return w


def _teleport(doc: Document, cfg: RankConfig, store: VectorStore | None) -> np.ndarray:
    n = len(doc.sentences)
    uniform = np.full(n, 1.0 / n)
    if cfg.variant == "plain":
        return uniform
    if cfg.variant == "position":
        raw = np.array([1.0 / (i + 1) for i in range(n)])
        return raw / raw.sum()
    if cfg.variant == "topic":
        topic = doc.title if doc.title else doc.sentences[0]
        topic_stems = set(content_stems(topic.tokens))
        raw = np.array(
            [len(set(content_stems(s.tokens)) & topic_stems) for s in doc.sentences],
            dtype=np.float64,
        )
        return raw / raw.sum() if raw.sum() > 0 else uniform
    # biased
    if not cfg.focus:
        raise FocusMissing("biased variant requires a focus string")
    if store is None:
        raise NoEmbeddableSentences("biased variant requires a vector store")
    focus_vec = pool_mean(tokenize(cfg.focus), store).vector
    raw = np.array(
        [max(0.0, cosine(pool_mean(s.tokens, store).vector, focus_vec)) for s in doc.sentences]
    )
    return raw / raw.sum() if raw.sum() > 0 else uniform


def textrank_scores(
    doc: Document, cfg: RankConfig = RankConfig(), store: VectorStore | None = None
) -> PageRankResult:
    if not doc.sentences:
        raise EmptyDocument("document has no sentences")
    return pagerank(_textrank_weights(doc), _teleport(doc, cfg, store), cfg)


def textrank_summarize(
    doc: Document,
    cfg: RankConfig = RankConfig(),
    budget: Budget = Budget("ratio", 0.2),
    store: VectorStore | None = None,
    model_id: str | None = None,
) -> SummaryResult:
    result = textrank_scores(doc, cfg, store)
    finals = result.scores.tolist()
    ranked = _rank(finals)
    selected = select_by_budget(ranked, doc, budget)
    scores = tuple(
        SentenceScore(index=i, features={"pagerank": finals[i]}, final=finals[i])
        for i in range(len(finals))
    )
    name = model_id or {"plain": "textrank", "position": "positionrank",
                        "topic": "topicrank", "biased": "biased_textrank"}[cfg.variant]
    return _assemble(doc, selected, name, scores=scores)


# --------------------------------------------------------------------------
# Cluster-based summarizer

def _kmeans(points: np.ndarray, k: int, seed: int, max_iter: int = 100) -> np.ndarray:
    """Seeded k-means++ then Lloyd iterations; returns centroids."""
    rng = np.random.RandomState(seed)
    n = len(points)
    centroids = [points[rng.randint(n)]]
    for _ in range(1, k):
        d2 = np.min(
            [np.sum((points - c) ** 2, axis=1) for c in centroids], axis=0
        )
        total = d2.sum()
        if total == 0:
            centroids.append(points[rng.randint(n)])
            continue
        probs = d2 / total
        centroids.append(points[rng.choice(n, p=probs)])
    centers = np.array(centroids)
    assign = None
    for _ in range(max_iter):
        dists = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
        new_assign = dists.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            members = points[assign == c]
            if len(members):
                centers[c] = members.mean(axis=0)
    return centers


def cluster_summarize(
    doc: Document, store: VectorStore, budget: Budget = Budget("ratio", 0.2), seed: int = 0
) -> SummaryResult:
    if not doc.sentences:
        raise EmptyDocument("document has no sentences")
    embedded = [(s.index, pool_mean(s.tokens, store)) for s in doc.sentences]
    usable = [(i, p.vector) for i, p in embedded if p.support > 0]
    if not usable:
        raise NoEmbeddableSentences("no sentence has an in-vocabulary token")
    indices = [i for i, _ in usable]
    points = np.array([v for _, v in usable])
    if budget.mode == "words":
        cap = int(budget.value)
        k = 0
        total = 0
        for s in doc.sentences:
            total += _word_count(s)
            if total > cap:
                break
            k += 1
        k = max(1, min(k, len(usable)))
    else:
        k = min(budgeted_sentence_count(budget, len(doc.sentences)), len(usable))
    centers = _kmeans(points, k, seed)
    selected = []
    for c in centers:
        dists = np.linalg.norm(points - c, axis=1)
        selected.append(indices[int(dists.argmin())])
    selected = tuple(sorted(set(selected)))
    return _assemble(doc, selected, "clustersum")
