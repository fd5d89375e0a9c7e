"""Built-in summarizers and measures exposed through the same endpoint
abstraction as external plugins."""

from __future__ import annotations

from typing import Sequence

from .. import measures as M
from .. import summarizers as S
from ..embeddings import VectorStore
from ..textcore import EmptyInput, Token, make_document
from .client import LocalEndpoint
from .manifest import ArgumentSpec, PluginManifest

_SOURCE = "builtin"


class MissingStore(RuntimeError):
    """An embedding-backed built-in was called without a configured store."""


def text_tokens(text: str) -> list[Token]:
    tokens: list[Token] = []
    try:
        for sent in make_document(text).sentences:
            tokens.extend(sent.tokens)
    except EmptyInput:
        pass
    return tokens


def _budget(item: dict) -> S.Budget:
    return S.Budget("ratio", float(item.get("ratio", 0.2)))


def _doc(item: dict):
    return make_document(item["text"], title=item.get("title"))


def _manifest(name: str, ptype: str, args: Sequence[ArgumentSpec] = (),
              score_range: tuple[float, float] | None = None) -> PluginManifest:
    return PluginManifest(
        name=name, type=ptype, version="1.0.0", source=_SOURCE,
        citation="", arguments=tuple(args), score_range=score_range,
    )


def _feature_config(item: dict) -> S.FeatureConfig:
    raw = (item.get("arguments") or {}).get("features", "")
    if not raw:
        return S.FeatureConfig()
    return S.FeatureConfig(enabled=frozenset(f.strip() for f in raw.split(",") if f.strip()))


def builtin_summarizers(store: VectorStore | None) -> list[LocalEndpoint]:
    def featuresum(batch):
        return [
            S.featuresum_summarize(_doc(it), _feature_config(it), _budget(it)).text
            for it in batch
        ]

    def ranker(variant):
        def run(batch):
            out = []
            for it in batch:
                args = it.get("arguments") or {}
                cfg = S.RankConfig(
                    variant=variant,
                    damping=float(args.get("damping", 0.85)),
                    focus=args.get("focus") or None,
                )
                if variant == "biased" and store is None:
                    raise MissingStore("biased_textrank needs embeddings.path configured")
                out.append(S.textrank_summarize(_doc(it), cfg, _budget(it), store=store).text)
            return out
        return run

    def clustersum(batch):
        if store is None:
            raise MissingStore("clustersum needs embeddings.path configured")
        out = []
        for it in batch:
            seed = int((it.get("arguments") or {}).get("seed", 0))
            out.append(S.cluster_summarize(_doc(it), store, _budget(it), seed=seed).text)
        return out

    damping = ArgumentSpec("damping", "float", 0.85, min=0.01, max=0.99)
    return [
        LocalEndpoint(
            _manifest("featuresum", "summarizer",
                      [ArgumentSpec("features", "string", "")]),
            summarize_fn=featuresum,
        ),
        LocalEndpoint(_manifest("textrank", "summarizer", [damping]), summarize_fn=ranker("plain")),
        LocalEndpoint(_manifest("positionrank", "summarizer", [damping]), summarize_fn=ranker("position")),
        LocalEndpoint(_manifest("topicrank", "summarizer", [damping]), summarize_fn=ranker("topic")),
        LocalEndpoint(
            _manifest("biased_textrank", "summarizer",
                      [damping, ArgumentSpec("focus", "string", "")]),
            summarize_fn=ranker("biased"),
        ),
        LocalEndpoint(
            _manifest("clustersum", "summarizer",
                      [ArgumentSpec("seed", "int", 0, min=0)]),
            summarize_fn=clustersum,
        ),
    ]


def builtin_measures(
    store: VectorStore | None, lexicon: list[frozenset[str]] | None = None
) -> list[LocalEndpoint]:
    def _pairs(batch):
        return [
            (text_tokens(it["candidate"]), [text_tokens(r) for r in it["references"]])
            for it in batch
        ]

    def rouge(batch, arguments):
        use_stems = bool(arguments.get("use_stems", False))
        return [
            M.rouge_all(cand, refs, use_stems=use_stems).values
            for cand, refs in _pairs(batch)
        ]

    def bleu(batch, arguments):
        smooth = bool(arguments.get("smooth", False))
        return [M.bleu(cand, refs, smooth=smooth).values for cand, refs in _pairs(batch)]

    def meteor(batch, arguments):
        return [M.meteor_multi(cand, refs, lexicon).values for cand, refs in _pairs(batch)]

    def cider(batch, arguments):
        return [score.values for score in M.cider(_pairs(batch))]

    def greedy(batch, arguments):
        if store is None:
            raise MissingStore("greedy_matching needs embeddings.path configured")
        include = bool(arguments.get("include_stopwords", False))
        out = []
        for cand, refs in _pairs(batch):
            best = max(
                M.greedy_matching(cand, ref, store, include).values["greedy_matching"]
                for ref in refs
            )
            out.append({"greedy_matching": best})
        return out

    def cosine(batch, arguments):
        if store is None:
            raise MissingStore("cosine_sim needs embeddings.path configured")
        out = []
        for cand, refs in _pairs(batch):
            best = max(M.cosine_sim(cand, ref, store).values["cosine_sim"] for ref in refs)
            out.append({"cosine_sim": best})
        return out

    return [
        LocalEndpoint(
            _manifest("rouge", "measure",
                      [ArgumentSpec("use_stems", "bool", False)], score_range=(0, 1)),
            evaluate_fn=rouge,
        ),
        LocalEndpoint(
            _manifest("bleu", "measure",
                      [ArgumentSpec("smooth", "bool", False)], score_range=(0, 1)),
            evaluate_fn=bleu,
        ),
        LocalEndpoint(_manifest("meteor", "measure", score_range=(0, 1)), evaluate_fn=meteor),
        LocalEndpoint(_manifest("cider", "measure", score_range=(0, 10)), evaluate_fn=cider),
        LocalEndpoint(
            _manifest("greedy_matching", "measure",
                      [ArgumentSpec("include_stopwords", "bool", False)],
                      score_range=(-1, 1)),
            evaluate_fn=greedy,
        ),
        LocalEndpoint(_manifest("cosine_sim", "measure", score_range=(-1, 1)), evaluate_fn=cosine),
    ]
